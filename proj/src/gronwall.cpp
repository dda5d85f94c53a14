#include "pwave/gronwall.hpp"

#include <limits>

#include "pwave/error.hpp"

namespace pwave {

GronwallEnvelope gronwall_envelope(const TrajectoryRecord& traj, const GronwallConstants& k) {
  if (!(k.prefactor > 0.0)) throw InvalidInput("Gronwall constant must be positive");
  const std::size_t n = traj.size();
  if (traj.energy_w.size() != n || traj.f.size() != n || traj.g.size() != n)
    throw InvalidInput("trajectory lacks f, g or energy samples");
  GronwallEnvelope env;
  if (n == 0) return env;
  const double y0 = std::sqrt(std::max(traj.energy_w[0], 0.0));
  double F = 0.0, G = 0.0;
  const double ninf = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double h = traj.t[i] - traj.t[i - 1];
      F += 0.5 * h * (traj.f[i] + traj.f[i - 1]);
      G += 0.5 * h * (traj.g[i] + traj.g[i - 1]);
    }
    const double y = std::sqrt(std::max(traj.energy_w[i], 0.0));
    const double inner = y0 + k.source * G;
    const double log_env = inner > 0.0 ? std::log(k.prefactor) + k.rate * F + std::log(inner) : ninf;
    env.t.push_back(traj.t[i]);
    env.sqrt_energy.push_back(y);
    env.log_envelope.push_back(log_env);
    const double log_ratio = y > 0.0 ? std::log(y) - log_env : ninf;
    if (y > 0.0 && !(log_ratio <= 0.0)) env.satisfied = false;
    if (log_ratio > env.max_log_ratio) env.max_log_ratio = log_ratio;
  }
  return env;
}

GronwallEnvelope gronwall_envelope(const TrajectoryRecord& traj, double C) {
  return gronwall_envelope(traj, GronwallConstants::single(C));
}

}  // namespace pwave
