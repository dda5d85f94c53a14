#pragma once

#include <cmath>
#include <vector>

#include "pwave/evolve.hpp"

namespace pwave {

// y(t) <= prefactor * exp(rate * int f) * (y(0) + source * int g),  y = E(w)^{1/2}.
struct GronwallConstants {
  double prefactor = 1.0;
  double rate = 1.0;
  double source = 1.0;

  // From |(w+S)^3 - w^3| <= 9/2 |S| w^2 + 5/2 |S|^3, ||w_t|| <= (2E)^{1/2}, ||w||_4^2 <= 2 E^{1/2}.
  static GronwallConstants derived() { return {1.0, 9.0 / std::sqrt(2.0), 5.0 / (2.0 * std::sqrt(2.0))}; }
  // Single constant C in front: C e^{int f} (y(0) + int g).
  static GronwallConstants single(double C) { return {C, 1.0, 1.0}; }
};

struct GronwallEnvelope {
  std::vector<double> t;
  std::vector<double> sqrt_energy;
  std::vector<double> log_envelope;  // log of the right-hand side; -inf when it vanishes
  bool satisfied = true;
  double max_log_ratio = -std::numeric_limits<double>::infinity();  // max log(y / envelope)
};

GronwallEnvelope gronwall_envelope(const TrajectoryRecord& traj, const GronwallConstants& k);
GronwallEnvelope gronwall_envelope(const TrajectoryRecord& traj, double C);

}  // namespace pwave
