#include "pwave/growth.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "pwave/error.hpp"

namespace pwave {

namespace {

struct Linear {
  double intercept = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

Linear linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Linear out;
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - out.intercept - out.slope * x[i];
    out.sse += r * r;
  }
  return out;
}

Linear power_fit_at(double M, const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(M + t[i]);
  return linear_fit(x, y);
}

GrowthFit fit_power(const std::vector<double>& t, const std::vector<double>& y, const GrowthFitOptions& opts) {
  const double t0 = t.front();
  const double span = t.back() - t0;
  const double lo = std::max(opts.M_min, opts.M_min - t0);
  const double hi = std::max(lo * 1.0001, opts.M_max > 0.0 ? opts.M_max : std::max(span, 1.0));

  // coarse scan in log M, then golden section on the profile SSE
  const int scan = 200;
  double best_M = lo, best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= scan; ++k) {
    const double M = lo * std::pow(hi / lo, double(k) / scan);
    const double e = power_fit_at(M, t, y).sse;
    if (e < best_sse) {
      best_sse = e;
      best_M = M;
    }
  }
  const double step = std::pow(hi / lo, 1.0 / scan);
  double a = std::log(std::max(lo, best_M / step)), b = std::log(std::min(hi, best_M * step));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c = b - gr * (b - a), d = a + gr * (b - a);
    if (power_fit_at(std::exp(c), t, y).sse < power_fit_at(std::exp(d), t, y).sse)
      b = d;
    else
      a = c;
  }
  double M = std::exp(0.5 * (a + b));
  Linear lin = power_fit_at(M, t, y);
  double logC = lin.intercept, p = lin.slope;

  // Gauss-Newton polish on (log C, p, M)
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd J(t.size(), 3);
    Eigen::VectorXd r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double u = M + t[i];
      r(Eigen::Index(i)) = y[i] - (logC + p * std::log(u));
      J(Eigen::Index(i), 0) = 1.0;
      J(Eigen::Index(i), 1) = std::log(u);
      J(Eigen::Index(i), 2) = p / u;
    }
    const Eigen::VectorXd delta = J.colPivHouseholderQr().solve(r);
    if (!delta.allFinite()) break;
    const double M_new = M + delta(2);
    if (!(M_new >= lo && M_new <= hi)) break;
    double sse_new = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = y[i] - (logC + delta(0) + (p + delta(1)) * std::log(M_new + t[i]));
      sse_new += e * e;
    }
    if (sse_new > r.squaredNorm()) break;
    logC += delta(0);
    p += delta(1);
    M = M_new;
    if (delta.norm() < 1e-15 * (1.0 + std::abs(p) + std::abs(M))) break;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = y[i] - (logC + p * std::log(M + t[i]));
    sse += e * e;
  }
  return GrowthFit{M, p, std::exp(logC), std::sqrt(sse / double(t.size())), false};
}

GrowthFit fit_gaussian(const std::vector<double>& t, const std::vector<double>& y) {
  Eigen::MatrixXd A(t.size(), 3);
  Eigen::VectorXd rhs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    A(Eigen::Index(i), 0) = 1.0;
    A(Eigen::Index(i), 1) = t[i];
    A(Eigen::Index(i), 2) = t[i] * t[i];
    rhs(Eigen::Index(i)) = y[i];
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(rhs);
  GrowthFit out;
  out.exponent = c(2);
  out.M = c(2) != 0.0 ? c(1) / (2.0 * c(2)) : 0.0;
  out.C = std::exp(c(0) - c(2) * out.M * out.M);
  out.residual_rms = std::sqrt((A * c - rhs).squaredNorm() / double(t.size()));
  return out;
}

}  // namespace

GrowthFit fit_growth(const std::vector<double>& t_in, const std::vector<double>& H, double s,
                     const GrowthFitOptions& opts) {
  if (t_in.size() != H.size()) throw InvalidInput("time and value series differ in length");
  if (!(s >= 0.0 && s < 1.0)) throw InvalidInput("s must lie in [0, 1)");
  std::vector<double> t, y;
  for (std::size_t i = 0; i < H.size(); ++i)
    if (H[i] > 0.0 && std::isfinite(H[i])) {
      t.push_back(t_in[i]);
      y.push_back(std::log(H[i]));
    }
  GrowthFit degenerate{0.0, 0.0, t.empty() ? 0.0 : std::exp(y.front()), 0.0, true};
  if (t.size() < 4) return degenerate;
  double lo = y.front(), hi = y.front();
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) return degenerate;
  return s > 0.0 ? fit_power(t, y, opts) : fit_gaussian(t, y);
}

GrowthFit fit_growth(const TrajectoryRecord& traj, double s, const GrowthFitOptions& opts) {
  return fit_growth(traj.t, traj.h1_w, s, opts);
}

GrowthSummary fit_growth(const std::vector<TrajectoryRecord>& trajs, double s, const GrowthFitOptions& opts) {
  GrowthSummary out;
  if (trajs.empty()) return out;
  for (const auto& tr : trajs) {
    if (tr.t != trajs.front().t) throw InvalidInput("trajectories do not share a time grid");
    out.per_trial.push_back(fit_growth(tr, s, opts));
  }
  double m = 0.0;
  for (const auto& f : out.per_trial) m += f.exponent;
  m /= double(out.per_trial.size());
  double v = 0.0;
  for (const auto& f : out.per_trial) v += (f.exponent - m) * (f.exponent - m);
  const double n = double(out.per_trial.size());
  const double se = n > 1 ? std::sqrt(v / (n - 1.0) / n) : 0.0;
  out.exponent_mean = m;
  out.ci_lo = m - 1.959963984540054 * se;
  out.ci_hi = m + 1.959963984540054 * se;
  return out;
}

}  // namespace pwave
