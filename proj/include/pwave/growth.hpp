#pragma once

#include <vector>

#include "pwave/evolve.hpp"

namespace pwave {

// s > 0: log H = log C + exponent * log(M + t).
// s = 0: log H = log C + exponent * (t + M)^2, exponent being the quadratic coefficient.
struct GrowthFit {
  double M = 0.0;
  double exponent = 0.0;
  double C = 0.0;
  double residual_rms = 0.0;
  bool degenerate = false;
};

struct GrowthFitOptions {
  double M_min = 1e-2;
  double M_max = 0.0;  // 0: the time span of the data
};

GrowthFit fit_growth(const std::vector<double>& t, const std::vector<double>& H, double s,
                     const GrowthFitOptions& opts = {});
GrowthFit fit_growth(const TrajectoryRecord& traj, double s, const GrowthFitOptions& opts = {});

struct GrowthSummary {
  std::vector<GrowthFit> per_trial;
  double exponent_mean = 0.0;
  double ci_lo = 0.0;  // normal 95% interval on the mean exponent
  double ci_hi = 0.0;
};

GrowthSummary fit_growth(const std::vector<TrajectoryRecord>& trajs, double s, const GrowthFitOptions& opts = {});

}  // namespace pwave
