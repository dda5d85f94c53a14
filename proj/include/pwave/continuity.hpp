#pragma once

#include <cstdint>
#include <vector>

#include "pwave/evolve.hpp"
#include "pwave/randomize.hpp"

namespace pwave {

struct ContinuityParams {
  double s = 0.5;
  double A = 10.0;  // ball radius in H^s for both members of a pair
  double T = 2.0;
  double dt = 1e-3;
  int record_every = 10;
  std::vector<double> etas{1e-1, 1e-2, 1e-3};
  std::size_t trials = 100;
  int max_attempts = 1000;  // per trial before giving up on the ball
};

struct EtaSummary {
  double eta = 0.0;
  std::size_t samples = 0;
  std::vector<double> distances;  // per trial, trial order
  std::vector<double> quantile_levels{0.05, 0.25, 0.5, 0.75, 0.95};
  std::vector<double> quantiles;
  double median = 0.0;
};

struct ContinuityReport {
  ContinuityParams params;
  std::vector<EtaSummary> per_eta;
  double slope = 0.0;      // d log(median) / d log(eta) over eta > 0
  double intercept = 0.0;
  double residual = 0.0;   // rms residual of that fit
  std::size_t rejections = 0;
  std::vector<std::uint64_t> stream_ids;  // V stream per trial; W uses stream + 1
};

// V from stream 2k, W from stream 2k+1 normalized to unit H^s; V' = V + eta W. A pair that
// leaves the ball is redrawn with k advanced by `trials`.
ContinuityReport continuity_probe(const SpectrumPair& base, const CoefficientLaw& law, const ContinuityParams& p,
                                  std::uint64_t master_seed, int workers = 1);

}  // namespace pwave
