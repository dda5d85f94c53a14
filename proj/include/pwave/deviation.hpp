#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pwave/evolve.hpp"
#include "pwave/grid.hpp"
#include "pwave/randomize.hpp"
#include "pwave/spacetime.hpp"
#include "pwave/stats.hpp"

namespace pwave {

// ||Pi_N v0||_{L^p}; N = infinity keeps every mode.
struct LpLowPosition {
  double p = 2.0;
  double N = infinity;
  int n_grid = 0;  // 0: dealiased grid of the data
};

// ||(v0, v1)||_{H^sigma}
struct SobolevPairNorm {
  double sigma = 0.0;
};

struct WeightedSpacetime {
  SpacetimeExponents exponents;
  SpacetimeWindow window;
  Projector projector = Projector::nonzero();
};

using Functional = std::variant<LpLowPosition, SobolevPairNorm, WeightedSpacetime>;

double evaluate(const Functional& F, const SpectrumPair& V);

struct TailCurve {
  std::vector<double> lambdas;
  std::vector<double> p_hat;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
  std::vector<std::size_t> exceed;
  std::size_t trials = 0;
};

// Trial i uses stream (master_seed, i); exceedance means value > lambda.
TailCurve estimate_tail(const Functional& F, const SpectrumPair& base, const CoefficientLaw& law,
                        const std::vector<double>& lambdas, std::size_t trials, std::uint64_t master_seed,
                        int workers = 1);
TailCurve tail_from_values(const std::vector<double>& values, const std::vector<double>& lambdas);

struct TailFit {
  double c_hat = 0.0;
  double C_hat = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
  bool subgaussian_consistent = false;  // c_hat > 0 and r2 >= r2_threshold
};

// Weighted least squares of log p_hat on lambda^2 over points with min_count <= exceed <= trials - min_count.
TailFit fit_tail_exponent(const TailCurve& curve, std::size_t min_count = 1, double r2_threshold = 0.95);

struct EventParams {
  double s = 0.5;
  double eps = 0.1;
  double delta = 0.75;
  double delta_tilde = 0.5;
  std::vector<int> N_list{4, 8, 16};
  double T_max = 5.0;
  double dt = 0.2;
  int n_grid = 0;  // grid for the space-time slices; 0: smallest FFT-friendly grid of the data
};

struct EventRow {
  int N = 0;
  // membership counts for F, G, H, K and their intersection E
  std::array<std::size_t, 5> in{};
  std::array<double, 5> rate{};
  std::array<double, 5> complement{};
  std::array<Interval, 5> complement_ci{};
};

struct EventRates {
  EventParams params;
  std::size_t trials = 0;
  std::vector<EventRow> rows;
};

struct EventValues {
  std::array<double, 4> value{};      // F, G, H, K evaluands
  std::array<double, 4> threshold{};  // N^{1-s+eps}, N^eps, N^{eps-s}, N^{eps-s}
};

void validate(const EventParams& p, int n_max);
EventValues event_values(const SpectrumPair& V, int N, const EventParams& p);
EventRates event_rates(const SpectrumPair& base, const CoefficientLaw& law, const EventParams& p, std::size_t trials,
                       std::uint64_t master_seed, int workers = 1);

// sup_t ||(v1 - v2, d_t v1 - d_t v2)||_{H^s} + (int_0^T mean((v1 - v2)^4) dt)^{1/4} over recorded t <= T.
double xt_distance(const TrajectoryRecord& a, const TrajectoryRecord& b, double s, double T);

}  // namespace pwave
