#pragma once

#include <vector>

#include "pwave/spectrum.hpp"

namespace pwave {

struct DuhamelOptions {
  int nodes = 16;  // Chebyshev-Lobatto collocation nodes on [a, a + tau]
  int max_iterations = 200;
  int n_grid = 0;  // 0: dealiased_grid(n_max)
};

struct DuhamelSolution {
  std::vector<double> times;
  std::vector<SpectrumPair> states;  // (v, v_t) at each time
  int iterations = 0;
  double last_increment = 0.0;  // H^1 distance of the final two iterates
};

// Picard iteration of v = S(t-a)(v0, v1) - int_a^t sin((t-r)|D|)/|D| P[(f(r) + v(r))^3] dr,
// f(r) = S(r) forcing. Throws IntervalTooLong if the iterates stop contracting.
DuhamelSolution local_solve_duhamel(const SpectrumPair& data, const SpectrumPair& forcing, double a, double tau,
                                    double tol, const DuhamelOptions& opts = {});

}  // namespace pwave
