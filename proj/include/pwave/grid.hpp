#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "pwave/spectrum.hpp"

namespace pwave {

// Samples on the uniform grid x = 2*pi*(i, j, k)/n_grid, row-major with i slowest.
struct GridField {
  int n_grid = 0;
  std::vector<double> values;

  static GridField constant(int n_grid, double value);

  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * n_grid + std::size_t(j)) * n_grid + std::size_t(k);
  }
  [[nodiscard]] double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  double& at(int i, int j, int k) { return values[index(i, j, k)]; }
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Smallest grid that represents band limit n_max without Nyquist collisions.
int minimal_grid(int n_max);
// Smallest even 2,3,5-smooth size >= at_least.
int smooth_grid(int at_least);
// Smallest FFT-friendly grid >= 4 n_max + 2, exact for quartic products.
int dealiased_grid(int n_max);

GridField synthesize(const ModeField& f, int n_grid);
GridField synthesize(const SpectrumPair& S, int component, int n_grid);
ModeField analyze(const GridField& F, int n_max);

double lp_norm(const GridField& F, double p);

// mean(|grad w|^2) via FFT of the full grid.
double grid_gradient_sq(const GridField& w);

// 1/2 mean(wt^2) + 1/2 mean(|grad w|^2) + 1/4 mean(w^4)
double energy(const GridField& w, const GridField& wt);

}  // namespace pwave
