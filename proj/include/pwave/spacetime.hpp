#pragma once

#include <vector>

#include "pwave/spectrum.hpp"

namespace pwave {

enum class ProjectorKind { full, high, nonzero };

struct Projector {
  ProjectorKind kind = ProjectorKind::full;
  double N = 0.0;  // cutoff for ProjectorKind::high

  static Projector full() { return {}; }
  static Projector high(double N) { return {ProjectorKind::high, N}; }
  static Projector nonzero() { return {ProjectorKind::nonzero, 0.0}; }
};

SpectrumPair apply(const Projector& P, const SpectrumPair& S);

// ||<t>^{-delta} S(t) V||_{L^{p1}_t L^{p2}_x} on [-T_max, T_max]; p2 may be infinity.
struct SpacetimeExponents {
  double p1 = 2.0;
  double p2 = 2.0;
  double delta = 1.0;
};

struct SpacetimeWindow {
  double T_max = 10.0;
  double dt = 0.01;
  int n_grid = 0;  // 0: smallest FFT-friendly grid holding the band limit
};

struct SpacetimeNorm {
  double value = 0.0;
  // Bound on the neglected |t| > T_max contribution to value^p1, assuming slice norms stay below max_slice.
  double tail_bound = 0.0;
  double max_slice = 0.0;
  // (value^p1 + tail_bound)^{1/p1}
  double upper = 0.0;
};

SpacetimeNorm weighted_spacetime_norm(const SpectrumPair& S, const SpacetimeExponents& e,
                                      const SpacetimeWindow& w, const Projector& P);

// Several exponent sets evaluated on shared time slices of one projected datum.
std::vector<SpacetimeNorm> weighted_spacetime_norms(const SpectrumPair& S, const std::vector<SpacetimeExponents>& e,
                                                    const SpacetimeWindow& w, const Projector& P);

}  // namespace pwave
