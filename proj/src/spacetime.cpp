#include "pwave/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "pwave/detail/transform.hpp"
#include "pwave/error.hpp"
#include "pwave/grid.hpp"

namespace pwave {

SpectrumPair apply(const Projector& P, const SpectrumPair& S) {
  switch (P.kind) {
    case ProjectorKind::high:
      return project_high(S, P.N);
    case ProjectorKind::nonzero:
      return project_nonzero(S);
    case ProjectorKind::full:
      break;
  }
  return S;
}

namespace {

double slice_norm(std::span<const double> g, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0)
    for (double v : g) acc += v * v;
  else if (p == 6.0)
    for (double v : g) {
      const double v2 = v * v;
      acc += v2 * v2 * v2;
    }
  else if (p == 4.0)
    for (double v : g) {
      const double v2 = v * v;
      acc += v2 * v2;
    }
  else
    for (double v : g) acc += std::pow(std::abs(v), p);
  return std::pow(acc / double(g.size()), 1.0 / p);
}

}  // namespace

std::vector<SpacetimeNorm> weighted_spacetime_norms(const SpectrumPair& S, const std::vector<SpacetimeExponents>& ex,
                                                    const SpacetimeWindow& w, const Projector& P) {
  validate(S);
  if (!(w.dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(w.T_max > 0.0)) throw InvalidInput("T_max must be positive");
  for (const auto& e : ex) {
    if (!(e.p1 >= 1.0) || !(e.p2 >= 1.0)) throw InvalidInput("exponents must be >= 1");
    if (!(e.delta * e.p1 > 1.0)) throw InvalidInput("weight <t>^{-delta} is not p1-integrable (need delta > 1/p1)");
  }
  const SpectrumPair V = apply(P, S);
  const bool vanishes = V.u0.a == 0.0 && V.u1.a == 0.0 &&
                        std::all_of(V.u0.b.begin(), V.u0.b.end(), [](double x) { return x == 0.0; }) &&
                        std::all_of(V.u0.c.begin(), V.u0.c.end(), [](double x) { return x == 0.0; }) &&
                        std::all_of(V.u1.b.begin(), V.u1.b.end(), [](double x) { return x == 0.0; }) &&
                        std::all_of(V.u1.c.begin(), V.u1.c.end(), [](double x) { return x == 0.0; });
  if (vanishes) return std::vector<SpacetimeNorm>(ex.size());
  const int n_grid = w.n_grid > 0 ? w.n_grid : smooth_grid(minimal_grid(V.n_max()));
  auto& tr = detail::transform_for(V.modes(), n_grid);

  const long K = std::max(1L, long(std::ceil(2.0 * w.T_max / w.dt - 1e-9)));
  const double h = 2.0 * w.T_max / double(K);
  std::vector<double> acc(ex.size(), 0.0), peak(ex.size(), 0.0);
  ModeField pos = ModeField::zeros(V.modes());
  const auto freq = V.modes()->frequency();
  for (long k = 0; k <= K; ++k) {
    const double t = -w.T_max + double(k) * h;
    pos.a = V.u0.a + V.u1.a * t;
    // modes come sorted by |n|, so trig values are shared within each shell
    double cs = 0.0, sn = 0.0, shell = -1.0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
      if (freq[i] != shell) {
        shell = freq[i];
        cs = std::cos(t * shell);
        sn = std::sin(t * shell) / shell;
      }
      pos.b[i] = V.u0.b[i] * cs + V.u1.b[i] * sn;
      pos.c[i] = V.u0.c[i] * cs + V.u1.c[i] * sn;
    }
    tr.to_grid(pos);
    const double q = (k == 0 || k == K) ? 0.5 * h : h;
    const double bracket = std::sqrt(1.0 + t * t);
    for (std::size_t e = 0; e < ex.size(); ++e) {
      const double v = slice_norm(tr.grid(), ex[e].p2);
      peak[e] = std::max(peak[e], v);
      acc[e] += q * std::pow(bracket, -ex[e].delta * ex[e].p1) * std::pow(v, ex[e].p1);
    }
  }
  std::vector<SpacetimeNorm> out(ex.size());
  for (std::size_t e = 0; e < ex.size(); ++e) {
    const double q = ex[e].delta * ex[e].p1;
    out[e].value = std::pow(acc[e], 1.0 / ex[e].p1);
    out[e].max_slice = peak[e];
    out[e].tail_bound = 2.0 * std::pow(peak[e], ex[e].p1) * std::pow(w.T_max, 1.0 - q) / (q - 1.0);
    out[e].upper = std::pow(acc[e] + out[e].tail_bound, 1.0 / ex[e].p1);
  }
  return out;
}

SpacetimeNorm weighted_spacetime_norm(const SpectrumPair& S, const SpacetimeExponents& e, const SpacetimeWindow& w,
                                      const Projector& P) {
  return weighted_spacetime_norms(S, {e}, w, P).front();
}

}  // namespace pwave
