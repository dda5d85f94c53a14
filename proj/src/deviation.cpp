#include "pwave/deviation.hpp"

#include <algorithm>
#include <cmath>

#include "pwave/detail/transform.hpp"
#include "pwave/error.hpp"
#include "pwave/parallel.hpp"

namespace pwave {

namespace {

double grid_lp(std::span<const double> g, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 4.0)
    for (double v : g) {
      const double v2 = v * v;
      acc += v2 * v2;
    }
  else
    for (double v : g) acc += std::pow(std::abs(v), p);
  return std::pow(acc / double(g.size()), 1.0 / p);
}

double lp_low(const SpectrumPair& V, double p, double N, int n_grid) {
  const SpectrumPair low = std::isinf(N) ? V : project_low(V, N);
  if (p == 2.0) return std::sqrt(mean_product(low.u0, low.u0));
  int m = n_grid;
  if (m <= 0) {
    const int band = std::isinf(N) ? V.n_max() : std::min(V.n_max(), int(std::floor(N)));
    m = std::max(dealiased_grid(band), smooth_grid(minimal_grid(V.n_max())));
  }
  auto& tr = detail::transform_for(V.modes(), m);
  tr.to_grid(low.u0);
  return grid_lp(tr.grid(), p);
}

}  // namespace

double evaluate(const Functional& F, const SpectrumPair& V) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LpLowPosition>) {
          if (!(f.p >= 1.0)) throw InvalidInput("lp functional needs p >= 1");
          return lp_low(V, f.p, f.N, f.n_grid);
        } else if constexpr (std::is_same_v<T, SobolevPairNorm>) {
          return sobolev_norm(V, f.sigma, Component::pair);
        } else {
          return weighted_spacetime_norm(V, f.exponents, f.window, f.projector).value;
        }
      },
      F);
}

TailCurve tail_from_values(const std::vector<double>& values, const std::vector<double>& lambdas) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw InvalidInput("lambda grid must be strictly increasing");
  TailCurve c;
  c.trials = values.size();
  c.lambdas = lambdas;
  for (double lam : lambdas) {
    std::size_t k = 0;
    for (double v : values) k += v > lam ? 1 : 0;
    const auto ci = wilson_interval(k, values.size());
    c.exceed.push_back(k);
    c.p_hat.push_back(values.empty() ? 0.0 : double(k) / double(values.size()));
    c.ci_lo.push_back(ci.lo);
    c.ci_hi.push_back(ci.hi);
  }
  return c;
}

TailCurve estimate_tail(const Functional& F, const SpectrumPair& base, const CoefficientLaw& law,
                        const std::vector<double>& lambdas, std::size_t trials, std::uint64_t master_seed,
                        int workers) {
  if (trials < 100) throw InvalidInput("estimate_tail needs at least 100 trials");
  validate(base);
  std::vector<double> values(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    values[i] = evaluate(F, randomize(base, law, SeedSpec{master_seed, i}));
  });
  return tail_from_values(values, lambdas);
}

TailFit fit_tail_exponent(const TailCurve& curve, std::size_t min_count, double r2_threshold) {
  std::vector<double> x, y, w;
  const double n = double(curve.trials);
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    const double p = curve.p_hat[i];
    if (!(p > 0.0 && p < 1.0)) continue;
    if (curve.trials > 0 && (curve.exceed[i] < min_count || curve.trials - curve.exceed[i] < min_count)) continue;
    x.push_back(curve.lambdas[i] * curve.lambdas[i]);
    y.push_back(std::log(p));
    // inverse delta-method variance of log p_hat
    w.push_back((curve.trials > 0 ? n : 1.0) * p / (1.0 - p));
  }
  if (x.size() < 4) throw InvalidInput("tail fit needs at least 4 informative points");
  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  TailFit fit;
  const double slope = sxy / sxx;
  fit.c_hat = -slope;
  fit.C_hat = std::exp(my - slope * mx);
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    sse += w[i] * r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.points = x.size();
  fit.subgaussian_consistent = fit.c_hat > 0.0 && fit.r2 >= r2_threshold;
  return fit;
}

void validate(const EventParams& p, int n_max) {
  if (!(p.s >= 0.0 && p.s < 1.0)) throw InvalidInput("s must lie in [0, 1)");
  if (!(p.eps > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(p.delta > 0.5)) throw InvalidInput("delta must exceed 1/2");
  if (!(p.delta_tilde > 1.0 / 3.0)) throw InvalidInput("delta_tilde must exceed 1/3");
  if (!(p.T_max > 0.0) || !(p.dt > 0.0)) throw InvalidInput("T_max and dt must be positive");
  if (p.N_list.empty()) throw InvalidInput("N list is empty");
  for (int N : p.N_list) {
    if (N < 1 || (N & (N - 1)) != 0) throw InvalidInput("N values must be dyadic (powers of two)");
    if (N > n_max) throw InvalidInput("N exceeds the data's n_max");
  }
}

EventValues event_values(const SpectrumPair& V, int N, const EventParams& p) {
  EventValues out;
  const double dN = double(N);
  out.value[0] = sobolev_norm(project_low(V, dN), 1.0, Component::pair);
  out.value[1] = lp_low(V, 4.0, dN, 0);
  const auto hk = weighted_spacetime_norms(V, {{2.0, infinity, p.delta}, {3.0, 6.0, p.delta_tilde}},
                                           SpacetimeWindow{p.T_max, p.dt, p.n_grid}, Projector::high(dN));
  out.value[2] = hk[0].value;
  out.value[3] = hk[1].value;
  out.threshold = {std::pow(dN, 1.0 - p.s + p.eps), std::pow(dN, p.eps), std::pow(dN, p.eps - p.s),
                   std::pow(dN, p.eps - p.s)};
  return out;
}

EventRates event_rates(const SpectrumPair& base, const CoefficientLaw& law, const EventParams& p, std::size_t trials,
                       std::uint64_t master_seed, int workers) {
  validate(base);
  validate(p, base.n_max());
  if (trials == 0) throw InvalidInput("trials must be positive");
  const std::size_t nN = p.N_list.size();
  // membership bits per trial and N
  std::vector<unsigned char> bits(trials * nN, 0);
  parallel_for(trials, workers, [&](std::size_t i) {
    const SpectrumPair V = randomize(base, law, SeedSpec{master_seed, i});
    for (std::size_t k = 0; k < nN; ++k) {
      const auto ev = event_values(V, p.N_list[k], p);
      unsigned char b = 0;
      for (int e = 0; e < 4; ++e)
        if (ev.value[std::size_t(e)] <= ev.threshold[std::size_t(e)]) b |= (unsigned char)(1u << e);
      bits[i * nN + k] = b;
    }
  });
  EventRates out;
  out.params = p;
  out.trials = trials;
  for (std::size_t k = 0; k < nN; ++k) {
    EventRow row;
    row.N = p.N_list[k];
    for (std::size_t i = 0; i < trials; ++i) {
      const unsigned char b = bits[i * nN + k];
      for (int e = 0; e < 4; ++e)
        if (b & (1u << e)) ++row.in[std::size_t(e)];
      if (b == 0xF) ++row.in[4];
    }
    for (std::size_t e = 0; e < 5; ++e) {
      row.rate[e] = double(row.in[e]) / double(trials);
      row.complement[e] = 1.0 - row.rate[e];
      row.complement_ci[e] = wilson_interval(trials - row.in[e], trials);
    }
    out.rows.push_back(row);
  }
  return out;
}

double xt_distance(const TrajectoryRecord& a, const TrajectoryRecord& b, double s, double T) {
  if (a.snapshots.size() != a.t.size() || b.snapshots.size() != b.t.size())
    throw InvalidInput("xt_distance needs trajectories recorded with snapshots");
  if (a.t.empty() || b.t.empty()) throw InvalidInput("empty trajectory");
  const double tol = 1e-9 * std::max(1.0, std::abs(T));
  std::size_t n = 0;
  while (n < a.t.size() && a.t[n] <= T + tol) ++n;
  if (n == 0 || a.t[n - 1] < T - tol) throw InvalidInput("trajectory does not cover [0, T]");
  if (b.t.size() < n) throw InvalidInput("time grid mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(a.t[i] - b.t[i]) > tol) throw InvalidInput("time grid mismatch");
  if (!same_index_set(a.snapshots[0], b.snapshots[0])) throw InvalidInput("trajectories on different index sets");

  const auto& modes = a.snapshots[0].modes();
  auto& tr = detail::transform_for(modes, dealiased_grid(modes->n_max()));
  double sup = 0.0, prev = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SpectrumPair d = a.snapshots[i] - b.snapshots[i];
    sup = std::max(sup, sobolev_norm(d, s, Component::pair));
    tr.to_grid(d.u0);
    double m4 = 0.0;
    for (double v : tr.grid()) {
      const double v2 = v * v;
      m4 += v2 * v2;
    }
    m4 /= double(tr.points());
    if (i > 0) acc += 0.5 * (a.t[i] - a.t[i - 1]) * (prev + m4);
    prev = m4;
  }
  return sup + std::pow(acc, 0.25);
}

}  // namespace pwave
