#include "pwave/continuity.hpp"

#include <algorithm>
#include <cmath>

#include "pwave/deviation.hpp"
#include "pwave/error.hpp"
#include "pwave/parallel.hpp"
#include "pwave/stats.hpp"

namespace pwave {

ContinuityReport continuity_probe(const SpectrumPair& base, const CoefficientLaw& law, const ContinuityParams& p,
                                  std::uint64_t master_seed, int workers) {
  validate(base);
  if (!(p.s >= 0.0 && p.s < 1.0)) throw InvalidInput("s must lie in [0, 1)");
  if (!(p.A > 0.0)) throw InvalidInput("ball radius A must be positive");
  if (!(p.T > 0.0) || !(p.dt > 0.0)) throw InvalidInput("T and dt must be positive");
  if (p.trials < 100) throw InvalidInput("continuity probe needs at least 100 trials per eta");
  if (p.etas.empty()) throw InvalidInput("eta grid is empty");
  double eta_max = 0.0;
  for (double e : p.etas) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidInput("eta values must be finite and nonnegative");
    eta_max = std::max(eta_max, e);
  }
  if (eta_max >= p.A) throw InvalidInput("eta must be much smaller than A");

  const std::size_t ne = p.etas.size();
  std::vector<double> dist(p.trials * ne, 0.0);
  std::vector<int> attempts(p.trials, 0);
  std::vector<std::uint64_t> streams(p.trials, 0);
  EvolveOptions opts;
  opts.record_every = p.record_every;
  opts.keep_snapshots = true;

  parallel_for(p.trials, workers, [&](std::size_t i) {
    SpectrumPair V, W;
    int r = 0;
    for (;; ++r) {
      if (r >= p.max_attempts) throw InvalidInput("could not draw a pair inside the ball; raise A");
      const std::uint64_t k = std::uint64_t(r) * p.trials + i;
      V = randomize(base, law, SeedSpec{master_seed, 2 * k});
      V.s = p.s;
      W = randomize(base, law, SeedSpec{master_seed, 2 * k + 1});
      W.s = p.s;
      const double wn = sobolev_norm(W, p.s, Component::pair);
      if (!(wn > 0.0)) continue;
      W = (1.0 / wn) * W;
      bool inside = sobolev_norm(V, p.s, Component::pair) <= p.A;
      for (double e : p.etas) inside = inside && sobolev_norm(V + e * W, p.s, Component::pair) <= p.A;
      if (inside) {
        streams[i] = 2 * k;
        break;
      }
    }
    attempts[i] = r;
    const TrajectoryRecord ref = evolve_full(V, p.T, p.dt, opts);
    for (std::size_t e = 0; e < ne; ++e) {
      if (p.etas[e] == 0.0) continue;
      const TrajectoryRecord pert = evolve_full(V + p.etas[e] * W, p.T, p.dt, opts);
      dist[i * ne + e] = xt_distance(ref, pert, p.s, p.T);
    }
  });

  ContinuityReport out;
  out.params = p;
  out.stream_ids = streams;
  for (int a : attempts) out.rejections += std::size_t(a);
  std::vector<double> lx, ly;
  for (std::size_t e = 0; e < ne; ++e) {
    EtaSummary sm;
    sm.eta = p.etas[e];
    sm.samples = p.trials;
    for (std::size_t i = 0; i < p.trials; ++i) sm.distances.push_back(dist[i * ne + e]);
    for (double q : sm.quantile_levels) sm.quantiles.push_back(quantile(sm.distances, q));
    sm.median = quantile(sm.distances, 0.5);
    if (sm.eta > 0.0 && sm.median > 0.0) {
      lx.push_back(std::log(sm.eta));
      ly.push_back(std::log(sm.median));
    }
    out.per_eta.push_back(std::move(sm));
  }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(lx.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - out.intercept - out.slope * lx[i];
      sse += r * r;
    }
    out.residual = std::sqrt(sse / double(lx.size()));
  }
  return out;
}

}  // namespace pwave
