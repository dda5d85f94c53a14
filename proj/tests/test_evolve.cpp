#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwave/duhamel.hpp"
#include "pwave/error.hpp"
#include "pwave/evolve.hpp"
#include "pwave/gronwall.hpp"
#include "pwave/growth.hpp"
#include "pwave/harness.hpp"
#include "pwave/randomize.hpp"

using namespace pwave;
using Catch::Approx;

namespace {

SpectrumPair smooth_data(int n_max, double amplitude = 1.0) {
  BaseProfile bp;
  bp.n_max = n_max;
  bp.amplitude = amplitude;
  return make_base(bp);
}

double max_drift(const TrajectoryRecord& r) {
  double d = 0.0;
  for (double e : r.energy_total) d = std::max(d, std::abs(e - r.energy_total.front()));
  return d / r.energy_total.front();
}

double h1_distance(const SpectrumPair& a, const SpectrumPair& b) { return sobolev_norm(a - b, 1.0, Component::pair); }

}  // namespace

TEST_CASE("zero data stays zero", "[evolve]") {
  const auto r = evolve_full(SpectrumPair::zeros(4), 1.0, 0.01);
  REQUIRE(r.size() == 101);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r.energy_total[i] == 0.0);
    CHECK(r.h1_w[i] == 0.0);
    CHECK(r.l4_acc[i] == 0.0);
  }
  CHECK(r.t.back() == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("linear stepper is the exact propagator", "[evolve]") {
  SpectrumPair V = SpectrumPair::zeros(4);
  V.u0.b[*V.modes()->find({1, 2, 0})] = 1e-3;
  V.u1.c[*V.modes()->find({0, 0, 3})] = 2e-3;
  V.u1.a = 1e-3;
  EvolveOptions opts;
  opts.cubic = false;
  opts.keep_snapshots = true;
  const auto r = evolve_full(V, 2.0, 0.05, opts);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const SpectrumPair ref = free_evolve(V, r.t[i]);
    CHECK(h1_distance(r.snapshots[i], ref) < 1e-16);
  }
}

TEST_CASE("energy drift is second order in dt", "[evolve]") {
  const SpectrumPair V = smooth_data(4);
  const double coarse = max_drift(evolve_full(V, 2.0, 4e-3));
  const double fine = max_drift(evolve_full(V, 2.0, 2e-3));
  CHECK(coarse / fine > 3.5);
  CHECK(coarse / fine < 4.5);
}

TEST_CASE("Strang stepping is time reversible", "[evolve]") {
  const SpectrumPair V = smooth_data(4);
  SplitEvolver ev(SpectrumPair::zeros(4), V);
  for (int k = 0; k < 400; ++k) ev.step(5e-3);
  CHECK(h1_distance(ev.v(), V) > 1e-2);
  for (int k = 0; k < 400; ++k) ev.step(-5e-3);
  CHECK(h1_distance(ev.v(), V) < 1e-11);
}

TEST_CASE("decomposition reproduces the full flow", "[evolve]") {
  const SpectrumPair V = smooth_data(4);
  EvolveOptions opts;
  opts.keep_snapshots = true;
  opts.record_every = 50;
  const auto full = evolve_full(V, 1.0, 2e-3, opts);
  for (int n_split : {kSplitAll, 0, 2, 4}) {
    const auto dec = evolve_decomposed(V, n_split, 1.0, 2e-3, opts);
    REQUIRE(dec.size() == full.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
      const double gap = sobolev_norm(dec.snapshots[i] - full.snapshots[i], 0.0, Component::position);
      CHECK(gap < 1e-5);
    }
  }
  // data supported on |n| <= 4: no forcing, same computation as the undecomposed flow
  const auto same = evolve_decomposed(V, 4, 1.0, 2e-3, opts);
  CHECK(same.energy_total == full.energy_total);
  CHECK_THROWS_AS(evolve_decomposed(V, 5, 1.0, 2e-3), InvalidInput);
}

TEST_CASE("energy identity residual shrinks like dt^2", "[evolve]") {
  const SpectrumPair V = smooth_data(4);
  auto residual = [&](double dt) {
    EvolveOptions opts;
    opts.record_identity = true;
    const auto r = evolve_decomposed(V, 1, 0.5, dt, opts);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
      const double d = (r.energy_w[i + 1] - r.energy_w[i - 1]) / (2.0 * dt);
      worst = std::max(worst, std::abs(d - r.identity_rhs[i]));
      scale = std::max(scale, std::abs(r.identity_rhs[i]));
    }
    return worst / scale;
  };
  const double a = residual(4e-3), b = residual(2e-3);
  CHECK(a / b > 3.0);
  CHECK(a / b < 5.0);
}

TEST_CASE("energy guard reports instability", "[evolve]") {
  const SpectrumPair V = smooth_data(4, 20.0);
  CHECK_THROWS_AS(evolve_full(V, 2.0, 0.05), InstabilityError);
  SpectrumPair bad = smooth_data(2);
  bad.u0.b[0] = INFINITY;
  CHECK_THROWS_AS(evolve_full(bad, 1.0, 0.1), InvalidInput);
  CHECK_THROWS_AS(evolve_full(smooth_data(2), 1.0, 0.0), InvalidInput);
}

TEST_CASE("trajectory csv layout", "[evolve]") {
  const auto r = evolve_decomposed(smooth_data(2), kSplitAll, 0.1, 0.05);
  std::ostringstream os;
  write_csv(r, os, "run abc");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# run abc");
  std::getline(is, line);
  CHECK(line == "t,E_w,H1_w,f,g,L4_acc,Hs_v");
  int rows = 0;
  while (std::getline(is, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
    ++rows;
  }
  CHECK(rows == 3);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.t[i] > r.t[i - 1]);
}

TEST_CASE("Duhamel fixed point", "[duhamel]") {
  const auto zero = local_solve_duhamel(SpectrumPair::zeros(4), SpectrumPair::zeros(4), 0.0, 0.1, 1e-14);
  CHECK(zero.iterations == 1);
  for (const auto& s : zero.states) CHECK(sobolev_norm(s, 1.0, Component::pair) == 0.0);

  SpectrumPair tiny = smooth_data(4);
  tiny = (1e-6 / sobolev_norm(tiny, 1.0, Component::pair)) * tiny;
  const auto lin = local_solve_duhamel(tiny, SpectrumPair::zeros(4), 0.0, 0.1, 1e-20);
  for (std::size_t i = 0; i < lin.times.size(); ++i) {
    const SpectrumPair d = lin.states[i] - free_evolve(tiny, lin.times[i]);
    for (int j = 0; j < 2; ++j) {
      const auto& f = d.component(j);
      CHECK(std::abs(f.a) < 1e-14);
      for (std::size_t k = 0; k < f.size(); ++k) {
        CHECK(std::abs(f.b[k]) < 1e-14);
        CHECK(std::abs(f.c[k]) < 1e-14);
      }
    }
  }
}

TEST_CASE("Duhamel solution agrees with the splitting scheme", "[duhamel]") {
  const SpectrumPair V = smooth_data(4);
  const double tau = 0.05;
  const auto sol = local_solve_duhamel(V, SpectrumPair::zeros(4), 0.0, tau, 1e-13);
  CHECK(sol.last_increment < 1e-13);
  SplitEvolver ev(SpectrumPair::zeros(4), V);
  const int steps = 8000;
  for (int k = 0; k < steps; ++k) ev.step(tau / steps);
  CHECK(h1_distance(ev.v(), sol.states.back()) < 1e-8);

  // forced problem on a shifted interval against the decomposed stepper
  const SpectrumPair F = project_high(V, 1), W0 = project_low(V, 1);
  SplitEvolver dec(F, W0);
  for (int k = 0; k < 1000; ++k) dec.step(0.3 / 1000);
  dec.set_time(0.3);
  const SpectrumPair w3 = dec.w();
  const auto sol2 = local_solve_duhamel(w3, F, 0.3, tau, 1e-13);
  for (int k = 0; k < steps; ++k) dec.step(tau / steps);
  CHECK(h1_distance(dec.w(), sol2.states.back()) < 1e-8);
}

TEST_CASE("Duhamel refuses intervals that are too long", "[duhamel]") {
  const SpectrumPair V = smooth_data(4, 10.0);
  CHECK_THROWS_AS(local_solve_duhamel(V, SpectrumPair::zeros(4), 0.0, 3.0, 1e-12), IntervalTooLong);
  CHECK_THROWS_AS(local_solve_duhamel(V, SpectrumPair::zeros(4), 0.0, -1.0, 1e-12), InvalidInput);
}

TEST_CASE("Gronwall envelope", "[gronwall]") {
  const auto zero = evolve_decomposed(SpectrumPair::zeros(4), kSplitAll, 1.0, 0.01);
  const auto ez = gronwall_envelope(zero, GronwallConstants::derived());
  CHECK(ez.satisfied);
  for (double l : ez.log_envelope) CHECK(l == -INFINITY);

  BaseProfile bp;
  bp.n_max = 4;
  bp.sigma = 2.0;
  const SpectrumPair V = randomize(make_base(bp), CoefficientLaw(LawKind::gaussian), {5, 0});
  const auto r = evolve_decomposed(V, kSplitAll, 3.0, 2e-3);
  const auto env = gronwall_envelope(r, GronwallConstants::derived());
  CHECK(env.satisfied);
  CHECK(env.max_log_ratio <= 0.0);
  for (std::size_t i = 1; i < env.log_envelope.size(); ++i) CHECK(env.log_envelope[i] >= env.log_envelope[i - 1]);

  const auto weak = gronwall_envelope(r, GronwallConstants{1.0, 1e-3, 1e-3});
  CHECK_FALSE(weak.satisfied);
  CHECK(weak.max_log_ratio > 0.0);
  CHECK(gronwall_envelope(r, 50.0).satisfied);
  CHECK_THROWS_AS(gronwall_envelope(r, 0.0), InvalidInput);
}

TEST_CASE("growth fits recover planted models", "[growth]") {
  std::vector<double> t, H, E, K;
  for (int i = 0; i <= 200; ++i) {
    const double ti = 0.05 * i;
    t.push_back(ti);
    H.push_back(3.0 * std::pow(1.0 + ti, 2.0));
    E.push_back(std::exp((ti + 1.0) * (ti + 1.0)));
    K.push_back(2.5);
  }
  const auto p = fit_growth(t, H, 0.5);
  CHECK(p.exponent == Approx(2.0).margin(1e-10));
  CHECK(p.M == Approx(1.0).margin(1e-8));
  CHECK(p.C == Approx(3.0).epsilon(1e-8));
  CHECK_FALSE(p.degenerate);

  const auto q = fit_growth(t, E, 0.0);
  CHECK(q.exponent == Approx(1.0).margin(1e-8));
  CHECK(q.M == Approx(1.0).margin(1e-6));

  const auto c = fit_growth(t, K, 0.5);
  CHECK(c.degenerate);
  CHECK(c.exponent == 0.0);
  CHECK_THROWS_AS(fit_growth(t, K, 1.0), InvalidInput);
}
