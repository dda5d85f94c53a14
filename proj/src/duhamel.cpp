#include "pwave/duhamel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "pwave/detail/transform.hpp"
#include "pwave/error.hpp"
#include "pwave/grid.hpp"

namespace pwave {

namespace {

// Q[k][j] = int_0^{s_k} l_j(r) dr for the Lagrange basis on nodes s.
std::vector<std::vector<double>> integration_matrix(const std::vector<double>& s) {
  const std::size_t K = s.size();
  std::vector<double> bw(K, 1.0);
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t m = 0; m < K; ++m)
      if (m != j) bw[j] /= (s[j] - s[m]);
  auto basis = [&](std::size_t j, double r) {
    double p = bw[j];
    for (std::size_t m = 0; m < K; ++m)
      if (m != j) p *= (r - s[m]);
    return p;
  };
  std::vector<std::vector<double>> Q(K, std::vector<double>(K, 0.0));
  for (std::size_t k = 1; k < K; ++k)
    for (std::size_t j = 0; j < K; ++j)
      Q[k][j] = boost::math::quadrature::gauss<double, 30>::integrate([&](double r) { return basis(j, r); }, 0.0,
                                                                      s[k]);
  return Q;
}

double h1_distance(const ModeField& p1, const ModeField& v1, const ModeField& p2, const ModeField& v2) {
  SpectrumPair d{0.0, p1 - p2, v1 - v2};
  return sobolev_norm(d, 1.0, Component::pair);
}

}  // namespace

DuhamelSolution local_solve_duhamel(const SpectrumPair& data, const SpectrumPair& forcing, double a, double tau,
                                    double tol, const DuhamelOptions& opts) {
  validate(data);
  validate(forcing);
  if (!same_index_set(data, forcing)) throw InvalidInput("data and forcing on different index sets");
  if (!(tau > 0.0)) throw InvalidInput("interval length must be positive");
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (opts.nodes < 3 || opts.nodes > 40) throw InvalidInput("node count must lie in [3, 40]");

  const auto modes = data.modes();
  const auto freq = modes->frequency();
  const std::size_t K = std::size_t(opts.nodes);
  std::vector<double> s(K);
  for (std::size_t k = 0; k < K; ++k)
    s[k] = 0.5 * tau * (1.0 - std::cos(std::numbers::pi * double(k) / double(K - 1)));
  const auto Q = integration_matrix(s);

  auto& tr = detail::transform_for(modes, opts.n_grid > 0 ? opts.n_grid : dealiased_grid(modes->n_max()));

  std::vector<ModeField> free_pos(K), free_vel(K), fpos(K), pos(K), vel(K), nl(K);
  for (std::size_t k = 0; k < K; ++k) {
    const SpectrumPair fr = free_evolve(data, s[k]);
    free_pos[k] = fr.u0;
    free_vel[k] = fr.u1;
    fpos[k] = free_evolve(forcing, a + s[k]).u0;
    pos[k] = free_pos[k];
    vel[k] = free_vel[k];
    nl[k] = ModeField::zeros(modes);
  }

  DuhamelSolution sol;
  double prev = std::numeric_limits<double>::infinity();
  int growing = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t k = 0; k < K; ++k) {
      tr.to_grid(fpos[k], pos[k]);
      for (double& x : tr.grid()) x = x * x * x;
      tr.from_grid(nl[k]);
    }
    double dist = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      ModeField np = free_pos[k], nv = free_vel[k];
      {
        double i0 = 0.0, i1 = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
          i0 += Q[k][j] * nl[j].a;
          i1 += Q[k][j] * s[j] * nl[j].a;
        }
        np.a -= s[k] * i0 - i1;
        nv.a -= i0;
      }
      for (std::size_t i = 0; i < freq.size(); ++i) {
        const double om = freq[i];
        double cb = 0.0, sb = 0.0, cc = 0.0, sc = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
          const double q = Q[k][j];
          if (q == 0.0) continue;
          const double cj = std::cos(om * s[j]), sj = std::sin(om * s[j]);
          cb += q * cj * nl[j].b[i];
          sb += q * sj * nl[j].b[i];
          cc += q * cj * nl[j].c[i];
          sc += q * sj * nl[j].c[i];
        }
        const double ck = std::cos(om * s[k]), sk = std::sin(om * s[k]);
        np.b[i] -= (sk * cb - ck * sb) / om;
        nv.b[i] -= ck * cb + sk * sb;
        np.c[i] -= (sk * cc - ck * sc) / om;
        nv.c[i] -= ck * cc + sk * sc;
      }
      dist = std::max(dist, h1_distance(np, nv, pos[k], vel[k]));
      pos[k] = std::move(np);
      vel[k] = std::move(nv);
    }
    sol.iterations = it;
    sol.last_increment = dist;
    if (!std::isfinite(dist)) throw IntervalTooLong("Duhamel iterates became non-finite");
    if (dist < tol) break;
    growing = dist > prev ? growing + 1 : 0;
    if (growing >= 3) throw IntervalTooLong("Duhamel iterates are not contracting; shorten the interval");
    prev = dist;
    if (it == opts.max_iterations) throw IntervalTooLong("Duhamel iteration did not reach tolerance");
  }
  for (std::size_t k = 0; k < K; ++k) {
    sol.times.push_back(a + s[k]);
    sol.states.push_back(SpectrumPair{data.s, pos[k], vel[k]});
  }
  return sol;
}

}  // namespace pwave
