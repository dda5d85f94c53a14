#include "pwave/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "pwave/detail/transform.hpp"
#include "pwave/error.hpp"

namespace pwave {

namespace detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t wrap(int k, int n) { return std::size_t(((k % n) + n) % n); }

}  // namespace

SpectralTransform::SpectralTransform(ModeSetPtr modes, int n_grid)
    : modes_(std::move(modes)), n_(n_grid), nc_(std::size_t(n_grid) * n_grid * (n_grid / 2 + 1)) {
  if (n_grid < minimal_grid(modes_->n_max()))
    throw AliasingError("grid of " + std::to_string(n_grid) + " points per axis cannot represent n_max " +
                        std::to_string(modes_->n_max()));
  {
    std::lock_guard lock(planner_mutex());
    real_ = fftw_alloc_real(points());
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(nc_));
    auto* spec = reinterpret_cast<fftw_complex*>(spec_);
    plan_c2r_ = fftw_plan_dft_c2r_3d(n_, n_, n_, spec, real_, FFTW_ESTIMATE);
    plan_r2c_ = fftw_plan_dft_r2c_3d(n_, n_, n_, real_, spec, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  const std::size_t nz = std::size_t(n_ / 2 + 1);
  auto flat = [&](int x, int y, int z) { return (wrap(x, n_) * std::size_t(n_) + wrap(y, n_)) * nz + std::size_t(z); };
  slots_.reserve(modes_->size());
  for (const auto& n : modes_->indices()) {
    if (n.z > 0)
      slots_.push_back({flat(n.x, n.y, n.z), 0, 1});
    else if (n.z < 0)
      slots_.push_back({flat(-n.x, -n.y, -n.z), 0, -1});
    else
      slots_.push_back({flat(n.x, n.y, 0), flat(-n.x, -n.y, 0), 0});
  }
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  fftw_free(real_);
  fftw_free(spec_);
}

void SpectralTransform::scatter(const ModeField& f, double scale, bool accumulate) {
  if (f.size() != slots_.size()) throw InvalidInput("mode field does not match transform index set");
  if (!accumulate) std::fill(spec_, spec_ + nc_, std::complex<double>(0.0, 0.0));
  spec_[0] += scale * f.a;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    const double hb = 0.5 * scale * f.b[i];
    const double hc = 0.5 * scale * f.c[i];
    switch (s.kind) {
      case 1:
        spec_[s.idx] += std::complex<double>(hb, -hc);
        break;
      case -1:
        spec_[s.idx] += std::complex<double>(hb, hc);
        break;
      default:
        spec_[s.idx] += std::complex<double>(hb, -hc);
        spec_[s.partner] += std::complex<double>(hb, hc);
    }
  }
}

void SpectralTransform::to_grid(const ModeField& f) {
  scatter(f, 1.0, false);
  fftw_execute(static_cast<fftw_plan>(plan_c2r_));
}

void SpectralTransform::to_grid(const ModeField& f, const ModeField& g) {
  scatter(f, 1.0, false);
  scatter(g, 1.0, true);
  fftw_execute(static_cast<fftw_plan>(plan_c2r_));
}

void SpectralTransform::from_grid(ModeField& out) {
  fftw_execute(static_cast<fftw_plan>(plan_r2c_));
  if (out.modes != modes_ || out.size() != slots_.size()) out = ModeField::zeros(modes_);
  const double inv = 1.0 / double(points());
  out.a = spec_[0].real() * inv;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    const std::complex<double> v = spec_[s.idx] * inv;
    out.b[i] = 2.0 * v.real();
    out.c[i] = s.kind == -1 ? 2.0 * v.imag() : -2.0 * v.imag();
  }
}

SpectralTransform& transform_for(const ModeSetPtr& modes, int n_grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<SpectralTransform>> cache;
  auto& slot = cache[{modes->n_max(), n_grid}];
  if (!slot) slot = std::make_unique<SpectralTransform>(modes, n_grid);
  return *slot;
}

}  // namespace detail

GridField GridField::constant(int n_grid, double value) {
  return GridField{n_grid, std::vector<double>(std::size_t(n_grid) * n_grid * n_grid, value)};
}

int minimal_grid(int n_max) { return 2 * n_max + 2; }

int smooth_grid(int at_least) {
  auto smooth = [](int v) {
    for (int p : {2, 3, 5})
      while (v % p == 0) v /= p;
    return v == 1;
  };
  int m = std::max(2, at_least);
  while (m % 2 != 0 || !smooth(m)) ++m;
  return m;
}

int dealiased_grid(int n_max) { return smooth_grid(4 * n_max + 2); }

GridField synthesize(const ModeField& f, int n_grid) {
  auto& tr = detail::transform_for(f.modes, n_grid);
  tr.to_grid(f);
  auto g = tr.grid();
  return GridField{n_grid, std::vector<double>(g.begin(), g.end())};
}

GridField synthesize(const SpectrumPair& S, int component, int n_grid) {
  if (component != 0 && component != 1) throw InvalidInput("component must be 0 or 1");
  return synthesize(S.component(component), n_grid);
}

ModeField analyze(const GridField& F, int n_max) {
  auto modes = ModeSet::get(n_max);
  auto& tr = detail::transform_for(modes, F.n_grid);
  if (F.values.size() != tr.points()) throw InvalidInput("grid field size mismatch");
  std::copy(F.values.begin(), F.values.end(), tr.grid().begin());
  ModeField out = ModeField::zeros(modes);
  tr.from_grid(out);
  return out;
}

double lp_norm(const GridField& F, double p) {
  if (!(p >= 1.0)) throw InvalidInput("lp_norm needs p >= 1");
  if (F.values.empty()) return 0.0;
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : F.values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0)
    for (double v : F.values) acc += v * v;
  else
    for (double v : F.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc / double(F.values.size()), 1.0 / p);
}

double grid_gradient_sq(const GridField& w) {
  const int n = w.n_grid;
  const std::size_t nz = std::size_t(n / 2 + 1);
  const std::size_t total = std::size_t(n) * n * n;
  if (w.values.size() != total) throw InvalidInput("grid field size mismatch");
  std::vector<double> in(w.values);
  fftw_complex* out = fftw_alloc_complex(std::size_t(n) * n * nz);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::planner_mutex());
    plan = fftw_plan_dft_r2c_3d(n, n, n, in.data(), out, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  auto freq = [n](std::size_t k) { return double(k <= std::size_t(n / 2) ? long(k) : long(k) - n); };
  double acc = 0.0;
  for (std::size_t i = 0; i < std::size_t(n); ++i)
    for (std::size_t j = 0; j < std::size_t(n); ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        const double* c = out[(i * n + j) * nz + k];
        const double kk = freq(i) * freq(i) + freq(j) * freq(j) + double(k) * double(k);
        const double mult = (k == 0 || (n % 2 == 0 && k == std::size_t(n / 2))) ? 1.0 : 2.0;
        acc += mult * kk * (c[0] * c[0] + c[1] * c[1]);
      }
  {
    std::lock_guard lock(detail::planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(out);
  }
  const double norm = double(total);
  return acc / (norm * norm);
}

double energy(const GridField& w, const GridField& wt) {
  if (w.n_grid != wt.n_grid || w.values.size() != wt.values.size())
    throw InvalidInput("energy needs matching grids");
  double kin = 0.0, quart = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    kin += wt.values[i] * wt.values[i];
    const double w2 = w.values[i] * w.values[i];
    quart += w2 * w2;
  }
  const double inv = 1.0 / double(w.values.size());
  return 0.5 * kin * inv + 0.5 * grid_gradient_sq(w) + 0.25 * quart * inv;
}

}  // namespace pwave
