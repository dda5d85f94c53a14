#include "pwave/evolve.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "pwave/detail/transform.hpp"
#include "pwave/error.hpp"
#include "pwave/grid.hpp"
#include "pwave/json_io.hpp"

namespace pwave {

namespace {

bool is_zero(const SpectrumPair& S) {
  if (S.u0.a != 0.0 || S.u1.a != 0.0) return false;
  for (const ModeField* f : {&S.u0, &S.u1})
    for (std::size_t i = 0; i < f->size(); ++i)
      if (f->b[i] != 0.0 || f->c[i] != 0.0) return false;
  return true;
}

// Position and velocity of S(t)F0.
void free_wave(const SpectrumPair& F0, double t, ModeField& pos, ModeField* vel) {
  const auto freq = F0.modes()->frequency();
  pos.a = F0.u0.a + F0.u1.a * t;
  if (vel) vel->a = F0.u1.a;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double w = freq[i];
    const double cs = std::cos(t * w), sn = std::sin(t * w);
    pos.b[i] = F0.u0.b[i] * cs + F0.u1.b[i] * sn / w;
    pos.c[i] = F0.u0.c[i] * cs + F0.u1.c[i] * sn / w;
    if (vel) {
      vel->b[i] = -F0.u0.b[i] * w * sn + F0.u1.b[i] * cs;
      vel->c[i] = -F0.u0.c[i] * w * sn + F0.u1.c[i] * cs;
    }
  }
}

}  // namespace

SplitEvolver::SplitEvolver(const SpectrumPair& forcing, const SpectrumPair& w0, const EvolveOptions& opts)
    : opts_(opts), forcing_(forcing), forced_(!is_zero(forcing)), w_(w0.u0), wt_(w0.u1) {
  validate(forcing);
  validate(w0);
  if (!same_index_set(forcing, w0)) throw InvalidInput("forcing and initial data on different index sets");
  if (opts_.record_every < 1) throw InvalidInput("record_every must be >= 1");
  n_grid_ = opts_.n_grid > 0 ? opts_.n_grid : dealiased_grid(w0.n_max());
  tr_ = &detail::transform_for(w0.modes(), n_grid_);
  force_ = ModeField::zeros(w0.modes());
}

SplitEvolver::~SplitEvolver() = default;

void SplitEvolver::compute_force() {
  if (forced_) {
    ModeField pos = ModeField::zeros(w_.modes);
    free_wave(forcing_, t_, pos, nullptr);
    tr_->to_grid(pos, w_);
  } else {
    tr_->to_grid(w_);
  }
  auto g = tr_->grid();
  double acc = 0.0;
  for (double& v : g) {
    const double v2 = v * v;
    acc += v2 * v2;
    v *= v2;
  }
  v4_mean_ = acc / double(g.size());
  tr_->from_grid(force_);
  force_valid_ = true;
}

void SplitEvolver::ensure_force() {
  if (!force_valid_) compute_force();
}

void SplitEvolver::set_time(double t) {
  if (std::abs(t - t_) > 1e-12 * std::max(1.0, std::abs(t))) force_valid_ = false;
  t_ = t;
}

void SplitEvolver::step(double dt) {
  ensure_force();
  const double h = 0.5 * dt;
  if (opts_.cubic) {
    wt_.a -= h * force_.a;
    for (std::size_t i = 0; i < wt_.size(); ++i) {
      wt_.b[i] -= h * force_.b[i];
      wt_.c[i] -= h * force_.c[i];
    }
  }
  const auto freq = w_.modes->frequency();
  if (dt != cached_dt_ || cos_.size() != freq.size()) {
    cos_.resize(freq.size());
    sin_.resize(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) {
      cos_[i] = std::cos(dt * freq[i]);
      sin_[i] = std::sin(dt * freq[i]);
    }
    cached_dt_ = dt;
  }
  w_.a += dt * wt_.a;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double om = freq[i], cs = cos_[i], sn = sin_[i];
    const double b0 = w_.b[i], b1 = wt_.b[i];
    const double c0 = w_.c[i], c1 = wt_.c[i];
    w_.b[i] = b0 * cs + b1 * sn / om;
    wt_.b[i] = -b0 * om * sn + b1 * cs;
    w_.c[i] = c0 * cs + c1 * sn / om;
    wt_.c[i] = -c0 * om * sn + c1 * cs;
  }
  const double before = v4_mean_;
  t_ += dt;
  compute_force();
  l4_acc_ += 0.5 * std::abs(dt) * (before + v4_mean_);
  if (opts_.cubic) {
    wt_.a -= h * force_.a;
    for (std::size_t i = 0; i < wt_.size(); ++i) {
      wt_.b[i] -= h * force_.b[i];
      wt_.c[i] -= h * force_.c[i];
    }
  }
}

SpectrumPair SplitEvolver::w() const { return SpectrumPair{forcing_.s, w_, wt_}; }

SpectrumPair SplitEvolver::v() const {
  SpectrumPair out{forcing_.s, w_, wt_};
  if (forced_) {
    ModeField pos = ModeField::zeros(w_.modes), vel = ModeField::zeros(w_.modes);
    free_wave(forcing_, t_, pos, &vel);
    out.u0 += pos;
    out.u1 += vel;
  }
  return out;
}

void SplitEvolver::record(TrajectoryRecord& out) {
  ensure_force();
  const double s = forcing_.s;
  ModeField fpos = ModeField::zeros(w_.modes), fvel = ModeField::zeros(w_.modes);
  if (forced_) free_wave(forcing_, t_, fpos, &fvel);
  const ModeField vpos = fpos + w_, vvel = fvel + wt_;
  const double e_total = 0.5 * mean_product(vvel, vvel) + 0.5 * mean_gradient_sq(vpos) + 0.25 * v4_mean_;

  double e_w = e_total, f = 0.0, g = 0.0, rhs = 0.0;
  if (forced_) {
    tr_->to_grid(w_);
    auto grid = tr_->grid();
    double w4 = 0.0;
    for (double& x : grid) {
      const double x2 = x * x;
      w4 += x2 * x2;
      x *= x2;
    }
    w4 /= double(grid.size());
    e_w = 0.5 * mean_product(wt_, wt_) + 0.5 * mean_gradient_sq(w_) + 0.25 * w4;
    if (opts_.record_identity) {
      ModeField pw3 = ModeField::zeros(w_.modes);
      tr_->from_grid(pw3);
      rhs = -(mean_product(wt_, force_) - mean_product(wt_, pw3));
    }
    tr_->to_grid(fpos);
    double m = 0.0, s6 = 0.0;
    for (double x : tr_->grid()) {
      m = std::max(m, std::abs(x));
      const double x2 = x * x;
      s6 += x2 * x2 * x2;
    }
    f = m;
    g = std::sqrt(s6 / double(tr_->points()));
  }

  if (!std::isfinite(e_total) || !std::isfinite(e_w)) {
    std::ostringstream msg;
    msg << "non-finite energy at t=" << format_double(t_);
    throw InstabilityError(msg.str());
  }
  if (!have_e0_) {
    e0_ = e_total;
    have_e0_ = true;
  }
  const double drift = std::abs(e_total - e0_) / std::max(std::abs(e0_), 1e-300);
  if (e0_ != 0.0) {
    bool trip = drift > opts_.blowup_drift;
    if (opts_.guard_factor > 0.0) {
      if (std::abs(t_) <= opts_.calibration_time)
        calib_drift_ = std::max(calib_drift_, drift);
      else
        trip = trip || drift > std::max(opts_.guard_factor * calib_drift_, opts_.guard_floor);
    }
    if (trip) {
      std::ostringstream msg;
      msg << "energy guard tripped at t=" << format_double(t_) << ": E0=" << format_double(e0_)
          << " E=" << format_double(e_total) << " relative drift=" << format_double(drift)
          << " calibration drift=" << format_double(calib_drift_) << " factor=" << format_double(opts_.guard_factor);
      throw InstabilityError(msg.str());
    }
  }

  out.s = s;
  out.n_grid = n_grid_;
  out.t.push_back(t_);
  out.energy_w.push_back(e_w);
  out.h1_w.push_back(sobolev_norm(SpectrumPair{s, w_, wt_}, 1.0, Component::pair));
  out.f.push_back(f);
  out.g.push_back(g);
  out.l4_acc.push_back(std::pow(l4_acc_, 0.25));
  SpectrumPair v{s, vpos, vvel};
  out.hs_v.push_back(sobolev_norm(v, s, Component::pair));
  out.energy_total.push_back(e_total);
  if (opts_.record_identity) out.identity_rhs.push_back(rhs);
  if (opts_.keep_snapshots) out.snapshots.push_back(std::move(v));
}

namespace {

TrajectoryRecord run(SplitEvolver& ev, double T, double dt, const EvolveOptions& opts) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidInput("T must be finite and nonnegative");
  const long n = std::max(1L, std::lround(T / dt));
  const double h = T > 0.0 ? T / double(n) : 0.0;
  TrajectoryRecord rec;
  rec.dt = h;
  ev.record(rec);
  if (T == 0.0) return rec;
  for (long k = 1; k <= n; ++k) {
    ev.step(h);
    ev.set_time(double(k) * h);
    if (k % opts.record_every == 0 || k == n) ev.record(rec);
  }
  return rec;
}

}  // namespace

TrajectoryRecord evolve_full(const SpectrumPair& V, double T, double dt, const EvolveOptions& opts) {
  SplitEvolver ev(SpectrumPair::zeros(V.n_max(), V.s), V, opts);
  return run(ev, T, dt, opts);
}

TrajectoryRecord evolve_decomposed(const SpectrumPair& V, int n_split, double T, double dt,
                                   const EvolveOptions& opts) {
  validate(V);
  if (n_split == kSplitAll) {
    SplitEvolver ev(V, SpectrumPair::zeros(V.n_max(), V.s), opts);
    return run(ev, T, dt, opts);
  }
  if (n_split < 0 || n_split > V.n_max()) throw InvalidInput("N_split must lie in [0, N_max] or be 'all'");
  SplitEvolver ev(project_high(V, n_split), project_low(V, n_split), opts);
  return run(ev, T, dt, opts);
}

void write_csv(const TrajectoryRecord& r, std::ostream& os, const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << "\n";
  os << "t,E_w,H1_w,f,g,L4_acc,Hs_v\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    os << format_double(r.t[i]) << ',' << format_double(r.energy_w[i]) << ',' << format_double(r.h1_w[i]) << ','
       << format_double(r.f[i]) << ',' << format_double(r.g[i]) << ',' << format_double(r.l4_acc[i]) << ','
       << format_double(r.hs_v[i]) << '\n';
  }
}

}  // namespace pwave
