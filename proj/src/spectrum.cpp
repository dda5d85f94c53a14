#include "pwave/spectrum.hpp"

#include <cmath>

#include "pwave/error.hpp"

namespace pwave {

ModeField ModeField::zeros(ModeSetPtr modes) {
  ModeField f;
  f.b.assign(modes->size(), 0.0);
  f.c.assign(modes->size(), 0.0);
  f.modes = std::move(modes);
  return f;
}

namespace {

void check_same(const ModeField& a, const ModeField& b) {
  if (a.modes != b.modes && (a.size() != b.size() || a.modes->n_max() != b.modes->n_max()))
    throw InvalidInput("mode fields on different index sets");
}

}  // namespace

ModeField& ModeField::operator+=(const ModeField& o) {
  check_same(*this, o);
  a += o.a;
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] += o.b[i];
    c[i] += o.c[i];
  }
  return *this;
}

ModeField& ModeField::operator-=(const ModeField& o) {
  check_same(*this, o);
  a -= o.a;
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] -= o.b[i];
    c[i] -= o.c[i];
  }
  return *this;
}

ModeField& ModeField::operator*=(double k) {
  a *= k;
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] *= k;
    c[i] *= k;
  }
  return *this;
}

ModeField operator+(ModeField lhs, const ModeField& rhs) { return lhs += rhs; }
ModeField operator-(ModeField lhs, const ModeField& rhs) { return lhs -= rhs; }
ModeField operator*(double k, ModeField f) { return f *= k; }

double mean_product(const ModeField& f, const ModeField& g) {
  check_same(f, g);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f.b[i] * g.b[i] + f.c[i] * g.c[i];
  return f.a * g.a + 0.5 * acc;
}

double mean_gradient_sq(const ModeField& f) {
  const auto& idx = f.modes->indices();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += double(idx[i].norm2()) * (f.b[i] * f.b[i] + f.c[i] * f.c[i]);
  return 0.5 * acc;
}

SpectrumPair SpectrumPair::zeros(int n_max, double s) {
  auto modes = ModeSet::get(n_max);
  return SpectrumPair{s, ModeField::zeros(modes), ModeField::zeros(modes)};
}

SpectrumPair operator+(const SpectrumPair& lhs, const SpectrumPair& rhs) {
  return SpectrumPair{lhs.s, lhs.u0 + rhs.u0, lhs.u1 + rhs.u1};
}

SpectrumPair operator-(const SpectrumPair& lhs, const SpectrumPair& rhs) {
  return SpectrumPair{lhs.s, lhs.u0 - rhs.u0, lhs.u1 - rhs.u1};
}

SpectrumPair operator*(double k, const SpectrumPair& p) {
  return SpectrumPair{p.s, k * p.u0, k * p.u1};
}

bool same_index_set(const SpectrumPair& a, const SpectrumPair& b) {
  return a.u0.modes && b.u0.modes && a.n_max() == b.n_max();
}

void validate(const SpectrumPair& S) {
  if (!S.u0.modes || !S.u1.modes) throw InvalidInput("spectrum without index set");
  if (S.u0.modes->n_max() != S.u1.modes->n_max()) throw InvalidInput("components on different index sets");
  for (const ModeField* f : {&S.u0, &S.u1}) {
    if (f->b.size() != f->modes->size() || f->c.size() != f->modes->size())
      throw InvalidInput("coefficient arrays do not match index set");
    bool ok = std::isfinite(f->a);
    for (std::size_t i = 0; ok && i < f->size(); ++i) ok = std::isfinite(f->b[i]) && std::isfinite(f->c[i]);
    if (!ok) throw InvalidInput("non-finite coefficient");
  }
  if (!std::isfinite(S.s)) throw InvalidInput("non-finite Sobolev index");
}

namespace {

double weighted_sq(const ModeField& f, double sigma) {
  const auto br = f.modes->bracket();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = std::pow(br[i], 2.0 * sigma);
    acc += w * (f.b[i] * f.b[i] + f.c[i] * f.c[i]);
  }
  const double out = f.a * f.a + 0.5 * acc;
  if (!std::isfinite(out)) throw InvalidInput("non-finite coefficient");
  return out;
}

}  // namespace

double sobolev_norm(const ModeField& f, double sigma) { return std::sqrt(weighted_sq(f, sigma)); }

double sobolev_norm(const SpectrumPair& S, double sigma, Component component) {
  switch (component) {
    case Component::position:
      return std::sqrt(weighted_sq(S.u0, sigma));
    case Component::velocity:
      return std::sqrt(weighted_sq(S.u1, sigma - 1.0));
    case Component::pair:
      break;
  }
  return std::sqrt(weighted_sq(S.u0, sigma) + weighted_sq(S.u1, sigma - 1.0));
}

namespace {

void zero_range(ModeField& f, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) f.b[i] = f.c[i] = 0.0;
}

}  // namespace

SpectrumPair project_low(const SpectrumPair& S, double N) {
  if (N < 0) throw InvalidInput("projector cutoff must be nonnegative");
  SpectrumPair out = S;
  const std::size_t keep = S.modes()->count_within(N);
  zero_range(out.u0, keep, out.u0.size());
  zero_range(out.u1, keep, out.u1.size());
  return out;
}

SpectrumPair project_high(const SpectrumPair& S, double N) {
  if (N < 0) throw InvalidInput("projector cutoff must be nonnegative");
  SpectrumPair out = S;
  const std::size_t drop = S.modes()->count_within(N);
  out.u0.a = out.u1.a = 0.0;
  zero_range(out.u0, 0, drop);
  zero_range(out.u1, 0, drop);
  return out;
}

SpectrumPair project_zero(const SpectrumPair& S) {
  SpectrumPair out = S;
  zero_range(out.u0, 0, out.u0.size());
  zero_range(out.u1, 0, out.u1.size());
  return out;
}

SpectrumPair project_nonzero(const SpectrumPair& S) {
  SpectrumPair out = S;
  out.u0.a = out.u1.a = 0.0;
  return out;
}

SpectrumPair free_evolve(const SpectrumPair& S, double t) {
  SpectrumPair out = S;
  const auto freq = S.modes()->frequency();
  out.u0.a = S.u0.a + S.u1.a * t;
  out.u1.a = S.u1.a;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double w = freq[i];
    const double cs = std::cos(t * w);
    const double sn = std::sin(t * w);
    const double b0 = S.u0.b[i], b1 = S.u1.b[i];
    const double c0 = S.u0.c[i], c1 = S.u1.c[i];
    out.u0.b[i] = b0 * cs + b1 * sn / w;
    out.u1.b[i] = -b0 * w * sn + b1 * cs;
    out.u0.c[i] = c0 * cs + c1 * sn / w;
    out.u1.c[i] = -c0 * w * sn + c1 * cs;
  }
  return out;
}

}  // namespace pwave
