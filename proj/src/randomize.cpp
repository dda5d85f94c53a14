#include "pwave/randomize.hpp"

#include <cmath>

#include "pwave/error.hpp"

namespace pwave {

namespace {

const double kSqrt3 = std::sqrt(3.0);

std::vector<double> default_gamma_grid() {
  std::vector<double> g;
  for (int i = -400; i <= 400; ++i) g.push_back(0.05 * i);
  return g;
}

}  // namespace

CoefficientLaw::CoefficientLaw(LawKind kind, double subgaussian_c) : kind_(kind), c_(subgaussian_c) {
  if (!(c_ > 0.0)) throw InvalidInput("sub-gaussian constant must be positive");
  const auto report = mgf_check(*this, default_gamma_grid());
  if (!report.holds)
    throw InvalidInput("law " + name() + " violates the mgf bound with c = " + std::to_string(c_));
}

CoefficientLaw CoefficientLaw::from_name(const std::string& name) {
  if (name == "gaussian") return CoefficientLaw(LawKind::gaussian);
  if (name == "bernoulli") return CoefficientLaw(LawKind::bernoulli);
  if (name == "uniform") return CoefficientLaw(LawKind::uniform);
  throw InvalidInput("unknown law '" + name + "' (expected gaussian, bernoulli or uniform)");
}

std::string CoefficientLaw::name() const {
  switch (kind_) {
    case LawKind::gaussian:
      return "gaussian";
    case LawKind::bernoulli:
      return "bernoulli";
    case LawKind::uniform:
      return "uniform";
  }
  return "?";
}

double CoefficientLaw::log_mgf(double g) const {
  const double x = std::abs(g);
  switch (kind_) {
    case LawKind::gaussian:
      return 0.5 * g * g;
    case LawKind::bernoulli:
      // log cosh x, overflow-free
      return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
    case LawKind::uniform: {
      // log(sinh(a x)/(a x)), a = sqrt 3
      const double y = kSqrt3 * x;
      if (y < 1e-4) return y * y / 6.0;
      return y + std::log1p(-std::exp(-2.0 * y)) - std::log(2.0 * y);
    }
  }
  return 0.0;
}

double CoefficientLaw::draw(Stream& stream) const {
  switch (kind_) {
    case LawKind::gaussian:
      return stream.normal();
    case LawKind::bernoulli:
      return (stream.next_u64() >> 63) ? 1.0 : -1.0;
    case LawKind::uniform:
      return kSqrt3 * (2.0 * stream.uniform() - 1.0);
  }
  return 0.0;
}

MgfReport mgf_check(const CoefficientLaw& law, const std::vector<double>& gamma_grid) {
  MgfReport r;
  r.gamma = gamma_grid;
  for (double g : gamma_grid) {
    const double log_ratio = law.log_mgf(g) - law.subgaussian_c() * g * g;
    const double ratio = std::exp(log_ratio);
    r.ratio.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (log_ratio > 1e-12) r.holds = false;
  }
  return r;
}

SpectrumPair randomize(const SpectrumPair& base, const CoefficientLaw& law, SeedSpec seed) {
  validate(base);
  SpectrumPair out = base;
  Stream stream(seed);
  for (int j = 0; j < 2; ++j) {
    ModeField& f = out.component(j);
    f.a *= law.draw(stream);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.b[i] *= law.draw(stream);
      f.c[i] *= law.draw(stream);
    }
  }
  return out;
}

std::size_t SignPattern::slot_count(int n_max) { return 2 * (1 + 2 * ModeSet::get(n_max)->size()); }

SignPattern SignPattern::all_plus(int n_max) { return {n_max, std::vector<signed char>(slot_count(n_max), 1)}; }

SignPattern flip_sample(const SpectrumPair& templ, SeedSpec seed) {
  validate(templ);
  SignPattern h{templ.n_max(), {}};
  const std::size_t n = SignPattern::slot_count(templ.n_max());
  h.signs.reserve(n);
  Stream stream(seed);
  for (std::size_t i = 0; i < n; ++i) h.signs.push_back((stream.next_u64() >> 63) ? 1 : -1);
  return h;
}

SpectrumPair odot(const SignPattern& h, const SpectrumPair& S) {
  validate(S);
  if (h.n_max != S.n_max() || h.signs.size() != SignPattern::slot_count(S.n_max()))
    throw InvalidInput("sign pattern slots do not match the spectrum's index set");
  SpectrumPair out = S;
  std::size_t k = 0;
  for (int j = 0; j < 2; ++j) {
    ModeField& f = out.component(j);
    f.a *= h.signs[k++];
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.b[i] *= h.signs[k++];
      f.c[i] *= h.signs[k++];
    }
  }
  return out;
}

}  // namespace pwave
