#include "pwave/kakutani.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "pwave/error.hpp"
#include "pwave/stats.hpp"

namespace pwave {

HellingerFactor hellinger_factor(double x1, double x2) {
  if (!(x1 >= 0.0) || !(x2 >= 0.0)) throw InvalidInput("standard deviations must be nonnegative");
  if (x1 == 0.0 && x2 == 0.0) return {};
  if (x1 == 0.0 || x2 == 0.0) return {0.0, -std::numeric_limits<double>::infinity(), true};
  // 2 x1 x2 / (x1^2 + x2^2) = 1 - (1 - r)^2 / (1 + r^2), r = min/max
  const double r = std::min(x1, x2) / std::max(x1, x2);
  const double d = (1.0 - r) * (1.0 - r) / (1.0 + r * r);
  const double lg = 0.5 * std::log1p(-d);
  return {std::exp(lg), lg, false};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equivalent:
      return "Equivalent";
    case Verdict::MutuallySingular:
      return "MutuallySingular";
    case Verdict::InconclusiveFiniteData:
      return "InconclusiveFiniteData";
  }
  return "?";
}

AffinityReport affinity(const VarianceSequences& seqs, const AffinityThresholds& th) {
  if (seqs.x1.size() != seqs.x2.size()) throw InvalidInput("variance sequences differ in length");
  const std::size_t n = seqs.x1.size();
  AffinityReport rep;
  rep.slots = n;
  CompensatedSum log_sum, ratio_sum, last_half;
  std::vector<double> blocks;  // -log factor summed over [2^k - 1, 2^{k+1} - 1)
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = seqs.x1[i], x2 = seqs.x2[i];
    const auto f = hellinger_factor(x1, x2);
    if (f.degenerate) {
      rep.zero_mismatch = true;
      continue;
    }
    if (x1 == 0.0) continue;  // simultaneous zero
    log_sum.add(f.log_value);
    const double q = x2 / x1 - 1.0;
    ratio_sum.add(q * q);
    if (i >= n / 2) last_half.add(-f.log_value);
    const std::size_t k = std::size_t(std::bit_width(i + 1) - 1);
    if (blocks.size() <= k) blocks.resize(k + 1, 0.0);
    blocks[k] += -f.log_value;
  }
  rep.log_affinity = std::min(0.0, log_sum.value());
  rep.partial_ratio_sum = ratio_sum.value();
  rep.last_half_contribution = last_half.value();

  // Geometric decay over the last complete dyadic blocks -> extrapolated remainder.
  rep.extrapolated_tail = std::numeric_limits<double>::infinity();
  std::size_t complete = 0;
  while (complete < blocks.size() && (std::size_t(2) << complete) - 1 <= n) ++complete;
  if (rep.last_half_contribution == 0.0) rep.extrapolated_tail = 0.0;
  if (complete >= std::size_t(th.min_blocks) + 1) {
    bool geometric = true;
    double worst = 0.0;
    for (std::size_t k = complete - std::size_t(th.min_blocks); k < complete; ++k) {
      if (!(blocks[k - 1] > 0.0)) {
        geometric = geometric && blocks[k] == 0.0;
        continue;
      }
      const double ratio = blocks[k] / blocks[k - 1];
      worst = std::max(worst, ratio);
      geometric = geometric && ratio <= th.block_ratio;
    }
    if (geometric) rep.extrapolated_tail = blocks[complete - 1] * worst / (1.0 - worst);
  }

  if (rep.zero_mismatch || rep.log_affinity < th.singular_log_affinity)
    rep.verdict = Verdict::MutuallySingular;
  else if (rep.last_half_contribution < th.cauchy_tail || rep.log_affinity - rep.extrapolated_tail >= th.singular_log_affinity)
    rep.verdict = Verdict::Equivalent;
  else
    rep.verdict = Verdict::InconclusiveFiniteData;
  return rep;
}

VarianceSequences variance_sequences(const SpectrumPair& base, const SpectrumPair& other) {
  validate(base);
  validate(other);
  if (!same_index_set(base, other)) throw InvalidInput("spectra live on different index sets");
  VarianceSequences v;
  for (int j = 0; j < 2; ++j) {
    const ModeField& f = base.component(j);
    const ModeField& g = other.component(j);
    v.x1.push_back(std::abs(f.a));
    v.x2.push_back(std::abs(g.a));
    for (std::size_t i = 0; i < f.size(); ++i) {
      v.x1.push_back(std::abs(f.b[i]));
      v.x2.push_back(std::abs(g.b[i]));
      v.x1.push_back(std::abs(f.c[i]));
      v.x2.push_back(std::abs(g.c[i]));
    }
  }
  return v;
}

AffinityReport classify(const SpectrumPair& base, const SpectrumPair& other, const AffinityThresholds& th) {
  return affinity(variance_sequences(base, other), th);
}

AffinityReport classify(const SpectrumPair& base, const SpectrumPair& other, const CoefficientLaw& law,
                        const AffinityThresholds& th) {
  if (law.kind() != LawKind::gaussian) throw InvalidInput("classification is defined for gaussian randomization only");
  return classify(base, other, th);
}

}  // namespace pwave
