#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pwave/randomize.hpp"
#include "pwave/spectrum.hpp"

namespace pwave {

struct HellingerFactor {
  double value = 1.0;
  double log_value = 0.0;
  bool degenerate = false;  // exactly one standard deviation vanishes
};

// (2 x1 x2 / (x1^2 + x2^2))^{1/2}
HellingerFactor hellinger_factor(double x1, double x2);

struct VarianceSequences {
  std::vector<double> x1;
  std::vector<double> x2;
};

enum class Verdict { Equivalent, MutuallySingular, InconclusiveFiniteData };
std::string to_string(Verdict v);

struct AffinityThresholds {
  double singular_log_affinity = std::log(1e-6);
  double cauchy_tail = 1e-10;  // absolute bound on the last-half contribution
  // Geometric decay of dyadic blocks of -log factors: the last min_blocks block ratios must not
  // exceed block_ratio, and the extrapolated limit must stay above the singular threshold.
  double block_ratio = 0.75;
  int min_blocks = 3;
};

struct AffinityReport {
  double log_affinity = 0.0;
  double partial_ratio_sum = 0.0;
  Verdict verdict = Verdict::Equivalent;
  bool zero_mismatch = false;
  std::size_t slots = 0;
  double last_half_contribution = 0.0;
  double extrapolated_tail = 0.0;  // infinite if no geometric decay was detected
};

AffinityReport affinity(const VarianceSequences& seqs, const AffinityThresholds& th = {});

// Slots in randomize's draw order: a0, (b, c) per mode, a1, (b, c) per mode.
VarianceSequences variance_sequences(const SpectrumPair& base, const SpectrumPair& other);
AffinityReport classify(const SpectrumPair& base, const SpectrumPair& other, const AffinityThresholds& th = {});
// Refuses non-gaussian laws.
AffinityReport classify(const SpectrumPair& base, const SpectrumPair& other, const CoefficientLaw& law,
                        const AffinityThresholds& th = {});

}  // namespace pwave
