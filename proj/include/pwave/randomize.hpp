#pragma once

#include <string>
#include <vector>

#include "pwave/rng.hpp"
#include "pwave/spectrum.hpp"

namespace pwave {

enum class LawKind { gaussian, bernoulli, uniform };

// Mean-zero, variance-one coefficient law with mgf bound E[e^{gX}] <= e^{c g^2}.
class CoefficientLaw {
 public:
  // Throws InvalidInput if the mgf bound fails for subgaussian_c on the default grid.
  explicit CoefficientLaw(LawKind kind, double subgaussian_c = 0.5);
  static CoefficientLaw from_name(const std::string& name);

  [[nodiscard]] LawKind kind() const noexcept { return kind_; }
  [[nodiscard]] double subgaussian_c() const noexcept { return c_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] bool symmetric() const noexcept { return true; }

  // log E[e^{gamma X}] in closed form.
  [[nodiscard]] double log_mgf(double gamma) const;
  double draw(Stream& stream) const;

 private:
  LawKind kind_;
  double c_;
};

struct MgfReport {
  std::vector<double> gamma;
  std::vector<double> ratio;  // E[e^{gX}] / e^{c g^2}
  double max_ratio = 0.0;
  bool holds = true;
};

MgfReport mgf_check(const CoefficientLaw& law, const std::vector<double>& gamma_grid);

// Each coefficient multiplied by an independent draw; draw order is a0, (b_n0, c_n0)..., a1, (b_n1, c_n1)...
SpectrumPair randomize(const SpectrumPair& base, const CoefficientLaw& law, SeedSpec seed);

// One sign per coefficient slot, in the same order as randomize's draws.
struct SignPattern {
  int n_max = 0;
  std::vector<signed char> signs;

  static SignPattern all_plus(int n_max);
  static std::size_t slot_count(int n_max);
};

SignPattern flip_sample(const SpectrumPair& templ, SeedSpec seed);
SpectrumPair odot(const SignPattern& h, const SpectrumPair& S);

}  // namespace pwave
