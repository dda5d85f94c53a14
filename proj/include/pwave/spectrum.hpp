#pragma once

#include <vector>

#include "pwave/lattice.hpp"

namespace pwave {

// Real trigonometric polynomial a + sum_n (b_n cos(n.x) + c_n sin(n.x)) over a ModeSet.
struct ModeField {
  ModeSetPtr modes;
  double a = 0.0;
  std::vector<double> b;
  std::vector<double> c;

  static ModeField zeros(ModeSetPtr modes);

  [[nodiscard]] std::size_t size() const noexcept { return b.size(); }
  ModeField& operator+=(const ModeField& o);
  ModeField& operator-=(const ModeField& o);
  ModeField& operator*=(double k);
};

ModeField operator+(ModeField lhs, const ModeField& rhs);
ModeField operator-(ModeField lhs, const ModeField& rhs);
ModeField operator*(double k, ModeField f);

// Normalized-measure inner product mean(f g).
double mean_product(const ModeField& f, const ModeField& g);
// mean(|grad f|^2)
double mean_gradient_sq(const ModeField& f);

// Data pair (u0, u1) in H^s x H^{s-1}.
struct SpectrumPair {
  double s = 0.0;
  ModeField u0;
  ModeField u1;

  static SpectrumPair zeros(int n_max, double s = 0.0);

  [[nodiscard]] int n_max() const { return u0.modes->n_max(); }
  [[nodiscard]] const ModeSetPtr& modes() const { return u0.modes; }
  [[nodiscard]] const ModeField& component(int j) const { return j == 0 ? u0 : u1; }
  [[nodiscard]] ModeField& component(int j) { return j == 0 ? u0 : u1; }
};

SpectrumPair operator+(const SpectrumPair& lhs, const SpectrumPair& rhs);
SpectrumPair operator-(const SpectrumPair& lhs, const SpectrumPair& rhs);
SpectrumPair operator*(double k, const SpectrumPair& p);

// Throws InvalidInput on non-finite coefficients or mismatched index sets.
void validate(const SpectrumPair& S);
bool same_index_set(const SpectrumPair& a, const SpectrumPair& b);

enum class Component { position, velocity, pair };

// H^sigma norm of one field.
double sobolev_norm(const ModeField& f, double sigma);
// Position slot weighted <n>^sigma, velocity slot <n>^{sigma-1}.
double sobolev_norm(const SpectrumPair& S, double sigma, Component component);

SpectrumPair project_low(const SpectrumPair& S, double N);
SpectrumPair project_high(const SpectrumPair& S, double N);
SpectrumPair project_zero(const SpectrumPair& S);
// 1 - Pi_0
SpectrumPair project_nonzero(const SpectrumPair& S);

// (S(t)V, d/dt S(t)V)
SpectrumPair free_evolve(const SpectrumPair& S, double t);

}  // namespace pwave
