#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pwave {

struct LatticeIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  [[nodiscard]] constexpr long norm2() const noexcept {
    return long(x) * x + long(y) * y + long(z) * z;
  }
  [[nodiscard]] double norm() const noexcept { return std::sqrt(double(norm2())); }

  // First nonzero coordinate strictly positive.
  [[nodiscard]] constexpr bool canonical() const noexcept {
    if (x != 0) return x > 0;
    if (y != 0) return y > 0;
    return z > 0;
  }

  friend constexpr bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
};

// <n> = (1 + |n|^2)^{1/2}
inline double japanese(double norm2) { return std::sqrt(1.0 + norm2); }

// Canonical half-lattice {n : n canonical, |n| <= n_max}, ordered by (|n|^2, x, y, z)
// so every low-frequency ball is a prefix.
class ModeSet {
 public:
  static std::shared_ptr<const ModeSet> get(int n_max);

  [[nodiscard]] int n_max() const noexcept { return n_max_; }
  [[nodiscard]] std::size_t size() const noexcept { return index_.size(); }
  [[nodiscard]] const LatticeIndex& operator[](std::size_t i) const { return index_[i]; }
  [[nodiscard]] std::span<const LatticeIndex> indices() const noexcept { return index_; }
  // |n| per mode
  [[nodiscard]] std::span<const double> frequency() const noexcept { return freq_; }
  // <n> per mode
  [[nodiscard]] std::span<const double> bracket() const noexcept { return bracket_; }

  // Number of leading modes with |n| <= N.
  [[nodiscard]] std::size_t count_within(double N) const;
  [[nodiscard]] std::optional<std::size_t> find(const LatticeIndex& n) const;

 private:
  explicit ModeSet(int n_max);

  int n_max_;
  std::vector<LatticeIndex> index_;
  std::vector<double> freq_;
  std::vector<double> bracket_;
};

using ModeSetPtr = std::shared_ptr<const ModeSet>;

}  // namespace pwave
