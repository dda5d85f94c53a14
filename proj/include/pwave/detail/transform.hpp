#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "pwave/spectrum.hpp"

namespace pwave::detail {

// FFTW-backed synthesis/analysis between a ModeSet and one real grid.
// Owns its buffers and plans; not shareable across threads.
class SpectralTransform {
 public:
  SpectralTransform(ModeSetPtr modes, int n_grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  [[nodiscard]] int n_grid() const noexcept { return n_; }
  [[nodiscard]] const ModeSetPtr& modes() const noexcept { return modes_; }
  [[nodiscard]] std::size_t points() const noexcept { return std::size_t(n_) * n_ * n_; }
  [[nodiscard]] std::span<double> grid() noexcept { return {real_, points()}; }

  // grid() <- sum_k fields[k]
  void to_grid(const ModeField& f);
  void to_grid(const ModeField& f, const ModeField& g);
  // out <- band-limited projection of grid(); grid() is preserved.
  void from_grid(ModeField& out);

 private:
  struct Slot {
    std::size_t idx;
    std::size_t partner;  // used only for nz == 0
    signed char kind;     // +1: nz>0, -1: nz<0, 0: nz==0
  };

  void scatter(const ModeField& f, double scale, bool accumulate);

  ModeSetPtr modes_;
  int n_;
  std::size_t nc_;
  double* real_ = nullptr;
  std::complex<double>* spec_ = nullptr;
  void* plan_c2r_ = nullptr;
  void* plan_r2c_ = nullptr;
  std::vector<Slot> slots_;
};

// Thread-local cached transform for (n_max, n_grid).
SpectralTransform& transform_for(const ModeSetPtr& modes, int n_grid);

}  // namespace pwave::detail
