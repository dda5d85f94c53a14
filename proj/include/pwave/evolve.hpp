#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwave/spectrum.hpp"

namespace pwave {

namespace detail {
class SpectralTransform;
}

struct EvolveOptions {
  int record_every = 1;
  bool cubic = true;  // false turns the stepper into the exact linear propagator
  bool keep_snapshots = false;
  bool record_identity = false;  // record -mean(w_t [(S+w)^3 - w^3])
  int n_grid = 0;                // 0: dealiased_grid(n_max)
  // Energy guard: relative drift of the total energy may not exceed guard_factor times the
  // largest drift seen during [0, calibration_time]. guard_factor <= 0 disables it.
  double guard_factor = 10.0;
  double calibration_time = 6.283185307179586;
  double guard_floor = 1e-10;
  double blowup_drift = 0.5;
};

// One row per recorded time. Columns t, E_w, H1_w, f, g, L4_acc, Hs_v go to CSV.
struct TrajectoryRecord {
  double s = 0.0;
  double dt = 0.0;
  int n_grid = 0;
  std::vector<double> t;
  std::vector<double> energy_w;
  std::vector<double> h1_w;
  std::vector<double> f;       // ||S(t)V_free||_inf
  std::vector<double> g;       // ||S(t)V_free||_6^3
  std::vector<double> l4_acc;  // (int_0^t mean(v^4))^{1/4}
  std::vector<double> hs_v;    // ||(v, v_t)||_{H^s}
  std::vector<double> energy_total;
  std::vector<double> identity_rhs;
  std::vector<SpectrumPair> snapshots;  // (v, v_t)

  [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

void write_csv(const TrajectoryRecord& r, std::ostream& os, const std::string& header_comment = {});

inline constexpr int kSplitAll = -1;

// Strang kick-drift-kick for w'' - Lap w + P[(F(t) + w)^3] = 0 with F(t) = S(t)F0 exact.
class SplitEvolver {
 public:
  SplitEvolver(const SpectrumPair& forcing, const SpectrumPair& w0, const EvolveOptions& opts = {});
  ~SplitEvolver();
  SplitEvolver(const SplitEvolver&) = delete;
  SplitEvolver& operator=(const SplitEvolver&) = delete;

  void step(double dt);
  void set_time(double t);  // only to snap accumulated roundoff onto the nominal grid

  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] SpectrumPair w() const;
  [[nodiscard]] SpectrumPair v() const;
  [[nodiscard]] int n_grid() const noexcept { return n_grid_; }

  // Appends a row for the current time; applies the energy guard.
  void record(TrajectoryRecord& out);

 private:
  void compute_force();
  void ensure_force();

  EvolveOptions opts_;
  SpectrumPair forcing_;
  bool forced_;
  ModeField w_, wt_;
  ModeField force_;
  bool force_valid_ = false;
  double v4_mean_ = 0.0;
  double l4_acc_ = 0.0;
  double t_ = 0.0;
  int n_grid_;
  detail::SpectralTransform* tr_;
  double cached_dt_ = 0.0;
  std::vector<double> cos_, sin_;
  bool have_e0_ = false;
  double e0_ = 0.0;
  double calib_drift_ = 0.0;
};

TrajectoryRecord evolve_full(const SpectrumPair& V, double T, double dt, const EvolveOptions& opts = {});
// n_split == kSplitAll: forcing is the whole free wave and w(0) = 0.
TrajectoryRecord evolve_decomposed(const SpectrumPair& V, int n_split, double T, double dt,
                                   const EvolveOptions& opts = {});

}  // namespace pwave
