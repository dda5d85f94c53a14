#include "pwave/lattice.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "pwave/error.hpp"

namespace pwave {

namespace {

auto order_key(const LatticeIndex& n) { return std::make_tuple(n.norm2(), n.x, n.y, n.z); }

}  // namespace

ModeSet::ModeSet(int n_max) : n_max_(n_max) {
  const long r2 = long(n_max) * n_max;
  for (int i = -n_max; i <= n_max; ++i)
    for (int j = -n_max; j <= n_max; ++j)
      for (int k = -n_max; k <= n_max; ++k) {
        LatticeIndex n{i, j, k};
        if (n.canonical() && n.norm2() <= r2) index_.push_back(n);
      }
  std::sort(index_.begin(), index_.end(),
            [](const LatticeIndex& a, const LatticeIndex& b) { return order_key(a) < order_key(b); });
  freq_.reserve(index_.size());
  bracket_.reserve(index_.size());
  for (const auto& n : index_) {
    freq_.push_back(n.norm());
    bracket_.push_back(japanese(double(n.norm2())));
  }
}

std::shared_ptr<const ModeSet> ModeSet::get(int n_max) {
  if (n_max < 0) throw InvalidInput("n_max must be nonnegative");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const ModeSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n_max];
  if (!slot) slot = std::shared_ptr<const ModeSet>(new ModeSet(n_max));
  return slot;
}

std::size_t ModeSet::count_within(double N) const {
  if (N < 0) return 0;
  const double r2 = N * N;
  auto it = std::partition_point(index_.begin(), index_.end(),
                                 [r2](const LatticeIndex& n) { return double(n.norm2()) <= r2; });
  return std::size_t(it - index_.begin());
}

std::optional<std::size_t> ModeSet::find(const LatticeIndex& n) const {
  auto key = order_key(n);
  auto it = std::lower_bound(index_.begin(), index_.end(), key,
                             [](const LatticeIndex& a, const auto& k) { return order_key(a) < k; });
  if (it == index_.end() || !(*it == n)) return std::nullopt;
  return std::size_t(it - index_.begin());
}

}  // namespace pwave
