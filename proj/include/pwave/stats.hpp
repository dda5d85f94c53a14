#pragma once

#include <cstddef>
#include <vector>

namespace pwave {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = kZ95);

// Linear-interpolated quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> data, double q);

// Sum with Neumaier compensation, in input order.
class CompensatedSum {
 public:
  void add(double x);
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pwave
