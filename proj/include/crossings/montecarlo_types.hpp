#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace crossings {

/// Sample mean with standard error sd / sqrt(n).
struct MCEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const MCEstimate&, const MCEstimate&) = default;
};

/// Running sums in a fixed order; two passes are avoided by accumulating shifted values.
class MomentAccumulator {
 public:
  void add(double x) noexcept {
    if (n_ == 0) shift_ = x;
    const double d = x - shift_;
    sum_ += d;
    sum_sq_ += d * d;
    ++n_;
  }

  [[nodiscard]] std::size_t count() const noexcept { return n_; }

  [[nodiscard]] MCEstimate estimate(std::uint64_t seed) const {
    if (n_ < 2) throw std::invalid_argument("MCEstimate needs at least two replications");
    const auto n = static_cast<double>(n_);
    const double mean_d = sum_ / n;
    const double var = std::max(0.0, (sum_sq_ - n * mean_d * mean_d) / (n - 1.0));
    return {shift_ + mean_d, std::sqrt(var / n), n_, seed};
  }

 private:
  std::size_t n_ = 0;
  double shift_ = 0.0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

[[nodiscard]] inline MCEstimate estimate_mean(std::span<const double> samples, std::uint64_t seed) {
  MomentAccumulator acc;
  for (const double x : samples) acc.add(x);
  return acc.estimate(seed);
}

/// sqrt(a.se^2 + b.se^2).
[[nodiscard]] inline double combined_se(const MCEstimate& a, const MCEstimate& b) noexcept {
  return std::sqrt(a.se * a.se + b.se * b.se);
}

}  // namespace crossings
