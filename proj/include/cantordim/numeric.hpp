#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cantordim/errors.hpp"

namespace cantordim {

using Index = std::uint64_t;

/// Largest index any sequence model is asked to serve.
inline constexpr Index kMaxIndex = Index{1} << 62;

/// Shared bound on |slope| of log(ratio) for a trend to count as bounded.
inline constexpr double kSlopeThreshold = 0.05;

inline constexpr double kLn2 = 0.69314718055994530942;

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// log(exp(a) + exp(b)) without overflow or underflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(exp(a) - exp(b)) for a >= b.
inline double log_sub_exp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (b > a) return std::numeric_limits<double>::quiet_NaN();
  if (b == a) return -std::numeric_limits<double>::infinity();
  return a + std::log(-std::expm1(b - a));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n == 0) return {};
  if (n == 1) return {0.0, y[0]};
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return {0.0, my};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

/// Rounded geometric progression 1, ratio, ratio^2, ... capped at and including `last`.
inline std::vector<Index> geometric_indices(Index first, Index last, double ratio) {
  if (first < 1) first = 1;
  if (ratio <= 1.0) throw ParameterDomainError("geometric grid ratio must exceed 1");
  std::vector<Index> out;
  double x = static_cast<double>(first);
  while (x <= static_cast<double>(last)) {
    const auto n = static_cast<Index>(std::llround(x));
    if (n > last) break;
    if (out.empty() || n > out.back()) out.push_back(n);
    x *= ratio;
  }
  if (out.empty() || out.back() != last) out.push_back(last);
  return out;
}

/// `count` scales top, top/ratio, top/ratio^2, ...
inline std::vector<double> geometric_scales(double top, double ratio, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double x = top;
  for (int i = 0; i < count; ++i, x /= ratio) out.push_back(x);
  return out;
}

/// Slope of y against x over the last third of the points (at least 3 points).
inline double tail_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  std::size_t take = std::max<std::size_t>(3, n / 3);
  take = std::min(take, n);
  return least_squares(x.subspan(n - take, take), y.subspan(n - take, take)).slope;
}

}  // namespace cantordim
