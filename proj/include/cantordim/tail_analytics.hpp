#pragma once

// Scaled tail functionals n h(r_n / n), finite-data liminf/limsup estimates,
// and the dimension formulas -log n / log b_n.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "cantordim/cantor.hpp"
#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/gauge.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

inline constexpr double kTailGridRatio = 1.5;

struct ScaledPoint {
  Index n = 0;
  double log_scale = 0.0;  ///< log b_n
  double log_value = 0.0;  ///< log(n h(b_n))
  double value() const { return std::exp(log_value); }
};

struct ScaledValues {
  std::vector<ScaledPoint> points;
  /// Grid indices dropped because b_n lies above the gauge's domain bound.
  std::vector<Index> skipped;
};

/// n h(b_n) on a geometric grid up to N. Without `start` the grid begins at
/// the first n whose scale b_n lies in the domain of h; earlier points are
/// reported in `skipped`. An explicit start outside the domain is an error.
inline ScaledValues scaled_values(const GapSequence& seq, const DimensionFunction& h, Index N,
                                  std::optional<Index> start = std::nullopt, double ratio = kTailGridRatio) {
  const Index last = std::min(N, seq.max_index());
  if (last < 1) throw ParameterDomainError("scaled_values needs N >= 1");
  const Index first = start.value_or(1);
  if (first > last) throw ParameterDomainError("scaled_values start exceeds N");
  ScaledValues out;
  const double la = h.log_domain_bound();
  for (Index n : geometric_indices(first, last, ratio)) {
    const double lb = seq.log_scale(n);
    if (lb > la) {
      if (start) {
        throw DomainError("scale b_" + std::to_string(n) + " = " + detail::format_real(std::exp(lb)) +
                          " lies outside the domain of " + h.label());
      }
      out.skipped.push_back(n);
      continue;
    }
    out.points.push_back({n, lb, std::log(static_cast<double>(n)) + h.log_value(lb)});
  }
  return out;
}

enum class Trend { convergent, to_zero, to_infinity, oscillating };
enum class LimitClass { zero, positive_finite, infinite };

inline std::string_view trend_name(Trend t) {
  switch (t) {
    case Trend::convergent: return "convergent";
    case Trend::to_zero: return "to_zero";
    case Trend::to_infinity: return "to_infinity";
    case Trend::oscillating: return "oscillating";
  }
  return "unknown";
}

inline std::string_view class_name(std::optional<LimitClass> c) {
  if (!c) return "indeterminate";
  switch (*c) {
    case LimitClass::zero: return "zero";
    case LimitClass::positive_finite: return "positive_finite";
    case LimitClass::infinite: return "infinite";
  }
  return "unknown";
}

struct LimitEstimate {
  std::vector<Index> grid;
  std::vector<double> log_values;
  double window_inf = 0.0;
  double window_sup = 0.0;
  double slope_inf = 0.0;  ///< trend slope of the lower envelope, log value against log n
  double slope_sup = 0.0;
  Trend trend_inf = Trend::convergent;
  Trend trend_sup = Trend::convergent;
  /// nullopt means indeterminate.
  std::optional<LimitClass> liminf_class;
  std::optional<LimitClass> limsup_class;
  std::size_t window_start = 0;
};

namespace detail {

inline Trend trend_of(double slope) {
  if (slope < -kSlopeThreshold) return Trend::to_zero;
  if (slope > kSlopeThreshold) return Trend::to_infinity;
  return Trend::convergent;
}

inline LimitClass class_of(Trend t) {
  switch (t) {
    case Trend::to_zero: return LimitClass::zero;
    case Trend::to_infinity: return LimitClass::infinite;
    default: return LimitClass::positive_finite;
  }
}

// Running envelope over a half-width of log 2 in log n, so a period-2
// oscillation (dyadic blocks) is flattened before the trend fit.
inline std::vector<double> envelope(std::span<const double> lx, std::span<const double> ly, bool lower) {
  std::vector<double> out(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double e = ly[i];
    for (std::size_t j = 0; j < lx.size(); ++j) {
      if (std::abs(lx[j] - lx[i]) <= kLn2 + 1e-12) e = lower ? std::min(e, ly[j]) : std::max(e, ly[j]);
    }
    out[i] = e;
  }
  return out;
}

inline Trend envelope_trend(std::span<const double> lx, std::span<const double> env, double& slope) {
  slope = least_squares(lx, env).slope;
  const Trend whole = trend_of(slope);
  const std::size_t half = lx.size() / 2;
  if (half < 3) return whole;
  const Trend a = trend_of(least_squares(lx.first(half), env.first(half)).slope);
  const Trend b = trend_of(least_squares(lx.subspan(lx.size() - half), env.subspan(env.size() - half)).slope);
  if (a != b) return Trend::oscillating;
  return whole;
}

}  // namespace detail

inline constexpr std::size_t kMinLimitPoints = 24;

/// Window = last third of the grid. Classes follow the envelope trends;
/// oscillating trends and liminf class above limsup class are indeterminate.
inline LimitEstimate limit_estimates(std::span<const Index> grid, std::span<const double> log_values) {
  if (grid.size() != log_values.size()) throw ParameterDomainError("grid and values differ in length");
  if (grid.size() < kMinLimitPoints) {
    throw InsufficientDataError("limit_estimates needs at least " + std::to_string(kMinLimitPoints) +
                                " grid points, got " + std::to_string(grid.size()));
  }
  LimitEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.log_values.assign(log_values.begin(), log_values.end());
  const std::size_t w0 = grid.size() - grid.size() / 3;
  est.window_start = w0;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = w0; i < grid.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(grid[i])));
    ly.push_back(log_values[i]);
  }
  est.window_inf = std::exp(*std::min_element(ly.begin(), ly.end()));
  est.window_sup = std::exp(*std::max_element(ly.begin(), ly.end()));
  const auto lo = detail::envelope(lx, ly, true);
  const auto hi = detail::envelope(lx, ly, false);
  est.trend_inf = detail::envelope_trend(lx, lo, est.slope_inf);
  est.trend_sup = detail::envelope_trend(lx, hi, est.slope_sup);
  if (est.trend_inf != Trend::oscillating) est.liminf_class = detail::class_of(est.trend_inf);
  if (est.trend_sup != Trend::oscillating) est.limsup_class = detail::class_of(est.trend_sup);
  if (est.liminf_class && est.limsup_class && *est.liminf_class > *est.limsup_class) {
    est.liminf_class.reset();
    est.limsup_class.reset();
  }
  return est;
}

inline LimitEstimate limit_estimates(const ScaledValues& values) {
  std::vector<Index> grid;
  std::vector<double> lv;
  for (const auto& p : values.points) {
    grid.push_back(p.n);
    lv.push_back(p.log_value);
  }
  return limit_estimates(grid, lv);
}

// ---------------------------------------------------------------------------
// Dimension formulas

struct DimensionsEstimate {
  double dim_h = 0.0;
  double dim_p = 0.0;
  /// Raw inf and sup of -log n / log b_n over the terminal window.
  double window_inf = 0.0;
  double window_sup = 0.0;
  Index window_first = 0;
  Index window_last = 0;
  std::size_t points = 0;
  /// Window indices with b_n >= 1, left out of the ratio.
  std::size_t skipped = 0;
};

/// dim_H and dim_P from D(n) = -log n / log b_n over the window [N^{2/3}, N]
/// on a grid of ratio 2^{1/64}. D approaches its limits like 1/log n, so the
/// per-subwindow minima (maxima) are fitted against 1/log n and the fit is
/// read off at 1/log n = 0. Results are clamped to [0, 1].
inline DimensionsEstimate dimensions(const GapSequence& seq, Index N) {
  if (N < 1000) throw ParameterDomainError("dimensions needs N >= 1000");
  const Index last = std::min(N, seq.max_index());
  const auto first = static_cast<Index>(std::ceil(std::pow(static_cast<double>(last), 2.0 / 3.0)));
  DimensionsEstimate est;
  est.window_first = first;
  est.window_last = last;
  std::vector<double> ln;
  std::vector<double> d;
  for (Index n : geometric_indices(first, last, std::exp2(1.0 / 64.0))) {
    const double lb = seq.log_scale(n);
    if (!(lb < 0.0)) {
      ++est.skipped;
      continue;
    }
    const double l = std::log(static_cast<double>(n));
    ln.push_back(l);
    d.push_back(-l / lb);
  }
  est.points = d.size();
  if (d.size() < 8) throw InsufficientDataError("dimensions: fewer than 8 usable window points");
  est.window_inf = *std::min_element(d.begin(), d.end());
  est.window_sup = *std::max_element(d.begin(), d.end());

  constexpr int kSub = 4;
  const double l0 = ln.front();
  const double span = ln.back() - l0;
  std::vector<double> x_lo, y_lo, x_hi, y_hi;
  for (int s = 0; s < kSub; ++s) {
    const double a = l0 + span * s / kSub;
    const double b = l0 + span * (s + 1) / kSub;
    std::size_t imin = d.size();
    std::size_t imax = d.size();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (ln[i] < a - 1e-12 || ln[i] > b + 1e-12) continue;
      if (imin == d.size() || d[i] < d[imin]) imin = i;
      if (imax == d.size() || d[i] > d[imax]) imax = i;
    }
    if (imin == d.size()) continue;
    x_lo.push_back(1.0 / ln[imin]);
    y_lo.push_back(d[imin]);
    x_hi.push_back(1.0 / ln[imax]);
    y_hi.push_back(d[imax]);
  }
  double h = x_lo.size() >= 2 ? least_squares(x_lo, y_lo).intercept : est.window_inf;
  double p = x_hi.size() >= 2 ? least_squares(x_hi, y_hi).intercept : est.window_sup;
  h = std::clamp(h, 0.0, 1.0);
  p = std::clamp(p, 0.0, 1.0);
  est.dim_h = std::min(h, p);
  est.dim_p = std::max(h, p);
  return est;
}

/// Upper box dimension of the generation-k union from greedy delta-cover
/// counts, 40 scales between 2 max|I| and sqrt(2 max|I| r_1).
inline double box_dimension_oracle(const CantorApproximation& approx) {
  const int k = approx.depth();
  if (k < 10) throw InsufficientDataError("box_dimension_oracle needs depth >= 10");
  const auto lefts = approx.generation_lefts(k);
  const auto lens = approx.generation_lengths(k);
  const double lmax = *std::max_element(lens.begin(), lens.end());
  const double total = approx.node(1).length;
  const double d_lo = 2.0 * lmax;
  const double d_hi = std::sqrt(d_lo * total);
  if (!(d_hi > d_lo)) throw InsufficientDataError("box_dimension_oracle: scale range is empty");
  constexpr int kScales = 40;
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i < kScales; ++i) {
    const double delta = d_lo * std::pow(d_hi / d_lo, static_cast<double>(i) / (kScales - 1));
    std::size_t count = 0;
    double covered_to = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lefts.size(); ++j) {
      const double b = lefts[j] + lens[j];
      if (b <= covered_to && lefts[j] <= covered_to) continue;
      const double a = std::max(lefts[j], covered_to);
      const double pieces = std::max(1.0, std::ceil((b - a) / delta));
      count += static_cast<std::size_t>(pieces);
      covered_to = a + pieces * delta;
    }
    x.push_back(-std::log(delta));
    y.push_back(std::log(static_cast<double>(count)));
  }
  return least_squares(x, y).slope;
}

/// CSV rows (n, r_n, b_n, n h(b_n), -log n / log b_n) over the scaled grid.
inline void write_tail_csv(std::ostream& os, const GapSequence& seq, const DimensionFunction& h, Index N) {
  os << "n,r_n,b_n,scaled_value,dim_ratio\n";
  const auto vals = scaled_values(seq, h, N);
  char buf[256];
  for (const auto& p : vals.points) {
    const double ratio = p.log_scale < 0.0 ? -std::log(static_cast<double>(p.n)) / p.log_scale
                                           : std::numeric_limits<double>::quiet_NaN();
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(p.n),
                  seq.tail(p.n), std::exp(p.log_scale), p.value(), ratio);
    os << buf;
  }
}

}  // namespace cantordim
