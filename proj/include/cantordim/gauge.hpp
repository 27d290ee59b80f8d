#pragma once

// Dimension functions (gauges): continuous, increasing, doubling, h(0+) = 0.
// Evaluation and inversion run in log coordinates; the *_log entry points are
// the primary interface and evaluate()/inverse() wrap them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

enum class GaugeKind { power, log_reciprocal, power_log, associated };

inline std::string_view gauge_kind_name(GaugeKind k) {
  switch (k) {
    case GaugeKind::power: return "power";
    case GaugeKind::log_reciprocal: return "logrec";
    case GaugeKind::power_log: return "powerlog";
    case GaugeKind::associated: return "associated";
  }
  return "unknown";
}

class DimensionFunction {
 public:
  GaugeKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// h is defined on (0, A].
  double domain_bound() const { return std::exp(log_bound_); }
  double log_domain_bound() const { return log_bound_; }
  /// log h(A).
  double log_upper_value() const { return log_value_unchecked(log_bound_); }

  /// log h(x) given log x <= log A.
  double log_value(double log_x) const {
    if (std::isnan(log_x) || log_x == -std::numeric_limits<double>::infinity() ||
        log_x > log_bound_ + 1e-12 * std::max(1.0, std::abs(log_bound_))) {
      throw DomainError("gauge " + label_ + " evaluated at log x = " + detail::format_real(log_x) +
                        " outside (0, A], log A = " + detail::format_real(log_bound_));
    }
    return log_value_unchecked(log_x);
  }

  /// log h^{-1}(y) given log y <= log h(A).
  double log_inverse(double log_y) const {
    const double top = log_upper_value();
    if (std::isnan(log_y) || log_y == -std::numeric_limits<double>::infinity() ||
        log_y > top + 1e-12 * std::max(1.0, std::abs(top))) {
      throw DomainError("gauge " + label_ + " inverted at log y = " + detail::format_real(log_y) +
                        " outside (0, h(A)]");
    }
    return log_inverse_unchecked(log_y);
  }

  double evaluate(double x) const {
    if (!(x > 0.0)) throw DomainError("gauge argument must be positive");
    return std::exp(log_value(std::log(x)));
  }
  double inverse(double y) const {
    if (!(y > 0.0)) throw DomainError("gauge inverse argument must be positive");
    return std::exp(log_inverse(std::log(y)));
  }
  double operator()(double x) const { return evaluate(x); }

  /// Knots (log x, log y) of an associated interpolant; empty otherwise.
  std::span<const double> knot_log_x() const {
    return knots_ ? std::span<const double>(knots_->lx) : std::span<const double>{};
  }
  std::span<const double> knot_log_y() const {
    return knots_ ? std::span<const double>(knots_->ly) : std::span<const double>{};
  }

  // Factories ---------------------------------------------------------------

  /// h(x) = c x^s on (0, A]; A defaults to +infinity.
  static DimensionFunction power(double s, double c = 1.0,
                                 double bound = std::numeric_limits<double>::infinity()) {
    if (!(s > 0.0 && s <= 1.0)) throw ParameterDomainError("power gauge needs 0 < s <= 1");
    if (!(c > 0.0)) throw ParameterDomainError("power gauge needs c > 0");
    if (!(bound > 0.0)) throw ParameterDomainError("domain bound must be positive");
    DimensionFunction h(GaugeKind::power, std::log(bound));
    h.s_ = s;
    h.log_c_ = std::log(c);
    h.label_ = c == 1.0 ? "power(" + detail::format_real(s) + ")"
                        : "power(" + detail::format_real(s) + "," + detail::format_real(c) + ")";
    return h;
  }

  /// h(x) = c |log x|^{-p} on (0, A], 0 < A < 1.
  static DimensionFunction log_reciprocal(double c, double p, double bound = 0.5) {
    if (!(c > 0.0)) throw ParameterDomainError("logrec gauge needs c > 0");
    if (!(p > 0.0)) throw ParameterDomainError("logrec gauge needs p > 0");
    if (!(bound > 0.0 && bound < 1.0)) throw ParameterDomainError("logrec gauge needs 0 < A < 1");
    DimensionFunction h(GaugeKind::log_reciprocal, std::log(bound));
    h.log_c_ = std::log(c);
    h.p_ = p;
    h.label_ = "logrec(" + detail::format_real(c) + "," + detail::format_real(p) + ")";
    return h;
  }

  /// h(x) = x^s |log x|^t. The default bound keeps h strictly increasing:
  /// A = min(1/2, e^{-2t/s}) for t > 0.
  static DimensionFunction power_log(double s, double t, std::optional<double> bound = std::nullopt) {
    if (!(s > 0.0 && s <= 1.0)) throw ParameterDomainError("powerlog gauge needs 0 < s <= 1");
    if (!std::isfinite(t)) throw ParameterDomainError("powerlog gauge needs finite t");
    const double increasing_limit = t > 0.0 ? std::exp(-t / s) : 1.0;
    const double a = bound.value_or(std::min(0.5, t > 0.0 ? std::exp(-2.0 * t / s) : 0.5));
    if (!(a > 0.0 && a < increasing_limit)) {
      throw ParameterDomainError("powerlog gauge is not increasing on (0, A]; need A < e^{-t/s}");
    }
    DimensionFunction h(GaugeKind::power_log, std::log(a));
    h.s_ = s;
    h.t_ = t;
    h.label_ = "powerlog(" + detail::format_real(s) + "," + detail::format_real(t) + ")";
    return h;
  }

  /// Piecewise log-log linear interpolant through (log x_i, log y_i), both
  /// strictly increasing, extended by the end slopes. A = x_last.
  static DimensionFunction interpolant(std::vector<double> log_x, std::vector<double> log_y, std::string label) {
    if (log_x.size() != log_y.size() || log_x.size() < 2) {
      throw ParameterDomainError("interpolant needs at least two knots");
    }
    for (std::size_t i = 1; i < log_x.size(); ++i) {
      if (!(log_x[i] > log_x[i - 1]) || !(log_y[i] > log_y[i - 1])) {
        throw ValidationError("interpolant knots are not strictly increasing at knot " + std::to_string(i));
      }
    }
    DimensionFunction h(GaugeKind::associated, log_x.back());
    auto k = std::make_shared<Knots>();
    k->lx = std::move(log_x);
    k->ly = std::move(log_y);
    h.knots_ = std::move(k);
    h.label_ = std::move(label);
    return h;
  }

 private:
  struct Knots {
    std::vector<double> lx;
    std::vector<double> ly;
  };

  DimensionFunction(GaugeKind kind, double log_bound) : kind_(kind), log_bound_(log_bound) {}

  double log_value_unchecked(double lx) const {
    switch (kind_) {
      case GaugeKind::power:
        return log_c_ + s_ * lx;
      case GaugeKind::log_reciprocal:
        return log_c_ - p_ * std::log(-lx);
      case GaugeKind::power_log:
        return s_ * lx + t_ * std::log(-lx);
      case GaugeKind::associated:
        return piecewise(knots_->lx, knots_->ly, lx);
    }
    return 0.0;
  }

  double log_inverse_unchecked(double ly) const {
    switch (kind_) {
      case GaugeKind::power:
        return (ly - log_c_) / s_;
      case GaugeKind::log_reciprocal:
        return -std::exp((log_c_ - ly) / p_);
      case GaugeKind::power_log:
        return invert_power_log(ly);
      case GaugeKind::associated:
        return piecewise(knots_->ly, knots_->lx, ly);
    }
    return 0.0;
  }

  // Linear interpolation of ys over xs (xs ascending), end slopes beyond.
  static double piecewise(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    std::size_t i;
    if (x <= xs.front()) {
      i = 0;
    } else if (x >= xs.back()) {
      i = xs.size() - 2;
    } else {
      i = static_cast<std::size_t>(std::distance(xs.begin(), std::upper_bound(xs.begin(), xs.end(), x))) - 1;
    }
    const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + slope * (x - xs[i]);
  }

  // Bisection on L = log x over (-inf, log A]; log h is increasing in L there.
  double invert_power_log(double ly) const {
    double hi = log_bound_;
    double lo = hi - 1.0;
    while (log_value_unchecked(lo) > ly) {
      lo = hi - 2.0 * (hi - lo);
      if (lo < -1e300) return lo;
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (log_value_unchecked(mid) < ly) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  GaugeKind kind_;
  double log_bound_;
  double s_ = 1.0;
  double t_ = 0.0;
  double p_ = 1.0;
  double log_c_ = 0.0;
  std::shared_ptr<const Knots> knots_;
  std::string label_;
};

inline DimensionFunction power_gauge(double s, double c = 1.0) { return DimensionFunction::power(s, c); }
inline DimensionFunction logrec_gauge(double c, double p) { return DimensionFunction::log_reciprocal(c, p); }
inline DimensionFunction powerlog_gauge(double s, double t) { return DimensionFunction::power_log(s, t); }

/// Knot indices for associated interpolants: every n <= 32, then a geometric
/// grid with the given ratio up to N.
inline std::vector<Index> associated_knot_indices(Index N, double ratio = 1.25) {
  std::vector<Index> out;
  for (Index n = 1; n <= std::min<Index>(N, 32); ++n) out.push_back(n);
  if (N > 32) {
    for (Index n : geometric_indices(33, N, ratio)) out.push_back(n);
  }
  return out;
}

/// h_a through the knots (b_n, 1/n), b_n = r_n / n, so h_a(b_n) = 1/n exactly.
inline DimensionFunction associated_function(const GapSequence& seq, Index N, double ratio = 1.25) {
  if (N < 16) throw ParameterDomainError("associated_function needs N >= 16");
  const auto idx = associated_knot_indices(std::min(N, seq.max_index()), ratio);
  std::vector<double> lx;
  std::vector<double> ly;
  lx.reserve(idx.size());
  ly.reserve(idx.size());
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    lx.push_back(seq.log_scale(*it));
    ly.push_back(-std::log(static_cast<double>(*it)));
  }
  return DimensionFunction::interpolant(std::move(lx), std::move(ly),
                                        "associated(" + seq.label() + "," + std::to_string(N) + ")");
}

// ---------------------------------------------------------------------------
// Ordering and doubling

enum class OrderTrend { bounded, diverging };
enum class OrderVerdict { holds_at_probed_scales, fails };

/// Default probe grid: 48 scales top, top/2, ... with top = min(A_f, A_h, 1).
inline std::vector<double> comparison_grid(const DimensionFunction& f, const DimensionFunction& h, int points = 48) {
  const double top = std::min({f.domain_bound(), h.domain_bound(), 1.0});
  return geometric_scales(top, 2.0, points);
}

struct DirectionReport {
  double constant = 0.0;  ///< sup over the grid of the ratio
  /// Slope of the running max of log(ratio) against log(1/x) over the whole
  /// grid; this decides the trend.
  double slope = 0.0;
  /// Plain slope of log(ratio) over the smallest third of the grid (diagnostic).
  double tail_slope = 0.0;
  OrderTrend trend = OrderTrend::bounded;
  OrderVerdict verdict = OrderVerdict::holds_at_probed_scales;
  bool holds() const { return verdict == OrderVerdict::holds_at_probed_scales; }
};

struct OrderReport {
  DirectionReport f_le_h;  ///< f <= c h
  DirectionReport h_le_f;  ///< h <= c f
  double scale_floor = 0.0;
  bool equivalent() const { return f_le_h.holds() && h_le_f.holds(); }
};

namespace detail {
// A bounded ratio that steps between levels (block sequences) can show a
// steep local slope; its running max cannot keep climbing.
inline DirectionReport direction_from(std::span<const double> log_one_over_x, std::span<const double> log_ratio) {
  DirectionReport d;
  std::vector<double> env(log_ratio.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_ratio.size(); ++i) env[i] = m = std::max(m, log_ratio[i]);
  d.constant = std::exp(m);
  d.slope = least_squares(log_one_over_x, env).slope;
  d.tail_slope = cantordim::tail_slope(log_one_over_x, log_ratio);
  d.trend = d.slope > kSlopeThreshold ? OrderTrend::diverging : OrderTrend::bounded;
  d.verdict = d.trend == OrderTrend::diverging ? OrderVerdict::fails : OrderVerdict::holds_at_probed_scales;
  return d;
}
}  // namespace detail

/// f <= c h and h <= c f at probed scales. The grid must be descending.
inline OrderReport compare(const DimensionFunction& f, const DimensionFunction& h, std::span<const double> grid) {
  if (grid.size() < 3) throw InsufficientDataError("compare needs at least 3 scales");
  std::vector<double> u;
  std::vector<double> fh;
  std::vector<double> hf;
  for (double x : grid) {
    const double lx = std::log(x);
    const double d = f.log_value(lx) - h.log_value(lx);
    u.push_back(-lx);
    fh.push_back(d);
    hf.push_back(-d);
  }
  OrderReport rep;
  rep.f_le_h = detail::direction_from(u, fh);
  rep.h_le_f = detail::direction_from(u, hf);
  rep.scale_floor = grid.back();
  return rep;
}

inline OrderReport compare(const DimensionFunction& f, const DimensionFunction& h) {
  const auto grid = comparison_grid(f, h);
  return compare(f, h, grid);
}

enum class DoublingTarget { function, inverse };

struct DoublingReport {
  DoublingTarget target = DoublingTarget::function;
  double tau_estimate = 0.0;  ///< min over the grid of g(z) / g(2z)
  double log_tau = 0.0;
  double slope = 0.0;
  OrderTrend trend = OrderTrend::bounded;
  OrderVerdict verdict = OrderVerdict::holds_at_probed_scales;
  bool holds() const { return verdict == OrderVerdict::holds_at_probed_scales; }
};

/// Descending grid z_i with 2 z_i still in the domain of g: x-scales for the
/// function, y-values for the inverse.
inline std::vector<double> doubling_grid(const DimensionFunction& h, DoublingTarget target, int points = 48) {
  const double top_x = std::min(h.domain_bound(), 1.0);
  const double top = target == DoublingTarget::function ? top_x / 2.0 : std::exp(h.log_value(std::log(top_x))) / 2.0;
  return geometric_scales(top, 2.0, points);
}

inline DoublingReport doubling_report(const DimensionFunction& h, DoublingTarget target, std::span<const double> grid) {
  if (grid.size() < 3) throw InsufficientDataError("doubling_report needs at least 3 scales");
  auto log_g = [&](double lz) { return target == DoublingTarget::function ? h.log_value(lz) : h.log_inverse(lz); };
  std::vector<double> u;
  std::vector<double> log_growth;  // log g(2z) - log g(z) >= 0
  double min_log_tau = std::numeric_limits<double>::infinity();
  for (double z : grid) {
    const double lz = std::log(z);
    const double lt = log_g(lz) - log_g(lz + kLn2);
    min_log_tau = std::min(min_log_tau, lt);
    u.push_back(-lz);
    // log of the growth ratio, itself taken in log so that e^{1/(2y)}-type
    // growth shows up as a diverging slope.
    log_growth.push_back(std::log(std::max(-lt, 1e-300)));
  }
  DoublingReport rep;
  rep.target = target;
  rep.log_tau = min_log_tau;
  rep.tau_estimate = std::exp(min_log_tau);
  rep.slope = tail_slope(u, log_growth);
  rep.trend = rep.slope > kSlopeThreshold ? OrderTrend::diverging : OrderTrend::bounded;
  rep.verdict = rep.trend == OrderTrend::diverging ? OrderVerdict::fails : OrderVerdict::holds_at_probed_scales;
  return rep;
}

inline DoublingReport doubling_report(const DimensionFunction& h, DoublingTarget target) {
  const auto grid = doubling_grid(h, target);
  return doubling_report(h, target, grid);
}

/// Sampled gauge axioms: strictly increasing on a 64-point geometric grid,
/// decreasing to 0, inverse round trip within 1e-9 relative.
struct GaugeSanity {
  bool increasing = true;
  bool tends_to_zero = true;
  double max_roundtrip_err = 0.0;
  bool ok() const { return increasing && tends_to_zero && max_roundtrip_err <= 1e-9; }
};

inline GaugeSanity check_gauge(const DimensionFunction& h) {
  GaugeSanity g;
  const double top = std::min(h.domain_bound(), 1.0);
  const auto grid = geometric_scales(top, 2.0, 64);
  double prev = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double lx = std::log(x);
    const double lv = h.log_value(lx);
    if (!(lv < prev)) g.increasing = false;
    prev = lv;
    const double back = h.log_inverse(lv);
    g.max_roundtrip_err = std::max(g.max_roundtrip_err, std::abs(std::expm1(back - lx)));
  }
  // h(x) -> 0: the last third of the grid must keep dropping in log.
  const double lv_mid = h.log_value(std::log(grid[grid.size() * 2 / 3]));
  g.tends_to_zero = prev < lv_mid;
  return g;
}

}  // namespace cantordim
