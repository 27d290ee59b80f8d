#pragma once

// Sequence, tail and weak tail equivalence of gap sequences, and the
// four-way consistency check between gauge-level and sequence-level
// characterizations of "same dimension behaviour".

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cantordim/classification.hpp"
#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/gauge.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

enum class Relation { sequence, tail, weak_tail };
enum class Verdict { holds_up_to_N, refuted };

inline std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::sequence: return "sequence";
    case Relation::tail: return "tail";
    case Relation::weak_tail: return "weak_tail";
  }
  return "unknown";
}

inline std::string_view verdict_name(Verdict v) { return v == Verdict::holds_up_to_N ? "holds" : "refuted"; }

struct Counterexample {
  Index n = 0;
  double log_ratio = 0.0;
  std::string direction;
};

struct Violation {
  Index multiplier = 0;  ///< j (or k)
  Index n = 0;           ///< first n <= N that violates it
};

struct EquivalenceVerdict {
  Relation relation = Relation::sequence;
  Verdict verdict = Verdict::holds_up_to_N;
  Index probe_bound = 0;
  // sequence / tail: c1 <= x_n / y_n <= c2 over n <= N
  double c1 = 0.0;
  double c2 = 0.0;
  double slope_upper = 0.0;  ///< trend slope of the running max of log ratio
  double slope_lower = 0.0;  ///< trend slope of the running min
  /// (n, log ratio) on the 1.5-ratio grid.
  std::vector<std::pair<Index, double>> samples;
  // weak tail
  Index jmax = 0;
  std::optional<Index> j;
  std::optional<Index> k;
  std::vector<Violation> j_violations;
  std::vector<Violation> k_violations;
  std::optional<Counterexample> counterexample;

  bool holds() const { return verdict == Verdict::holds_up_to_N; }
};

inline constexpr Index kDefaultEquivalenceN = 100000;
inline constexpr Index kDefaultJmax = 64;

namespace detail {

template <class LogRatio>
EquivalenceVerdict ratio_verdict(Relation rel, Index N, LogRatio&& log_ratio) {
  EquivalenceVerdict v;
  v.relation = rel;
  v.probe_bound = N;
  const auto grid = geometric_indices(1, N, kTailGridRatio);
  std::vector<double> lx, hi_env, lo_env, raw;
  double run_max = -std::numeric_limits<double>::infinity();
  double run_min = std::numeric_limits<double>::infinity();
  Index n_max = 1, n_min = 1;
  std::size_t gi = 0;
  for (Index n = 1; n <= N; ++n) {
    const double lr = log_ratio(n);
    if (lr > run_max) {
      run_max = lr;
      n_max = n;
    }
    if (lr < run_min) {
      run_min = lr;
      n_min = n;
    }
    if (gi < grid.size() && grid[gi] == n) {
      lx.push_back(std::log(static_cast<double>(n)));
      hi_env.push_back(run_max);
      lo_env.push_back(run_min);
      raw.push_back(lr);
      v.samples.emplace_back(n, lr);
      ++gi;
    }
  }
  v.c1 = std::exp(run_min);
  v.c2 = std::exp(run_max);
  v.slope_upper = least_squares(lx, hi_env).slope;
  v.slope_lower = least_squares(lx, lo_env).slope;
  const double tail = tail_slope(lx, raw);
  const bool up = v.slope_upper > kSlopeThreshold || tail > kSlopeThreshold;
  const bool down = v.slope_lower < -kSlopeThreshold || tail < -kSlopeThreshold;
  if (up || down) {
    v.verdict = Verdict::refuted;
    if (up) {
      v.counterexample = Counterexample{n_max, run_max, "ratio grows without bound"};
    } else {
      v.counterexample = Counterexample{n_min, run_min, "ratio decays to zero"};
    }
  }
  return v;
}

inline Index probe_limit(const GapSequence& a, const GapSequence& b, Index N) {
  if (N < 2) throw ParameterDomainError("equivalence probes need N >= 2");
  return std::min({N, a.max_index(), b.max_index()});
}

}  // namespace detail

/// c1 <= a_n / b_n <= c2 for n <= N, refuted when either running envelope
/// of log(a_n / b_n) trends away.
inline EquivalenceVerdict sequence_equivalent(const GapSequence& a, const GapSequence& b,
                                              Index N = kDefaultEquivalenceN) {
  return detail::ratio_verdict(Relation::sequence, detail::probe_limit(a, b, N),
                               [&](Index n) { return a.log_term(n) - b.log_term(n); });
}

inline EquivalenceVerdict tail_equivalent(const GapSequence& a, const GapSequence& b,
                                          Index N = kDefaultEquivalenceN) {
  return detail::ratio_verdict(Relation::tail, detail::probe_limit(a, b, N),
                               [&](Index n) { return a.log_tail(n) - b.log_tail(n); });
}

namespace detail {

// Smallest j <= jmax with r^x_n >= r^y_{jn} / j for all n <= N; every
// smaller j gets its first violating n recorded.
inline std::optional<Index> weak_direction(const GapSequence& x, const GapSequence& y, Index N, Index jmax,
                                           std::vector<Violation>& violations) {
  const Index ylimit = y.max_index() + 1;
  for (Index j = 1; j <= jmax; ++j) {
    const double lj = std::log(static_cast<double>(j));
    std::optional<Index> bad;
    for (Index n = 1; n <= N; ++n) {
      if (j * n > ylimit) break;
      const double lhs = x.log_tail(n);
      const double rhs = y.log_tail(j * n) - lj;
      if (lhs < rhs - 1e-12 * std::max(1.0, std::abs(rhs))) {
        bad = n;
        break;
      }
    }
    if (!bad) return j;
    violations.push_back({j, *bad});
  }
  return std::nullopt;
}

}  // namespace detail

inline EquivalenceVerdict weak_tail_equivalent(const GapSequence& a, const GapSequence& b,
                                               Index N = kDefaultEquivalenceN, Index jmax = kDefaultJmax) {
  if (jmax < 1) throw ParameterDomainError("weak_tail_equivalent needs Jmax >= 1");
  EquivalenceVerdict v;
  v.relation = Relation::weak_tail;
  v.probe_bound = detail::probe_limit(a, b, N);
  v.jmax = jmax;
  v.j = detail::weak_direction(a, b, v.probe_bound, jmax, v.j_violations);
  v.k = detail::weak_direction(b, a, v.probe_bound, jmax, v.k_violations);
  if (!v.j || !v.k) {
    v.verdict = Verdict::refuted;
    const auto& list = !v.j ? v.j_violations : v.k_violations;
    const auto& last = list.back();
    v.counterexample = Counterexample{last.n, 0.0,
                                      !v.j ? "r^a_n < r^b_{jn}/j for every j <= Jmax"
                                           : "r^b_n < r^a_{kn}/k for every k <= Jmax"};
  }
  return v;
}

// ---------------------------------------------------------------------------
// Four-condition crosscheck

enum class Condition { holds, refuted, indeterminate };

namespace detail {
// Smallest n >= N (doubling, at most 64 N) with log b_n <= floor.
inline Index covering_index(const GapSequence& seq, double floor, Index N) {
  Index n = std::min(N, seq.max_index());
  const Index cap = std::min(seq.max_index(), 64 * N);
  while (n < cap && seq.log_scale(n) > floor) n = std::min(cap, 2 * n);
  return n;
}
}  // namespace detail

inline std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::holds: return "holds";
    case Condition::refuted: return "refuted";
    case Condition::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct GaugeCells {
  std::string gauge;
  std::optional<PartitionCell> cell_a;
  std::optional<PartitionCell> cell_b;
};

struct CrosscheckReport {
  Condition associated_equivalent = Condition::indeterminate;  ///< h_a equivalent to h_b
  Condition regular_sets_agree = Condition::indeterminate;
  Condition cells_agree = Condition::indeterminate;
  Condition weak_tail = Condition::indeterminate;
  OrderReport associated_order;
  EquivalenceVerdict weak;
  std::vector<GaugeCells> cells;

  std::array<Condition, 4> conditions() const {
    return {associated_equivalent, regular_sets_agree, cells_agree, weak_tail};
  }
  bool consistent() const {
    const auto c = conditions();
    return c[0] != Condition::indeterminate && std::all_of(c.begin(), c.end(), [&](Condition x) { return x == c[0]; });
  }
  /// The common verdict when consistent, else indeterminate.
  Condition verdict() const { return consistent() ? associated_equivalent : Condition::indeterminate; }
};

inline std::vector<DimensionFunction> default_gauge_battery() {
  return {power_gauge(0.3),       power_gauge(1.0 / 3.0),  power_gauge(0.4),       power_gauge(0.5),
          power_gauge(0.6),       logrec_gauge(1.0, 1.0),  logrec_gauge(1.0, 2.0), logrec_gauge(1.0, 0.5)};
}

/// (1) h_a equivalent to h_b, (2) same h-regular gauges, (3) same cells,
/// (4) weak tail equivalence. The battery is extended by h_a and h_b.
inline CrosscheckReport theorem_main_crosscheck(const GapSequence& a, const GapSequence& b,
                                                std::vector<DimensionFunction> gauges,
                                                Index N = kDefaultEquivalenceN, Index jmax = kDefaultJmax) {
  CrosscheckReport rep;
  // Interpolants reach as far as classification probes; extrapolating a
  // log-type gauge by its end slope over a decade would bend it.
  // Each one is also extended until its knots cover the other sequence's
  // smallest probed scale.
  const Index nc = std::max(N, kDefaultClassifyN);
  const auto ha = associated_function(a, detail::covering_index(a, b.log_scale(std::min(nc, b.max_index())), nc));
  const auto hb = associated_function(b, detail::covering_index(b, a.log_scale(std::min(nc, a.max_index())), nc));
  rep.associated_order = compare(ha, hb);
  rep.associated_equivalent = rep.associated_order.equivalent() ? Condition::holds : Condition::refuted;

  gauges.push_back(ha);
  gauges.push_back(hb);
  const auto ta = battery(a, gauges, nc, -1);
  const auto tb = battery(b, gauges, nc, -1);
  bool any_unknown = false;
  bool cells_differ = false;
  bool regular_differ = false;
  for (std::size_t i = 0; i < gauges.size(); ++i) {
    GaugeCells gc{gauges[i].label(), ta.rows[i].cell, tb.rows[i].cell};
    if (!gc.cell_a || !gc.cell_b) {
      any_unknown = true;
    } else {
      if (!(*gc.cell_a == *gc.cell_b)) cells_differ = true;
      if (gc.cell_a->regular() != gc.cell_b->regular()) regular_differ = true;
    }
    rep.cells.push_back(std::move(gc));
  }
  // A definite disagreement refutes even when other rows are unknown.
  rep.cells_agree = cells_differ ? Condition::refuted : (any_unknown ? Condition::indeterminate : Condition::holds);
  rep.regular_sets_agree =
      regular_differ ? Condition::refuted : (any_unknown ? Condition::indeterminate : Condition::holds);

  rep.weak = weak_tail_equivalent(a, b, N, jmax);
  rep.weak_tail = rep.weak.holds() ? Condition::holds : Condition::refuted;
  return rep;
}

inline CrosscheckReport theorem_main_crosscheck(const GapSequence& a, const GapSequence& b,
                                                Index N = kDefaultEquivalenceN) {
  return theorem_main_crosscheck(a, b, default_gauge_battery(), N);
}

}  // namespace cantordim
