#pragma once

// Dimension partition: (Hausdorff class, packing class) of C_a for a gauge h,
// decided from lim inf / lim sup of n h(r_n / n) and checked against finite
// cover and packing sums on the interval tree.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cantordim/cantor.hpp"
#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/gauge.hpp"
#include "cantordim/numeric.hpp"
#include "cantordim/tail_analytics.hpp"

namespace cantordim {

/// Measure class: 0, positive finite ("1"), or infinite.
enum class MeasureClass { zero = 0, one = 1, infinite = 2 };

inline std::string_view measure_class_name(MeasureClass c) {
  switch (c) {
    case MeasureClass::zero: return "0";
    case MeasureClass::one: return "1";
    case MeasureClass::infinite: return "inf";
  }
  return "?";
}

inline MeasureClass to_measure_class(LimitClass c) {
  switch (c) {
    case LimitClass::zero: return MeasureClass::zero;
    case LimitClass::positive_finite: return MeasureClass::one;
    case LimitClass::infinite: return MeasureClass::infinite;
  }
  return MeasureClass::one;
}

struct PartitionCell {
  MeasureClass alpha = MeasureClass::one;  ///< Hausdorff class
  MeasureClass beta = MeasureClass::one;   ///< packing class
  bool operator==(const PartitionCell&) const = default;
  bool regular() const { return alpha == MeasureClass::one && beta == MeasureClass::one; }
  std::string name() const {
    return "(" + std::string(measure_class_name(alpha)) + "," + std::string(measure_class_name(beta)) + ")";
  }
};

namespace detail {
inline void check_in_domain(const DimensionFunction& h, double len) {
  if (std::log(len) > h.log_domain_bound() + 1e-12) {
    throw DomainError("interval length " + format_real(len) + " lies outside the domain of " + h.label());
  }
}
}  // namespace detail

/// Sum of h(|I|) over generation-g intervals (g defaults to the depth).
/// Zero-length intervals contribute h(0+) = 0.
inline double cover_sum(const CantorApproximation& approx, const DimensionFunction& h, int generation = -1) {
  const int g = generation < 0 ? approx.depth() : generation;
  CompensatedSum s;
  for (double len : approx.generation_lengths(g)) {
    if (!(len > 0.0)) continue;
    detail::check_in_domain(h, len);
    s += std::exp(h.log_value(std::log(len)));
  }
  return s.value();
}

/// Sum of h(min(|I|, delta)) over generation-g intervals: balls of those
/// diameters centered at interval midpoints form a delta-packing.
inline double packing_sum(const CantorApproximation& approx, const DimensionFunction& h, double delta,
                          int generation = -1) {
  if (!(delta > 0.0)) throw ParameterDomainError("packing_sum needs delta > 0");
  const int g = generation < 0 ? approx.depth() : generation;
  CompensatedSum s;
  for (double len : approx.generation_lengths(g)) {
    const double d = std::min(len, delta);
    if (!(d > 0.0)) continue;
    detail::check_in_domain(h, d);
    s += std::exp(h.log_value(std::log(d)));
  }
  return s.value();
}

/// Deepest generation whose lengths are all normal doubles; deeper ones
/// have underflowed and carry no information.
inline int usable_depth(const CantorApproximation& approx) {
  for (int g = approx.depth(); g > 0; --g) {
    const auto lens = approx.generation_lengths(g);
    if (*std::min_element(lens.begin(), lens.end()) > std::numeric_limits<double>::min()) return g;
  }
  return 0;
}

struct OracleRow {
  int depth = 0;
  double delta = 0.0;  ///< packing scale: largest generation length
  double cover = 0.0;
  double packing = 0.0;
};

inline constexpr double kSandwichTolerance = 0.1;

struct SandwichReport {
  bool cover_applicable = false;
  bool packing_applicable = false;
  std::string note;
  double L = 0.0;
  double U = 0.0;
  double cover_min = 0.0;
  double packing_max = 0.0;
  double cover_lo = 0.0, cover_hi = 0.0;
  double packing_lo = 0.0, packing_hi = 0.0;
  bool cover_ok = true;
  bool packing_ok = true;
  bool ok() const { return cover_ok && packing_ok; }
};

struct ClassificationReport {
  std::string sequence_label;
  std::string gauge_label;
  Index probe_bound = 0;
  std::optional<PartitionCell> cell;  ///< nullopt: indeterminate
  LimitEstimate estimate;
  std::size_t skipped_scales = 0;
  std::vector<OracleRow> oracles;
  SandwichReport sandwich;
  bool indeterminate() const { return !cell.has_value(); }
  bool regular() const { return cell && cell->regular(); }
};

inline constexpr Index kDefaultClassifyN = 1000000;
inline constexpr int kDefaultClassifyDepth = 12;

namespace detail {

inline std::vector<OracleRow> oracle_rows(const CantorApproximation& approx, const DimensionFunction& h) {
  std::vector<OracleRow> rows;
  const int top = usable_depth(approx);
  for (int g = (top + 1) / 2; g <= top; ++g) {
    const auto lens = approx.generation_lengths(g);
    OracleRow r;
    r.depth = g;
    r.delta = *std::max_element(lens.begin(), lens.end());
    r.cover = cover_sum(approx, h, g);
    r.packing = packing_sum(approx, h, r.delta, g);
    rows.push_back(r);
  }
  return rows;
}

inline SandwichReport sandwich_from(const LimitEstimate& est, const std::vector<OracleRow>& rows) {
  SandwichReport s;
  s.L = est.window_inf;
  s.U = est.window_sup;
  s.cover_applicable = est.liminf_class == LimitClass::positive_finite;
  s.packing_applicable = est.limsup_class == LimitClass::positive_finite;
  if (!s.cover_applicable) {
    s.note = "not applicable (liminf " + std::string(class_name(est.liminf_class)) + ")";
  } else if (!s.packing_applicable) {
    s.note = "packing side not applicable (limsup " + std::string(class_name(est.limsup_class)) + ")";
  }
  if (rows.empty()) return s;
  s.cover_min = std::numeric_limits<double>::infinity();
  s.packing_max = 0.0;
  for (const auto& r : rows) {
    s.cover_min = std::min(s.cover_min, r.cover);
    s.packing_max = std::max(s.packing_max, r.packing);
  }
  const double t = kSandwichTolerance;
  s.cover_lo = s.L / 4.0 * (1.0 - t);
  s.cover_hi = 4.0 * s.L * (1.0 + t);
  s.packing_lo = s.U / 4.0 * (1.0 - t);
  s.packing_hi = 4.0 * s.U * (1.0 + t);
  if (s.cover_applicable) s.cover_ok = s.cover_min >= s.cover_lo && s.cover_min <= s.cover_hi;
  if (s.packing_applicable) s.packing_ok = s.packing_max >= s.packing_lo && s.packing_max <= s.packing_hi;
  return s;
}

inline ClassificationReport classify_with(const GapSequence& seq, const DimensionFunction& h, Index N,
                                          const CantorApproximation* approx) {
  ClassificationReport rep;
  rep.sequence_label = seq.label();
  rep.gauge_label = h.label();
  rep.probe_bound = std::min(N, seq.max_index());
  const auto vals = scaled_values(seq, h, N);
  rep.skipped_scales = vals.skipped.size();
  rep.estimate = limit_estimates(vals);
  if (rep.estimate.liminf_class && rep.estimate.limsup_class) {
    rep.cell = PartitionCell{to_measure_class(*rep.estimate.liminf_class),
                             to_measure_class(*rep.estimate.limsup_class)};
  }
  if (approx) {
    rep.oracles = oracle_rows(*approx, h);
    rep.sandwich = sandwich_from(rep.estimate, rep.oracles);
  }
  return rep;
}

}  // namespace detail

/// Cell from the tail functional; the oracle sums at depths ceil(k/2)..k are
/// reported alongside as confirmation. depth < 0 skips the oracles.
inline ClassificationReport classify(const GapSequence& seq, const DimensionFunction& h,
                                     Index N = kDefaultClassifyN, int depth = kDefaultClassifyDepth) {
  if (depth < 0) return detail::classify_with(seq, h, N, nullptr);
  const auto approx = build(seq, depth);
  return detail::classify_with(seq, h, N, &approx);
}

inline SandwichReport sandwich_check(const GapSequence& seq, const DimensionFunction& h, int depth,
                                     Index N = kDefaultClassifyN) {
  return classify(seq, h, N, depth).sandwich;
}

// ---------------------------------------------------------------------------
// Battery

/// Worker count: CANTORDIM_THREADS when set, else the hardware count.
inline unsigned worker_count() {
  if (const char* env = std::getenv("CANTORDIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i < count on up to worker_count() threads. Results must
/// be written to slot i so assembly order does not depend on scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct PartitionTable {
  std::string sequence_label;
  std::vector<ClassificationReport> rows;
};

inline PartitionTable battery(const GapSequence& seq, const std::vector<DimensionFunction>& gauges,
                              Index N = kDefaultClassifyN, int depth = kDefaultClassifyDepth) {
  PartitionTable t;
  t.sequence_label = seq.label();
  t.rows.resize(gauges.size());
  std::optional<CantorApproximation> approx;
  if (depth >= 0) approx.emplace(build(seq, depth));
  parallel_for(gauges.size(), [&](std::size_t i) {
    t.rows[i] = detail::classify_with(seq, gauges[i], N, approx ? &*approx : nullptr);
  });
  return t;
}

/// Text rendering: rows are Hausdorff classes, columns packing classes,
/// entries the gauges in that cell. Cells below the diagonal cannot occur.
inline std::string render_table(const PartitionTable& t) {
  const MeasureClass classes[] = {MeasureClass::zero, MeasureClass::one, MeasureClass::infinite};
  std::vector<std::string> cells(9);
  std::vector<std::string> unresolved;
  for (const auto& r : t.rows) {
    if (!r.cell) {
      unresolved.push_back(r.gauge_label);
      continue;
    }
    auto& c = cells[static_cast<int>(r.cell->alpha) * 3 + static_cast<int>(r.cell->beta)];
    if (!c.empty()) c += ", ";
    c += r.gauge_label;
  }
  const std::string header[] = {"P_0", "P_1", "P_inf"};
  std::size_t width[3];
  for (int b = 0; b < 3; ++b) {
    width[b] = header[b].size() + 2;
    for (int a = 0; a <= b; ++a) width[b] = std::max(width[b], cells[a * 3 + b].size() + 2);
  }
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  std::ostringstream os;
  os << "Dimension partition for " << t.sequence_label << "\n";
  std::string line = pad("", 7);
  for (int b = 0; b < 3; ++b) line += pad(header[b], width[b]);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  os << line << "\n";
  for (int a = 0; a < 3; ++a) {
    line = pad("H_" + std::string(measure_class_name(classes[a])), 7);
    for (int b = 0; b < 3; ++b) {
      const auto& c = cells[a * 3 + b];
      line += pad(b < a ? "." : (c.empty() ? "-" : c), width[b]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  if (!unresolved.empty()) {
    os << "indeterminate:";
    for (const auto& u : unresolved) os << " " << u;
    os << "\n";
  }
  return os.str();
}

}  // namespace cantordim
