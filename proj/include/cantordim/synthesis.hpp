#pragma once

// From a gauge h to a gap sequence whose associated gauge is h:
// r_n = n h^{-1}(1/n), a_n = r_n - r_{n+1}.

#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "cantordim/classification.hpp"
#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/gauge.hpp"
#include "cantordim/tail_analytics.hpp"

namespace cantordim {

namespace detail {

/// Tails are kept exactly as n h^{-1}(1/n); terms are their differences.
class SynthesizedModel final : public SequenceModel {
 public:
  explicit SynthesizedModel(DimensionFunction h) : h_(std::move(h)) {}

  double log_tail(Index n) const override {
    const double ln = std::log(static_cast<double>(n));
    return ln + h_.log_inverse(-ln);
  }
  double log_term(Index n) const override { return log_sub_exp(log_tail(n), log_tail(n + 1)); }
  // Terms are tail differences, so block sums telescope.
  double range_sum(Index first, Index last) const override {
    if (last <= first) return 0.0;
    return std::exp(log_sub_exp(log_tail(first), log_tail(last)));
  }

 private:
  DimensionFunction h_;
};

}  // namespace detail

inline constexpr Index kDefaultSynthesisN = 1000000;

/// The rule defines a_n for every n; legality (positive, non-increasing
/// terms) is checked on 1..N and the first failing index is reported.
inline GapSequence sequence_from_function(const DimensionFunction& h, Index N = kDefaultSynthesisN) {
  if (N < 2) throw ParameterDomainError("sequence_from_function needs N >= 2");
  const double top = h.log_upper_value();
  for (Index n = 1; n <= N + 2; ++n) {
    if (-std::log(static_cast<double>(n)) > top) {
      throw SynthesisInfeasibleError("1/" + std::to_string(n) + " exceeds h(A) for " + h.label(), n);
    }
  }
  auto model = std::make_shared<detail::SynthesizedModel>(h);
  double prev_log_tail = model->log_tail(1);
  double prev_log_term = std::numeric_limits<double>::infinity();
  for (Index n = 1; n <= N + 1; ++n) {
    const double next = model->log_tail(n + 1);
    if (!(next < prev_log_tail)) {
      throw SynthesisInfeasibleError("tails n h^{-1}(1/n) stop decreasing at n = " + std::to_string(n) + " for " +
                                         h.label(),
                                     n);
    }
    const double lt = log_sub_exp(prev_log_tail, next);
    if (n <= N && lt > prev_log_term + 1e-12 * std::max(1.0, std::abs(lt))) {
      throw SynthesisInfeasibleError("terms increase: a_" + std::to_string(n - 1) + " < a_" + std::to_string(n) +
                                         " for " + h.label(),
                                     n - 1);
    }
    prev_log_term = lt;
    prev_log_tail = next;
  }
  return GapSequence(Family::synthesized, {{"count", static_cast<double>(N)}}, std::move(model),
                     "synthesized(" + h.label() + ")");
}

struct RoundtripReport {
  std::string gauge_label;
  Index probe_bound = 0;
  std::optional<PartitionCell> cell;
  bool associated_equivalent = false;
  OrderReport associated_order;
  DimensionsEstimate dims;
  /// max |n h(r_n / n) - 1| over the scaled-value grid
  double identity_error = 0.0;
  bool ok() const { return cell && cell->regular() && associated_equivalent; }
};

/// Synthesizes a from h and checks that C_a is h-regular and h_a is
/// equivalent to h. depth < 0 skips the oracle sums.
inline RoundtripReport roundtrip_check(const DimensionFunction& h, Index N = kDefaultSynthesisN, int depth = -1) {
  const auto a = sequence_from_function(h, N);
  RoundtripReport rep;
  rep.gauge_label = h.label();
  rep.probe_bound = N;
  const auto cls = classify(a, h, N, depth);
  rep.cell = cls.cell;
  for (const auto& p : scaled_values(a, h, N).points) {
    rep.identity_error = std::max(rep.identity_error, std::abs(std::expm1(p.log_value)));
  }
  rep.associated_order = compare(associated_function(a, N), h);
  rep.associated_equivalent = rep.associated_order.equivalent();
  rep.dims = dimensions(a, N);
  return rep;
}

}  // namespace cantordim
