#pragma once

// Depth-k interval approximation of the cut-out set C_a. Nodes are heap
// indexed: interval m splits into 2m (left), the gap a_m, and 2m+1 (right).

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

struct Interval {
  double left = 0.0;
  double length = 0.0;
  double right() const { return left + length; }
};

inline constexpr int kMaxDepth = 22;

/// |I_m| = sum over l >= 0 of (r_{2^l m} - r_{2^l (m+1)}), the total of the
/// gaps in the subtree of m. Each level is summed directly as a range of
/// terms, which avoids the cancellation of differencing tails. When the index
/// range runs out first, the rest of the tail is shared out in proportion to
/// the subtree's weight on the last level summed.
inline double interval_length(const GapSequence& seq, Index m) {
  if (m < 1) throw OutOfRangeError("heap index must be >= 1");
  if (m == 1) return seq.tail(1);
  const Index limit = seq.max_index();
  int g = 0;
  while ((Index{2} << g) <= m) ++g;
  CompensatedSum total;
  Index lo = m;
  Index hi = m + 1;
  int level_no = 0;
  for (;; ++level_no) {
    if (lo > limit) break;
    const double level = seq.range_sum(lo, std::min(hi, limit + 1));
    total += level;
    const bool exhausted = hi > limit / 2;
    if (!exhausted) {
      const double rest = seq.log_tail(2 * lo);
      if (total.value() > 0.0 && rest < std::log(total.value()) + std::log(1e-17)) break;
      lo *= 2;
      hi *= 2;
      continue;
    }
    const Index row = Index{1} << (g + level_no);
    const Index next = row * 2;
    if (level > 0.0 && hi <= limit + 1 && next <= limit + 1) {
      const double full = seq.range_sum(row, next);
      if (full > 0.0) total += level / full * seq.tail(next);
    }
    break;
  }
  return total.value();
}

class CantorApproximation {
 public:
  CantorApproximation(GapSequence seq, int depth, double origin, std::vector<double> left,
                      std::vector<double> length)
      : seq_(std::move(seq)), depth_(depth), origin_(origin), left_(std::move(left)), length_(std::move(length)) {}

  int depth() const { return depth_; }
  double origin() const { return origin_; }
  const GapSequence& sequence() const { return seq_; }
  std::size_t generation_size(int g) const { return std::size_t{1} << g; }

  /// Interval of heap node m, 1 <= m < 2^{depth+1}.
  Interval node(Index m) const { return {left_[m], length_[m]}; }

  /// Intervals of generation g (heap indices 2^g .. 2^{g+1}-1), left to right.
  std::vector<Interval> generation(int g) const {
    check_generation(g);
    const std::size_t first = std::size_t{1} << g;
    std::vector<Interval> out(first);
    for (std::size_t j = 0; j < first; ++j) out[j] = {left_[first + j], length_[first + j]};
    return out;
  }
  std::vector<Interval> intervals() const { return generation(depth_); }

  std::span<const double> generation_lefts(int g) const {
    check_generation(g);
    const std::size_t first = std::size_t{1} << g;
    return {left_.data() + first, first};
  }
  std::span<const double> generation_lengths(int g) const {
    check_generation(g);
    const std::size_t first = std::size_t{1} << g;
    return {length_.data() + first, first};
  }

  double right_end() const { return left_[1] + length_[1]; }

  /// Gap cut from node m (m < 2^depth), as [start, start + a_m].
  Interval gap(Index m) const { return {left_[2 * m] + length_[2 * m], seq_.term(m)}; }

  /// mu_k([origin, x]) with mass 2^{-k} spread uniformly over each
  /// generation-k interval.
  double measure_cdf(double x) const {
    const auto lefts = generation_lefts(depth_);
    const auto lens = generation_lengths(depth_);
    if (x <= origin_) return 0.0;
    if (x >= right_end()) return 1.0;
    auto it = std::upper_bound(lefts.begin(), lefts.end(), x);
    if (it == lefts.begin()) return 0.0;
    const auto j = static_cast<std::size_t>(std::distance(lefts.begin(), it)) - 1;
    double frac = 1.0;
    if (lens[j] > 0.0) frac = std::clamp((x - lefts[j]) / lens[j], 0.0, 1.0);
    return std::ldexp(static_cast<double>(j) + frac, -depth_);
  }

  double ball_mass(double x0, double r) const {
    if (!(r > 0.0)) throw ParameterDomainError("ball radius must be positive");
    return measure_cdf(x0 + r) - measure_cdf(x0 - r);
  }

  /// Smallest generation g <= depth with some generation-g interval inside
  /// [x0 - r, x0 + r]; -1 when none exists.
  int minimal_contained_generation(double x0, double r) const {
    const double lo = x0 - r;
    const double hi = x0 + r;
    for (int g = 0; g <= depth_; ++g) {
      const auto lefts = generation_lefts(g);
      const auto lens = generation_lengths(g);
      auto it = std::lower_bound(lefts.begin(), lefts.end(), lo);
      if (it != lefts.end()) {
        const auto j = static_cast<std::size_t>(std::distance(lefts.begin(), it));
        if (lefts[j] + lens[j] <= hi) return g;
      }
    }
    return -1;
  }

  /// CSV rows (generation, heap_index, left, length) for generation `depth`.
  void write_csv(std::ostream& os) const {
    os << "generation,heap_index,left,length\n";
    const std::size_t first = std::size_t{1} << depth_;
    char buf[128];
    for (std::size_t j = 0; j < first; ++j) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g\n", depth_, first + j, left_[first + j],
                    length_[first + j]);
      os << buf;
    }
  }

 private:
  void check_generation(int g) const {
    if (g < 0 || g > depth_) throw OutOfRangeError("generation outside 0..depth");
  }

  GapSequence seq_;
  int depth_;
  double origin_;
  std::vector<double> left_;
  std::vector<double> length_;
};

/// Builds generations 0..depth. Generation-depth lengths come from
/// interval_length; shallower ones from |I_m| = a_m + |I_2m| + |I_2m+1|.
inline CantorApproximation build(const GapSequence& seq, int depth, double origin = 0.0) {
  if (depth < 0) throw ParameterDomainError("depth must be >= 0");
  if (depth > kMaxDepth) {
    throw ResourceError("depth " + std::to_string(depth) + " exceeds the limit of " + std::to_string(kMaxDepth));
  }
  const Index leaves = Index{1} << depth;
  if (leaves - 1 > seq.max_index()) {
    throw ResourceError("depth " + std::to_string(depth) + " needs gaps beyond the sequence's last index");
  }
  const std::size_t nodes = std::size_t{2} << depth;
  std::vector<double> length(nodes, 0.0);
  std::vector<double> left(nodes, 0.0);
  for (Index m = leaves; m < 2 * leaves; ++m) length[m] = interval_length(seq, m);
  // Finite lists: mass past the last term goes to the leaves in proportion
  // to their length, or evenly when no leaf holds any gap.
  CompensatedSum held;
  for (Index m = 1; m < leaves; ++m) held += seq.term(m);
  CompensatedSum leaf_total;
  for (Index m = leaves; m < 2 * leaves; ++m) leaf_total += length[m];
  held += leaf_total.value();
  const double missing = seq.tail(1) - held.value();
  if (missing > 1e-13 * seq.tail(1)) {
    for (Index m = leaves; m < 2 * leaves; ++m) {
      length[m] += leaf_total.value() > 0.0 ? missing * length[m] / leaf_total.value()
                                            : missing / static_cast<double>(leaves);
    }
  }
  for (Index m = leaves; m-- > 1;) length[m] = seq.term(m) + length[2 * m] + length[2 * m + 1];
  left[1] = origin;
  for (Index m = 1; m < leaves; ++m) {
    left[2 * m] = left[m];
    left[2 * m + 1] = left[m] + length[2 * m] + seq.term(m);
  }
  return CantorApproximation(seq, depth, origin, std::move(left), std::move(length));
}

inline double measure_cdf(const CantorApproximation& approx, double x) { return approx.measure_cdf(x); }
inline double ball_mass(const CantorApproximation& approx, double x0, double r) { return approx.ball_mass(x0, r); }

struct BallMassSample {
  double center = 0.0;
  double radius = 0.0;
  int generation = -1;
  double mass = 0.0;
  double bound = 0.0;
};

struct BallMassCheck {
  std::vector<BallMassSample> samples;
  int violations = 0;
  bool ok() const { return violations == 0; }
};

/// Samples centers among generation-depth left endpoints and radii
/// log-uniformly between the smallest leaf length and r_1; checks
/// mu(B(x0, r)) <= 5 * 2^{-g} with g the minimal contained generation.
inline BallMassCheck five_interval_check(const CantorApproximation& approx, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto lefts = approx.generation_lefts(approx.depth());
  const auto lens = approx.generation_lengths(approx.depth());
  double min_len = approx.node(1).length;
  for (double l : lens) {
    if (l > 0.0) min_len = std::min(min_len, l);
  }
  const double total = approx.node(1).length;
  std::uniform_int_distribution<std::size_t> pick(0, lefts.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BallMassCheck out;
  while (static_cast<int>(out.samples.size()) < samples) {
    BallMassSample s;
    s.center = lefts[pick(rng)];
    s.radius = min_len * std::pow(total / min_len, unit(rng));
    s.generation = approx.minimal_contained_generation(s.center, s.radius);
    if (s.generation < 0) continue;
    s.mass = approx.ball_mass(s.center, s.radius);
    s.bound = 5.0 * std::ldexp(1.0, -s.generation);
    if (s.mass > s.bound * (1.0 + 1e-12)) ++out.violations;
    out.samples.push_back(s);
  }
  return out;
}

}  // namespace cantordim
