#pragma once

// Gap sequences a = {a_n}: positive, non-increasing, summable. Every family
// serves terms and tails in log space so that fast-decaying sequences (e^{-n},
// the example_a blocks) stay representable far past double underflow.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantordim/errors.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

enum class Family {
  power_law,
  geometric,
  middle_third_blocks,
  explicit_list,
  example_a_first,
  example_a_second,
  halved_of,
  synthesized,
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::power_law: return "power_law";
    case Family::geometric: return "geometric";
    case Family::middle_third_blocks: return "middle_third_blocks";
    case Family::explicit_list: return "explicit";
    case Family::example_a_first: return "example_a_first";
    case Family::example_a_second: return "example_a_second";
    case Family::halved_of: return "halved_of";
    case Family::synthesized: return "synthesized";
  }
  return "unknown";
}

inline std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::power_law, Family::geometric, Family::middle_third_blocks,
                   Family::explicit_list, Family::example_a_first, Family::example_a_second,
                   Family::halved_of, Family::synthesized}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Family-specific rule behind a GapSequence. Implementations are immutable.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual double log_term(Index n) const = 0;
  /// log r_n, defined for 1 <= n <= max_index() + 1.
  virtual double log_tail(Index n) const = 0;
  virtual double term(Index n) const { return std::exp(log_term(n)); }

  /// Sum of a_j for first <= j < last.
  virtual double range_sum(Index first, Index last) const {
    if (last <= first) return 0.0;
    if (last - first <= 4096) {
      CompensatedSum s;
      for (Index j = last; j-- > first;) s += term(j);
      return s.value();
    }
    return std::exp(log_sub_exp(log_tail(first), log_tail(last)));
  }

  /// Certified bound on the absolute error of tail(n) due to series truncation.
  virtual double remainder_bound(Index) const { return 0.0; }
  virtual Index max_index() const { return kMaxIndex; }
};

/// a_n = c n^{-p}, p = 1/s. Tails: backward compensated summation down to a
/// cutoff, then Euler-Maclaurin with six Bernoulli corrections.
class PowerLawModel final : public SequenceModel {
 public:
  PowerLawModel(double s, double c) : p_(1.0 / s), log_c_(std::log(c)), c_(c) {
    for (int k = 0; k < 7; ++k) {
      double poch = 1.0;
      for (int i = 0; i < 2 * k + 1; ++i) poch *= p_ + i;
      em_[static_cast<std::size_t>(k)] = kBernoulliOverFactorial[static_cast<std::size_t>(k)] * poch;
    }
  }

  double log_term(Index n) const override { return log_c_ - p_ * std::log(static_cast<double>(n)); }
  double term(Index n) const override { return c_ * std::pow(static_cast<double>(n), -p_); }

  double log_tail(Index n) const override {
    if (n >= kCutoff) return log_asymptotic_tail(static_cast<double>(n));
    CompensatedSum s;
    for (Index j = kCutoff; j-- > n;) s += term(j);
    s += std::exp(log_asymptotic_tail(static_cast<double>(kCutoff)));
    return std::log(s.value());
  }

  double range_sum(Index first, Index last) const override {
    if (last <= first) return 0.0;
    CompensatedSum s;
    Index j0 = first;
    if (first < kCutoff) {
      const Index stop = std::min(last, kCutoff);
      for (Index j = stop; j-- > first;) s += term(j);
      j0 = stop;
    }
    if (j0 < last) {
      if (last - j0 <= 256) {
        for (Index j = last; j-- > j0;) s += term(j);
      } else {
        s += asymptotic_difference(static_cast<double>(j0), static_cast<double>(last));
      }
    }
    return s.value();
  }

  double remainder_bound(Index n) const override {
    const double m = static_cast<double>(std::max(n, kCutoff));
    return c_ * std::abs(em_[6]) * std::pow(m, 1.0 - p_ - 14.0);
  }

 private:
  static constexpr Index kCutoff = 64;
  // B_{2k} / (2k)! for k = 1..7.
  static constexpr std::array<double, 7> kBernoulliOverFactorial = {
      1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,           -1.0 / 1209600.0,
      1.0 / 47900160.0,    -691.0 / 1307674368000.0, 1.0 / 74724249600.0};

  double log_asymptotic_tail(double n) const {
    double bracket = 1.0 / (p_ - 1.0) + 0.5 / n;
    const double inv2 = 1.0 / (n * n);
    double pw = inv2;
    for (std::size_t k = 0; k < 6; ++k, pw *= inv2) bracket += em_[k] * pw;
    return log_c_ + (1.0 - p_) * std::log(n) + std::log(bracket);
  }

  // A^q - B^q for A < B without cancellation.
  static double power_gap(double a, double b, double q) {
    return std::pow(a, q) * -std::expm1(q * std::log1p((b - a) / a));
  }

  double asymptotic_difference(double a, double b) const {
    CompensatedSum s;
    s += power_gap(a, b, 1.0 - p_) / (p_ - 1.0);
    s += 0.5 * power_gap(a, b, -p_);
    for (std::size_t k = 0; k < 6; ++k) {
      s += em_[k] * power_gap(a, b, 1.0 - p_ - 2.0 * static_cast<double>(k + 1));
    }
    return c_ * s.value();
  }

  double p_;
  double log_c_;
  double c_;
  std::array<double, 7> em_{};
};

/// a_n = c rho^n with the closed-form tail c rho^n / (1 - rho).
class GeometricModel final : public SequenceModel {
 public:
  GeometricModel(double rho, double c) : log_rho_(std::log(rho)), log_c_(std::log(c)), log1m_rho_(std::log1p(-rho)) {}

  double log_term(Index n) const override { return log_c_ + static_cast<double>(n) * log_rho_; }
  double log_tail(Index n) const override { return log_term(n) - log1m_rho_; }
  double range_sum(Index first, Index last) const override {
    if (last <= first) return 0.0;
    return std::exp(log_tail(first)) * -std::expm1(static_cast<double>(last - first) * log_rho_);
  }

 private:
  double log_rho_;
  double log_c_;
  double log1m_rho_;
};

/// Piecewise-constant sequence: consecutive runs of equal terms. Tails are
/// exact run counts times run values plus the precomputed tail of later runs.
class BlockModel final : public SequenceModel {
 public:
  struct Block {
    Index first;
    Index count;
    double log_value;
  };

  BlockModel(std::vector<Block> blocks, double log_residual) : blocks_(std::move(blocks)) {
    log_start_.assign(blocks_.size() + 1, log_residual);
    for (std::size_t i = blocks_.size(); i-- > 0;) {
      const Block& b = blocks_[i];
      log_start_[i] = log_add_exp(std::log(static_cast<double>(b.count)) + b.log_value, log_start_[i + 1]);
    }
  }

  double log_term(Index n) const override { return blocks_[locate(n)].log_value; }

  double log_tail(Index n) const override {
    if (n > max_index()) return log_start_.back();
    const std::size_t i = locate(n);
    const Block& b = blocks_[i];
    const Index left = b.first + b.count - n;
    return log_add_exp(std::log(static_cast<double>(left)) + b.log_value, log_start_[i + 1]);
  }

  double range_sum(Index first, Index last) const override {
    if (last <= first) return 0.0;
    last = std::min(last, max_index() + 1);
    CompensatedSum s;
    for (std::size_t i = locate(first); i < blocks_.size(); ++i) {
      const Block& b = blocks_[i];
      if (b.first >= last) break;
      const Index lo = std::max(first, b.first);
      const Index hi = std::min(last, b.first + b.count);
      if (hi > lo) s += static_cast<double>(hi - lo) * std::exp(b.log_value);
    }
    return s.value();
  }

  Index max_index() const override { return blocks_.back().first + blocks_.back().count - 1; }

 private:
  std::size_t locate(Index n) const {
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), n,
                               [](Index v, const Block& b) { return v < b.first; });
    return static_cast<std::size_t>(std::distance(blocks_.begin(), it)) - 1;
  }

  std::vector<Block> blocks_;
  std::vector<double> log_start_;
};

/// Finite list with an optional known remainder r_{len+1}.
class ExplicitModel final : public SequenceModel {
 public:
  ExplicitModel(std::vector<double> terms, double tail_after)
      : terms_(std::move(terms)), tail_after_(tail_after), tails_(terms_.size()) {
    CompensatedSum s;
    s += tail_after_;
    for (std::size_t i = terms_.size(); i-- > 0;) {
      s += terms_[i];
      tails_[i] = s.value();
    }
  }

  double term(Index n) const override { return terms_[n - 1]; }
  double log_term(Index n) const override { return std::log(terms_[n - 1]); }
  double log_tail(Index n) const override {
    return n > terms_.size() ? std::log(tail_after_) : std::log(tails_[n - 1]);
  }
  double range_sum(Index first, Index last) const override {
    last = std::min<Index>(last, terms_.size() + 1);
    CompensatedSum s;
    for (Index j = last; j-- > first;) s += terms_[j - 1];
    return s.value();
  }
  Index max_index() const override { return terms_.size(); }

 private:
  std::vector<double> terms_;
  double tail_after_;
  std::vector<double> tails_;
};

}  // namespace detail

/// Immutable handle on a gap sequence. Copies share the underlying model.
class GapSequence {
 public:
  GapSequence(Family family, std::map<std::string, double> params,
              std::shared_ptr<const detail::SequenceModel> model, std::string label,
              std::shared_ptr<const GapSequence> inner = nullptr)
      : family_(family),
        params_(std::move(params)),
        model_(std::move(model)),
        label_(std::move(label)),
        inner_(std::move(inner)) {}

  Family family() const { return family_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::string& label() const { return label_; }
  /// The base sequence of a halved_of sequence; null otherwise.
  const GapSequence* inner() const { return inner_.get(); }
  Index max_index() const { return model_->max_index(); }

  double term(Index n) const {
    check(n, max_index());
    return model_->term(n);
  }
  double log_term(Index n) const {
    check(n, max_index());
    return model_->log_term(n);
  }
  /// r_n = sum_{j >= n} a_j.
  double tail(Index n) const { return std::exp(log_tail(n)); }
  double log_tail(Index n) const {
    check(n, max_index() + 1);
    return model_->log_tail(n);
  }
  /// log(r_n / n), the average step scale fed to gauges.
  double log_scale(Index n) const { return log_tail(n) - std::log(static_cast<double>(n)); }
  double scale(Index n) const { return std::exp(log_scale(n)); }

  /// sum of a_j for first <= j < last.
  double range_sum(Index first, Index last) const {
    check(first, max_index() + 1);
    return model_->range_sum(first, std::min(last, max_index() + 1));
  }
  double remainder_bound(Index n) const { return model_->remainder_bound(n); }

 private:
  static void check(Index n, Index limit) {
    if (n < 1 || n > limit) {
      throw OutOfRangeError("index " + std::to_string(n) + " outside 1.." + std::to_string(limit));
    }
  }

  Family family_;
  std::map<std::string, double> params_;
  std::shared_ptr<const detail::SequenceModel> model_;
  std::string label_;
  std::shared_ptr<const GapSequence> inner_;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationFailure {
  Index index = 0;
  std::string reason;
};

struct ValidationReport {
  Index checked_up_to = 0;
  bool monotone_ok = true;
  bool positive_ok = true;
  bool tail_ok = true;
  double tail_consistency_max_err = 0.0;
  std::vector<ValidationFailure> failures;

  bool ok() const { return monotone_ok && positive_ok && tail_ok; }
};

inline constexpr double kTailConsistencyTolerance = 1e-12;

/// Checks positivity, monotonicity and r_n = a_n + r_{n+1} on every index up
/// to 2048 and on a 1% geometric grid beyond, up to N.
inline ValidationReport validate(const GapSequence& seq, Index N) {
  if (N < 2) throw ParameterDomainError("validate needs N >= 2");
  ValidationReport rep;
  const Index last = std::min(N, seq.max_index());
  rep.checked_up_to = last;

  std::vector<Index> grid;
  for (Index n = 1; n <= std::min<Index>(last, 2048); ++n) grid.push_back(n);
  if (last > 2048) {
    for (Index n : geometric_indices(2049, last, 1.01)) grid.push_back(n);
  }

  for (Index n : grid) {
    const double la = seq.log_term(n);
    if (std::isnan(la) || !(la > detail::kNegInf)) {
      rep.positive_ok = false;
      rep.failures.push_back({n, "non-positive term"});
      continue;
    }
    if (n + 1 <= seq.max_index()) {
      const double lb = seq.log_term(n + 1);
      if (!std::isnan(lb) && lb > la) {
        rep.monotone_ok = false;
        rep.failures.push_back({n, "increasing: a_n < a_{n+1}"});
      }
    }
    const double lr = seq.log_tail(n);
    const double lr1 = seq.log_tail(n + 1);
    if (std::isnan(lr) || std::isnan(lr1)) {
      rep.tail_ok = false;
      rep.failures.push_back({n, "tail undefined"});
      continue;
    }
    const double err = std::abs(std::expm1(log_add_exp(la, lr1) - lr));
    rep.tail_consistency_max_err = std::max(rep.tail_consistency_max_err, err);
    if (err > kTailConsistencyTolerance) {
      rep.tail_ok = false;
      rep.failures.push_back({n, "tail mismatch: r_n != a_n + r_{n+1}"});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Families

inline GapSequence power_law(double s, double c = 1.0) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterDomainError("power_law needs 0 < s < 1");
  if (!(c > 0.0)) throw ParameterDomainError("power_law needs c > 0");
  return GapSequence(Family::power_law, {{"s", s}, {"c", c}},
                     std::make_shared<detail::PowerLawModel>(s, c),
                     "power_law(s=" + detail::format_real(s) + ",c=" + detail::format_real(c) + ")");
}

inline GapSequence geometric(double rho, double c = 1.0) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterDomainError("geometric needs 0 < rho < 1");
  if (!(c > 0.0)) throw ParameterDomainError("geometric needs c > 0");
  return GapSequence(Family::geometric, {{"rho", rho}, {"c", c}},
                     std::make_shared<detail::GeometricModel>(rho, c),
                     "geometric(rho=" + detail::format_real(rho) + ",c=" + detail::format_real(c) + ")");
}

/// Central Cantor set with dissection ratio `ratio`, scaled to total length 1:
/// the 2^{k-1} gaps of level k each have length (1 - 2 ratio) ratio^{k-1}.
/// ratio = 1/3 gives a_n = 3^{-k} for 2^{k-1} <= n < 2^k.
inline GapSequence middle_third_blocks(double ratio = 1.0 / 3.0) {
  if (!(ratio > 0.0 && ratio < 0.5)) throw ParameterDomainError("middle_third_blocks needs 0 < ratio < 1/2");
  std::vector<detail::BlockModel::Block> blocks;
  const int levels = 62;
  for (int k = 1; k <= levels; ++k) {
    const Index first = Index{1} << (k - 1);
    blocks.push_back({first, first, std::log1p(-2.0 * ratio) + (k - 1) * std::log(ratio)});
  }
  const double residual = levels * std::log(2.0 * ratio);
  return GapSequence(Family::middle_third_blocks, {{"ratio", ratio}},
                     std::make_shared<detail::BlockModel>(std::move(blocks), residual),
                     "middle_third_blocks(ratio=" + detail::format_real(ratio) + ")");
}

/// Finite list; `tail_after` is the known remainder beyond the last term.
inline GapSequence explicit_terms(std::vector<double> terms, double tail_after = 0.0) {
  if (terms.empty()) throw ParameterDomainError("explicit sequence needs at least one term");
  if (!(tail_after >= 0.0)) throw ParameterDomainError("tail_after must be non-negative");
  const auto len = static_cast<double>(terms.size());
  return GapSequence(Family::explicit_list, {{"length", len}, {"tail_after", tail_after}},
                     std::make_shared<detail::ExplicitModel>(std::move(terms), tail_after),
                     "explicit(length=" + detail::format_real(len) + ")");
}

/// Block indices k_j of the two-sequence construction: k_1 = 1,
/// n_j = 2^{k_j+1} - 2, k_{j+1} = n_j + k_j + 1. Only j <= 4 fits 64 bits.
struct ExampleABlocks {
  std::array<Index, 4> k{};
  std::array<Index, 3> n{};
};

inline ExampleABlocks example_a_blocks() {
  ExampleABlocks b;
  b.k[0] = 1;
  for (std::size_t j = 0; j < 3; ++j) {
    b.n[j] = (Index{1} << (b.k[j] + 1)) - 2;
    b.k[j + 1] = b.n[j] + b.k[j] + 1;
  }
  return b;
}

namespace detail {

// first: a_{k_j} = 2^{-k_j}, a_n = 2^{-(2k_j+1)} on the block after k_j.
// second: b_{k_j} = b_n = 2^{-2k_j} on the same positions.
inline GapSequence make_example_a(bool second) {
  const ExampleABlocks eb = example_a_blocks();
  auto head = [&](Index k) { return -(second ? 2.0 * k : 1.0 * k) * kLn2; };
  auto body = [&](Index k) { return -(second ? 2.0 * k : 2.0 * k + 1.0) * kLn2; };
  std::vector<BlockModel::Block> blocks;
  for (std::size_t j = 0; j < 3; ++j) {
    const Index k = eb.k[j];
    blocks.push_back({k, 1, head(k)});
    blocks.push_back({k + 1, eb.n[j], body(k)});
  }
  const Index k4 = eb.k[3];
  blocks.push_back({k4, 1, head(k4)});
  blocks.push_back({k4 + 1, kMaxIndex - k4, body(k4)});
  // Remainder of block 4 past the index range: about 2^{k4+1} terms of the body value.
  const double residual = static_cast<double>(k4 + 1) * kLn2 + body(k4);
  const Family fam = second ? Family::example_a_second : Family::example_a_first;
  return GapSequence(fam, {}, std::make_shared<BlockModel>(std::move(blocks), residual),
                     std::string(family_name(fam)));
}

}  // namespace detail

inline GapSequence example_a_first() { return detail::make_example_a(false); }
inline GapSequence example_a_second() { return detail::make_example_a(true); }

namespace detail {

/// b_1 = a_1, b_{2k} = b_{2k+1} = a_k / 2, so r^{(b)}_{2n} = r^{(a)}_n.
class HalvedModel final : public SequenceModel {
 public:
  explicit HalvedModel(GapSequence inner) : inner_(std::move(inner)) {}

  double log_term(Index n) const override {
    return n == 1 ? inner_.log_term(1) : inner_.log_term(n / 2) - kLn2;
  }
  double term(Index n) const override { return n == 1 ? inner_.term(1) : 0.5 * inner_.term(n / 2); }

  double log_tail(Index n) const override {
    if (n == 1) return log_add_exp(inner_.log_term(1), inner_.log_tail(1));
    const Index m = n / 2;
    if (n % 2 == 0) return inner_.log_tail(m);
    return log_add_exp(inner_.log_term(m) - kLn2, inner_.log_tail(m + 1));
  }

  double range_sum(Index first, Index last) const override {
    if (last <= first) return 0.0;
    CompensatedSum s;
    if (first == 1) {
      s += inner_.term(1);
      first = 2;
    }
    if (first < last && first % 2 == 1) {
      s += 0.5 * inner_.term(first / 2);
      ++first;
    }
    if (first < last && last % 2 == 1) {
      s += 0.5 * inner_.term((last - 1) / 2);
      --last;
    }
    if (first < last) s += inner_.range_sum(first / 2, last / 2);
    return s.value();
  }

  double remainder_bound(Index n) const override { return inner_.remainder_bound(std::max<Index>(1, n / 2)); }
  Index max_index() const override {
    const Index m = inner_.max_index();
    return m >= kMaxIndex / 2 ? kMaxIndex : 2 * m + 1;
  }

 private:
  GapSequence inner_;
};

}  // namespace detail

/// Halving construction; the inner sequence must validate up to `check_up_to`.
inline GapSequence halved_of(const GapSequence& inner, Index check_up_to = 4096) {
  const ValidationReport rep = validate(inner, std::max<Index>(2, std::min(check_up_to, inner.max_index())));
  if (!rep.ok()) {
    const auto& f = rep.failures.front();
    throw ValidationError("halved_of: inner sequence fails at index " + std::to_string(f.index) + " (" +
                          f.reason + ")");
  }
  return GapSequence(Family::halved_of, {}, std::make_shared<detail::HalvedModel>(inner),
                     "halved_of(" + inner.label() + ")", std::make_shared<GapSequence>(inner));
}

// ---------------------------------------------------------------------------
// Spec-driven construction

/// Family tag plus parameters. `inner` is required for halved_of and `terms`
/// for explicit. Synthesized sequences are built from a gauge instead (see
/// synthesis.hpp).
struct SequenceSpec {
  Family family = Family::power_law;
  std::map<std::string, double> params;
  std::vector<double> terms;
  std::shared_ptr<const SequenceSpec> inner;
};

namespace detail {
inline double param_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}
inline double param_required(const std::map<std::string, double>& p, const std::string& key,
                             std::string_view family) {
  auto it = p.find(key);
  if (it == p.end()) {
    throw ParameterDomainError(std::string(family) + " requires param." + key);
  }
  return it->second;
}
}  // namespace detail

inline GapSequence make_sequence(const SequenceSpec& spec) {
  const auto name = family_name(spec.family);
  switch (spec.family) {
    case Family::power_law:
      return power_law(detail::param_required(spec.params, "s", name), detail::param_or(spec.params, "c", 1.0));
    case Family::geometric:
      return geometric(detail::param_required(spec.params, "rho", name), detail::param_or(spec.params, "c", 1.0));
    case Family::middle_third_blocks:
      return middle_third_blocks(detail::param_or(spec.params, "ratio", 1.0 / 3.0));
    case Family::explicit_list:
      return explicit_terms(spec.terms, detail::param_or(spec.params, "tail_after", 0.0));
    case Family::example_a_first:
      return example_a_first();
    case Family::example_a_second:
      return example_a_second();
    case Family::halved_of:
      if (!spec.inner) throw ParameterDomainError("halved_of requires an inner sequence");
      return halved_of(make_sequence(*spec.inner));
    case Family::synthesized:
      throw ParameterDomainError("synthesized sequences are built from a gauge (sequence_from_function)");
  }
  throw ParameterDomainError("unknown family");
}

}  // namespace cantordim
