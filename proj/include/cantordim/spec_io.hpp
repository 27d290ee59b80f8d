#pragma once

// Text specs for sequences and gauges.
//
// Sequence spec file, one `key = value` per line, '#' starts a comment:
//   family = power_law | geometric | middle_third_blocks | explicit |
//            example_a_first | example_a_second | halved_of | synthesized
//   param.<name> = <real>         family parameters (s, c, rho, ratio, tail_after)
//   terms_file = <path>           explicit: whitespace-separated terms
//   inner_file = <path>           halved_of: spec of the base sequence
//   gauge = <gauge spec>          synthesized: target gauge
//   max_n, depth, seed, jmax      optional analysis defaults
// Relative paths resolve against the spec file's directory.
//
// Gauge spec: power(s[,c]) | logrec(c,p) | powerlog(s,t) | associated(<path>,N)

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cantordim/errors.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/gauge.hpp"
#include "cantordim/synthesis.hpp"

namespace cantordim {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline double require_real(std::string_view s, const std::string& where) {
  const auto v = parse_real(s);
  if (!v) throw SpecParseError(where + ": expected a number, got '" + std::string(trim(s)) + "'");
  return *v;
}

inline std::uint64_t require_count(std::string_view s, const std::string& where) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    // accept 1e6 style counts
    const auto r = parse_real(s);
    if (!r || *r < 0 || *r != std::floor(*r) || *r > 9.2e18) {
      throw SpecParseError(where + ": expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return static_cast<std::uint64_t>(*r);
  }
  return v;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SpecParseError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Splits on commas (or semicolons) that are not inside parentheses.
inline std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if ((ch == ',' || ch == ';') && depth == 0) {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.emplace_back(trim(cur));
  return out;
}

}  // namespace detail

/// Terms file: reals separated by whitespace or commas; '#' comments.
inline std::vector<double> parse_terms(std::string_view text, const std::string& origin = "terms") {
  std::vector<double> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(detail::require_real(w, origin + ":" + std::to_string(line_no)));
  }
  return out;
}

struct SpecFile {
  std::filesystem::path path;
  std::string raw_text;
  SequenceSpec sequence;
  std::optional<std::string> gauge;  ///< target gauge of a synthesized sequence
  std::optional<Index> max_n;
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<Index> jmax;
};

inline SpecFile parse_spec_text(std::string_view text, const std::filesystem::path& origin = {}) {
  SpecFile spec;
  spec.path = origin;
  spec.raw_text = std::string(text);
  const auto base = origin.has_parent_path() ? origin.parent_path() : std::filesystem::path(".");
  const std::string name = origin.empty() ? std::string("<spec>") : origin.string();
  std::optional<Family> family;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw SpecParseError(where + ": expected 'key = value'");
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    if (key == "family") {
      family = parse_family(value);
      if (!family) throw SpecParseError(where + ": unknown family '" + value + "'");
    } else if (key.rfind("param.", 0) == 0 && key.size() > 6) {
      spec.sequence.params[key.substr(6)] = detail::require_real(value, where);
    } else if (key == "terms_file") {
      const auto p = base / value;
      spec.sequence.terms = parse_terms(detail::read_file(p), p.string());
    } else if (key == "terms") {
      spec.sequence.terms = parse_terms(value, where);
    } else if (key == "inner_file") {
      const auto p = base / value;
      spec.sequence.inner = std::make_shared<SequenceSpec>(parse_spec_text(detail::read_file(p), p).sequence);
    } else if (key == "gauge") {
      spec.gauge = value;
    } else if (key == "max_n") {
      spec.max_n = detail::require_count(value, where);
    } else if (key == "depth") {
      spec.depth = static_cast<int>(detail::require_count(value, where));
    } else if (key == "seed") {
      spec.seed = detail::require_count(value, where);
    } else if (key == "jmax") {
      spec.jmax = detail::require_count(value, where);
    } else {
      throw SpecParseError(where + ": unknown key '" + key + "'");
    }
  }
  if (!family) throw SpecParseError(name + ": missing 'family'");
  spec.sequence.family = *family;
  if (*family == Family::explicit_list && spec.sequence.terms.empty()) {
    throw SpecParseError(name + ": explicit family needs terms_file or terms");
  }
  if (*family == Family::halved_of && !spec.sequence.inner) {
    throw SpecParseError(name + ": halved_of needs inner_file");
  }
  if (*family == Family::synthesized && !spec.gauge) throw SpecParseError(name + ": synthesized needs gauge");
  return spec;
}

inline SpecFile load_spec(const std::filesystem::path& path) { return parse_spec_text(detail::read_file(path), path); }

inline DimensionFunction parse_gauge(std::string_view text, const std::filesystem::path& base = ".");

/// Builds the sequence, synthesizing from the gauge when needed.
inline GapSequence sequence_from_spec(const SpecFile& spec) {
  if (spec.sequence.family == Family::synthesized) {
    const auto base = spec.path.has_parent_path() ? spec.path.parent_path() : std::filesystem::path(".");
    const auto h = parse_gauge(*spec.gauge, base);
    const auto count = static_cast<Index>(detail::param_or(spec.sequence.params, "count", 1e6));
    return sequence_from_function(h, count);
  }
  return make_sequence(spec.sequence);
}

inline DimensionFunction parse_gauge(std::string_view text, const std::filesystem::path& base) {
  const auto s = detail::trim(text);
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    throw SpecParseError("gauge '" + std::string(s) + "': expected name(args)");
  }
  const std::string name(detail::trim(s.substr(0, open)));
  const auto args = detail::split_top_level(s.substr(open + 1, s.size() - open - 2));
  const std::string where = "gauge '" + std::string(s) + "'";
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) throw SpecParseError(where + ": wrong number of arguments");
  };
  if (name == "power") {
    arity(1, 2);
    return DimensionFunction::power(detail::require_real(args[0], where),
                                    args.size() > 1 ? detail::require_real(args[1], where) : 1.0);
  }
  if (name == "logrec") {
    arity(2, 2);
    return DimensionFunction::log_reciprocal(detail::require_real(args[0], where),
                                             detail::require_real(args[1], where));
  }
  if (name == "powerlog") {
    arity(2, 2);
    return DimensionFunction::power_log(detail::require_real(args[0], where), detail::require_real(args[1], where));
  }
  if (name == "associated") {
    arity(2, 2);
    const auto spec = load_spec(base / args[0]);
    return associated_function(sequence_from_spec(spec), detail::require_count(args[1], where));
  }
  throw SpecParseError(where + ": unknown gauge kind '" + name + "'");
}

/// Gauge list separated by top-level commas or semicolons.
inline std::vector<DimensionFunction> parse_gauge_list(std::string_view text, const std::filesystem::path& base = ".") {
  std::vector<DimensionFunction> out;
  for (const auto& item : detail::split_top_level(text)) {
    if (!item.empty()) out.push_back(parse_gauge(item, base));
  }
  if (out.empty()) throw SpecParseError("empty gauge list");
  return out;
}

}  // namespace cantordim
