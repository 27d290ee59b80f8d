#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <string>

#include "cantordim/spec_io.hpp"

using namespace cantordim;
using Catch::Approx;

namespace {
const std::filesystem::path kSpecs = CANTORDIM_SPEC_DIR;

std::string message_of(const std::string& text) {
  try {
    parse_spec_text(text, "mem.spec");
  } catch (const SpecParseError& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("sample specs load", "[spec_io]") {
  const auto mt = load_spec(kSpecs / "middle_third.spec");
  CHECK(mt.sequence.family == Family::middle_third_blocks);
  CHECK(mt.max_n == Index{1048576});
  CHECK(mt.depth == 14);
  const auto seq = sequence_from_spec(mt);
  CHECK(seq.term(1) == Approx(1.0 / 3.0));
  CHECK(seq.term(3) == Approx(1.0 / 9.0));

  const auto p = sequence_from_spec(load_spec(kSpecs / "power_half.spec"));
  CHECK(p.term(10) == Approx(0.01));

  const auto g = sequence_from_spec(load_spec(kSpecs / "geometric_e2.spec"));
  CHECK(g.term(1) == Approx(std::exp(-2.0)));
}

TEST_CASE("inner_file resolves relative to the spec file", "[spec_io]") {
  const auto h = sequence_from_spec(load_spec(kSpecs / "halved_power_half.spec"));
  CHECK(h.family() == Family::halved_of);
  CHECK(h.term(1) == Approx(1.0));
  CHECK(h.term(4) == Approx(0.125));
  CHECK(h.term(5) == Approx(0.125));
}

TEST_CASE("terms files and inline terms", "[spec_io]") {
  const auto inc = load_spec(kSpecs / "increasing.spec");
  REQUIRE(inc.sequence.terms.size() == 2);
  CHECK_FALSE(validate(sequence_from_spec(inc), 2).ok());

  const auto s = parse_spec_text("family = explicit\nterms = 0.5, 0.25 0.125\nparam.tail_after = 0.1\n");
  const auto seq = sequence_from_spec(s);
  CHECK(seq.tail(1) == Approx(0.975));
  CHECK(parse_terms("1 2 # three\n4,5\n").size() == 4);
  CHECK_THROWS_AS(parse_terms("1 x"), SpecParseError);
}

TEST_CASE("spec errors carry file and line", "[spec_io]") {
  CHECK(message_of("family = power_law\nparam.s = 0.5\nbogus = 1\n").find("mem.spec:3") != std::string::npos);
  CHECK(message_of("family = power_law\nparam.s = half\n").find("mem.spec:2") != std::string::npos);
  CHECK(message_of("family = nope\n").find("unknown family") != std::string::npos);
  CHECK(message_of("param.s = 0.5\n").find("missing 'family'") != std::string::npos);
  CHECK(message_of("family = explicit\n").find("terms") != std::string::npos);
  CHECK(message_of("family power_law\n").find("key = value") != std::string::npos);
  CHECK_THROWS_AS(load_spec(kSpecs / "does_not_exist.spec"), SpecParseError);
}

TEST_CASE("counts accept exponent notation", "[spec_io]") {
  const auto s = parse_spec_text("family = power_law\nparam.s = 0.5\nmax_n = 1e6\njmax = 32\nseed = 7\n");
  CHECK(s.max_n == Index{1000000});
  CHECK(s.jmax == Index{32});
  CHECK(s.seed == std::uint64_t{7});
  CHECK_THROWS_AS(parse_spec_text("family = power_law\nmax_n = 1.5\n"), SpecParseError);
  CHECK_THROWS_AS(parse_spec_text("family = power_law\nmax_n = -3\n"), SpecParseError);
}

TEST_CASE("gauge parsing", "[spec_io]") {
  const auto p = parse_gauge("power(0.5)");
  CHECK(p.kind() == GaugeKind::power);
  CHECK(p.evaluate(0.25) == Approx(0.5));
  CHECK(parse_gauge(" power( 0.5 , 2 ) ").evaluate(0.25) == Approx(1.0));
  CHECK(parse_gauge("logrec(1,2)").evaluate(std::exp(-2.0)) == Approx(0.25));
  CHECK(parse_gauge("powerlog(0.5,1)").kind() == GaugeKind::power_log);
  CHECK_THROWS_AS(parse_gauge("power"), SpecParseError);
  CHECK_THROWS_AS(parse_gauge("power(1,2,3)"), SpecParseError);
  CHECK_THROWS_AS(parse_gauge("cubic(1)"), SpecParseError);
  CHECK_THROWS_AS(parse_gauge("power(x)"), SpecParseError);
}

TEST_CASE("associated gauge from a spec file", "[spec_io]") {
  const auto h = parse_gauge("associated(power_half.spec, 4096)", kSpecs);
  CHECK(h.kind() == GaugeKind::associated);
  CHECK(compare(h, power_gauge(0.5)).equivalent());
}

TEST_CASE("gauge lists split at top level", "[spec_io]") {
  const auto list = parse_gauge_list("power(0.4), logrec(1,1); power(0.6)");
  REQUIRE(list.size() == 3);
  CHECK(list[1].kind() == GaugeKind::log_reciprocal);
  CHECK_THROWS_AS(parse_gauge_list(" , "), SpecParseError);
}

TEST_CASE("synthesized spec", "[spec_io]") {
  const auto s = load_spec(kSpecs / "synthesized_logrec.spec");
  REQUIRE(s.gauge.has_value());
  const auto seq = sequence_from_spec(s);
  CHECK(seq.family() == Family::synthesized);
  CHECK(seq.tail(3) == Approx(3.0 * std::exp(-6.0)).epsilon(1e-12));
}
