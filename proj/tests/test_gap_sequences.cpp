#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cantordim/gap_sequence.hpp"

using namespace cantordim;
using Catch::Approx;

TEST_CASE("power law terms and tails", "[gap_sequences]") {
  const auto a = power_law(0.5);
  CHECK(a.term(1) == Approx(1.0));
  CHECK(a.term(10) == Approx(0.01));
  // zeta(2) = pi^2 / 6
  CHECK(a.tail(1) == Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
  // r_2 = zeta(2) - 1
  CHECK(a.tail(2) == Approx(M_PI * M_PI / 6.0 - 1.0).epsilon(1e-12));
  // r_n ~ 1/n for large n, with r_n - 1/(n - 1/2) = O(n^-3)
  const double n = 1e6;
  CHECK(a.tail(1000000) == Approx(1.0 / (n - 0.5)).epsilon(1e-9));
}

TEST_CASE("power law tail is consistent across the Euler-Maclaurin cutoff", "[gap_sequences]") {
  const auto a = power_law(1.0 / 3.0);
  for (Index n = 50; n < 80; ++n) {
    const double lhs = a.tail(n);
    const double rhs = a.term(n) + a.tail(n + 1);
    CHECK(lhs == Approx(rhs).epsilon(1e-13));
  }
}

TEST_CASE("geometric closed forms", "[gap_sequences]") {
  const auto g = geometric(std::exp(-1.0));
  CHECK(g.tail(1) == Approx(0.5819767068693265).epsilon(1e-13));
  CHECK(g.log_term(100000) == Approx(-100000.0).epsilon(1e-15));
  CHECK(std::isfinite(g.log_tail(100000)));
  CHECK(g.range_sum(1, 3) == Approx(std::exp(-1.0) + std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("middle third blocks", "[gap_sequences]") {
  const auto m = middle_third_blocks();
  CHECK(m.term(1) == Approx(1.0 / 3.0));
  CHECK(m.term(2) == Approx(1.0 / 9.0));
  CHECK(m.term(3) == Approx(1.0 / 9.0));
  CHECK(m.term(4) == Approx(1.0 / 27.0));
  CHECK(m.term(7) == Approx(1.0 / 27.0));
  CHECK(m.tail(1) == Approx(1.0).epsilon(1e-14));
  // r_{2^{k-1}} = (2/3)^{k-1}
  for (int k = 1; k <= 30; ++k) {
    CHECK(m.tail(Index{1} << (k - 1)) == Approx(std::pow(2.0 / 3.0, k - 1)).epsilon(1e-13));
  }
}

TEST_CASE("example (a) block indices", "[gap_sequences]") {
  const auto b = example_a_blocks();
  CHECK(b.k[0] == 1);
  CHECK(b.k[1] == 4);
  CHECK(b.k[2] == 35);
  CHECK(b.k[3] == (Index{1} << 36) + 34);
  CHECK(b.n[0] == 2);
  CHECK(b.n[1] == 30);

  const auto a = example_a_first();
  const auto c = example_a_second();
  CHECK(a.term(1) == Approx(0.5));
  CHECK(a.term(2) == Approx(0.125));
  CHECK(a.term(3) == Approx(0.125));
  CHECK(a.term(4) == Approx(1.0 / 16.0));
  CHECK(a.term(5) == Approx(std::ldexp(1.0, -9)));
  CHECK(c.term(1) == Approx(0.25));
  CHECK(c.term(4) == Approx(std::ldexp(1.0, -8)));
  CHECK(validate(a, 1 << 16).ok());
  CHECK(validate(c, 1 << 16).ok());
}

TEST_CASE("halving construction", "[gap_sequences]") {
  const auto a = power_law(0.5);
  const auto h = halved_of(a);
  CHECK(h.term(1) == Approx(1.0));
  CHECK(h.term(2) == Approx(0.5));
  CHECK(h.term(3) == Approx(0.5));
  CHECK(h.term(4) == Approx(0.125));
  CHECK(h.term(5) == Approx(0.125));
  for (Index n : {1, 2, 7, 100, 12345}) {
    CHECK(h.tail(2 * n) == Approx(a.tail(n)).epsilon(1e-13));
  }
  CHECK(h.range_sum(3, 10) == Approx(h.tail(3) - h.tail(10)).epsilon(1e-12));
  CHECK(validate(h, 1 << 14).ok());
}

TEST_CASE("validation rejects an increasing explicit list", "[gap_sequences]") {
  const auto e = explicit_terms({0.3, 0.4});
  const auto rep = validate(e, 2);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.monotone_ok);
  REQUIRE_FALSE(rep.failures.empty());
  CHECK(rep.failures.front().index == 1);
  CHECK_THROWS_AS(halved_of(e), ValidationError);
}

TEST_CASE("validation accepts the standard families", "[gap_sequences]") {
  CHECK(validate(power_law(0.5), 1000000).ok());
  CHECK(validate(power_law(0.9), 1000000).ok());
  CHECK(validate(geometric(std::exp(-1.0)), 100000).ok());
  CHECK(validate(middle_third_blocks(), 1 << 20).ok());
}

TEST_CASE("parameter domains and index ranges", "[gap_sequences]") {
  CHECK_THROWS_AS(power_law(1.0), ParameterDomainError);
  CHECK_THROWS_AS(power_law(0.0), ParameterDomainError);
  CHECK_THROWS_AS(geometric(1.5), ParameterDomainError);
  CHECK_THROWS_AS(middle_third_blocks(0.5), ParameterDomainError);
  CHECK_THROWS_AS(power_law(0.5).term(0), OutOfRangeError);
  const auto e = explicit_terms({0.5, 0.25}, 0.25);
  CHECK_THROWS_AS(e.term(3), OutOfRangeError);
  CHECK(e.tail(3) == Approx(0.25));
  CHECK(e.tail(1) == Approx(1.0));
}

TEST_CASE("spec construction round trips family names", "[gap_sequences]") {
  for (auto f : {Family::power_law, Family::geometric, Family::middle_third_blocks, Family::explicit_list,
                 Family::example_a_first, Family::example_a_second, Family::halved_of, Family::synthesized}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  SequenceSpec spec;
  spec.family = Family::geometric;
  spec.params = {{"rho", 0.5}};
  CHECK(make_sequence(spec).term(3) == Approx(0.125));
  spec.family = Family::power_law;
  CHECK_THROWS_AS(make_sequence(spec), ParameterDomainError);
}
