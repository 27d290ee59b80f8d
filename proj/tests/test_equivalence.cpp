#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cantordim/equivalence.hpp"

using namespace cantordim;
using Catch::Approx;

namespace {
double slope_against_n(const EquivalenceVerdict& v) {
  std::vector<double> x, y;
  for (auto [n, lr] : v.samples) {
    x.push_back(static_cast<double>(n));
    y.push_back(lr);
  }
  return tail_slope(x, y);
}
}  // namespace

TEST_CASE("scalar multiples are sequence equivalent", "[equivalence]") {
  const auto a = power_law(0.5);
  const auto b = power_law(0.5, 3.0);
  const auto v = sequence_equivalent(a, b);
  CHECK(v.holds());
  CHECK(v.c1 == Approx(1.0 / 3.0));
  CHECK(v.c2 == Approx(1.0 / 3.0));
  CHECK_FALSE(v.counterexample.has_value());
}

TEST_CASE("example (a) pair: tail but not sequence equivalent", "[equivalence]") {
  const auto a = example_a_first();
  const auto b = example_a_second();
  const auto s = sequence_equivalent(a, b, 10000);
  CHECK_FALSE(s.holds());
  REQUIRE(s.counterexample.has_value());
  CHECK(s.counterexample->n == 35);
  CHECK(s.c2 == Approx(std::ldexp(1.0, 35)));
  const auto t = tail_equivalent(a, b, 10000);
  CHECK(t.holds());
  CHECK(t.c1 > 0.0);
  CHECK(t.c2 < 10.0);
}

TEST_CASE("geometric pair: weak tail but not tail equivalent", "[equivalence]") {
  const auto a = geometric(std::exp(-1.0));
  const auto b = geometric(std::exp(-2.0));
  const auto s = sequence_equivalent(a, b);
  CHECK_FALSE(s.holds());
  CHECK(slope_against_n(s) == Approx(1.0).epsilon(1e-6));
  const auto t = tail_equivalent(a, b);
  CHECK_FALSE(t.holds());
  CHECK(t.counterexample.has_value());
  const auto w = weak_tail_equivalent(a, b);
  CHECK(w.holds());
  CHECK(w.j == Index{1});
  CHECK(w.k == Index{2});
  REQUIRE(w.k_violations.size() == 1);
  CHECK(w.k_violations[0].multiplier == 1);
}

TEST_CASE("weak tail equivalence edge cases", "[equivalence]") {
  const auto a = power_law(0.5);
  const auto self = weak_tail_equivalent(a, a);
  CHECK(self.holds());
  CHECK(self.j == Index{1});
  CHECK(self.k == Index{1});

  const auto w = weak_tail_equivalent(a, power_law(1.0 / 3.0));
  CHECK_FALSE(w.holds());
  CHECK_FALSE(w.k.has_value());
  CHECK(w.k_violations.size() == 64);
  CHECK(w.counterexample.has_value());
  CHECK_THROWS_AS(weak_tail_equivalent(a, a, 100, 0), ParameterDomainError);
}

TEST_CASE("halving dichotomy", "[equivalence]") {
  const auto p = power_law(0.5);
  const auto hp = halved_of(p);
  const auto tp = tail_equivalent(hp, p);
  CHECK(tp.holds());
  CHECK(tp.c2 <= 4.0);
  CHECK(tp.c1 >= 0.25);

  const auto g = geometric(std::exp(-1.0));
  const auto hg = halved_of(g);
  const auto tg = tail_equivalent(hg, g);
  CHECK_FALSE(tg.holds());
  // r^b_n / r^a_n ~ e^{n/2}
  CHECK(slope_against_n(tg) == Approx(0.5).epsilon(0.1));
  CHECK(weak_tail_equivalent(hg, g).holds());
}

TEST_CASE("implication chain on the pair battery", "[equivalence]") {
  const std::vector<std::pair<GapSequence, GapSequence>> pairs = {
      {power_law(0.5), power_law(0.5, 2.0)},
      {geometric(std::exp(-1.0)), geometric(std::exp(-2.0))},
      {example_a_first(), example_a_second()},
      {power_law(0.5), halved_of(power_law(0.5))},
      {power_law(0.5), power_law(1.0 / 3.0)},
      {geometric(std::exp(-1.0)), halved_of(geometric(std::exp(-1.0)))}};
  for (const auto& [a, b] : pairs) {
    INFO(a.label() << " vs " << b.label());
    const bool s = sequence_equivalent(a, b, 20000).holds();
    const bool t = tail_equivalent(a, b, 20000).holds();
    const bool w = weak_tail_equivalent(a, b, 20000).holds();
    if (s) CHECK(t);
    if (t) CHECK(w);
  }
}

TEST_CASE("four conditions agree", "[equivalence]") {
  struct Case {
    GapSequence a, b;
    Condition expected;
  };
  const Case cases[] = {
      {power_law(0.5), power_law(0.5), Condition::holds},
      {geometric(std::exp(-1.0)), geometric(std::exp(-2.0)), Condition::holds},
      {power_law(0.5), power_law(0.5, 2.0), Condition::holds},
      {example_a_first(), example_a_second(), Condition::holds},
      {power_law(0.5), halved_of(power_law(0.5)), Condition::holds},
      {power_law(0.5), power_law(1.0 / 3.0), Condition::refuted},
  };
  for (const auto& c : cases) {
    INFO(c.a.label() << " vs " << c.b.label());
    const auto r = theorem_main_crosscheck(c.a, c.b);
    CHECK(r.consistent());
    CHECK(r.verdict() == c.expected);
  }
}

TEST_CASE("equivalent associated gauges give matching dimensions", "[equivalence]") {
  const auto a = power_law(0.5);
  const auto b = halved_of(a);
  REQUIRE(compare(associated_function(a, 100000), associated_function(b, 100000)).equivalent());
  const auto da = dimensions(a, 1000000);
  const auto db = dimensions(b, 1000000);
  CHECK(std::abs(da.dim_h - db.dim_h) <= 2e-2);
  CHECK(std::abs(da.dim_p - db.dim_p) <= 2e-2);
}
