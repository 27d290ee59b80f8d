// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cantordim/cantordim.hpp"

using namespace cantordim;

namespace {

const double kMiddleDim = std::log(2.0) / std::log(3.0);
const PartitionCell kZero{MeasureClass::zero, MeasureClass::zero};
const PartitionCell kOne{MeasureClass::one, MeasureClass::one};
const PartitionCell kInf{MeasureClass::infinite, MeasureClass::infinite};

// Collects failed checks with a short description each.
struct Check {
  std::vector<std::string> failures;
  std::ostringstream info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want << " +- " << tol;
      failures.push_back(os.str());
    }
  }
};

int g_failed = 0;

void criterion(int id, const char* title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = c.failures.empty();
  if (!ok) ++g_failed;
  std::printf("[%s] criterion %d: %s (%.2f s)", ok ? "PASS" : "FAIL", id, title, secs);
  const auto info = c.info.str();
  if (!info.empty()) std::printf(" | %s", info.c_str());
  std::printf("\n");
  for (const auto& f : c.failures) std::printf("    - %s\n", f.c_str());
  std::fflush(stdout);
}

double slope_against_n(const EquivalenceVerdict& v) {
  std::vector<double> x, y;
  for (auto [n, lr] : v.samples) {
    x.push_back(static_cast<double>(n));
    y.push_back(lr);
  }
  return tail_slope(x, y);
}

std::string cell_name(const std::optional<PartitionCell>& c) { return c ? c->name() : "indeterminate"; }

}  // namespace

int main() {
  criterion(1, "middle-third dimensions and box counting", [](Check& c) {
    const auto d = dimensions(middle_third_blocks(), Index{1} << 20);
    c.near(d.dim_h, kMiddleDim, 1e-3, "dim_H");
    c.near(d.dim_p, kMiddleDim, 1e-3, "dim_P");
    const double box = box_dimension_oracle(build(middle_third_blocks(), 14));
    c.near(box, kMiddleDim, 0.02, "box dimension at k=14");
    c.info << "dims (" << d.dim_h << ", " << d.dim_p << "), box " << box;
  });

  criterion(2, "middle-third exact scaled values and cover sums", [](Check& c) {
    const auto a = middle_third_blocks();
    const auto h = power_gauge(kMiddleDim);
    double worst = 0.0;
    for (int k = 2; k <= 20; ++k) {
      const Index n = Index{1} << (k - 1);
      const double err = std::abs(std::expm1(std::log(static_cast<double>(n)) + h.log_value(a.log_scale(n))));
      worst = std::max(worst, err);
      c.expect(err <= 1e-9, "n h(b_n) at n = 2^" + std::to_string(k - 1));
    }
    const auto approx = build(a, 14);
    double worst_cover = 0.0;
    for (int g = 0; g <= 14; ++g) {
      const double e = std::abs(cover_sum(approx, h, g) - 1.0);
      worst_cover = std::max(worst_cover, e);
      c.expect(e <= 1e-9, "cover sum at depth " + std::to_string(g));
    }
    c.info << "max |n h(b_n) - 1| = " << worst << ", max |cover - 1| = " << worst_cover;
  });

  criterion(3, "power law s=1/2: dimensions and diagonal regimes", [](Check& c) {
    const auto a = power_law(0.5);
    const auto d = dimensions(a, 1000000);
    c.near(d.dim_h, 0.5, 1e-2, "dim_H");
    c.near(d.dim_p, 0.5, 1e-2, "dim_P");
    const PartitionCell want[] = {kInf, kOne, kZero};
    const double s[] = {0.4, 0.5, 0.6};
    c.info << "dims (" << d.dim_h << ", " << d.dim_p << "), cells";
    for (int i = 0; i < 3; ++i) {
      const auto r = classify(a, power_gauge(s[i]), 1000000, -1);
      c.info << " " << cell_name(r.cell);
      c.expect(r.cell == want[i], "cell for x^" + std::to_string(s[i]));
    }
  });

  criterion(4, "measure sandwich on regular fixtures", [](Check& c) {
    struct Fixture {
      GapSequence seq;
      DimensionFunction h;
      int depth;
      Index n;
    };
    const Fixture fixtures[] = {
        {middle_third_blocks(), power_gauge(kMiddleDim), 14, Index{1} << 20},
        {power_law(0.5), power_gauge(0.5), 16, 1000000},
        {power_law(1.0 / 3.0), power_gauge(1.0 / 3.0), 14, 1000000},
        {geometric(std::exp(-1.0)), logrec_gauge(1.0, 1.0), 10, 1000000},
        {sequence_from_function(power_gauge(0.7), 1000000), power_gauge(0.7), 14, 1000000},
    };
    int applicable = 0;
    for (const auto& f : fixtures) {
      const auto r = sandwich_check(f.seq, f.h, f.depth, f.n);
      if (r.cover_applicable || r.packing_applicable) ++applicable;
      c.expect(r.cover_applicable, f.seq.label() + ": cover side not applicable (" + r.note + ")");
      c.expect(r.ok(), f.seq.label() + " with " + f.h.label() + ": sums outside [L/4, 4U]");
    }
    c.info << applicable << " fixtures checked";
  });

  criterion(5, "four-condition crosscheck on the pair battery", [](Check& c) {
    struct Pair {
      GapSequence a, b;
      Condition want;
    };
    const Pair pairs[] = {
        {power_law(0.5), power_law(0.5), Condition::holds},
        {geometric(std::exp(-1.0)), geometric(std::exp(-2.0)), Condition::holds},
        {power_law(0.5), power_law(0.5, 2.0), Condition::holds},
        {example_a_first(), example_a_second(), Condition::holds},
        {power_law(0.5), halved_of(power_law(0.5)), Condition::holds},
        {power_law(0.5), power_law(1.0 / 3.0), Condition::refuted},
    };
    c.info << "verdicts";
    for (const auto& p : pairs) {
      const auto r = theorem_main_crosscheck(p.a, p.b);
      c.info << " " << condition_name(r.verdict());
      c.expect(r.consistent(), p.a.label() + " vs " + p.b.label() + ": conditions disagree");
      c.expect(r.verdict() == p.want, p.a.label() + " vs " + p.b.label() + ": wrong verdict");
    }
  });

  criterion(6, "halving dichotomy", [](Check& c) {
    const auto p = power_law(0.5);
    const auto tp = tail_equivalent(halved_of(p), p);
    c.expect(tp.holds(), "halved power law not tail equivalent");
    c.expect(tp.c2 <= 4.0 && tp.c1 >= 0.25, "halved power law ratio outside [1/4, 4]");
    const auto g = geometric(std::exp(-1.0));
    const auto hg = halved_of(g);
    const auto tg = tail_equivalent(hg, g);
    const double slope = slope_against_n(tg);
    c.expect(!tg.holds(), "halved geometric reported tail equivalent");
    c.near(slope, 0.5, 0.05, "log ratio slope against n");
    c.expect(weak_tail_equivalent(hg, g).holds(), "halved geometric not weak tail equivalent");
    c.info << "power ratio in [" << tp.c1 << ", " << tp.c2 << "], geometric slope " << slope;
  });

  criterion(7, "inverse doubling", [](Check& c) {
    for (double s : {0.3, 0.5, 0.7}) {
      const auto r = doubling_report(power_gauge(s), DoublingTarget::inverse);
      c.expect(r.holds(), "power inverse not doubling");
      c.near(r.tau_estimate, std::pow(2.0, -1.0 / s), 1e-9, "tau for s = " + std::to_string(s));
    }
    const auto l = doubling_report(logrec_gauge(1.0, 1.0), DoublingTarget::inverse);
    c.expect(!l.holds(), "logrec inverse reported doubling");
    // log of the ratio is 1/(2y): slope 1 against log(1/y)
    c.near(l.slope, 1.0, 0.05, "growth slope of log ratio");
    c.info << "logrec inverse slope " << l.slope;
  });

  criterion(8, "associated function recovery", [](Check& c) {
    const auto p = compare(associated_function(power_law(0.5), 100000), power_gauge(0.5));
    c.expect(p.equivalent(), "h_a for n^-2 not equivalent to x^(1/2)");
    const auto g = compare(associated_function(geometric(std::exp(-1.0)), 10000), logrec_gauge(1.0, 1.0));
    c.expect(g.equivalent(), "h_a for e^-n not equivalent to 1/|log x|");
    c.info << "constants " << p.f_le_h.constant << "/" << p.h_le_f.constant << ", " << g.f_le_h.constant << "/"
           << g.h_le_f.constant;
  });

  criterion(9, "synthesis round trips", [](Check& c) {
    for (double s : {0.3, 0.5, 0.7}) {
      const auto r = roundtrip_check(power_gauge(s));
      c.expect(r.cell == kOne, r.gauge_label + ": cell " + cell_name(r.cell));
      c.expect(r.associated_equivalent, r.gauge_label + ": associated gauge not equivalent");
      c.near(r.dims.dim_h, s, 1e-2, r.gauge_label + " dim_H");
      c.near(r.dims.dim_p, s, 1e-2, r.gauge_label + " dim_P");
      c.info << r.gauge_label << " (" << r.dims.dim_h << ", " << r.dims.dim_p << ") ";
    }
  });

  criterion(10, "ball mass, oracle monotonicity and alpha <= beta", [](Check& c) {
    const GapSequence fixtures[] = {middle_third_blocks(), power_law(0.5), geometric(std::exp(-1.0)),
                                    example_a_first(), halved_of(power_law(0.5))};
    const auto gauges = default_gauge_battery();
    int balls = 0, comparisons = 0, cells = 0;
    for (const auto& a : fixtures) {
      const auto approx = build(a, 10);
      const auto bm = five_interval_check(approx, 200, 0);
      balls += static_cast<int>(bm.samples.size());
      c.expect(bm.ok(), a.label() + ": ball mass bound violated");

      const int top = usable_depth(approx);
      const auto lens = approx.generation_lengths(top);
      double floor = approx.node(1).length;
      for (double l : lens) {
        if (l > 0.0) floor = std::min(floor, l);
      }
      for (const auto& f : gauges) {
        for (const auto& h : gauges) {
          // The constant must cover every length the sums evaluate, not
          // just a halving grid that can step over the peak of f/h.
          const double start = std::min({approx.node(1).length, f.domain_bound(), h.domain_bound()});
          std::vector<double> grid;
          for (double x = start; x >= floor / 2; x /= 2) grid.push_back(x);
          for (int g = 0; g <= top; ++g) {
            for (double l : approx.generation_lengths(g)) {
              if (l > 0.0 && l <= start) grid.push_back(l);
            }
          }
          std::sort(grid.begin(), grid.end(), std::greater<>());
          grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
          if (grid.size() < 3) continue;
          const auto ord = compare(f, h, grid);
          if (!ord.f_le_h.holds()) continue;
          const double k = ord.f_le_h.constant * (1.0 + 1e-12);
          for (int g = 0; g <= top; ++g) {
            const auto gl = approx.generation_lengths(g);
            if (*std::max_element(gl.begin(), gl.end()) > start) continue;
            const double delta = *std::max_element(gl.begin(), gl.end());
            ++comparisons;
            c.expect(cover_sum(approx, f, g) <= k * cover_sum(approx, h, g),
                     a.label() + ": cover order " + f.label() + " vs " + h.label());
            c.expect(packing_sum(approx, f, delta, g) <= k * packing_sum(approx, h, delta, g),
                     a.label() + ": packing order " + f.label() + " vs " + h.label());
          }
        }
      }

      for (const auto& r : battery(a, gauges, 1000000, -1).rows) {
        if (!r.cell) continue;
        ++cells;
        c.expect(r.cell->alpha <= r.cell->beta, a.label() + " with " + r.gauge_label + ": alpha > beta");
      }
    }
    c.info << balls << " balls, " << comparisons << " ordered oracle pairs, " << cells << " cells";
  });

  std::printf("%s: %d of 10 criteria failed\n", g_failed == 0 ? "OK" : "FAILED", g_failed);
  return g_failed == 0 ? 0 : 1;
}
