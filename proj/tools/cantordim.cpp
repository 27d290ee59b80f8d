// cantordim: command line front end.
//
// Exit codes: 0 ok, 1 usage or input error, 2 validation failure
// (including infeasible synthesis), 3 indeterminate classification.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "report.hpp"

namespace {

using namespace cantordim;
using report::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIndeterminate = 3;

struct Options {
  std::string spec;
  std::string spec_b;
  std::string gauge;
  std::string gauges;
  std::string out;
  std::string dump;
  std::optional<Index> max_n;
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<Index> jmax;
  std::optional<Index> count;
  int samples = 200;
};

// Flags win over values from the spec file.
template <class T, class U>
T pick(const std::optional<T>& flag, const std::optional<U>& file, T fallback) {
  if (flag) return *flag;
  if (file) return static_cast<T>(*file);
  return fallback;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run_validate(const Options& o) {
  const auto spec = load_spec(o.spec);
  const auto seq = sequence_from_spec(spec);
  const Index n = std::min(pick<Index>(o.max_n, spec.max_n, kDefaultEquivalenceN), seq.max_index());
  const auto v = validate(seq, n);
  emit({{"command", "validate"}, {"sequence", report::sequence(seq)}, {"validation", report::validation(v)}});
  return v.ok() ? kExitOk : kExitInvalid;
}

int run_build(const Options& o) {
  const auto spec = load_spec(o.spec);
  const auto seq = sequence_from_spec(spec);
  const int depth = pick<int>(o.depth, spec.depth, 10);
  const auto seed = pick<std::uint64_t>(o.seed, spec.seed, 0);
  const auto approx = build(seq, depth);
  const auto lens = approx.generation_lengths(depth);
  double lmin = lens[0], lmax = lens[0], total = 0.0;
  for (double l : lens) {
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
    total += l;
  }
  const auto balls = five_interval_check(approx, o.samples, seed);
  if (!o.dump.empty()) {
    std::ofstream f(o.dump);
    if (!f) throw SpecParseError("cannot write " + o.dump);
    approx.write_csv(f);
  }
  emit({{"command", "build"},
        {"sequence", report::sequence(seq)},
        {"depth", depth},
        {"seed", seed},
        {"right_end", report::real(approx.right_end())},
        {"intervals", lens.size()},
        {"min_length", report::real(lmin)},
        {"max_length", report::real(lmax)},
        {"total_length", report::real(total)},
        {"ball_mass", {{"samples", balls.samples.size()}, {"violations", balls.violations}, {"ok", balls.ok()}}}});
  return kExitOk;
}

int run_dims(const Options& o) {
  const auto spec = load_spec(o.spec);
  const auto seq = sequence_from_spec(spec);
  const Index n = pick<Index>(o.max_n, spec.max_n, kDefaultClassifyN);
  emit({{"command", "dims"}, {"sequence", report::sequence(seq)}, {"max_n", report::index(n)},
        {"dims", report::dims(dimensions(seq, n))}});
  return kExitOk;
}

int run_classify(const Options& o) {
  const auto spec = load_spec(o.spec);
  const auto seq = sequence_from_spec(spec);
  const auto h = parse_gauge(o.gauge);
  const Index n = pick<Index>(o.max_n, spec.max_n, kDefaultClassifyN);
  const int depth = pick<int>(o.depth, spec.depth, kDefaultClassifyDepth);
  const auto r = classify(seq, h, n, depth);
  emit({{"command", "classify"}, {"classification", report::classification(r)}});
  return r.indeterminate() ? kExitIndeterminate : kExitOk;
}

int run_table(const Options& o) {
  const auto spec = load_spec(o.spec);
  const auto seq = sequence_from_spec(spec);
  const auto gauges = o.gauges.empty() ? default_gauge_battery() : parse_gauge_list(o.gauges);
  const Index n = pick<Index>(o.max_n, spec.max_n, kDefaultClassifyN);
  const int depth = pick<int>(o.depth, spec.depth, -1);
  const auto t = battery(seq, gauges, n, depth);
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back({{"gauge", r.gauge_label}, {"cell", report::cell(r.cell)}});
  Json grid = Json::array();
  std::istringstream lines(render_table(t));
  for (std::string line; std::getline(lines, line);) {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    grid.push_back(line);
  }
  emit({{"command", "table"},
        {"sequence", report::sequence(seq)},
        {"max_n", report::index(n)},
        {"rows", rows},
        {"grid", grid}});
  return kExitOk;
}

int run_compare(const Options& o) {
  const auto sa = load_spec(o.spec);
  const auto sb = load_spec(o.spec_b);
  const auto a = sequence_from_spec(sa);
  const auto b = sequence_from_spec(sb);
  const Index n = pick<Index>(o.max_n, sa.max_n, kDefaultEquivalenceN);
  const Index jmax = pick<Index>(o.jmax, sa.jmax, kDefaultJmax);
  const auto cross = theorem_main_crosscheck(a, b, default_gauge_battery(), n, jmax);
  emit({{"command", "compare"},
        {"a", report::sequence(a)},
        {"b", report::sequence(b)},
        {"max_n", report::index(n)},
        {"sequence", report::equivalence(sequence_equivalent(a, b, n))},
        {"tail", report::equivalence(tail_equivalent(a, b, n))},
        {"weak_tail", report::equivalence(cross.weak)},
        {"crosscheck", report::crosscheck(cross)}});
  return kExitOk;
}

// Writes <out> (spec) and <out stem>.terms next to it.
int run_synthesize(const Options& o) {
  const auto h = parse_gauge(o.gauge);
  const Index n = o.count.value_or(kDefaultSynthesisN);
  GapSequence seq = [&] {
    try {
      return sequence_from_function(h, n);
    } catch (const SynthesisInfeasibleError& e) {
      emit({{"command", "synthesize"}, {"gauge", h.label()}, {"count", report::index(n)}, {"feasible", false},
            {"first_bad_index", report::index(e.first_bad_index())}, {"reason", e.what()}});
      throw;
    }
  }();
  Json j = {{"command", "synthesize"},
            {"gauge", h.label()},
            {"count", report::index(n)},
            {"feasible", true},
            {"r_1", report::real(seq.tail(1))},
            {"a_1", report::real(seq.term(1))},
            {"a_N", report::real(seq.term(n))},
            {"tail_after", report::real(seq.tail(n + 1))}};
  if (!o.out.empty()) {
    const std::filesystem::path spec_path(o.out);
    auto terms_path = spec_path;
    terms_path.replace_extension(".terms");
    std::ofstream terms(terms_path);
    std::ofstream spec(spec_path);
    if (!terms || !spec) throw SpecParseError("cannot write " + spec_path.string());
    for (Index i = 1; i <= n; ++i) terms << full_precision(seq.term(i)) << "\n";
    spec << "# synthesized from " << h.label() << ", r_n = n h^{-1}(1/n) for n <= " << n << "\n"
         << "family = explicit\n"
         << "terms_file = " << terms_path.filename().string() << "\n"
         << "param.tail_after = " << full_precision(seq.tail(n + 1)) << "\n"
         << "max_n = " << n << "\n";
    j["spec"] = spec_path.string();
    j["terms"] = terms_path.string();
  }
  emit(j);
  return kExitOk;
}

int run_export(const Options& o) {
  const auto spec = load_spec(o.spec);
  const auto seq = sequence_from_spec(spec);
  const auto h = parse_gauge(o.gauge);
  const Index n = pick<Index>(o.max_n, spec.max_n, kDefaultEquivalenceN);
  if (o.out.empty()) {
    write_tail_csv(std::cout, seq, h, n);
  } else {
    std::ofstream f(o.out);
    if (!f) throw SpecParseError("cannot write " + o.out);
    write_tail_csv(f, seq, h, n);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cantor sets from gap sequences: dimensions, gauges and equivalences"};
  app.require_subcommand(1);
  Options o;

  auto add_spec = [&](CLI::App* c) { c->add_option("spec", o.spec, "sequence spec file")->required(); };
  auto add_max_n = [&](CLI::App* c) { c->add_option("--max-n", o.max_n, "probe bound N"); };

  auto* validate_cmd = app.add_subcommand("validate", "check a gap sequence");
  add_spec(validate_cmd);
  add_max_n(validate_cmd);

  auto* build_cmd = app.add_subcommand("build", "build the finite-depth Cantor approximation");
  add_spec(build_cmd);
  build_cmd->add_option("--depth", o.depth, "generation depth");
  build_cmd->add_option("--dump", o.dump, "write intervals as CSV");
  build_cmd->add_option("--seed", o.seed, "seed for ball mass sampling");
  build_cmd->add_option("--samples", o.samples, "ball mass samples")->check(CLI::PositiveNumber);

  auto* dims_cmd = app.add_subcommand("dims", "Hausdorff and packing dimension from tails");
  add_spec(dims_cmd);
  add_max_n(dims_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "partition cell of one gauge");
  add_spec(classify_cmd);
  classify_cmd->add_option("--gauge", o.gauge, "gauge spec")->required();
  classify_cmd->add_option("--depth", o.depth, "oracle depth, negative to skip");
  add_max_n(classify_cmd);

  auto* table_cmd = app.add_subcommand("table", "partition table over a gauge battery");
  add_spec(table_cmd);
  table_cmd->add_option("--gauges", o.gauges, "gauge list, comma separated");
  table_cmd->add_option("--depth", o.depth, "oracle depth, negative to skip");
  add_max_n(table_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "equivalences between two sequences");
  compare_cmd->add_option("a", o.spec, "first sequence spec")->required();
  compare_cmd->add_option("b", o.spec_b, "second sequence spec")->required();
  compare_cmd->add_option("--jmax", o.jmax, "largest multiplier for weak tail equivalence");
  add_max_n(compare_cmd);

  auto* synth_cmd = app.add_subcommand("synthesize", "gap sequence with a given associated gauge");
  synth_cmd->add_option("--gauge", o.gauge, "gauge spec")->required();
  synth_cmd->add_option("--count", o.count, "number of terms N");
  synth_cmd->add_option("--out", o.out, "spec file to write; terms go next to it");

  auto* export_cmd = app.add_subcommand("export", "CSV of tail functionals");
  add_spec(export_cmd);
  export_cmd->add_option("--gauge", o.gauge, "gauge spec")->required();
  export_cmd->add_option("--out", o.out, "output file (default stdout)");
  add_max_n(export_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return run_validate(o);
    if (*build_cmd) return run_build(o);
    if (*dims_cmd) return run_dims(o);
    if (*classify_cmd) return run_classify(o);
    if (*table_cmd) return run_table(o);
    if (*compare_cmd) return run_compare(o);
    if (*synth_cmd) return run_synthesize(o);
    if (*export_cmd) return run_export(o);
  } catch (const SynthesisInfeasibleError& e) {
    std::cerr << "cantordim: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "cantordim: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InsufficientDataError& e) {
    std::cerr << "cantordim: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const std::exception& e) {
    std::cerr << "cantordim: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
