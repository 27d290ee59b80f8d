#pragma once

// JSON views of the analysis results for the command line tool.
// Reals go through format_real (12 significant digits) before they are
// stored, so output is stable across runs; non-finite values become strings.

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "cantordim/cantordim.hpp"

namespace cantordim::report {

using Json = nlohmann::ordered_json;

inline Json real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(detail::format_real(x));
}

inline Json index(Index n) { return static_cast<std::uint64_t>(n); }

inline Json cell(const std::optional<PartitionCell>& c) {
  if (!c) return nullptr;
  return {{"alpha", std::string(measure_class_name(c->alpha))},
          {"beta", std::string(measure_class_name(c->beta))},
          {"name", c->name()},
          {"regular", c->regular()}};
}

inline Json sequence(const GapSequence& s) {
  Json params = Json::object();
  for (const auto& [k, v] : s.params()) params[k] = real(v);
  return {{"family", std::string(family_name(s.family()))}, {"label", s.label()}, {"params", params}};
}

inline Json validation(const ValidationReport& r) {
  Json fails = Json::array();
  for (const auto& f : r.failures) fails.push_back({{"n", index(f.index)}, {"reason", f.reason}});
  return {{"ok", r.ok()},
          {"checked_up_to", index(r.checked_up_to)},
          {"positive", r.positive_ok},
          {"monotone", r.monotone_ok},
          {"tail_consistent", r.tail_ok},
          {"tail_consistency_max_err", real(r.tail_consistency_max_err)},
          {"failures", fails}};
}

inline Json dims(const DimensionsEstimate& d) {
  return {{"dim_H", real(d.dim_h)},
          {"dim_P", real(d.dim_p)},
          {"window_inf", real(d.window_inf)},
          {"window_sup", real(d.window_sup)},
          {"window", {index(d.window_first), index(d.window_last)}},
          {"points", d.points},
          {"skipped", d.skipped}};
}

inline Json limits(const LimitEstimate& e) {
  return {{"liminf_class", std::string(class_name(e.liminf_class))},
          {"limsup_class", std::string(class_name(e.limsup_class))},
          {"window_inf", real(e.window_inf)},
          {"window_sup", real(e.window_sup)},
          {"slope_inf", real(e.slope_inf)},
          {"slope_sup", real(e.slope_sup)},
          {"trend_inf", std::string(trend_name(e.trend_inf))},
          {"trend_sup", std::string(trend_name(e.trend_sup))},
          {"points", e.grid.size()}};
}

inline Json sandwich(const SandwichReport& s) {
  Json j = {{"ok", s.ok()}, {"liminf", real(s.L)}, {"limsup", real(s.U)}};
  if (s.cover_applicable) {
    j["cover"] = {{"min", real(s.cover_min)}, {"bounds", {real(s.cover_lo), real(s.cover_hi)}}, {"ok", s.cover_ok}};
  }
  if (s.packing_applicable) {
    j["packing"] = {
        {"max", real(s.packing_max)}, {"bounds", {real(s.packing_lo), real(s.packing_hi)}}, {"ok", s.packing_ok}};
  }
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

inline Json classification(const ClassificationReport& r) {
  Json j = {{"sequence", r.sequence_label},
            {"gauge", r.gauge_label},
            {"probe_bound", index(r.probe_bound)},
            {"cell", cell(r.cell)},
            {"limits", limits(r.estimate)},
            {"skipped_scales", r.skipped_scales}};
  if (!r.oracles.empty()) {
    Json rows = Json::array();
    for (const auto& o : r.oracles) {
      rows.push_back({{"depth", o.depth}, {"delta", real(o.delta)}, {"cover", real(o.cover)},
                      {"packing", real(o.packing)}});
    }
    j["oracles"] = rows;
    j["sandwich"] = sandwich(r.sandwich);
  }
  return j;
}

inline Json direction(const DirectionReport& d) {
  return {{"holds", d.holds()},
          {"constant", real(d.constant)},
          {"slope", real(d.slope)},
          {"tail_slope", real(d.tail_slope)},
          {"trend", d.trend == OrderTrend::bounded ? "bounded" : "diverging"}};
}

inline Json order(const OrderReport& o) {
  return {{"equivalent", o.equivalent()},
          {"f_le_c_h", direction(o.f_le_h)},
          {"h_le_c_f", direction(o.h_le_f)},
          {"scale_floor", real(o.scale_floor)}};
}

inline Json equivalence(const EquivalenceVerdict& v) {
  Json j = {{"relation", std::string(relation_name(v.relation))},
            {"verdict", std::string(verdict_name(v.verdict))},
            {"probe_bound", index(v.probe_bound)}};
  if (v.relation == Relation::weak_tail) {
    j["jmax"] = index(v.jmax);
    j["j"] = v.j ? Json(index(*v.j)) : Json(nullptr);
    j["k"] = v.k ? Json(index(*v.k)) : Json(nullptr);
    j["j_violations"] = v.j_violations.size();
    j["k_violations"] = v.k_violations.size();
  } else {
    j["c1"] = real(v.c1);
    j["c2"] = real(v.c2);
    j["slope_upper"] = real(v.slope_upper);
    j["slope_lower"] = real(v.slope_lower);
  }
  if (v.counterexample) {
    j["counterexample"] = {{"n", index(v.counterexample->n)},
                           {"log_ratio", real(v.counterexample->log_ratio)},
                           {"direction", v.counterexample->direction}};
  }
  return j;
}

inline Json crosscheck(const CrosscheckReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) cells.push_back({{"gauge", c.gauge}, {"a", cell(c.cell_a)}, {"b", cell(c.cell_b)}});
  return {{"verdict", std::string(condition_name(r.verdict()))},
          {"consistent", r.consistent()},
          {"associated_equivalent", std::string(condition_name(r.associated_equivalent))},
          {"regular_sets_agree", std::string(condition_name(r.regular_sets_agree))},
          {"cells_agree", std::string(condition_name(r.cells_agree))},
          {"weak_tail", std::string(condition_name(r.weak_tail))},
          {"associated_order", order(r.associated_order)},
          {"cells", cells}};
}

inline Json roundtrip(const RoundtripReport& r) {
  return {{"gauge", r.gauge_label},
          {"probe_bound", index(r.probe_bound)},
          {"ok", r.ok()},
          {"cell", cell(r.cell)},
          {"associated_equivalent", r.associated_equivalent},
          {"identity_error", real(r.identity_error)},
          {"dims", dims(r.dims)}};
}

}  // namespace cantordim::report
