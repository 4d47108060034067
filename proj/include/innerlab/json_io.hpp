#pragma once

// JSON encodings of the shared data types (nlohmann/json).

#include <json.hpp>

#include <string>
#include <vector>

#include "inner_eval.hpp"
#include "measures.hpp"
#include "setlab.hpp"
#include "wepify.hpp"

namespace innerlab {

using json = nlohmann::json;

inline json to_json(const DiskPoint& z) { return {{"re", z.re()}, {"im", z.im()}}; }
inline json to_json(const DyadicArc& j) { return {{"level", j.level}, {"index", j.index}}; }
inline json to_json(const Arc& a) { return {{"start", a.start}, {"length", a.length}}; }

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline double number_at(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw std::invalid_argument(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

inline DiskPoint disk_point_from_json(const json& j) {
  try {
    return DiskPoint(number_at(j, "re"), number_at(j, "im"));
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
}

inline DyadicArc dyadic_arc_from_json(const json& j) {
  double level = number_at(j, "level"), index = number_at(j, "index");
  if (level < 0 || level > 62 || index < 0) throw std::invalid_argument("dyadic arc out of range");
  return DyadicArc(static_cast<int>(level), static_cast<std::uint64_t>(index));
}

inline Arc arc_from_json(const json& j) { return Arc(number_at(j, "start"), number_at(j, "length")); }

inline json to_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back({{"pos", a.pos}, {"mass", a.mass}});
  return {{"atoms", atoms}, {"meta", {{"builder", mu.meta().builder}, {"depth", mu.meta().depth}}}};
}

/// Accepts the measure schema {"atoms": [...]} or a report whose columns start with pos, mass.
inline AtomicMeasure measure_from_json(const json& j) {
  std::vector<Atom> atoms;
  MeasureMeta meta;
  if (j.is_object() && j.contains("atoms")) {
    for (const json& a : require(j, "atoms")) atoms.push_back({number_at(a, "pos"), number_at(a, "mass")});
    if (j.contains("meta")) {
      const json& m = j.at("meta");
      if (m.contains("builder") && m.at("builder").is_string()) meta.builder = m.at("builder").get<std::string>();
      if (m.contains("depth") && m.at("depth").is_number()) meta.depth = m.at("depth").get<int>();
    }
  } else if (j.is_object() && j.contains("columns") && j.contains("rows")) {
    const json& cols = j.at("columns");
    if (cols.size() < 2 || cols[0] != "pos" || cols[1] != "mass")
      throw std::invalid_argument("report does not hold a measure (expected columns pos, mass)");
    for (const json& row : j.at("rows")) atoms.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
    meta.builder = "report";
  } else {
    throw std::invalid_argument("expected a measure object with an \"atoms\" list");
  }
  return AtomicMeasure(std::move(atoms), meta);
}

inline json to_json(const Generator& g) {
  json out = {{"kind", to_string(g.kind)}};
  switch (g.kind) {
    case GeneratorKind::cantor: out["ratio"] = g.ratio; out["depth"] = g.depth; break;
    case GeneratorKind::gap_sequence: out["rule"] = g.rule; out["count"] = g.count; break;
    case GeneratorKind::finite_points: out["points"] = g.points; break;
    case GeneratorKind::subtree: out["window"] = to_json(g.window); out["height"] = g.depth; break;
    default: break;
  }
  return out;
}

inline json to_json(const CircleSet& e) {
  json comp = json::array();
  for (const Arc& a : e.complement()) comp.push_back(to_json(a));
  return {{"generator", to_json(e.generator())}, {"complement", comp}, {"depth", e.depth()}};
}

/// Rebuilds generated sets from their descriptor; explicit sets from the complement list.
inline CircleSet circle_set_from_json(const json& j) {
  int depth = static_cast<int>(number_at(j, "depth"));
  std::string kind = "explicit";
  json gen = json::object();
  if (j.contains("generator")) {
    gen = j.at("generator");
    if (gen.contains("kind")) kind = gen.at("kind").get<std::string>();
  }
  if (kind == "empty") return CircleSet::empty(depth);
  if (kind == "cantor")
    return CircleSet::cantor(number_at(gen, "ratio"), static_cast<int>(number_at(gen, "depth")), depth);
  if (kind == "gap_sequence") return CircleSet::gap_sequence_klog2k(static_cast<std::uint64_t>(number_at(gen, "count")), depth);
  if (kind == "finite_points") return CircleSet::finite_points(require(gen, "points").get<std::vector<double>>(), depth);
  if (kind == "subtree")
    return CircleSet::subtree(dyadic_arc_from_json(require(gen, "window")), static_cast<int>(number_at(gen, "height")), depth);
  if (kind != "explicit") throw std::invalid_argument("unknown generator kind \"" + kind + "\"");
  std::vector<Arc> arcs;
  for (const json& a : require(j, "complement")) arcs.push_back(arc_from_json(a));
  return CircleSet::from_complement(std::move(arcs), depth);
}

inline json to_json(const DyadicFamily& f) {
  json arcs = json::array();
  for (const DyadicArc& a : f.arcs) arcs.push_back(to_json(a));
  return {{"kind", to_string(f.kind)}, {"arcs", arcs}};
}

inline json to_json(const InnerSpec& s) {
  json zeros = json::array();
  for (const DiskPoint& z : s.zeros) zeros.push_back(to_json(z));
  json meta = json::object();
  for (const auto& [k, v] : s.meta) meta[k] = v;
  return {{"zeros", zeros}, {"measure", to_json(s.measure)}, {"meta", meta}};
}

inline InnerSpec inner_spec_from_json(const json& j) {
  InnerSpec s;
  if (j.contains("zeros"))
    for (const json& z : j.at("zeros")) s.zeros.push_back(disk_point_from_json(z));
  if (j.contains("measure")) s.measure = measure_from_json(j.at("measure"));
  if (j.contains("meta"))
    for (const auto& [k, v] : j.at("meta").items()) s.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return s;
}

inline json to_json(const WepifyResult& r) {
  json zeros = json::array();
  for (const DiskPoint& z : r.zeros) zeros.push_back(to_json(z));
  json log = json::array();
  for (const Placement& p : r.placement_log)
    log.push_back({{"arc", to_json(p.arc)}, {"strip", p.strip}, {"first", p.first}, {"count", p.count}});
  json seq = json::object();
  for (const auto& [k, v] : r.sequences) seq[k] = v;
  return {{"zeros", zeros}, {"placement_log", log}, {"sequences", seq}, {"blaschke_sum", r.blaschke_sum}};
}

inline json to_json(const Witness& w) {
  return {{"arc", to_json(w.arc)},       {"hitting_depth", w.hitting_depth}, {"q", w.q},
          {"amplitude", w.amplitude},    {"first_mass", w.first_mass},       {"group_mass", w.group_mass},
          {"family_size", w.family_size}, {"log_b_bound", w.log_b_bound},    {"c", w.c},
          {"poisson_at_anchor", w.poisson_at_anchor}};
}

}  // namespace innerlab
