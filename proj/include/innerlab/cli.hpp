#pragma once

// Command-line dispatch: set, measure, wepify, certify and report verbs.

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "inner_eval.hpp"
#include "json_io.hpp"
#include "measures.hpp"
#include "report.hpp"
#include "setlab.hpp"
#include "wepify.hpp"

namespace innerlab {

struct CliOptions {
  int depth = 12;
  std::vector<double> eps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::string out;
  std::string format = "json";

  // closed set
  std::string generator = "cantor";
  double ratio = 3.0;
  int generations = -1;
  std::uint64_t count = 1000;
  std::vector<double> points{0.0};
  int window_level = 0;
  std::uint64_t window_index = 0;
  int height = 4;
  std::string set_file;

  // measure
  std::string measure_file;
  std::string builder = "none";
  double mass = 1.0;
  double exponent = 0.5;
  int measure_depth = -1;

  // mass sequence
  std::string sequence = "inverse_square";
  double base = 0.5;
  std::size_t length = 0;
  std::vector<double> masses;
  std::vector<double> positions;

  // command specific
  std::string spec_file;
  std::string save_spec;
  std::string in_file;
  double threshold = 1e-6;
  double amplitude = 1.0;
  int arc_level = 0;
  std::uint64_t arc_index = 0;
  int q = 2;
  int gadget_n = -1;
  int gadget_m = -1;
  bool faithful = false;
  int groups = 3;
  double budget = 10.0;
  double porosity_floor = 0.01;
  double kl5_bound = 8.0;
  bool exact = false;
  int lattice = 2;
};

namespace cli_detail {

inline void add_common(CLI::App* c, CliOptions& o) {
  c->add_option("--depth", o.depth, "truncation depth N (dyadic levels 0..N)")->check(CLI::Range(0, 60));
  c->add_option("--out", o.out, "output path (default: stdout)");
  c->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

inline void add_set_source(CLI::App* c, CliOptions& o) {
  c->add_option("--generator", o.generator, "cantor, gap_sequence, points, subtree, full or empty")
      ->check(CLI::IsMember({"cantor", "gap_sequence", "points", "subtree", "full", "empty"}));
  c->add_option("--ratio", o.ratio, "Cantor dissection ratio (middle gap = 1/ratio)");
  c->add_option("--generations", o.generations, "Cantor generations (default: depth)");
  c->add_option("--count", o.count, "number of gaps for gap_sequence");
  c->add_option("--points", o.points, "points of a finite set, in turns");
  c->add_option("--window-level", o.window_level, "subtree window level");
  c->add_option("--window-index", o.window_index, "subtree window index");
  c->add_option("--height", o.height, "subtree height");
  c->add_option("--set", o.set_file, "CircleSet JSON file (overrides --generator)");
}

inline void add_measure_source(CLI::App* c, CliOptions& o) {
  c->add_option("--measure", o.measure_file, "measure JSON file (atoms list or a pos,mass report)");
  c->add_option("--builder", o.builder, "none, point, cantor, spread, uniform or endpoint")
      ->check(CLI::IsMember({"none", "point", "cantor", "spread", "uniform", "endpoint"}));
  c->add_option("--mass", o.mass, "total mass, or K for endpoint");
  c->add_option("--exponent", o.exponent, "spread modulus w(t) = t^exponent");
  c->add_option("--measure-depth", o.measure_depth, "discretization depth of the built measure (default: depth)");
}

inline void add_sequence(CLI::App* c, CliOptions& o) {
  c->add_option("--sequence", o.sequence, "geometric or inverse_square")
      ->check(CLI::IsMember({"geometric", "inverse_square"}));
  c->add_option("--base", o.base, "ratio of the geometric sequence");
  c->add_option("--length", o.length, "number of masses");
  c->add_option("--masses", o.masses, "explicit nonincreasing masses (overrides --sequence)");
  c->add_option("--positions", o.positions, "atom positions in turns (default 2^-s)");
}

inline void add_eps(CLI::App* c, CliOptions& o) { c->add_option("--eps", o.eps, "ε values in (0, 1)"); }

inline CircleSet make_set(const CliOptions& o) {
  if (!o.set_file.empty()) return circle_set_from_json(read_json_file(o.set_file));
  const int d = o.depth;
  if (o.generator == "cantor") return CircleSet::cantor(o.ratio, o.generations >= 0 ? o.generations : d, d);
  if (o.generator == "gap_sequence") return CircleSet::gap_sequence_klog2k(o.count, d);
  if (o.generator == "points") return CircleSet::finite_points(o.points, d);
  if (o.generator == "subtree") return CircleSet::subtree(DyadicArc(o.window_level, o.window_index), o.height, d);
  if (o.generator == "full") return CircleSet::full(d);
  return CircleSet::empty(d);
}

inline AtomicMeasure make_measure(const CliOptions& o) {
  if (!o.measure_file.empty()) {
    json j = read_json_file(o.measure_file);
    if (j.is_object() && j.contains("zeros") && j.contains("measure")) return measure_from_json(j.at("measure"));
    return measure_from_json(j);
  }
  const int md = o.measure_depth >= 0 ? o.measure_depth : o.depth;
  if (o.builder == "none") return AtomicMeasure{};
  if (o.builder == "point") return AtomicMeasure({{o.points.empty() ? 0.0 : o.points[0], o.mass}}, {"point", md});
  if (o.builder == "cantor") return build_cantor_measure(o.ratio, md).scaled(o.mass);
  if (o.builder == "spread") return build_spread_measure(ModulusFunction::power(o.exponent, md), md).measure.scaled(o.mass);
  if (o.builder == "uniform") return build_uniform_split(o.mass, md);
  return build_endpoint_measure(make_set(o), o.mass);
}

inline std::vector<double> make_sequence(const CliOptions& o) {
  if (!o.masses.empty()) return o.masses;
  std::size_t n = o.length;
  if (n == 0) n = o.sequence == "geometric" ? 40 : 4096;
  std::vector<double> b;
  for (std::size_t s = 1; s <= n; ++s) {
    double v = o.sequence == "geometric" ? std::pow(o.base, static_cast<double>(s)) : 1.0 / (static_cast<double>(s) * s);
    b.push_back(v);
  }
  return b;
}

inline std::vector<double> make_positions(const CliOptions& o, std::size_t n) {
  if (!o.positions.empty()) {
    if (o.positions.size() != n) throw std::invalid_argument("--positions must match the number of masses");
    return o.positions;
  }
  std::vector<double> x;
  for (std::size_t s = 1; s <= n; ++s) x.push_back(std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(s, 1000))));
  return x;
}

inline InnerSpec load_spec(const CliOptions& o) {
  if (o.spec_file.empty()) throw std::invalid_argument("--spec is required");
  return inner_spec_from_json(read_json_file(o.spec_file));
}

inline void add_level_rows(Report& r, const LevelSums& s) {
  r.columns = {"level", "partial_sum", "count"};
  for (std::size_t n = 0; n < s.partial.size(); ++n)
    r.add_row({static_cast<double>(n), s.partial[n], static_cast<double>(s.counts[n])});
  r.values["verdict"] = s.verdict.label;
  r.values["verdict_detail"] = s.verdict.describe();
  r.values["partial_sum"] = s.partial.empty() ? 0.0 : s.partial.back();
}

inline void measure_rows(Report& r, const AtomicMeasure& mu) {
  r.columns = {"pos", "mass"};
  for (const Atom& a : mu.atoms()) r.add_row({a.pos, a.mass});
  r.values["total_mass"] = mu.total_mass();
  r.values["atom_count"] = mu.size();
  r.values["builder"] = mu.meta().builder;
}

inline Report zeros_report(const WepifyResult& w, const AtomicMeasure& mu, const CliOptions& o) {
  Report r;
  r.kind = "wepify";
  r.columns = {"re", "im", "level", "index", "strip"};
  for (const Placement& p : w.placement_log)
    for (std::size_t i = p.first; i < p.first + p.count; ++i)
      r.add_row({w.zeros[i].re(), w.zeros[i].im(), static_cast<double>(p.arc.level), static_cast<double>(p.arc.index),
                 static_cast<double>(p.strip)});
  r.values["algorithm"] = w.algorithm;
  r.values["zero_count"] = w.zeros.size();
  r.values["blaschke_sum"] = w.blaschke_sum;
  r.values["placement_violations"] = placement_violations(w);
  json seq = json::object();
  for (const auto& [k, v] : w.sequences) seq[k] = v;
  r.values["sequences"] = seq;
  r.values["notes"] = w.notes;
  if (!o.save_spec.empty()) write_text_file(o.save_spec, to_json(w.combined(mu)).dump() + "\n");
  return r;
}

inline Report anti_report(const AntiWepable& a, const CliOptions& o) {
  Report r;
  r.kind = "anti_wepable";
  measure_rows(r, a.measure);
  json ws = json::array();
  for (const Witness& w : a.witnesses) ws.push_back(to_json(w));
  r.values["witnesses"] = ws;
  if (!o.save_spec.empty()) {
    InnerSpec s;
    s.measure = a.measure;
    s.meta["algorithm"] = "anti_wepable";
    write_text_file(o.save_spec, to_json(s).dump() + "\n");
  }
  return r;
}

inline Report family_report(const DyadicFamily& f, const char* kind) {
  Report r;
  r.kind = kind;
  r.columns = {"level", "index", "start", "length"};
  std::vector<DyadicArc> arcs = f.arcs;
  std::sort(arcs.begin(), arcs.end(),
            [](const DyadicArc& a, const DyadicArc& b) { return a.level != b.level ? a.level < b.level : a.index < b.index; });
  for (const DyadicArc& a : arcs)
    r.add_row({static_cast<double>(a.level), static_cast<double>(a.index), a.start(), a.length()});
  r.values["size"] = arcs.size();
  return r;
}

}  // namespace cli_detail

/// Runs one invocation. Exit codes: 0 success, 1 refusal or output failure, 2 usage or input error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CliOptions o;
  CLI::App app{"Inner-function laboratory: circle sets, measures, zero placement and WEP certificates", "innerlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::map<CLI::App*, std::function<Report()>> actions;
  std::map<CLI::App*, std::string> names;

  auto leaf = [&](CLI::App* parent, const char* name, const char* help, std::function<Report()> fn) {
    CLI::App* c = parent->add_subcommand(name, help);
    add_common(c, o);
    actions[c] = std::move(fn);
    names[c] = parent->get_name() + " " + name;
    return c;
  };

  // set
  CLI::App* set = app.add_subcommand("set", "closed subsets of the circle");
  set->require_subcommand(1);
  add_set_source(leaf(set, "entropy", "Σ |I| ln(1/|I|) over complementary arcs", [&] {
    auto res = entropy(make_set(o));
    Report r;
    r.kind = "entropy";
    r.columns = {"arcs", "partial_sum"};
    for (const auto& [k, v] : res.partial_sums) r.add_row({static_cast<double>(k), v});
    r.values["entropy"] = res.value;
    r.values["tail_bound"] = res.tail_bound;
    return r;
  }), o);
  add_set_source(leaf(set, "porosity", "porosity constant and hit ratio per depth", [&] {
    CircleSet e = make_set(o);
    Report r;
    r.kind = "porosity";
    r.columns = {"level", "porosity", "hit_ratio"};
    PorosityResult last;
    for (int n = 0; n <= o.depth; ++n) {
      last = porosity(e, n);
      r.add_row({static_cast<double>(n), last.constant, last.lempor_ratio});
    }
    r.values["porosity"] = last.constant;
    r.values["worst_arc"] = to_json(last.worst);
    r.values["hit_ratio"] = last.lempor_ratio;
    r.values["hit_ratio_arc"] = to_json(last.lempor_arc);
    return r;
  }), o);
  add_set_source(leaf(set, "hit-sums", "Σ |J| over dyadic J meeting E, per level", [&] {
    CircleSet e = make_set(o);
    Report r;
    r.kind = "hit_sums";
    add_level_rows(r, finish_level_sums(hit_counts(e, o.depth)));
    return r;
  }), o);
  add_set_source(leaf(set, "family-g", "maximal dyadic arcs whose double avoids E",
                      [&] { return family_report(maximal_family_G(make_set(o), o.depth), "family_g"); }), o);
  add_set_source(leaf(set, "family-f", "dyadic arcs meeting E whose double leaves every complementary arc",
                      [&] { return family_report(family_F(make_set(o), o.depth), "family_f"); }), o);

  // measure
  CLI::App* meas = app.add_subcommand("measure", "singular measures");
  meas->require_subcommand(1);
  leaf(meas, "spread", "measure of modulus w(t) = t^exponent", [&] {
    auto s = build_spread_measure(ModulusFunction::power(o.exponent, o.depth), o.depth);
    Report r;
    r.kind = "measure";
    measure_rows(r, s.measure);
    r.values["generations"] = s.generations;
    r.values["series_sum"] = s.series_sum;
    r.values["max_mass_over_modulus"] = 0.0;
    double worst = 0.0;
    for (int n = 0; n <= o.depth; ++n) worst = std::max(worst, dyadic_max_mass(s.measure, n) / std::exp2(-o.exponent * n));
    r.values["max_mass_over_modulus"] = worst;
    return r;
  })->add_option("--exponent", o.exponent, "w(t) = t^exponent");
  {
    CLI::App* c = leaf(meas, "endpoint", "K times the sum of |I| δ at both endpoints of each complementary arc", [&] {
      Report r;
      r.kind = "measure";
      measure_rows(r, build_endpoint_measure(make_set(o), o.mass));
      return r;
    });
    add_set_source(c, o);
    c->add_option("--mass", o.mass, "K");
  }
  {
    CLI::App* c = leaf(meas, "gadget", "atoms at the gadget slots of an arc", [&] {
      GadgetParams p = GadgetParams::desk(o.q);
      if (o.gadget_n >= 0) p.n = o.gadget_n;
      p.m = o.gadget_m >= 0 ? o.gadget_m : GadgetParams::sandwich_m(p.q, p.n);
      p.faithful = o.faithful;
      auto g = build_gadget(o.amplitude, DyadicArc(o.arc_level, o.arc_index), p);
      Report r;
      r.kind = "measure";
      measure_rows(r, g.measure);
      r.values["atom_mass"] = g.atom_mass;
      r.values["q"] = p.q;
      r.values["n"] = p.n;
      r.values["m"] = p.m;
      return r;
    });
    c->add_option("--amplitude", o.amplitude, "A");
    c->add_option("--level", o.arc_level, "level of the arc J");
    c->add_option("--index", o.arc_index, "index of the arc J");
    c->add_option("--q", o.q, "q");
    c->add_option("--n", o.gadget_n, "n (default q)");
    c->add_option("--m", o.gadget_m, "m (default: smallest m with q 2^2n < 2^m)");
    c->add_flag("--faithful", o.faithful, "require q >= A^2 and n = q^2");
  }
  add_sequence(leaf(meas, "kl5", "tail ratio Σ_{k>=s} b_k / b_s", [&] {
    auto b = make_sequence(o);
    auto t = tail_ratio_kl5(b);
    Report r;
    r.kind = "tail_ratio";
    r.columns = {"s", "mass", "tail_ratio"};
    for (std::size_t i = 0; i < b.size(); ++i) r.add_row({static_cast<double>(i + 1), b[i], t.ratios[i]});
    r.values["max_ratio"] = t.max_ratio;
    r.values["argmax"] = t.argmax + 1;
    return r;
  }), o);

  // wepify
  CLI::App* wep = app.add_subcommand("wepify", "zero placements");
  wep->require_subcommand(1);
  auto add_save = [&](CLI::App* c) { c->add_option("--save-spec", o.save_spec, "write zeros and measure as an InnerSpec JSON"); };
  {
    CLI::App* c = leaf(wep, "finite-entropy", "zeros for a measure supported on a finite-entropy set", [&] {
      CircleSet e = make_set(o);
      AtomicMeasure mu = make_measure(o);
      return zeros_report(wepify_finite_entropy(mu, e, o.depth, o.budget), mu, o);
    });
    add_set_source(c, o);
    add_measure_source(c, o);
    add_save(c);
    c->add_option("--budget", o.budget, "cap on the Blaschke sum of each placement family");
  }
  {
    CLI::App* c = leaf(wep, "porous", "zeros for a measure with porous support", [&] {
      AtomicMeasure mu = make_measure(o);
      return zeros_report(easy_wepify_porous(mu, o.depth, o.porosity_floor), mu, o);
    });
    add_set_source(c, o);
    add_measure_source(c, o);
    add_save(c);
    c->add_option("--porosity-floor", o.porosity_floor, "refuse below this porosity constant");
  }
  {
    CLI::App* c = leaf(wep, "atomic", "zeros for an atomic measure with the tail condition", [&] {
      auto b = make_sequence(o);
      auto x = make_positions(o, b.size());
      auto w = easy_wepify_atomic(b, x, o.depth, o.kl5_bound);
      std::vector<Atom> atoms;
      for (std::size_t i = 0; i < b.size(); ++i) atoms.push_back({x[i], b[i]});
      return zeros_report(w, AtomicMeasure(std::move(atoms), {"atomic", o.depth}), o);
    });
    add_sequence(c, o);
    add_save(c);
    c->add_option("--kl5-bound", o.kl5_bound, "largest admissible tail ratio");
  }
  {
    CLI::App* c = leaf(wep, "anti-atomic", "atomic measure no zero set can make WEP", [&] {
      return anti_report(anti_wepable_atomic(make_sequence(o), o.depth, o.groups, o.kl5_bound), o);
    });
    add_sequence(c, o);
    add_save(c);
    c->add_option("--groups", o.groups, "number of gadget groups");
    c->add_option("--kl5-bound", o.kl5_bound, "tail ratio the sequence must exceed");
  }
  {
    CLI::App* c = leaf(wep, "anti-nonporous", "measure on a non-porous set no zero set can make WEP", [&] {
      return anti_report(anti_wepable_nonporous(make_set(o), o.depth, o.groups), o);
    });
    add_set_source(c, o);
    add_save(c);
    c->add_option("--groups", o.groups, "number of gadget groups");
  }

  // certify
  CLI::App* cert = app.add_subcommand("certify", "sampled certificates");
  cert->require_subcommand(1);
  {
    CLI::App* c = leaf(cert, "eta", "sampled η(ε) profile of an inner function", [&] {
      auto p = eta_profile(load_spec(o), o.eps, o.depth, o.threshold, static_cast<std::size_t>(o.lattice));
      Report r;
      r.kind = "eta_profile";
      r.columns = {"eps", "eta_hat"};
      for (std::size_t i = 0; i < p.eps_grid.size(); ++i) r.add_row({p.eps_grid[i], p.eta_hat[i]});
      r.values["log_eta"] = p.log_eta;
      r.values["admissible"] = p.admissible;
      r.values["sample_count"] = p.sample_count;
      r.values["threshold"] = p.threshold;
      r.values["delta_tilde_hat"] = p.delta_tilde_hat ? json(*p.delta_tilde_hat) : json(nullptr);
      r.values["diagnostics"] = p.diagnostics;
      return r;
    });
    c->add_option("--spec", o.spec_file, "InnerSpec JSON")->required();
    add_eps(c, o);
    c->add_option("--threshold", o.threshold, "η level defining the reported ε threshold");
    c->add_option("--lattice", o.lattice, "sample points per T(J) besides z(J)");
  }
  {
    CLI::App* c = leaf(cert, "condition2", "Σ |J| over J with |I(z(J))| < ε, per level", [&] {
      if (o.eps.empty()) throw std::invalid_argument("--eps needs a value");
      Report r;
      r.kind = "condition2";
      add_level_rows(r, condition2_sums(load_spec(o), o.eps.front(), o.depth));
      r.columns = {"level", "partial_sum", "count"};
      r.values["eps"] = o.eps.front();
      return r;
    });
    c->add_option("--spec", o.spec_file, "InnerSpec JSON")->required();
    add_eps(c, o);
  }
  {
    CLI::App* c = leaf(cert, "lemma1-c", "Σ |J| over J with P[μ](z(J)) >= C, per level", [&] {
      Report r;
      r.kind = "poisson_hits";
      add_level_rows(r, carleson_hit_sum_lemma1c(make_measure(o), o.amplitude, o.depth));
      r.values["threshold"] = o.amplitude;
      return r;
    });
    add_set_source(c, o);
    add_measure_source(c, o);
    c->add_option("--threshold", o.amplitude, "C");
  }
  {
    CLI::App* c = leaf(cert, "lempor-c", "Σ |I||J|/|1 - conj(z(I)) z(J)|² over I with P[μ](z(I)) >= A", [&] {
      auto s = poisson_level_sum(make_measure(o), o.amplitude, DyadicArc(o.arc_level, o.arc_index), o.depth);
      Report r;
      r.kind = "bound_check";
      r.columns = {"sum", "family_size", "poisson_at_anchor", "constant"};
      r.add_row({s.sum, static_cast<double>(s.family_size), s.poisson_at_anchor, s.constant});
      r.values["constant"] = s.constant;
      return r;
    });
    add_set_source(c, o);
    add_measure_source(c, o);
    c->add_option("--amplitude", o.amplitude, "A");
    c->add_option("--level", o.arc_level, "level of J");
    c->add_option("--index", o.arc_index, "index of J");
  }
  {
    CLI::App* c = leaf(cert, "mainest", "placement sum against P[μ](z(J)) for the porous construction", [&] {
      AtomicMeasure mu = make_measure(o);
      auto w = easy_wepify_porous(mu, o.depth, o.porosity_floor);
      auto b = mainest_check(mu, w, o.depth);
      Report r;
      r.kind = "bound_check";
      r.columns = {"constant", "worst_level", "worst_index", "root_value"};
      r.add_row({b.constant, static_cast<double>(b.worst.level), static_cast<double>(b.worst.index), b.root_value});
      r.values["constant"] = b.constant;
      return r;
    });
    add_set_source(c, o);
    add_measure_source(c, o);
    c->add_option("--porosity-floor", o.porosity_floor, "refuse below this porosity constant");
  }
  {
    CLI::App* c = leaf(cert, "kl2", "Σ 2^-β φ(λ(I)) against max(λ(J), 1)", [&] {
      AtomicMeasure mu;
      if (!o.measure_file.empty() || o.builder != "none") {
        mu = make_measure(o);
      } else {
        auto b = make_sequence(o);
        auto x = make_positions(o, b.size());
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < b.size(); ++i) atoms.push_back({x[i], b[i]});
        mu = AtomicMeasure(std::move(atoms), {"atomic", o.depth});
      }
      auto k = kl2_check(mu, o.depth, o.exact);
      Report r;
      r.kind = "bound_check";
      r.columns = {"ratio", "worst_level", "worst_index", "worst_lhs", "worst_lambda"};
      r.add_row({k.ratio, static_cast<double>(k.worst.level), static_cast<double>(k.worst.index), k.worst_lhs, k.worst_lambda});
      r.values["constant"] = k.ratio;
      return r;
    });
    add_set_source(c, o);
    add_measure_source(c, o);
    add_sequence(c, o);
    c->add_flag("--exact", o.exact, "sum every pair instead of aggregating far blocks");
  }

  // report
  CLI::App* rep = app.add_subcommand("report", "re-export a saved JSON report");
  rep->add_option("--in", o.in_file, "report JSON")->required();
  rep->add_option("--out", o.out, "output path (default: stdout)");
  rep->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  actions[rep] = [&] { return report_from_json(read_json_file(o.in_file)); };
  names[rep] = "report";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [cmd, fn] : actions) {
      if (!cmd->parsed()) continue;
      Report r = fn();
      if (cmd != rep) {
        r.meta = {{"tool", "innerlab"},
                  {"version", kVersion},
                  {"command", names[cmd]},
                  {"depth", o.depth},
                  {"determinism", "no random numbers; identical arguments and inputs give identical output"}};
        r.meta["max_cells"] = max_cells();
      }
      std::string text = render(r, o.format);
      if (o.format == "csv") err << provenance_line(r);
      if (o.out.empty())
        out << text;
      else
        write_text_file(o.out, text);
      return 0;
    }
    err << "error: no command given\n";
    return 2;
  } catch (const Refusal& e) {
    err << "refused: " << e.what() << "\n";
    return 1;
  } catch (const std::length_error& e) {
    err << "refused: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace innerlab
