#pragma once

// Closed subsets of the circle described by their complementary open arcs,
// together with the dyadic scans used to study them: entropy, hit sums,
// porosity and the maximal families that drive the zero constructions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circle_core.hpp"
#include "refusal.hpp"

namespace innerlab {

enum class GeneratorKind { explicit_arcs, empty, cantor, gap_sequence, finite_points, subtree };

struct Generator {
  GeneratorKind kind = GeneratorKind::explicit_arcs;
  double ratio = 3.0;           // cantor
  int depth = 0;                // cantor generations / subtree height
  std::string rule;             // gap_sequence
  std::uint64_t count = 0;      // gap_sequence
  std::vector<double> points;   // finite_points
  DyadicArc window;             // subtree
};

inline std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::explicit_arcs: return "explicit";
    case GeneratorKind::empty: return "empty";
    case GeneratorKind::cantor: return "cantor";
    case GeneratorKind::gap_sequence: return "gap_sequence";
    case GeneratorKind::finite_points: return "finite_points";
    case GeneratorKind::subtree: return "subtree";
  }
  return "explicit";
}

/// A closed set E = circle \ (union of disjoint open arcs).
class CircleSet {
 public:
  /// E given directly by its complementary arcs.
  static CircleSet from_complement(std::vector<Arc> arcs, int depth) {
    CircleSet s;
    s.depth_ = depth;
    s.arcs_ = std::move(arcs);
    s.finalize();
    double e = s.measure();
    if (e <= 1e-12) {
      s.tail_ = 0.0;
    } else if (e <= 0.5) {
      s.tail_ = std::numeric_limits<double>::infinity();
    }
    return s;
  }

  static CircleSet full(int depth) { return from_complement({}, depth); }

  static CircleSet empty(int depth) {
    CircleSet s;
    s.depth_ = depth;
    s.empty_ = true;
    s.gen_.kind = GeneratorKind::empty;
    s.tail_ = 0.0;
    return s;
  }

  /// Finite set of circle points (turns).
  static CircleSet finite_points(std::vector<double> pts, int depth) {
    for (double& p : pts) p = wrap_turn(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) return empty(depth);
    std::vector<Arc> arcs;
    arcs.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) arcs.emplace_back(pts[i], pts[i + 1] - pts[i]);
    arcs.emplace_back(pts.back(), pts.front() + 1.0 - pts.back());
    CircleSet s = from_complement(std::move(arcs), depth);
    s.gen_.kind = GeneratorKind::finite_points;
    s.gen_.points = std::move(pts);
    s.tail_ = 0.0;
    return s;
  }

  /// Cantor set on [0, 1] (endpoints identified): each interval keeps its two
  /// outer pieces of relative length 1/ratio. `generations` gap levels are
  /// enumerated; the working depth is the dyadic depth of later scans.
  static CircleSet cantor(double ratio, int generations, int depth) {
    if (!(ratio > 2.0)) throw std::invalid_argument("cantor ratio must exceed 2");
    if (generations < 0 || generations > 24) throw std::invalid_argument("cantor generations out of range");
    std::vector<Arc> arcs;
    arcs.reserve((std::size_t{1} << generations));
    // in-order traversal emits gaps in increasing position
    auto rec = [&](auto&& self, double x, double len, int gen) -> void {
      if (gen > generations) return;
      double keep = len / ratio;
      self(self, x, keep, gen + 1);
      double a = x + keep, b = x + len - keep;  // b is the exact start of the right piece
      arcs.emplace_back(a, b - a);
      self(self, x + len - keep, keep, gen + 1);
    };
    rec(rec, 0.0, 1.0, 1);
    CircleSet s = from_complement(std::move(arcs), depth);
    s.gen_.kind = GeneratorKind::cantor;
    s.gen_.ratio = ratio;
    s.gen_.depth = generations;
    // gaps of generation n: 2^(n-1) of length ratio^-(n-1) (1 - 2/ratio)
    double tail = 0.0;
    for (int n = generations + 1; n < generations + 4000; ++n) {
      double g = std::pow(ratio, -(n - 1)) * (1.0 - 2.0 / ratio);
      double term = std::ldexp(1.0, n - 1) * g * std::log(1.0 / g);
      tail += term;
      if (term < 1e-18 * (tail + 1e-300)) break;
    }
    s.tail_ = tail;
    return s;
  }

  /// Contiguous gaps |I_k| = c / (k ln^2 k), k = 2 .. count+1, laid from 0,
  /// with c normalizing the infinite family to total length 1. The set is the
  /// gap endpoints plus the closed remainder arc. Its entropy is infinite.
  static CircleSet gap_sequence_klog2k(std::uint64_t count, int depth) {
    if (count == 0) throw std::invalid_argument("gap_sequence needs count >= 1");
    const double c = 1.0 / klog2k_total();
    std::vector<Arc> arcs;
    arcs.reserve(count);
    double x = 0.0;
    for (std::uint64_t k = 2; k < count + 2; ++k) {
      double kd = static_cast<double>(k);
      double len = c / (kd * std::log(kd) * std::log(kd));
      if (x + len >= 1.0) break;
      arcs.emplace_back(x, len);
      x += len;
    }
    CircleSet s = from_complement(std::move(arcs), depth);
    s.gen_.kind = GeneratorKind::gap_sequence;
    s.gen_.rule = "c/(k ln^2 k)";
    s.gen_.count = count;
    s.tail_ = std::numeric_limits<double>::infinity();
    return s;
  }

  /// Midpoints of every level-(J.level + height) subarc of J: a set meeting
  /// every arc of that level inside J, i.e. a non-porosity witness window.
  static CircleSet subtree(const DyadicArc& j, int height, int depth) {
    if (height < 0 || j.level + height > 40) throw std::invalid_argument("subtree height out of range");
    std::vector<double> pts;
    std::uint64_t n = std::uint64_t{1} << height;
    for (std::uint64_t i = 0; i < n; ++i) pts.push_back(DyadicArc(j.level + height, (j.index << height) + i).midpoint());
    CircleSet s = finite_points(std::move(pts), depth);
    s.gen_.kind = GeneratorKind::subtree;
    s.gen_.window = j;
    s.gen_.depth = height;
    return s;
  }

  static double klog2k_total() {
    static const double total = [] {
      double sum = 0.0;
      const std::uint64_t K = 2000000;
      for (std::uint64_t k = K; k >= 2; --k) {
        double kd = static_cast<double>(k);
        sum += 1.0 / (kd * std::log(kd) * std::log(kd));
      }
      // integral tail from K + 1/2
      return sum + 1.0 / std::log(static_cast<double>(K) + 0.5);
    }();
    return total;
  }

  const std::vector<Arc>& complement() const { return arcs_; }
  const Generator& generator() const { return gen_; }
  Generator& generator() { return gen_; }
  int depth() const { return depth_; }
  bool is_empty() const { return empty_; }
  /// Entropy contribution of gaps not enumerated; nullopt when unknown.
  std::optional<double> tail_bound() const { return tail_; }
  void set_tail_bound(std::optional<double> t) { tail_ = t; }

  /// Normalized length |E| at the enumerated resolution.
  double measure() const {
    if (empty_) return 0.0;
    double sum = 0.0;
    for (const Arc& a : arcs_) sum += a.length;
    return std::max(0.0, 1.0 - sum);
  }

  /// Index of the complementary arc whose interior holds t.
  std::optional<std::size_t> arc_containing(double t) const {
    if (arcs_.empty()) return std::nullopt;
    t = wrap_turn(t);
    auto it = std::lower_bound(starts_.begin(), starts_.end(), t);
    if (it != starts_.begin()) {
      auto i = static_cast<std::size_t>(it - starts_.begin()) - 1;
      if (arcs_[i].contains_open(t)) return i;
    }
    std::size_t last = arcs_.size() - 1;
    if (arcs_[last].contains_open(t)) return last;
    return std::nullopt;
  }

  bool contains_point(double t) const { return !empty_ && !arc_containing(t).has_value(); }

  /// Whether [a, a + len) (turns) lies inside the complement. len <= 1.
  bool covers_half_open(double a, double len) const {
    if (empty_) return true;
    if (len >= 1.0) return false;
    auto i = arc_containing(a);
    if (!i) return false;
    const Arc& arc = arcs_[*i];
    double offset = wrap_turn(a - arc.start);
    return offset + len <= arc.length;
  }

  /// Whether the closed arc [a, a + len] lies inside the complement.
  bool covers_closed(double a, double len) const {
    if (empty_) return true;
    if (len >= 1.0) return false;
    auto i = arc_containing(a);
    if (!i) return false;
    const Arc& arc = arcs_[*i];
    double offset = wrap_turn(a - arc.start);
    return offset + len < arc.length;
  }

  /// J meets E (half-open arc convention).
  bool meets(const DyadicArc& j) const { return !covers_half_open(j.start(), j.length()); }

  /// Length of the longest subarc of J \ E.
  double largest_gap(const DyadicArc& j) const {
    if (empty_) return j.length();
    if (j.level == 0) {
      double best = 0.0;
      for (const Arc& a : arcs_) best = std::max(best, a.length);
      return best;
    }
    if (arcs_.empty()) return 0.0;
    double a = j.start(), b = j.end();
    double best = 0.0;
    auto overlap = [&](double s, double e) { best = std::max(best, std::min(b, e) - std::max(a, s)); };
    auto it = std::lower_bound(starts_.begin(), starts_.end(), a);
    std::size_t i = static_cast<std::size_t>(it - starts_.begin());
    if (i > 0) --i;
    for (; i < arcs_.size() && arcs_[i].start < b; ++i) overlap(arcs_[i].start, arcs_[i].end());
    const Arc& last = arcs_.back();
    if (last.end() > 1.0) overlap(last.start - 1.0, last.end() - 1.0);
    return std::max(best, 0.0);
  }

  /// Whether J intersects the complement at all.
  bool touches_complement(const DyadicArc& j) const { return largest_gap(j) > 0.0; }

  /// 2J (closed, wrapped) disjoint from E; for levels 0 and 1 2J is the whole circle.
  bool double_avoids(const DyadicArc& j) const {
    if (empty_) return true;
    if (j.level <= 1) return false;
    double len = j.length();
    return covers_closed(j.midpoint() - len, 2.0 * len);
  }

 private:
  void finalize() {
    for (Arc& a : arcs_) a = Arc(a.start, a.length);
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
    double total = 0.0;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      total += arcs_[i].length;
      if (i + 1 < arcs_.size() && arcs_[i].end() > arcs_[i + 1].start + 1e-15)
        throw std::invalid_argument("complementary arcs overlap");
    }
    if (arcs_.size() > 1 && arcs_.back().end() > 1.0 + arcs_.front().start + 1e-15)
      throw std::invalid_argument("complementary arcs overlap across 0");
    if (total > 1.0 + 1e-12) throw std::invalid_argument("complementary arcs exceed the circle");
    starts_.resize(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) starts_[i] = arcs_[i].start;
    gen_.kind = GeneratorKind::explicit_arcs;
  }

  std::vector<Arc> arcs_;
  std::vector<double> starts_;
  Generator gen_;
  int depth_ = 0;
  bool empty_ = false;
  std::optional<double> tail_;
};

enum class FamilyKind { G_maximal, F_not_contained, hit_family, level_class };

inline std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::G_maximal: return "G_maximal";
    case FamilyKind::F_not_contained: return "F_not_contained";
    case FamilyKind::hit_family: return "hit_family";
    case FamilyKind::level_class: return "level_class";
  }
  return "hit_family";
}

struct DyadicFamily {
  FamilyKind kind = FamilyKind::hit_family;
  std::vector<DyadicArc> arcs;

  /// Σ |J| per level, index = level.
  std::vector<double> mass_by_level(int depth) const {
    std::vector<double> out(static_cast<std::size_t>(depth) + 1, 0.0);
    for (const auto& a : arcs)
      if (a.level <= depth) out[static_cast<std::size_t>(a.level)] += a.length();
    return out;
  }
};

struct EntropyResult {
  double value = 0.0;
  double tail_bound = 0.0;
  /// Running Σ |I_k| ln(1/|I_k|) in enumeration order, sampled at powers of two.
  std::vector<std::pair<std::size_t, double>> partial_sums;
};

/// Σ |I_k| ln(1/|I_k|) over the enumerated complementary arcs (natural log).
inline EntropyResult entropy(const CircleSet& e) {
  EntropyResult r;
  if (!e.tail_bound()) {
    if (e.measure() > 0.5) throw Refusal("entropy undefined at this depth: |E| = " + std::to_string(e.measure()));
    r.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    r.tail_bound = *e.tail_bound();
  }
  if (e.is_empty()) return r;
  std::size_t next = 1;
  std::size_t i = 0;
  for (const Arc& a : e.complement()) {
    if (a.length < 1.0) r.value += a.length * std::log(1.0 / a.length);
    if (++i == next) {
      r.partial_sums.emplace_back(i, r.value);
      next *= 2;
    }
  }
  if (r.partial_sums.empty() || r.partial_sums.back().first != i) r.partial_sums.emplace_back(i, r.value);
  return r;
}

/// Count of level-n arcs meeting E, for n = 0..depth (pruned tree walk).
inline std::vector<std::uint64_t> hit_counts(const CircleSet& e, int depth) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(depth) + 1, 0);
  std::uint64_t visited = 0;
  const std::uint64_t cap = max_cells();
  auto rec = [&](auto&& self, DyadicArc j) -> void {
    if (++visited > cap) throw std::length_error("hit scan exceeded INNERLAB_MAX_CELLS");
    if (!e.meets(j)) return;
    ++counts[static_cast<std::size_t>(j.level)];
    if (j.level < depth) {
      self(self, j.child(0));
      self(self, j.child(1));
    }
  };
  rec(rec, DyadicArc::root());
  return counts;
}

/// Partial sums S_n = Σ_{level <= n} 2^-level · #(level arcs meeting E).
inline std::vector<double> dyadic_hit_sum(const CircleSet& e, int depth) {
  auto counts = hit_counts(e, depth);
  std::vector<double> s(counts.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < counts.size(); ++n) {
    acc += std::ldexp(static_cast<double>(counts[n]), -static_cast<int>(n));
    s[n] = acc;
  }
  return s;
}

/// Asymptotic verdict on a nondecreasing partial-sum sequence.
struct SeriesVerdict {
  std::string label;            // "converges", "diverges" or "undetermined"
  double last_increment = 0.0;  // S_N - S_{N-1}
  double window_growth = 0.0;   // S_N - S_h, h = ceil(N/2)
  double level_ratio = 0.0;     // (increment(N) / peak increment)^(1/(N-peak)) over the upper half window
  double projected_tail = 0.0;  // geometric extrapolation of S_inf - S_N
  double tol = 1e-3;

  std::string describe() const {
    if (label == "converges") {
      if (last_increment < tol) return "converges (Cauchy at tol " + fmt(tol) + ", last increment " + fmt(last_increment) + ")";
      return "converges (geometric decay " + fmt(level_ratio) + " per level, projected tail " + fmt(projected_tail) + ")";
    }
    if (label == "diverges")
      return "diverges (slope >= " + fmt(window_growth) + " over the upper half window, decay " + fmt(level_ratio) +
             " per level)";
    return "undetermined (last increment " + fmt(last_increment) + ", decay " + fmt(level_ratio) + " per level)";
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }
};

/// Convergent when the last increment is below `tol` or increments decay
/// geometrically (per-level ratio <= `geometric`) from the peak of the upper half window.
/// Divergent when they decay slower than that and the upper half window still
/// adds at least `min_growth`.
inline SeriesVerdict classify_partial_sums(const std::vector<double>& s, double tol = 1e-3, double min_growth = 0.05,
                                           double geometric = 0.85) {
  SeriesVerdict v;
  v.tol = tol;
  const std::size_t n = s.size();
  if (n < 3) {
    v.label = "undetermined";
    return v;
  }
  std::size_t last = n - 1;
  std::size_t half = (last + 1) / 2;
  auto inc = [&](std::size_t i) { return i == 0 ? s[0] : s[i] - s[i - 1]; };
  v.last_increment = inc(last);
  v.window_growth = s[last] - s[half];
  // decay is measured from the largest increment of the upper half window, so
  // a series that only starts inside the window is not mistaken for a flat one
  std::size_t peak = half;
  for (std::size_t i = half; i < last; ++i)
    if (inc(i) > inc(peak)) peak = i;
  double base = inc(peak);
  if (base > 0.0 && v.last_increment > 0.0)
    v.level_ratio = std::min(1.0, std::pow(v.last_increment / base, 1.0 / static_cast<double>(last - peak)));
  else
    v.level_ratio = v.last_increment > 0.0 ? 1.0 : 0.0;
  v.projected_tail = v.level_ratio < 1.0 ? v.last_increment * v.level_ratio / (1.0 - v.level_ratio)
                                         : std::numeric_limits<double>::infinity();
  if (v.last_increment < tol || v.level_ratio <= geometric) {
    v.label = "converges";
  } else if (v.window_growth >= min_growth) {
    v.label = "diverges";
  } else {
    v.label = "undetermined";
  }
  return v;
}

struct PorosityResult {
  double constant = 1.0;       // C_N
  DyadicArc worst;             // arc realizing C_N
  double lempor_ratio = 0.0;   // max_J Σ_{I ⊂ J, I ∩ E ≠ ∅} |I| / |J|
  DyadicArc lempor_arc;
};

/// C_N = min over dyadic J (level <= N) of (longest subarc of J \ E) / |J|, and the
/// scale-invariant hit ratio max_J Σ_{I ⊂ J meeting E, level <= N} |I| / |J|.
inline PorosityResult porosity(const CircleSet& e, int depth) {
  PorosityResult r;
  std::uint64_t visited = 0;
  const std::uint64_t cap = max_cells();
  // returns Σ |I| over descendants (inclusive) meeting E
  auto rec = [&](auto&& self, DyadicArc j) -> double {
    if (++visited > cap) throw std::length_error("porosity scan exceeded INNERLAB_MAX_CELLS");
    if (!e.meets(j)) return 0.0;
    double c = e.largest_gap(j) / j.length();
    if (c < r.constant) {
      r.constant = c;
      r.worst = j;
    }
    double h = j.length();
    if (j.level < depth) h += self(self, j.child(0)) + self(self, j.child(1));
    double ratio = h / j.length();
    if (ratio > r.lempor_ratio) {
      r.lempor_ratio = ratio;
      r.lempor_arc = j;
    }
    return h;
  };
  rec(rec, DyadicArc::root());
  return r;
}

/// Non-porosity window: J and height M with every level-(J.level + M) subarc of J meeting E.
struct FullWindow {
  DyadicArc arc;
  int height = -1;
};

/// The window of greatest height within depth (ties: coarsest, then leftmost).
/// Arcs of level `min_level` or deeper only.
inline FullWindow find_full_window(const CircleSet& e, int depth, int min_level = 0) {
  FullWindow best;
  std::uint64_t visited = 0;
  const std::uint64_t cap = max_cells();
  auto rec = [&](auto&& self, DyadicArc j) -> int {
    if (++visited > cap) throw std::length_error("window scan exceeded INNERLAB_MAX_CELLS");
    if (!e.meets(j)) return -1;
    int h = 0;
    if (j.level < depth) {
      int a = self(self, j.child(0));
      int b = self(self, j.child(1));
      h = (a >= 0 && b >= 0) ? 1 + std::min(a, b) : 0;
    }
    if (j.level >= min_level) {
      bool better = h > best.height ||
                    (h == best.height && (j.level < best.arc.level ||
                                          (j.level == best.arc.level && j.index < best.arc.index)));
      if (better) best = {j, h};
    }
    return h;
  };
  rec(rec, DyadicArc::root());
  return best;
}

/// Maximal dyadic arcs J (level <= depth) whose closed double 2J avoids E.
inline DyadicFamily maximal_family_G(const CircleSet& e, int depth) {
  DyadicFamily fam{FamilyKind::G_maximal, {}};
  std::uint64_t visited = 0;
  const std::uint64_t cap = max_cells();
  auto rec = [&](auto&& self, DyadicArc j) -> void {
    if (++visited > cap) throw std::length_error("G scan exceeded INNERLAB_MAX_CELLS");
    if (e.double_avoids(j)) {
      fam.arcs.push_back(j);
      return;
    }
    if (j.level >= depth || !e.touches_complement(j)) return;
    self(self, j.child(0));
    self(self, j.child(1));
  };
  rec(rec, DyadicArc::root());
  std::sort(fam.arcs.begin(), fam.arcs.end());
  return fam;
}

/// Dyadic arcs (level <= depth) not contained in any member of G.
inline DyadicFamily family_F(const CircleSet& e, int depth) {
  DyadicFamily fam{FamilyKind::F_not_contained, {}};
  const std::uint64_t cap = max_cells();
  auto rec = [&](auto&& self, DyadicArc j) -> void {
    if (e.double_avoids(j)) return;
    fam.arcs.push_back(j);
    if (fam.arcs.size() > cap) throw std::length_error("F family exceeded INNERLAB_MAX_CELLS");
    if (j.level >= depth) return;
    self(self, j.child(0));
    self(self, j.child(1));
  };
  rec(rec, DyadicArc::root());
  std::sort(fam.arcs.begin(), fam.arcs.end());
  return fam;
}

/// Index of the complementary component holding the arc's midpoint.
inline std::optional<std::size_t> component_of(const CircleSet& e, const DyadicArc& j) {
  return e.arc_containing(j.midpoint());
}

}  // namespace innerlab
