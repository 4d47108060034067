#pragma once

// Finite atomic measures on the circle, their Poisson integrals, and the
// measure builders (spread, endpoint, gadget, Cantor discretization).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "circle_core.hpp"
#include "refusal.hpp"
#include "setlab.hpp"

namespace innerlab {

struct Atom {
  double pos = 0.0;   // turns, [0, 1)
  double mass = 0.0;  // > 0
  friend bool operator==(const Atom& a, const Atom& b) { return a.pos == b.pos && a.mass == b.mass; }
};

struct MeasureMeta {
  std::string builder = "explicit";
  int depth = 0;
};

/// Positive measure with finitely many atoms, kept sorted by position with
/// duplicate positions merged.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms, MeasureMeta meta = {}) : atoms_(std::move(atoms)), meta_(std::move(meta)) {
    normalize();
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const MeasureMeta& meta() const { return meta_; }
  MeasureMeta& meta() { return meta_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

  /// μ([start, start + length)) with wrap-around.
  double mass_in(double start, double length) const {
    if (atoms_.empty()) return 0.0;
    if (length >= 1.0) return total_mass();
    double a = wrap_turn(start);
    double b = a + length;
    if (b <= 1.0) return mass_between(a, b);
    return mass_between(a, 1.0) + mass_between(0.0, b - 1.0);
  }
  double mass_in(const DyadicArc& j) const { return mass_between(j.start(), j.end()); }

  AtomicMeasure scaled(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("scale factor must be positive");
    std::vector<Atom> a = atoms_;
    for (Atom& x : a) x.mass *= t;
    return AtomicMeasure(std::move(a), meta_);
  }

  friend AtomicMeasure operator+(const AtomicMeasure& x, const AtomicMeasure& y) {
    std::vector<Atom> a = x.atoms_;
    a.insert(a.end(), y.atoms_.begin(), y.atoms_.end());
    MeasureMeta m{"sum", std::max(x.meta_.depth, y.meta_.depth)};
    return AtomicMeasure(std::move(a), m);
  }

 private:
  // μ([a, b)) for 0 <= a <= b <= 1
  double mass_between(double a, double b) const {
    auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), a, [](const Atom& x, double v) { return x.pos < v; });
    auto hi = std::lower_bound(atoms_.begin(), atoms_.end(), b, [](const Atom& x, double v) { return x.pos < v; });
    auto i = static_cast<std::size_t>(lo - atoms_.begin());
    auto j = static_cast<std::size_t>(hi - atoms_.begin());
    return (j == 0 ? 0.0 : prefix_[j - 1]) - (i == 0 ? 0.0 : prefix_[i - 1]);
  }

  void normalize() {
    for (Atom& a : atoms_) {
      if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw std::invalid_argument("atom masses must be positive and finite");
      if (!std::isfinite(a.pos)) throw std::invalid_argument("atom position must be finite");
      a.pos = wrap_turn(a.pos);
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.pos < y.pos; });
    std::vector<Atom> merged;
    merged.reserve(atoms_.size());
    for (const Atom& a : atoms_) {
      if (!merged.empty() && merged.back().pos == a.pos)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    atoms_ = std::move(merged);
    prefix_.resize(atoms_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) prefix_[i] = (acc += atoms_[i].mass);
  }

  std::vector<Atom> atoms_;
  std::vector<double> prefix_;
  MeasureMeta meta_;
};

/// Poisson kernel (1 - r^2) / |e^{2πix} - z|^2 for the boundary point at turn x.
inline double poisson_kernel(const DiskPoint& z, double x) {
  double r = z.abs();
  double s = std::sin(std::numbers::pi * turn_diff(x, z.turn()));
  double one_minus = 1.0 - r;
  return (one_minus * (1.0 + r)) / (one_minus * one_minus + 4.0 * r * s * s);
}

/// P[μ](z), summed atom by atom.
inline double poisson(const AtomicMeasure& mu, const DiskPoint& z) {
  double r = z.abs();
  double t = z.turn();
  double one_minus = 1.0 - r;
  double num = one_minus * (1.0 + r);
  double a = one_minus * one_minus;
  double b = 4.0 * r;
  double sum = 0.0;
  for (const Atom& atom : mu.atoms()) {
    double s = std::sin(std::numbers::pi * turn_diff(atom.pos, t));
    sum += atom.mass * num / (a + b * s * s);
  }
  return sum;
}

/// Fast approximate P[μ] for measures with many atoms: atoms are grouped in a
/// dyadic bin tree, and a bin that is narrow compared with its distance to z
/// (or with 1 - |z|) contributes through its mass, mean and variance.
/// Relative error is O(opening^3).
class PoissonField {
 public:
  explicit PoissonField(const AtomicMeasure& mu, double opening = 0.125, std::size_t leaf_size = 8)
      : atoms_(mu.atoms()), opening_(opening), leaf_(leaf_size) {
    if (!atoms_.empty()) build(0, 0, 0, atoms_.size());
  }

  double operator()(const DiskPoint& z) const {
    if (nodes_.empty()) return 0.0;
    Eval ev;
    ev.r = z.abs();
    ev.t = z.turn();
    ev.one_minus = 1.0 - ev.r;
    ev.num = ev.one_minus * (1.0 + ev.r);
    ev.a = ev.one_minus * ev.one_minus;
    ev.b = 4.0 * ev.r;
    ev.scale = ev.one_minus / kTwoPi;
    return visit(0, ev);
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    double start, width;
    double mass, mean, var;  // mean in turns (absolute), var = Σ m (x - mean)^2
    std::uint32_t first, last;
    std::int32_t left = -1, right = -1;
  };
  struct Eval {
    double r, t, one_minus, num, a, b, scale;
  };

  std::int32_t build(int level, std::uint64_t index, std::size_t lo, std::size_t hi) {
    Node n{};
    n.width = std::ldexp(1.0, -level);
    n.start = std::ldexp(static_cast<double>(index), -level);
    n.first = static_cast<std::uint32_t>(lo);
    n.last = static_cast<std::uint32_t>(hi);
    double m = 0.0, mx = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      m += atoms_[i].mass;
      mx += atoms_[i].mass * atoms_[i].pos;
    }
    n.mass = m;
    n.mean = mx / m;
    double v = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      double d = atoms_[i].pos - n.mean;
      v += atoms_[i].mass * d * d;
    }
    n.var = v;
    auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(n);
    if (hi - lo > leaf_ && level < 50) {
      double mid = n.start + 0.5 * n.width;
      auto split = static_cast<std::size_t>(
          std::lower_bound(atoms_.begin() + static_cast<std::ptrdiff_t>(lo), atoms_.begin() + static_cast<std::ptrdiff_t>(hi), mid,
                           [](const Atom& x, double v) { return x.pos < v; }) -
          atoms_.begin());
      std::int32_t l = -1, r = -1;
      if (split > lo) l = build(level + 1, 2 * index, lo, split);
      if (hi > split) r = build(level + 1, 2 * index + 1, split, hi);
      nodes_[static_cast<std::size_t>(id)].left = l;
      nodes_[static_cast<std::size_t>(id)].right = r;
    }
    return id;
  }

  double kernel(const Eval& ev, double x) const {
    double s = std::sin(std::numbers::pi * turn_diff(x, ev.t));
    return ev.num / (ev.a + ev.b * s * s);
  }

  double visit(std::int32_t id, const Eval& ev) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left < 0 && n.right < 0) {
      double sum = 0.0;
      for (std::uint32_t i = n.first; i < n.last; ++i) sum += atoms_[i].mass * kernel(ev, atoms_[i].pos);
      return sum;
    }
    double off = wrap_turn(ev.t - n.start);
    double dist = off < n.width ? 0.0 : std::min(off - n.width, 1.0 - off);
    if (n.width <= opening_ * std::max(ev.scale, dist)) {
      double x = turn_diff(n.mean, ev.t);
      double s = std::sin(std::numbers::pi * x);
      double d = ev.a + ev.b * s * s;
      double d1 = ev.b * std::numbers::pi * std::sin(kTwoPi * x);
      double d2 = 2.0 * std::numbers::pi * std::numbers::pi * ev.b * std::cos(kTwoPi * x);
      double k0 = ev.num / d;
      double k2 = ev.num * (2.0 * d1 * d1 - d * d2) / (d * d * d);
      return n.mass * k0 + 0.5 * k2 * n.var;
    }
    double sum = 0.0;
    if (n.left >= 0) sum += visit(n.left, ev);
    if (n.right >= 0) sum += visit(n.right, ev);
    return sum;
  }

  std::vector<Atom> atoms_;
  double opening_;
  std::size_t leaf_;
  std::vector<Node> nodes_;
};

/// sup over arcs of length 2^-n of μ(arc). Windows are half-open and start at
/// atom positions, which is where the supremum is attained.
inline double sup_modulus(const AtomicMeasure& mu, int n) {
  if (n < 0) throw std::invalid_argument("negative level");
  const auto& at = mu.atoms();
  if (at.empty()) return 0.0;
  double len = std::ldexp(1.0, -n);
  if (len >= 1.0) return mu.total_mass();
  std::size_t m = at.size();
  double best = 0.0, window = 0.0;
  std::size_t j = 0;  // exclusive end, in the doubled sequence
  for (std::size_t i = 0; i < m; ++i) {
    if (j < i) {
      j = i;
      window = 0.0;
    }
    auto pos = [&](std::size_t k) { return k < m ? at[k].pos : at[k - m].pos + 1.0; };
    while (j < i + m && pos(j) < at[i].pos + len) {
      window += at[j % m].mass;
      ++j;
    }
    best = std::max(best, window);
    window -= at[i].mass;
  }
  return best;
}

/// Largest μ(J) over dyadic J of level n.
inline double dyadic_max_mass(const AtomicMeasure& mu, int n) {
  double best = 0.0;
  DyadicArc cur(0, 0);
  bool have = false;
  double acc = 0.0;
  for (const Atom& a : mu.atoms()) {
    DyadicArc j = DyadicArc::containing(a.pos, n);
    if (have && j == cur) {
      acc += a.mass;
    } else {
      acc = a.mass;
      cur = j;
      have = true;
    }
    best = std::max(best, acc);
  }
  return best;
}

/// A modulus of continuity tabulated as values[n] = w(2^-n).
class ModulusFunction {
 public:
  explicit ModulusFunction(std::vector<double> values) : v_(std::move(values)) {
    if (v_.empty()) throw std::invalid_argument("modulus table is empty");
    for (std::size_t n = 0; n < v_.size(); ++n) {
      if (!(v_[n] > 0.0) || !std::isfinite(v_[n])) throw std::invalid_argument("modulus values must be positive");
      if (n > 0 && v_[n] > v_[n - 1]) throw std::invalid_argument("modulus must be nondecreasing in t");
      if (n > 0 && !(v_[n - 1] < 2.0 * v_[n]))
        throw std::invalid_argument("doubling constraint w(2t) < 2 w(t) fails at n = " + std::to_string(n));
    }
  }

  /// Tabulate w(2^-n) = 2^(-n * exponent) for n = 0..max_level.
  static ModulusFunction power(double exponent, int max_level) {
    std::vector<double> v;
    for (int n = 0; n <= max_level; ++n) v.push_back(std::exp2(-exponent * n));
    return ModulusFunction(std::move(v));
  }

  const std::vector<double>& values() const { return v_; }
  int max_level() const { return static_cast<int>(v_.size()) - 1; }
  double at_level(int n) const { return v_.at(static_cast<std::size_t>(n)); }

 private:
  std::vector<double> v_;
};

struct SpreadMeasure {
  AtomicMeasure measure;
  std::vector<int> generations;  // n_1 = 0 < n_2 < ...
  double series_sum = 0.0;       // Σ_{n <= table} 2^-n / w(2^-n)
};

/// Mass w(1) split in halves generation by generation: a generation-n_k arc of
/// positive mass hands its mass to the leftmost and rightmost generation-n_{k+1}
/// arcs inside it, where n_k is the first level with w(2^-n) < w(1) 2^{-k+1}.
/// Atoms sit at the midpoints of the last generation not deeper than `depth`.
inline SpreadMeasure build_spread_measure(const ModulusFunction& w, int depth) {
  if (depth < 0 || depth > 40) throw std::invalid_argument("spread depth out of range");
  const auto& v = w.values();
  const double w1 = v[0];
  // series check: partial sums of Σ 2^-n / w(2^-n) must stay below a slowly
  // growing envelope, otherwise the table is treated as divergent
  double partial = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    partial += std::ldexp(w1 / v[n], -static_cast<int>(n));
    double bound = 2.0 + 2.0 * std::log2(static_cast<double>(n) + 1.0);
    if (partial > bound)
      throw Refusal("series sum 2^-n / w(2^-n) looks divergent: partial sum " + std::to_string(partial) + " at n = " +
                    std::to_string(n) + " exceeds the bound " + std::to_string(bound));
  }
  SpreadMeasure out;
  out.series_sum = partial;
  out.generations.push_back(0);
  for (int k = 2;; ++k) {
    double target = w1 * std::ldexp(1.0, -k + 1);
    int nk = -1;
    for (int n = std::max(1, out.generations.back() + 1); n <= w.max_level(); ++n) {
      if (v[static_cast<std::size_t>(n)] < target) {
        nk = n;
        break;
      }
    }
    if (nk < 0 || nk > depth) break;
    out.generations.push_back(nk);
  }
  // arcs carrying mass at the current generation
  std::vector<std::uint64_t> cur{0};
  for (std::size_t g = 1; g < out.generations.size(); ++g) {
    int shift = out.generations[g] - out.generations[g - 1];
    std::uint64_t span = std::uint64_t{1} << shift;
    std::vector<std::uint64_t> next;
    next.reserve(cur.size() * 2);
    for (std::uint64_t idx : cur) {
      next.push_back(idx * span);
      next.push_back(idx * span + span - 1);
    }
    cur = std::move(next);
  }
  int level = out.generations.back();
  double mass = w1 / static_cast<double>(cur.size());
  std::vector<Atom> atoms;
  atoms.reserve(cur.size());
  for (std::uint64_t idx : cur) atoms.push_back({DyadicArc(level, idx).midpoint(), mass});
  out.measure = AtomicMeasure(std::move(atoms), {"spread", level});
  return out;
}

/// K |I_k| at both endpoints of every complementary arc I_k.
inline AtomicMeasure build_endpoint_measure(const CircleSet& e, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("endpoint weight K must be positive");
  if (e.is_empty() || e.complement().empty()) throw std::invalid_argument("endpoint measure needs a nonempty complement list");
  std::vector<Atom> atoms;
  atoms.reserve(2 * e.complement().size());
  for (const Arc& a : e.complement()) {
    atoms.push_back({a.start, k * a.length});
    atoms.push_back({a.end(), k * a.length});
  }
  return AtomicMeasure(std::move(atoms), {"endpoint", e.depth()});
}

/// Cantor measure of the given ratio discretized at generation `depth`: mass
/// 2^-depth at the left endpoint of every surviving interval.
inline AtomicMeasure build_cantor_measure(double ratio, int depth) {
  if (!(ratio > 2.0)) throw std::invalid_argument("cantor ratio must exceed 2");
  if (depth < 0 || depth > 24) throw std::invalid_argument("cantor depth out of range");
  std::vector<Atom> atoms;
  atoms.reserve(std::size_t{1} << depth);
  double mass = std::ldexp(1.0, -depth);
  auto rec = [&](auto&& self, double x, double len, int gen) -> void {
    if (gen == depth) {
      atoms.push_back({x, mass});
      return;
    }
    double keep = len / ratio;
    self(self, x, keep, gen + 1);
    self(self, x + len - keep, keep, gen + 1);
  };
  rec(rec, 0.0, 1.0, 0);
  return AtomicMeasure(std::move(atoms), {"cantor", depth});
}

/// 2^depth equal atoms of total mass `total` at the level-depth arc midpoints.
inline AtomicMeasure build_uniform_split(double total, int depth) {
  if (!(total > 0.0)) throw std::invalid_argument("total mass must be positive");
  if (depth < 0 || depth > 24) throw std::invalid_argument("uniform split depth out of range");
  std::uint64_t n = std::uint64_t{1} << depth;
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) atoms.push_back({DyadicArc(depth, i).midpoint(), total / static_cast<double>(n)});
  return AtomicMeasure(std::move(atoms), {"uniform_split", depth});
}

struct GadgetParams {
  int q = 2;
  int n = 2;
  int m = 6;
  bool faithful = false;

  /// Smallest m with q 2^{2n} < 2^m.
  static GadgetParams desk(int q) {
    GadgetParams p;
    p.q = q;
    p.n = q;
    p.m = sandwich_m(q, q);
    return p;
  }
  static int sandwich_m(int q, int n) {
    double v = static_cast<double>(q) * std::ldexp(1.0, 2 * n);
    int m = static_cast<int>(std::floor(std::log2(v))) + 1;
    return m;
  }
};

struct Gadget {
  AtomicMeasure measure;
  DyadicArc arc;
  GadgetParams params;
  std::vector<std::uint64_t> slots;  // indices s in Y
  double atom_mass = 0.0;
};

/// The index set Y = { j q 2^n + l : 0 <= j, l < 2^n }.
inline std::vector<std::uint64_t> gadget_slots(const GadgetParams& p) {
  std::vector<std::uint64_t> y;
  std::uint64_t side = std::uint64_t{1} << p.n;
  y.reserve(side * side);
  for (std::uint64_t j = 0; j < side; ++j)
    for (std::uint64_t l = 0; l < side; ++l) y.push_back(j * static_cast<std::uint64_t>(p.q) * side + l);
  return y;
}

inline void validate_gadget(double a, const DyadicArc& j, const GadgetParams& p) {
  if (!(a > 0.0)) throw std::invalid_argument("gadget amplitude A must be positive");
  if (p.q < 1 || p.n < 0 || p.m < 1 || p.m > 40) throw std::invalid_argument("gadget parameters out of range");
  double v = static_cast<double>(p.q) * std::ldexp(1.0, 2 * p.n);
  if (!(std::ldexp(1.0, p.m - 1) <= v && v < std::ldexp(1.0, p.m)))
    throw std::invalid_argument("gadget parameters violate 2^(m-1) <= q 2^(2n) < 2^m");
  if (p.faithful && (static_cast<double>(p.q) < a * a || p.n != p.q * p.q))
    throw std::invalid_argument("faithful gadget needs q >= A^2 and n = q^2");
  if (j.level + p.m > 52) throw std::length_error("gadget resolution exceeds double precision");
  if ((std::uint64_t{1} << (2 * p.n)) > max_cells()) throw std::length_error("gadget atom count exceeds INNERLAB_MAX_CELLS");
}

/// Atoms of mass 10 2^{-k-m} A at the midpoints of the level-(k+m) subarcs of J indexed by Y.
inline Gadget build_gadget(double a, const DyadicArc& j, const GadgetParams& p) {
  validate_gadget(a, j, p);
  Gadget g;
  g.arc = j;
  g.params = p;
  g.slots = gadget_slots(p);
  int level = j.level + p.m;
  g.atom_mass = 10.0 * std::ldexp(1.0, -level) * a;
  std::vector<Atom> atoms;
  atoms.reserve(g.slots.size());
  for (std::uint64_t s : g.slots) atoms.push_back({DyadicArc(level, (j.index << p.m) + s).midpoint(), g.atom_mass});
  g.measure = AtomicMeasure(std::move(atoms), {"gadget", level});
  return g;
}

struct TailRatio {
  double max_ratio = 0.0;
  std::size_t argmax = 0;      // 0-based position in the list
  std::vector<double> ratios;  // (Σ_{k>=s} b_k) / b_s
};

/// max_s (Σ_{k>=s} b_k) / b_s over a finite nonincreasing positive list.
inline TailRatio tail_ratio_kl5(const std::vector<double>& b) {
  if (b.empty()) throw std::invalid_argument("mass sequence is empty");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0) || !std::isfinite(b[i])) throw std::invalid_argument("masses must be positive and finite");
    if (i > 0 && b[i] > b[i - 1]) throw std::invalid_argument("mass sequence is not nonincreasing at s = " + std::to_string(i + 1));
  }
  TailRatio t;
  t.ratios.resize(b.size());
  double tail = 0.0;
  for (std::size_t i = b.size(); i-- > 0;) {
    tail += b[i];
    t.ratios[i] = tail / b[i];
  }
  for (std::size_t i = 0; i < b.size(); ++i)
    if (t.ratios[i] > t.max_ratio) {
      t.max_ratio = t.ratios[i];
      t.argmax = i;
    }
  return t;
}

}  // namespace innerlab
