#pragma once

// Zero-placement constructions that turn a singular inner function into a
// WEP product, the counterexample generators, and their bound checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "circle_core.hpp"
#include "inner_eval.hpp"
#include "measures.hpp"
#include "refusal.hpp"
#include "setlab.hpp"

namespace innerlab {

/// x on (0, 1], 1 + ln x beyond: increasing, subadditive, ~ ln x at infinity.
inline double phi(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("phi needs x > 0");
  return x <= 1.0 ? x : 1.0 + std::log(x);
}

/// Zeros placed in T(J) (strip == 0) or in the strip Ω_strip(J).
struct Placement {
  DyadicArc arc;
  int strip = 0;
  std::size_t first = 0;
  std::size_t count = 0;
};

struct WepifyResult {
  std::string algorithm;
  int depth = 0;
  std::vector<DiskPoint> zeros;
  std::vector<Placement> placement_log;
  std::map<std::string, std::vector<double>> sequences;
  double blaschke_sum = 0.0;
  std::vector<std::string> notes;

  InnerSpec combined(const AtomicMeasure& mu) const {
    InnerSpec s;
    s.zeros = zeros;
    s.measure = mu;
    s.meta["algorithm"] = algorithm;
    s.meta["depth"] = std::to_string(depth);
    return s;
  }
};

/// Bounds of 1 - |z| for the strip Ω_k(J): (2^{k-1}|J|², 2^k |J|²].
inline std::pair<double, double> strip_band(const DyadicArc& j, int k) {
  return {std::ldexp(1.0, k - 1 - 2 * j.level), std::ldexp(1.0, k - 2 * j.level)};
}

/// Number of zeros violating the region named by their placement entry.
inline std::size_t placement_violations(const WepifyResult& r) {
  std::size_t bad = 0;
  for (const Placement& p : r.placement_log) {
    for (std::size_t i = p.first; i < p.first + p.count; ++i) {
      const DiskPoint& z = r.zeros[i];
      if (p.strip == 0) {
        if (region_membership(z, p.arc) != Region::in_T) ++bad;
      } else {
        auto [lo, hi] = strip_band(p.arc, p.strip);
        double gap = 1.0 - z.abs();
        bool angle_ok = p.arc.level == 0 || p.arc.arc().contains_closed(z.turn());
        // relative slack for the rounding of 1 - |z|
        if (!(angle_ok && gap > lo * (1 - 1e-9) && gap <= hi * (1 + 1e-9))) ++bad;
      }
    }
  }
  return bad;
}

namespace detail {

inline void place(WepifyResult& r, const DyadicArc& j, int strip, std::vector<DiskPoint> pts) {
  if (pts.empty()) return;
  Placement p{j, strip, r.zeros.size(), pts.size()};
  r.zeros.insert(r.zeros.end(), pts.begin(), pts.end());
  r.placement_log.push_back(p);
}

inline void finish(WepifyResult& r) {
  r.blaschke_sum = 0.0;
  for (const DiskPoint& z : r.zeros) r.blaschke_sum += 1.0 - z.abs();
}

/// Largest cap K >= 1 with Σ min(v_i, K) w_i <= budget (K = 1 when even that overshoots).
inline long cap_for_budget(const std::vector<long>& v, const std::vector<double>& w, double budget) {
  long top = 1;
  for (long x : v) top = std::max(top, x);
  auto cost = [&](long k) {
    double c = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) c += static_cast<double>(std::min(v[i], k)) * w[i];
    return c;
  };
  long k = top;
  while (k > 1 && cost(k) > budget) --k;
  return k;
}

}  // namespace detail

/// Zeros for S_μ with supp μ inside a finite-entropy set E: k_j points in T(J)
/// for every J of level j not inside a maximal arc of G, and t_k 2^{M(J)-k}
/// points in each strip Ω_k(J) for J in G.
inline WepifyResult wepify_finite_entropy(const AtomicMeasure& mu, const CircleSet& e, int depth, double budget = 10.0) {
  if (depth < 0) throw std::invalid_argument("negative depth");
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  // the verdict uses at least depth 20 so that slow divergence is visible
  int verdict_depth = std::max(depth, 20);
  auto sums = dyadic_hit_sum(e, verdict_depth);
  auto verdict = classify_partial_sums(sums);
  if (verdict.label == "diverges")
    throw Refusal("set has infinite entropy: dyadic hit sums over arcs meeting E " + verdict.describe() +
                  ", S_" + std::to_string(verdict_depth) + " = " + std::to_string(sums.back()));
  for (const Atom& a : mu.atoms())
    if (!e.contains_point(a.pos)) throw Refusal("measure has an atom at " + std::to_string(a.pos) + " outside E");

  WepifyResult r;
  r.algorithm = "finite_entropy";
  r.depth = depth;
  r.notes.push_back("hit sums " + verdict.describe());

  auto fam_f = family_F(e, depth);
  auto fam_g = maximal_family_G(e, depth);
  const std::size_t levels = static_cast<std::size_t>(depth) + 1;

  // k_j from the tail masses of F
  std::vector<double> t_mass = fam_f.mass_by_level(depth);
  std::vector<long> kj(levels);
  double tail = 0.0;
  std::vector<double> r_tail(levels);
  for (std::size_t j = levels; j-- > 0;) r_tail[j] = (tail += t_mass[j]);
  for (std::size_t j = 0; j < levels; ++j) {
    double v = std::floor(std::log2(1.0 / (r_tail[j] + std::ldexp(1.0, -depth))));
    kj[j] = std::max(1L, std::min(static_cast<long>(j), static_cast<long>(v)));
  }
  long kcap = detail::cap_for_budget(kj, t_mass, budget);
  double cost_k = 0.0;
  for (std::size_t j = 0; j < levels; ++j) {
    kj[j] = std::min(kj[j], kcap);
    cost_k += static_cast<double>(kj[j]) * t_mass[j];
  }
  if (cost_k > budget) r.notes.push_back("k_j budget exceeded with k_j = 1: sum " + std::to_string(cost_k));

  // t_k from the G masses u_k = Σ_{M(J) >= k} |J|
  std::vector<double> u(levels, 0.0);
  for (const DyadicArc& j : fam_g.arcs)
    for (int k = 1; k <= j.level; ++k) u[static_cast<std::size_t>(k)] += j.length();
  std::vector<long> tk(levels, 0);
  double v_tail = 0.0;
  std::vector<double> v(levels);
  for (std::size_t k = levels; k-- > 0;) v[k] = (v_tail += u[k]);
  for (std::size_t k = 1; k < levels; ++k) {
    long cand = v[k] > 0.0 ? static_cast<long>(std::floor(1.0 / std::sqrt(v[k]))) : std::numeric_limits<long>::max() / 4;
    tk[k] = std::min(tk[k - 1] + 1, std::max(1L, cand));
  }
  {
    std::vector<long> tv(tk.begin() + 1, tk.end());
    std::vector<double> uw(u.begin() + 1, u.end());
    long tcap = tv.empty() ? 1 : detail::cap_for_budget(tv, uw, budget);
    for (std::size_t k = 1; k < levels; ++k) tk[k] = std::min(tk[k], tcap);
  }

  for (const DyadicArc& j : fam_f.arcs) {
    auto kcount = static_cast<std::size_t>(kj[static_cast<std::size_t>(j.level)]);
    detail::place(r, j, 0, uniform_points(j, kcount));
  }
  std::size_t truncated = 0;
  for (const DyadicArc& j : fam_g.arcs) {
    const int big_m = j.level;
    for (int k = 1; k <= big_m; ++k) {
      if (k < 2 * big_m - depth) {
        ++truncated;
        continue;
      }
      auto count = static_cast<std::size_t>(tk[static_cast<std::size_t>(k)]) << (big_m - k);
      auto [lo, hi] = strip_band(j, k);
      detail::place(r, j, k, sector_lattice(j.start(), j.length(), lo, hi, count));
    }
  }
  if (truncated > 0) r.notes.push_back(std::to_string(truncated) + " strips below 1-|z| = 2^-depth skipped");
  r.sequences["k_j"].assign(kj.begin(), kj.end());
  r.sequences["t_k"].assign(tk.begin(), tk.end());
  detail::finish(r);
  return r;
}

/// For J with u = P[μ](z(J)) > 1, ceil(sqrt(u)) - 1 points in T(J) (k² < u <= (k+1)²).
/// Requires the support of μ to be porous at the working depth.
inline WepifyResult easy_wepify_porous(const AtomicMeasure& mu, int depth, double porosity_floor = 0.01) {
  require_tree_budget(depth);
  if (!mu.empty()) {
    std::vector<double> pts;
    pts.reserve(mu.size());
    for (const Atom& a : mu.atoms()) pts.push_back(a.pos);
    auto support = CircleSet::finite_points(std::move(pts), depth);
    auto por = porosity(support, depth);
    if (por.constant < porosity_floor)
      throw Refusal("support is not porous at depth " + std::to_string(depth) + ": C_N = " + std::to_string(por.constant) +
                    " at arc (level " + std::to_string(por.worst.level) + ", index " + std::to_string(por.worst.index) + ")");
  }
  WepifyResult r;
  r.algorithm = "porous";
  r.depth = depth;
  auto lam = anchor_poisson(mu, depth);
  std::vector<double> classes;
  for (int n = 0; n <= depth; ++n) {
    const auto& row = lam[static_cast<std::size_t>(n)];
    for (std::uint64_t i = 0; i < row.size(); ++i) {
      double uval = row[i];
      if (!(uval > 1.0)) continue;
      auto k = static_cast<std::size_t>(std::ceil(std::sqrt(uval))) - 1;
      if (k == 0) k = 1;
      DyadicArc j(n, i);
      detail::place(r, j, 0, uniform_points(j, k));
      if (classes.size() < k + 1) classes.resize(k + 1, 0.0);
      classes[k] += 1.0;
    }
  }
  r.sequences["class_sizes"] = classes;
  detail::finish(r);
  return r;
}

/// For every J, floor(phi(λ(J))) points in T(J), λ(J) = P[μ](z(J)), μ = Σ b_s δ_{x_s}.
inline WepifyResult easy_wepify_atomic(const std::vector<double>& b, const std::vector<double>& positions, int depth,
                                       double kl5_bound = 8.0) {
  if (b.size() != positions.size()) throw std::invalid_argument("masses and positions differ in length");
  auto ratio = tail_ratio_kl5(b);
  if (ratio.max_ratio > kl5_bound)
    throw Refusal("tail ratio " + std::to_string(ratio.max_ratio) + " at s = " + std::to_string(ratio.argmax + 1) +
                  " exceeds " + std::to_string(kl5_bound) + "; the sequence fails the tail condition, use anti-atomic");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < b.size(); ++i) atoms.push_back({positions[i], b[i]});
  AtomicMeasure mu(std::move(atoms), {"atomic", depth});
  WepifyResult r;
  r.algorithm = "atomic";
  r.depth = depth;
  auto lam = anchor_poisson(mu, depth);
  std::vector<double> counts;
  for (int n = 0; n <= depth; ++n) {
    const auto& row = lam[static_cast<std::size_t>(n)];
    for (std::uint64_t i = 0; i < row.size(); ++i) {
      if (!(row[i] > 0.0)) continue;
      auto k = static_cast<std::size_t>(std::floor(phi(row[i])));
      if (k == 0) continue;
      DyadicArc j(n, i);
      detail::place(r, j, 0, uniform_points(j, k));
    }
  }
  r.sequences["tail_ratio"] = {ratio.max_ratio};
  detail::finish(r);
  return r;
}

struct BoundCheck {
  double constant = 0.0;
  DyadicArc worst;
  double root_value = 0.0;  // the ratio at the level-0 arc
};

/// max over J of [Σ_placements k |I||J| / |1 - conj(z(J)) z(I)|²] / P[μ](z(J)).
inline BoundCheck mainest_check(const AtomicMeasure& mu, const WepifyResult& result, int depth) {
  BoundCheck out;
  if (result.placement_log.empty()) return out;
  auto lam = anchor_poisson(mu, depth);
  std::vector<std::complex<double>> zi;
  std::vector<double> wi;
  for (const Placement& p : result.placement_log) {
    zi.push_back(z_of(p.arc).value());
    wi.push_back(static_cast<double>(p.count) * p.arc.length());
  }
  for (int n = 0; n <= depth; ++n) {
    const auto& row = lam[static_cast<std::size_t>(n)];
    double len = std::ldexp(1.0, -n);
    for (std::uint64_t k = 0; k < row.size(); ++k) {
      if (!(row[k] > 0.0)) continue;
      std::complex<double> zj = z_of(DyadicArc(n, k)).value();
      double s = 0.0;
      for (std::size_t i = 0; i < zi.size(); ++i) s += wi[i] / std::norm(1.0 - std::conj(zj) * zi[i]);
      double ratio = s * len / row[k];
      if (n == 0) out.root_value = ratio;
      if (ratio > out.constant) {
        out.constant = ratio;
        out.worst = DyadicArc(n, k);
      }
    }
  }
  return out;
}

namespace detail {

/// Per-level block sums of φ(λ) with weighted angle centroids, for far-field
/// aggregation of Σ_I (1 - ρ(z, z(I))) φ(λ(I)).
class LevelAggregate {
 public:
  LevelAggregate(const std::vector<double>& w, int level) : level_(level) {
    std::size_t n = w.size();
    sum_.assign(2 * n, 0.0);
    mom_.assign(2 * n, 0.0);
    n_ = n;
    for (std::size_t i = 0; i < n; ++i) {
      sum_[n + i] = w[i];
      mom_[n + i] = w[i] * DyadicArc(level, i).midpoint();
    }
    for (std::size_t i = n; i-- > 1;) {
      sum_[i] = sum_[2 * i] + sum_[2 * i + 1];
      mom_[i] = mom_[2 * i] + mom_[2 * i + 1];
    }
    gap_ = 0.75 * std::ldexp(1.0, -level);
  }

  double eval(const DiskPoint& z, double tau) const { return visit(1, 0, z, tau); }

 private:
  double visit(std::size_t node, int node_level, const DiskPoint& z, double tau) const {
    if (sum_[node] == 0.0) return 0.0;
    double width = std::ldexp(1.0, -node_level);
    std::size_t first = (node << (level_ - node_level)) - n_;
    double start = std::ldexp(static_cast<double>(first), -level_);
    if (node >= n_) return sum_[node] * (1.0 - rho(z, DiskPoint::polar(1.0 - gap_, start + 0.5 * width)));
    double off = wrap_turn(z.turn() - start);
    double dist = off < width ? 0.0 : std::min(off - width, 1.0 - off);
    double scale = std::max({dist, (1.0 - z.abs()) / kTwoPi, gap_ / kTwoPi});
    if (width <= tau * scale) {
      double c = mom_[node] / sum_[node];
      return sum_[node] * (1.0 - rho(z, DiskPoint::polar(1.0 - gap_, c)));
    }
    return visit(2 * node, node_level + 1, z, tau) + visit(2 * node + 1, node_level + 1, z, tau);
  }

  int level_;
  std::size_t n_;
  double gap_;
  std::vector<double> sum_, mom_;
};

}  // namespace detail

struct Kl2Check {
  double ratio = 0.0;
  DyadicArc worst;
  double worst_lhs = 0.0;
  double worst_lambda = 0.0;
};

/// max over J of Σ_{I ≠ J} 2^{-β(z(J), z(I))} φ(λ(I)) / max(λ(J), 1), all arcs of level <= depth.
/// `exact` sums every pair; otherwise far blocks are aggregated (relative error O(tau²)).
inline Kl2Check kl2_check(const AtomicMeasure& mu, int depth, bool exact = false, double tau = 0.125) {
  Kl2Check out;
  if (mu.empty()) return out;
  auto lam = anchor_poisson(mu, depth);
  std::vector<std::vector<double>> w(lam.size());
  for (std::size_t n = 0; n < lam.size(); ++n) {
    w[n].resize(lam[n].size());
    for (std::size_t k = 0; k < lam[n].size(); ++k) w[n][k] = lam[n][k] > 0.0 ? phi(lam[n][k]) : 0.0;
  }
  std::vector<detail::LevelAggregate> agg;
  if (!exact)
    for (std::size_t n = 0; n < w.size(); ++n) agg.emplace_back(w[n], static_cast<int>(n));
  std::vector<std::vector<DiskPoint>> anchors(lam.size());
  if (exact)
    for (std::size_t n = 0; n < lam.size(); ++n)
      for (std::size_t k = 0; k < lam[n].size(); ++k) anchors[n].push_back(z_of(DyadicArc(static_cast<int>(n), k)));
  for (std::size_t n = 0; n < lam.size(); ++n) {
    for (std::size_t k = 0; k < lam[n].size(); ++k) {
      DiskPoint zj = z_of(DyadicArc(static_cast<int>(n), k));
      double lhs = 0.0;
      for (std::size_t m = 0; m < lam.size(); ++m) {
        if (exact) {
          for (std::size_t i = 0; i < anchors[m].size(); ++i) lhs += (1.0 - rho(zj, anchors[m][i])) * w[m][i];
        } else {
          lhs += agg[m].eval(zj, tau);
        }
      }
      lhs -= w[n][k];  // the I = J term
      double ratio = lhs / std::max(lam[n][k], 1.0);
      if (ratio > out.ratio) {
        out.ratio = ratio;
        out.worst = DyadicArc(static_cast<int>(n), k);
        out.worst_lhs = lhs;
        out.worst_lambda = lam[n][k];
      }
    }
  }
  return out;
}

/// One gadget group of a counterexample, with its hitting-set certificate.
struct Witness {
  DyadicArc arc;
  int hitting_depth = 0;    // level of the gadget slots
  int q = 0;
  double amplitude = 0.0;   // A: the Poisson threshold that mandates a zero in T(I)
  std::size_t first_mass = 0;  // 1-based index of the first b_s used (atomic groups)
  double group_mass = 0.0;
  std::size_t family_size = 0;  // arcs I with P[μ_group](z(I)) >= A
  double log_b_bound = 0.0;     // log|B(z(J))| <= this for any Λ hitting every mandated T(I)
  double c = 0.0;               // -log_b_bound / q
  double poisson_at_anchor = 0.0;  // P[μ](z(J)) for the full measure
};

struct AntiWepable {
  AtomicMeasure measure;
  std::vector<Witness> witnesses;
};

namespace detail {

/// Lower bound for Σ_I ½ min_{w ∈ T(I)} kernel(z, w), sampled on ∂T(I) and halved for the sampling gap.
inline double hitting_bound(const std::vector<DyadicArc>& family, const DiskPoint& z) {
  double total = 0.0;
  const int side = 8;
  for (const DyadicArc& i : family) {
    double len = i.length();
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= side; ++s) {
      double f = static_cast<double>(s) / side;
      double t = i.start() + f * len;
      double g = 0.5 * len + f * 0.5 * len;
      for (const DiskPoint& w : {DiskPoint::polar(1.0 - 0.5 * len, t), DiskPoint::polar(1.0 - len, t),
                                 DiskPoint::polar(1.0 - g, i.start()), DiskPoint::polar(1.0 - g, i.end())})
        best = std::min(best, embedding_kernel(z, w));
    }
    total += 0.5 * best;
  }
  return 0.5 * total;
}

/// Arcs I inside J down to `max_level` with P[group](z(I)) >= a.
inline std::vector<DyadicArc> mandated_family(const AtomicMeasure& group, const DyadicArc& j, int max_level, double a) {
  std::vector<DyadicArc> fam;
  if (std::uint64_t{2} << (max_level - j.level) > max_cells())
    throw std::length_error("mandated family scan exceeds INNERLAB_MAX_CELLS");
  PoissonField field(group);
  for (int n = j.level; n <= max_level; ++n) {
    int h = n - j.level;
    std::uint64_t count = std::uint64_t{1} << h;
    for (std::uint64_t i = 0; i < count; ++i) {
      DyadicArc arc(n, (j.index << h) + i);
      if (field(z_of(arc)) >= a) fam.push_back(arc);
    }
  }
  return fam;
}

inline void certify(Witness& w, const AtomicMeasure& group) {
  auto fam = mandated_family(group, w.arc, w.hitting_depth, w.amplitude);
  w.family_size = fam.size();
  double bound = hitting_bound(fam, z_of(w.arc));
  w.log_b_bound = -bound;
  w.c = bound / static_cast<double>(w.q);
}

}  // namespace detail

/// The sequence start s with ((s + n)/s)² <= 2 used for b_s = 1/s²: s = ceil(n/(√2 - 1)).
inline std::size_t inverse_square_group_start(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) / (std::sqrt(2.0) - 1.0)));
}

/// Column exponent n of the atomic gadget groups: 2^{2n} masses per group.
inline constexpr int kAtomicGroupColumns = 2;

/// Counterexample for a mass sequence failing the tail condition: gadget groups
/// (q = 2^g, n = 2) of consecutive masses within a factor 2, placed in dyadic arcs
/// at 2^-(2g+1) accumulating at 0, with the remaining mass at 1/2.
inline AntiWepable anti_wepable_atomic(const std::vector<double>& b, int depth, int groups = 3, double kl5_bound = 8.0) {
  auto ratio = tail_ratio_kl5(b);
  if (ratio.max_ratio <= kl5_bound)
    throw Refusal("tail ratio " + std::to_string(ratio.max_ratio) + " stays below " + std::to_string(kl5_bound) +
                  " on this truncation; the tail condition holds");
  AntiWepable out;
  std::vector<Atom> atoms;
  std::vector<AtomicMeasure> parts;
  double used = 0.0, total = 0.0;
  for (double x : b) total += x;
  std::size_t next = 0;
  for (int g = 1; g <= groups; ++g) {
    const int q = 1 << g;
    GadgetParams p{q, kAtomicGroupColumns, GadgetParams::sandwich_m(q, kAtomicGroupColumns), false};
    std::size_t len = std::size_t{1} << (2 * p.n);
    if (len > max_cells()) break;
    std::size_t s = next;
    while (s + len <= b.size() && b[s] > 2.0 * b[s + len - 1]) ++s;
    if (s + len > b.size()) break;
    double bmax = b[s];
    int e = 2 * g + 1;
    int need = static_cast<int>(std::ceil(std::log2(20.0 / bmax))) - p.m;
    int k = std::max(e, need);
    if (k + p.m > depth) break;
    DyadicArc j(k, std::uint64_t{1} << (k - e));
    double a = bmax * std::ldexp(1.0, k + p.m) / 20.0;
    auto slots = gadget_slots(p);
    std::vector<Atom> group_atoms;
    double gm = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      group_atoms.push_back({DyadicArc(k + p.m, (j.index << p.m) + slots[i]).midpoint(), b[s + i]});
      gm += b[s + i];
    }
    atoms.insert(atoms.end(), group_atoms.begin(), group_atoms.end());
    parts.emplace_back(std::move(group_atoms), MeasureMeta{"gadget", k + p.m});
    used += gm;
    Witness w;
    w.arc = j;
    w.hitting_depth = k + p.m;
    w.q = p.q;
    w.amplitude = a;
    w.first_mass = s + 1;
    w.group_mass = gm;
    out.witnesses.push_back(w);
    next = s + len;
  }
  if (out.witnesses.empty()) throw Refusal("no gadget group fits within depth " + std::to_string(depth));
  if (total - used > 0.0) atoms.push_back({0.5, total - used});
  out.measure = AtomicMeasure(std::move(atoms), {"anti_atomic", depth});
  for (std::size_t i = 0; i < out.witnesses.size(); ++i) {
    detail::certify(out.witnesses[i], parts[i]);
    out.witnesses[i].poisson_at_anchor = poisson(out.measure, z_of(out.witnesses[i].arc));
  }
  return out;
}

/// Counterexample for a non-porous set: gadget groups (A = 1) with atoms on E,
/// inside a window J where every level-(J.level + M) subarc of J meets E.
inline AntiWepable anti_wepable_nonporous(const CircleSet& e, int depth, int groups = 3) {
  auto win = find_full_window(e, depth);
  if (win.height < 3)
    throw Refusal("set looks porous at depth " + std::to_string(depth) + ": tallest full window has height " +
                  std::to_string(win.height));
  AntiWepable out;
  std::vector<Atom> atoms;
  std::vector<AtomicMeasure> parts;
  const int floor_level = win.arc.level + win.height;
  for (int g = 1; g <= groups; ++g) {
    int rel = 2 * g - 1;
    int k = win.arc.level + rel;
    int q = 0;
    for (int cand = 1 << g; cand >= 1; cand /= 2)
      if (k + GadgetParams::desk(cand).m <= floor_level) {
        q = cand;
        break;
      }
    if (q == 0) break;
    GadgetParams p = GadgetParams::desk(q);
    DyadicArc j(k, (win.arc.index << rel) + 1);
    int level = k + p.m;
    double mass = 10.0 * std::ldexp(1.0, -level);
    std::vector<Atom> group_atoms;
    for (std::uint64_t s : gadget_slots(p)) {
      DyadicArc slot(level, (j.index << p.m) + s);
      double x = slot.start();
      if (!e.contains_point(x)) {
        auto i = e.arc_containing(x);
        x = e.complement()[*i].end();
        if (!(x < slot.end())) throw std::logic_error("window slot does not meet E");
      }
      group_atoms.push_back({x, mass});
    }
    atoms.insert(atoms.end(), group_atoms.begin(), group_atoms.end());
    parts.emplace_back(std::move(group_atoms), MeasureMeta{"gadget", level});
    Witness w;
    w.arc = j;
    w.hitting_depth = level;
    w.q = q;
    w.amplitude = 1.0;
    w.group_mass = parts.back().total_mass();
    out.witnesses.push_back(w);
  }
  if (out.witnesses.empty()) throw Refusal("no gadget fits inside the full window");
  out.measure = AtomicMeasure(std::move(atoms), {"anti_nonporous", depth});
  for (std::size_t i = 0; i < out.witnesses.size(); ++i) {
    detail::certify(out.witnesses[i], parts[i]);
    out.witnesses[i].poisson_at_anchor = poisson(out.measure, z_of(out.witnesses[i].arc));
  }
  return out;
}

}  // namespace innerlab
