#pragma once

// Log-modulus evaluation of I = B_Λ S_μ and the sampled WEP diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circle_core.hpp"
#include "measures.hpp"
#include "setlab.hpp"

namespace innerlab {

struct InnerSpec {
  std::vector<DiskPoint> zeros;
  AtomicMeasure measure;
  std::map<std::string, std::string> meta;

  double blaschke_sum() const {
    double s = 0.0;
    for (const DiskPoint& z : zeros) s += 1.0 - z.abs();
    return s;
  }
};

/// ln ρ(z, w), accurate when ρ is close to 1 (far-away zeros).
inline double log_rho(const DiskPoint& z, const DiskPoint& w) {
  double d2 = std::norm(z.value() - w.value());
  double h = z.one_minus_norm() * w.one_minus_norm();
  double den = d2 + h;
  if (d2 == 0.0) return -std::numeric_limits<double>::infinity();
  double t = h / den;  // 1 - ρ²
  if (t < 1e-3) return -0.5 * (t + t * t / 2.0 + t * t * t / 3.0 + t * t * t * t / 4.0);
  return 0.5 * std::log(d2 / den);
}

inline double log_abs_blaschke(const std::vector<DiskPoint>& zeros, const DiskPoint& z) {
  double s = 0.0;
  for (const DiskPoint& w : zeros) s += log_rho(z, w);
  return s;
}

inline double log_abs_inner(const InnerSpec& spec, const DiskPoint& z) {
  return log_abs_blaschke(spec.zeros, z) - poisson(spec.measure, z);
}

/// Σ_n (1 - |z_n|²)(1 - |z|²) / |1 - z̄_n z|².
inline double wep_sum(const std::vector<DiskPoint>& zeros, const DiskPoint& z) {
  double s = 0.0;
  for (const DiskPoint& w : zeros) s += embedding_kernel(z, w);
  return s;
}

/// Reusable evaluator: the measure part goes through a PoissonField when the
/// measure has many atoms.
class InnerEvaluator {
 public:
  explicit InnerEvaluator(const InnerSpec& spec, std::size_t field_threshold = 256)
      : spec_(spec), use_field_(spec.measure.size() > field_threshold) {
    if (use_field_) field_ = std::make_unique<PoissonField>(spec.measure);
  }

  double poisson_at(const DiskPoint& z) const { return use_field_ ? (*field_)(z) : poisson(spec_.measure, z); }

  struct Sample {
    double log_abs = 0.0;
    double min_rho = 1.0;
  };

  Sample sample(const DiskPoint& z) const {
    Sample s;
    double min_r2 = 1.0;
    double lb = 0.0;
    for (const DiskPoint& w : spec_.zeros) {
      double d2 = std::norm(z.value() - w.value());
      double h = z.one_minus_norm() * w.one_minus_norm();
      double den = d2 + h;
      double r2 = d2 / den;
      min_r2 = std::min(min_r2, r2);
      if (d2 == 0.0) {
        lb = -std::numeric_limits<double>::infinity();
        continue;
      }
      double t = h / den;
      lb += t < 1e-3 ? -0.5 * (t + t * t / 2.0 + t * t * t / 3.0 + t * t * t * t / 4.0) : 0.5 * std::log(r2);
    }
    s.min_rho = std::sqrt(min_r2);
    s.log_abs = lb - poisson_at(z);
    return s;
  }

  const InnerSpec& spec() const { return spec_; }

 private:
  const InnerSpec& spec_;
  bool use_field_;
  std::unique_ptr<PoissonField> field_;
};

/// The fixed sample set: z(J) and a `lattice`-point grid in T(J) for every J of level <= depth.
inline std::vector<DiskPoint> eta_samples(int depth, std::size_t lattice = 2) {
  require_tree_budget(depth, lattice + 1);
  std::vector<DiskPoint> out;
  for_each_dyadic(depth, [&](const DyadicArc& j) {
    out.push_back(z_of(j));
    for (const DiskPoint& p : uniform_points(j, lattice)) out.push_back(p);
  });
  return out;
}

struct EtaProfile {
  std::vector<double> eps_grid;
  std::vector<double> eta_raw;   // sampled minimum per ε
  std::vector<double> eta_hat;   // running max over increasing ε
  std::vector<double> log_eta;   // ln of the raw minimum, kept below the exp clamp
  std::vector<std::size_t> admissible;
  int sample_depth = 0;
  std::size_t sample_count = 0;
  double threshold = 1e-6;
  std::optional<double> delta_tilde_hat;
  std::vector<std::string> diagnostics;
};

inline constexpr double kLogClamp = -700.0;

/// Sampled upper bound for η(ε) = inf{|I(z)| : ρ(z, zeros) > ε}.
inline EtaProfile eta_profile(const InnerSpec& spec, std::vector<double> eps_grid, int depth, double threshold = 1e-6,
                              std::size_t lattice = 2) {
  for (double e : eps_grid)
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("eps values must lie in (0, 1)");
  std::sort(eps_grid.begin(), eps_grid.end());
  eps_grid.erase(std::unique(eps_grid.begin(), eps_grid.end()), eps_grid.end());
  EtaProfile p;
  p.eps_grid = eps_grid;
  p.sample_depth = depth;
  p.threshold = threshold;
  const std::size_t m = eps_grid.size();
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  p.admissible.assign(m, 0);
  InnerEvaluator ev(spec);
  auto samples = eta_samples(depth, lattice);
  p.sample_count = samples.size();
  for (const DiskPoint& z : samples) {
    auto s = ev.sample(z);
    // admissible for every ε below min_rho
    for (std::size_t i = 0; i < m && eps_grid[i] < s.min_rho; ++i) {
      ++p.admissible[i];
      best[i] = std::min(best[i], s.log_abs);
    }
  }
  p.eta_raw.resize(m);
  p.log_eta.resize(m);
  p.eta_hat.resize(m);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (p.admissible[i] == 0) {
      p.diagnostics.push_back("no admissible samples at eps = " + std::to_string(eps_grid[i]));
      p.log_eta[i] = 0.0;
      p.eta_raw[i] = 1.0;
    } else {
      p.log_eta[i] = best[i];
      p.eta_raw[i] = best[i] < kLogClamp ? 0.0 : std::exp(best[i]);
    }
    running = std::max(running, p.eta_raw[i]);
    p.eta_hat[i] = running;
    if (!p.delta_tilde_hat && p.eta_hat[i] > threshold) p.delta_tilde_hat = eps_grid[i];
  }
  return p;
}

struct LevelSums {
  std::vector<double> partial;             // S_0..S_N
  std::vector<std::uint64_t> counts;       // qualifying arcs per level
  SeriesVerdict verdict;
};

inline LevelSums finish_level_sums(std::vector<std::uint64_t> counts) {
  LevelSums out;
  out.counts = std::move(counts);
  double acc = 0.0;
  for (std::size_t n = 0; n < out.counts.size(); ++n) {
    acc += std::ldexp(static_cast<double>(out.counts[n]), -static_cast<int>(n));
    out.partial.push_back(acc);
  }
  out.verdict = classify_partial_sums(out.partial);
  return out;
}

/// P[μ](z(J)) for every J of level <= depth, indexed [level][index].
inline std::vector<std::vector<double>> anchor_poisson(const AtomicMeasure& mu, int depth) {
  require_tree_budget(depth);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(depth) + 1);
  if (mu.empty()) {
    for (int n = 0; n <= depth; ++n) out[static_cast<std::size_t>(n)].assign(std::size_t{1} << n, 0.0);
    return out;
  }
  bool fast = mu.size() > 256;
  PoissonField field(fast ? mu : AtomicMeasure{});
  for (int n = 0; n <= depth; ++n) {
    auto& row = out[static_cast<std::size_t>(n)];
    row.resize(std::size_t{1} << n);
    for (std::uint64_t k = 0; k < row.size(); ++k) {
      DiskPoint z = z_of(DyadicArc(n, k));
      row[k] = fast ? field(z) : poisson(mu, z);
    }
  }
  return out;
}

/// S_n = Σ |J| over J of level <= n with |I(z(J))| < eps.
inline LevelSums condition2_sums(const InnerSpec& spec, double eps, int depth) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  require_tree_budget(depth);
  InnerEvaluator ev(spec);
  const double log_eps = std::log(eps);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(depth) + 1, 0);
  for_each_dyadic(depth, [&](const DyadicArc& j) {
    DiskPoint z = z_of(j);
    double v = log_abs_blaschke(spec.zeros, z) - ev.poisson_at(z);
    if (v < log_eps) ++counts[static_cast<std::size_t>(j.level)];
  });
  return finish_level_sums(std::move(counts));
}

/// S_n = Σ |J| over J of level <= n with P[μ](z(J)) >= c.
inline LevelSums carleson_hit_sum_lemma1c(const AtomicMeasure& mu, double c, int depth) {
  if (!(c > 0.0)) throw std::invalid_argument("threshold C must be positive");
  auto lam = anchor_poisson(mu, depth);
  std::vector<std::uint64_t> counts(lam.size(), 0);
  for (std::size_t n = 0; n < lam.size(); ++n)
    for (double v : lam[n])
      if (v >= c) ++counts[n];
  return finish_level_sums(std::move(counts));
}

struct PoissonLevelSum {
  double sum = 0.0;
  std::size_t family_size = 0;
  double poisson_at_anchor = 0.0;
  double constant = 0.0;  // sum * A / P[μ](z(J)); the C in sum <= (C/A) P[μ](z(J))
};

/// |I||J| / |1 - conj(z(I)) z(J)|² for the anchors of I and J.
inline double anchor_kernel(const DyadicArc& i, const DyadicArc& j) {
  std::complex<double> zi = z_of(i).value(), zj = z_of(j).value();
  return i.length() * j.length() / std::norm(1.0 - std::conj(zi) * zj);
}

/// Σ over I (level <= N) with P[μ](z(I)) >= A of |I||J| / |1 - conj(z(I)) z(J)|².
inline PoissonLevelSum poisson_level_sum(const AtomicMeasure& mu, double a, const DyadicArc& j, int depth) {
  if (!(a > 0.0)) throw std::invalid_argument("threshold A must be positive");
  auto lam = anchor_poisson(mu, depth);
  PoissonLevelSum out;
  for (std::size_t n = 0; n < lam.size(); ++n)
    for (std::size_t k = 0; k < lam[n].size(); ++k)
      if (lam[n][k] >= a) {
        out.sum += anchor_kernel(DyadicArc(static_cast<int>(n), k), j);
        ++out.family_size;
      }
  out.poisson_at_anchor = poisson(mu, z_of(j));
  out.constant = out.poisson_at_anchor > 0.0 ? out.sum * a / out.poisson_at_anchor : 0.0;
  return out;
}

}  // namespace innerlab
