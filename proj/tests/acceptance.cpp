// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.

#include <innerlab/innerlab.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace innerlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
    pass = pass && ok;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DiskPoint random_point(std::mt19937_64& rng, double rmax = 0.999) {
  std::uniform_real_distribution<double> r(0.0, rmax), t(0.0, 1.0);
  return DiskPoint::polar(std::sqrt(r(rng)), t(rng));
}

std::vector<double> support_of(const AtomicMeasure& mu) {
  std::vector<double> pts;
  for (const Atom& a : mu.atoms()) pts.push_back(a.pos);
  return pts;
}

Outcome entropy_oracle() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  double value = entropy(CircleSet::cantor(3.0, 20, 20)).value;
  double t = seconds_since(t0);
  double exact = 3.0 * std::log(3.0);
  o.check(std::fabs(value - exact) <= 0.01 * exact, "Cantor entropy " + fmt(value) + " vs 3 ln 3 = " + fmt(exact));
  o.check(t < 1.0, "runtime " + fmt(t) + " s");
  return o;
}

Outcome hit_sum_dichotomy() {
  Outcome o;
  const int depth = 20;
  auto spread = build_spread_measure(ModulusFunction::power(0.5, 16), 16);
  std::vector<std::pair<std::string, CircleSet>> corpus{
      {"point", CircleSet::finite_points({0.3}, depth)},
      {"points", CircleSet::finite_points({0.0, 0.1, 0.25, 0.6, 0.61}, depth)},
      {"cantor", CircleSet::cantor(3.0, depth, depth)},
      {"spread support", CircleSet::finite_points(support_of(spread.measure), depth)}};
  for (const auto& [name, e] : corpus) {
    auto s = dyadic_hit_sum(e, depth);
    double inc = s[depth] - s[depth - 1];
    o.check(inc < 1e-3, name + " increment " + fmt(inc));
  }
  auto gaps = dyadic_hit_sum(CircleSet::gap_sequence_klog2k(std::uint64_t{1} << depth, depth), depth);
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 10; ++n) worst = std::min(worst, gaps[2 * n] - gaps[n]);
  o.check(worst >= 0.05, "gap family min S_2N - S_N over N <= 10 = " + fmt(worst));
  return o;
}

Outcome porosity_hit_ratio() {
  Outcome o;
  std::vector<std::pair<std::string, CircleSet>> porous{{"cantor", CircleSet::cantor(3.0, 16, 14)},
                                                         {"points", CircleSet::finite_points({0.0, 0.25, 0.6}, 14)},
                                                         {"point", CircleSet::finite_points({0.3}, 14)}};
  for (const auto& [name, e] : porous) {
    double r10 = porosity(e, 10).lempor_ratio, worst = r10;
    for (int n = 11; n <= 14; ++n) worst = std::max(worst, porosity(e, n).lempor_ratio);
    o.check(worst <= 1.2 * r10, name + " ratio max " + fmt(worst) + " vs depth-10 " + fmt(r10));
  }
  const DyadicArc window(6, 5);
  const int height = 4;
  auto e = CircleSet::subtree(window, height, 10);
  auto p = porosity(e, window.level + height);
  o.check(p.lempor_ratio >= height + 1.0 && p.lempor_arc == window,
          "subtree witness ratio " + fmt(p.lempor_ratio) + " at (" + std::to_string(p.lempor_arc.level) + ", " +
              std::to_string(p.lempor_arc.index) + "), height " + std::to_string(height));
  return o;
}

Outcome porous_construction() {
  Outcome o;
  auto mu = build_cantor_measure(3.0, 14);
  double c10 = 0.0, worst = 0.0;
  std::string consts;
  for (int depth : {10, 12, 14}) {
    auto r = easy_wepify_porous(mu, depth);
    double c = mainest_check(mu, r, depth).constant;
    if (depth == 10) c10 = c;
    worst = std::max(worst, std::fabs(c / c10 - 1.0));
    consts += (consts.empty() ? "" : ", ") + fmt(c);
  }
  o.check(std::isfinite(c10) && worst <= 0.2, "placement bound constants " + consts + " (max change " + fmt(100 * worst) + "%)");

  auto r = easy_wepify_porous(mu, 14);
  std::size_t outside = 0;
  for (const Placement& p : r.placement_log)
    if (!(poisson(mu, z_of(p.arc)) > 1.0)) outside += p.count;
  o.check(outside == 0 && placement_violations(r) == 0,
          std::to_string(r.zeros.size()) + " zeros, " + std::to_string(outside) + " outside P > 1");

  auto spec = r.combined(mu);
  auto p12 = eta_profile(spec, {0.3, 0.5}, 12), p14 = eta_profile(spec, {0.3, 0.5}, 14);
  for (std::size_t i = 0; i < 2; ++i) {
    // relative change of η, from the logs so that tiny values compare exactly
    double change = std::fabs(std::expm1(p14.log_eta[i] - p12.log_eta[i]));
    bool positive = p12.log_eta[i] > -std::numeric_limits<double>::infinity() &&
                    p14.log_eta[i] > -std::numeric_limits<double>::infinity();
    o.check(positive && change < 0.1, "eta(" + fmt(p12.eps_grid[i]) + ") log " + fmt(p12.log_eta[i]) + " -> " +
                                          fmt(p14.log_eta[i]) + " (change " + fmt(100 * change) + "%)");
  }
  return o;
}

Outcome atomic_construction() {
  Outcome o;
  std::vector<double> b;
  for (int s = 1; s <= 40; ++s) b.push_back(std::ldexp(1.0, -s));
  o.check(std::fabs(tail_ratio_kl5(b).max_ratio - 2.0) < 1e-9, "tail ratio " + fmt(tail_ratio_kl5(b).max_ratio));
  auto r = easy_wepify_atomic(b, b, 14);
  o.check(placement_violations(r) == 0, std::to_string(r.zeros.size()) + " zeros placed");
  std::vector<Atom> atoms;
  for (double x : b) atoms.push_back({x, x});
  AtomicMeasure mu(std::move(atoms));
  double r10 = 0.0, worst = 0.0;
  std::string ratios;
  for (int depth : {10, 12, 14}) {
    double k = kl2_check(mu, depth).ratio;
    if (depth == 10) r10 = k;
    worst = std::max(worst, std::fabs(k / r10 - 1.0));
    ratios += (ratios.empty() ? "" : ", ") + fmt(k);
  }
  o.check(worst <= 0.2, "anchor sum ratios " + ratios + " (max change " + fmt(100 * worst) + "%)");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(-4.0, 4.0);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    double x = std::pow(10.0, e(rng)), y = std::pow(10.0, e(rng));
    if (phi(x + y) > phi(x) + phi(y) || phi(std::min(x, y)) > phi(std::max(x, y))) ++bad;
  }
  o.check(bad == 0, "phi violations " + std::to_string(bad) + " / 10000");
  return o;
}

Outcome necessity_gadget() {
  Outcome o;
  std::vector<double> b;
  for (int s = 1; s <= 4096; ++s) b.push_back(1.0 / (static_cast<double>(s) * s));
  auto a = anti_wepable_atomic(b, 20);
  o.check(a.witnesses.size() >= 3, std::to_string(a.witnesses.size()) + " groups");
  double prev = std::numeric_limits<double>::infinity();
  for (const Witness& w : a.witnesses) {
    o.check(w.c > 0.0 && w.poisson_at_anchor < prev, "q " + std::to_string(w.q) + ": c " + fmt(w.c) + ", log|B| <= " +
                                                         fmt(w.log_b_bound) + ", P " + fmt(w.poisson_at_anchor));
    prev = w.poisson_at_anchor;
  }
  return o;
}

Outcome small_modulus_sums() {
  Outcome o;
  InnerSpec atom;
  atom.measure = AtomicMeasure({{0.0, 1.0}});
  auto s = condition2_sums(atom, std::exp(-1.0), 16);
  o.check(s.verdict.label == "converges", "single atom " + s.verdict.describe());
  InnerSpec uniform;
  uniform.measure = build_uniform_split(10.0, 16);
  auto u = condition2_sums(uniform, std::exp(-1.0), 16);
  double slack = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= 16; ++n) slack = std::min(slack, u.partial[n] - 0.9 * n);
  o.check(slack >= 0.0, "uniform mass 10 min S_N - 0.9 N = " + fmt(slack));
  return o;
}

Outcome spread_pipeline() {
  Outcome o;
  const int depth = 16;
  auto w = ModulusFunction::power(0.5, depth);
  auto s = build_spread_measure(w, depth);
  double worst = 0.0;
  for (int n = 0; n <= depth; ++n) worst = std::max(worst, dyadic_max_mass(s.measure, n) / w.at_level(n));
  o.check(worst <= 2.0 + 1e-12, "max mu(J) / w(|J|) = " + fmt(worst));
  auto e = CircleSet::finite_points(support_of(s.measure), 20);
  auto sums = dyadic_hit_sum(e, 20);
  double inc = sums[20] - sums[19];
  o.check(inc < 1e-3, "support increment at depth 20 " + fmt(inc));
  try {
    auto r = wepify_finite_entropy(s.measure, e, 12);
    auto p = eta_profile(r.combined(s.measure), {0.5}, 12);
    o.check(p.log_eta[0] > -std::numeric_limits<double>::infinity() && p.eta_hat[0] > 0.0,
            "eta(0.5) at depth 12 = " + fmt(p.eta_hat[0]) + " (log " + fmt(p.log_eta[0]) + ")");
  } catch (const Refusal& err) {
    o.check(false, std::string("refused: ") + err.what());
  }
  return o;
}

Outcome numerical_oracles() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DiskPoint> zeros;
  for (int i = 0; i < 1000; ++i) zeros.push_back(DiskPoint::polar(1.0 - std::pow(10.0, -2.0 - 2.0 * u(rng)), u(rng)));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    DiskPoint z = random_point(rng, 0.81);
    double direct = 1.0;
    for (const DiskPoint& w : zeros)
      direct *= std::abs(z.value() - w.value()) / std::abs(1.0 - std::conj(w.value()) * z.value());
    worst = std::max(worst, std::fabs(std::exp(log_abs_blaschke(zeros, z)) - direct) / direct);
  }
  o.check(worst <= 1e-10, "Blaschke log vs product " + fmt(worst));

  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    DiskPoint z = random_point(rng), w = random_point(rng);
    double r = rho(z, w);
    if (r > 0.0 && 0.5 * embedding_kernel(z, w) > -std::log(r) + 1e-10) ++bad;
  }
  o.check(bad == 0, "kernel lower bound violations " + std::to_string(bad) + " / 10000");

  AtomicMeasure a({{0.1, 0.5}, {0.4, 1.5}}), b({{0.7, 2.0}, {0.9, 0.25}});
  std::vector<Atom> both(a.atoms().begin(), a.atoms().end());
  both.insert(both.end(), b.atoms().begin(), b.atoms().end());
  AtomicMeasure sum(both);
  double add = 0.0;
  for (int i = 0; i < 1000; ++i) {
    DiskPoint z = random_point(rng);
    double lhs = poisson(sum, z), rhs = poisson(a, z) + poisson(b, z);
    add = std::max(add, std::fabs(lhs - rhs) / rhs);
  }
  double center = std::fabs(poisson(sum, DiskPoint(0, 0)) - sum.total_mass()) / sum.total_mass();
  o.check(add <= 1e-12 && center <= 1e-12, "Poisson additivity " + fmt(add) + ", center " + fmt(center));
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"entropy oracle", entropy_oracle},
      {"hit-sum dichotomy", hit_sum_dichotomy},
      {"porosity hit ratio", porosity_hit_ratio},
      {"porous construction", porous_construction},
      {"atomic construction", atomic_construction},
      {"necessity gadget", necessity_gadget},
      {"small-modulus arc sums", small_modulus_sums},
      {"spread measure pipeline", spread_pipeline},
      {"numerical oracles", numerical_oracles}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
