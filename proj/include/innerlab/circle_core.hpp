#pragma once

// Disk geometry and the dyadic tree of the unit circle.
//
// Angles are kept in turn units (full circle = 1) so that dyadic endpoints
// k * 2^-n are exact binary fractions; radians appear only when a point of
// the disk is materialized.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace innerlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce a turn value into [0, 1).
inline double wrap_turn(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

/// Signed turn difference a - b reduced into [-1/2, 1/2).
inline double turn_diff(double a, double b) {
  double d = wrap_turn(a - b + 0.5) - 0.5;
  return d;
}

/// Upper bound on the number of dyadic cells any single tree scan may visit.
/// Overridable through INNERLAB_MAX_CELLS.
inline std::uint64_t max_cells() {
  if (const char* env = std::getenv("INNERLAB_MAX_CELLS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::uint64_t>(v);
  }
  return std::uint64_t{1} << 22;
}

/// Throws std::length_error when a full scan to `depth` would exceed the cap.
inline void require_tree_budget(int depth, std::uint64_t extra_factor = 1) {
  if (depth < 0) throw std::invalid_argument("negative depth");
  if (depth > 40) throw std::length_error("depth " + std::to_string(depth) + " exceeds cell budget");
  std::uint64_t cells = ((std::uint64_t{2} << depth) - 1) * extra_factor;
  if (cells > max_cells())
    throw std::length_error("dyadic scan to depth " + std::to_string(depth) + " needs " +
                            std::to_string(cells) + " cells, cap is " + std::to_string(max_cells()) +
                            " (INNERLAB_MAX_CELLS)");
}

/// A point of the open unit disk.
class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(double re, double im) : z_(re, im) {
    if (!(re * re + im * im < 1.0) || !std::isfinite(re) || !std::isfinite(im))
      throw std::domain_error("DiskPoint outside the open unit disk");
  }
  explicit DiskPoint(std::complex<double> z) : DiskPoint(z.real(), z.imag()) {}

  /// Point at radius r, angle t (turns).
  static DiskPoint polar(double r, double turn) {
    return DiskPoint(r * std::cos(kTwoPi * turn), r * std::sin(kTwoPi * turn));
  }

  double re() const { return z_.real(); }
  double im() const { return z_.imag(); }
  std::complex<double> value() const { return z_; }
  double abs() const { return std::abs(z_); }
  double norm() const { return std::norm(z_); }
  /// 1 - |z|^2.
  double one_minus_norm() const { return (1.0 - abs()) * (1.0 + abs()); }
  /// Argument in turns, [0, 1).
  double turn() const { return wrap_turn(std::arg(z_) / kTwoPi); }

  friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.z_ == b.z_; }

 private:
  std::complex<double> z_{0.0, 0.0};
};

/// Squared pseudohyperbolic distance, via |1 - w̄z|^2 = |z-w|^2 + (1-|z|^2)(1-|w|^2).
inline double rho_squared(const DiskPoint& z, const DiskPoint& w) {
  double d2 = std::norm(z.value() - w.value());
  double h = z.one_minus_norm() * w.one_minus_norm();
  double den = d2 + h;
  return den > 0.0 ? d2 / den : 0.0;
}

/// Pseudohyperbolic distance |z - w| / |1 - w̄ z|.
inline double rho(const DiskPoint& z, const DiskPoint& w) { return std::sqrt(rho_squared(z, w)); }

/// log2(1 / (1 - rho(z, w))).
inline double beta(const DiskPoint& z, const DiskPoint& w) {
  double d2 = std::norm(z.value() - w.value());
  double h = z.one_minus_norm() * w.one_minus_norm();
  double den = d2 + h;
  if (!(den > 0.0)) return 0.0;
  double one_minus = (h / den) / (1.0 + std::sqrt(d2 / den));
  return -std::log2(one_minus);
}

/// The kernel (1-|z|^2)(1-|w|^2) / |1 - w̄ z|^2, i.e. 1 - rho^2.
inline double embedding_kernel(const DiskPoint& z, const DiskPoint& w) {
  double d2 = std::norm(z.value() - w.value());
  double h = z.one_minus_norm() * w.one_minus_norm();
  return h / (d2 + h);
}

/// A general arc of the circle, [start, start + length) in turns.
struct Arc {
  double start = 0.0;
  double length = 1.0;

  Arc() = default;
  Arc(double s, double len) : start(wrap_turn(s)), length(len) {
    if (!(len > 0.0) || len > 1.0) throw std::invalid_argument("Arc length must lie in (0, 1]");
  }

  double end() const { return start + length; }
  double center() const { return wrap_turn(start + 0.5 * length); }

  /// Open-arc membership: start < t < start + length (mod 1).
  bool contains_open(double t) const {
    double d = wrap_turn(t - start);
    return d > 0.0 && d < length;
  }
  /// Closed-arc membership.
  bool contains_closed(double t) const {
    if (length >= 1.0) return true;
    double d = wrap_turn(t - start);
    return d <= length || d == 0.0;
  }

  /// The arc with the same center and `factor` times the length (whole circle once it covers it).
  Arc dilate(double factor) const {
    double len = length * factor;
    if (len >= 1.0) return Arc(0.0, 1.0);
    return Arc(center() - 0.5 * len, len);
  }
};

enum class Region { outside, in_Q, in_T };

/// The dyadic arc [k 2^-n, (k+1) 2^-n) in turn units.
struct DyadicArc {
  int level = 0;
  std::uint64_t index = 0;

  DyadicArc() = default;
  DyadicArc(int lvl, std::uint64_t idx) : level(lvl), index(idx) {
    if (lvl < 0 || lvl > 62) throw std::invalid_argument("dyadic level out of range");
    if (idx >= (std::uint64_t{1} << lvl)) throw std::invalid_argument("dyadic index out of range");
  }

  static DyadicArc root() { return {}; }

  /// Dyadic arc of the given level containing turn t (half-open convention).
  static DyadicArc containing(double t, int lvl) {
    double scaled = std::ldexp(wrap_turn(t), lvl);
    auto idx = static_cast<std::uint64_t>(std::floor(scaled));
    std::uint64_t count = std::uint64_t{1} << lvl;
    if (idx >= count) idx = count - 1;
    return {lvl, idx};
  }

  double length() const { return std::ldexp(1.0, -level); }
  double start() const { return std::ldexp(static_cast<double>(index), -level); }
  double end() const { return std::ldexp(static_cast<double>(index + 1), -level); }
  double midpoint() const { return std::ldexp(static_cast<double>(index) + 0.5, -level); }
  Arc arc() const { return Arc(start(), length()); }

  DyadicArc parent() const {
    if (level == 0) throw std::logic_error("root has no parent");
    return {level - 1, index >> 1};
  }
  DyadicArc child(int which) const { return {level + 1, 2 * index + static_cast<std::uint64_t>(which)}; }

  /// Half-open membership of a circle point.
  bool contains_turn(double t) const { return DyadicArc::containing(t, level).index == index; }

  /// True when `other` is a (non-strict) descendant of this arc.
  bool contains(const DyadicArc& other) const {
    return other.level >= level && (other.index >> (other.level - level)) == index;
  }

  /// Same-level neighbour at signed offset, wrapping around the circle.
  DyadicArc shifted(std::int64_t offset) const {
    std::uint64_t count = std::uint64_t{1} << level;
    auto m = static_cast<std::int64_t>(count);
    std::int64_t i = (static_cast<std::int64_t>(index) + offset) % m;
    if (i < 0) i += m;
    return {level, static_cast<std::uint64_t>(i)};
  }

  /// Log2 of the inverse length, M(J) = level.
  int log_inverse_length() const { return level; }

  friend bool operator==(const DyadicArc& a, const DyadicArc& b) {
    return a.level == b.level && a.index == b.index;
  }
  friend bool operator<(const DyadicArc& a, const DyadicArc& b) {
    return a.level != b.level ? a.level < b.level : a.index < b.index;
  }
};

/// Anchor point z(J) = (1 - 3|J|/4) ξ_J of the Carleson box over J.
inline DiskPoint z_of(const DyadicArc& j) { return DiskPoint::polar(1.0 - 0.75 * j.length(), j.midpoint()); }

/// Classify z against the Carleson box Q(J) and its top half T(J).
inline Region region_membership(const DiskPoint& z, const DyadicArc& j) {
  double len = j.length();
  double r = z.abs();
  if (!(r >= 1.0 - len)) return Region::outside;
  if (j.level > 0 && !j.arc().contains_closed(z.turn())) return Region::outside;
  return r <= 1.0 - 0.5 * len ? Region::in_T : Region::in_Q;
}

/// Deterministic lattice of `count` points in the annular sector over
/// [start, start + width] with 1 - |z| in (gap_lo, gap_hi]. Rows run in
/// radius, columns in angle, both with half-cell margins;
/// rows = ceil(sqrt(count * thickness / width)), cols = ceil(count / rows).
inline std::vector<DiskPoint> sector_lattice(double start, double width, double gap_lo, double gap_hi,
                                             std::size_t count) {
  std::vector<DiskPoint> out;
  if (count == 0) return out;
  double thickness = gap_hi - gap_lo;
  auto rows = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count) * thickness / width)));
  rows = std::clamp<std::size_t>(rows, 1, count);
  std::size_t cols = (count + rows - 1) / rows;
  out.reserve(count);
  for (std::size_t i = 0; i < rows && out.size() < count; ++i) {
    // row 0 is the innermost (farthest from the circle)
    double gap = gap_hi - (static_cast<double>(i) + 0.5) * thickness / static_cast<double>(rows);
    for (std::size_t c = 0; c < cols && out.size() < count; ++c) {
      double t = start + (static_cast<double>(c) + 0.5) * width / static_cast<double>(cols);
      out.push_back(DiskPoint::polar(1.0 - gap, t));
    }
  }
  return out;
}

/// `count` points spread over T(J); a single point is z(J) itself.
inline std::vector<DiskPoint> uniform_points(const DyadicArc& j, std::size_t count) {
  double len = j.length();
  return sector_lattice(j.start(), len, 0.5 * len, len, count);
}

/// Visit every dyadic arc of level <= depth in (level, index) order.
template <class Fn>
void for_each_dyadic(int depth, Fn&& fn) {
  for (int n = 0; n <= depth; ++n) {
    std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 0; k < count; ++k) fn(DyadicArc(n, k));
  }
}

}  // namespace innerlab
