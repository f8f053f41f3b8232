#pragma once

// Lattice groups (Z and uniformly gridded R), finitely supported vectors on
// them, and the p-norm geometry.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wtlab {

using Index = std::int64_t;
using Scalar = std::complex<double>;

/// Inclusive interval of lattice indices.
struct IndexWindow {
  Index lo = 0;
  Index hi = 0;

  constexpr bool empty() const noexcept { return hi < lo; }
  constexpr Index size() const noexcept { return empty() ? 0 : hi - lo + 1; }
  constexpr bool contains(Index x) const noexcept { return lo <= x && x <= hi; }

  friend constexpr bool operator==(const IndexWindow&, const IndexWindow&) = default;
};

inline void require_nonempty(const IndexWindow& window, const char* what) {
  if (window.empty()) {
    throw std::invalid_argument(std::string(what) + ": window [" + std::to_string(window.lo) + ", " +
                                std::to_string(window.hi) + "] is empty");
  }
}

enum class LatticeKind { kIntegers, kGriddedReals };

/// The group the operators act on.  On gridded reals each lattice point
/// carries mass `grid_spacing` (Riemann-sum surrogate of Lebesgue measure).
class Lattice {
 public:
  static Lattice integers() { return Lattice(LatticeKind::kIntegers, 1.0); }

  static Lattice gridded_reals(double grid_spacing) {
    if (!(grid_spacing > 0.0) || !std::isfinite(grid_spacing)) {
      throw std::invalid_argument("grid spacing must be positive and finite");
    }
    return Lattice(LatticeKind::kGriddedReals, grid_spacing);
  }

  LatticeKind kind() const noexcept { return kind_; }
  double grid_spacing() const noexcept { return spacing_; }
  double measure_weight() const noexcept { return spacing_; }

  /// Real coordinate of a lattice point.
  double coordinate(Index x) const noexcept { return static_cast<double>(x) * spacing_; }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  Lattice(LatticeKind kind, double spacing) : kind_(kind), spacing_(spacing) {}

  LatticeKind kind_;
  double spacing_;
};

/// Group element g in lattice units.  A nonzero step is exactly an
/// aperiodic element on these groups.
struct StepElement {
  Index steps = 1;

  explicit StepElement(Index s) : steps(s) {
    if (s == 0) throw std::invalid_argument("step must be nonzero (aperiodic element)");
  }

  friend bool operator==(const StepElement&, const StepElement&) = default;
};

/// Finitely supported complex function on the lattice, stored as a dense
/// window: value at `support_lo() + j` is `values()[j]`, zero elsewhere.
class CompactVector {
 public:
  CompactVector() = default;
  CompactVector(Index support_lo, std::vector<Scalar> values)
      : lo_(support_lo), values_(std::move(values)) {}

  /// Point mass at x with the given amplitude.
  static CompactVector point_mass(Index x, Scalar amplitude = 1.0) { return CompactVector(x, {amplitude}); }

  /// Builds a vector from (index, value) pairs; repeated indices accumulate.
  static CompactVector from_entries(const std::vector<std::pair<Index, Scalar>>& entries) {
    if (entries.empty()) return {};
    Index lo = entries.front().first;
    Index hi = lo;
    for (const auto& [x, v] : entries) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    std::vector<Scalar> values(static_cast<std::size_t>(hi - lo + 1), Scalar{});
    for (const auto& [x, v] : entries) values[static_cast<std::size_t>(x - lo)] += v;
    return CompactVector(lo, std::move(values));
  }

  Index support_lo() const noexcept { return lo_; }
  /// Last stored index; support_lo() - 1 for the empty vector.
  Index support_hi() const noexcept { return lo_ + static_cast<Index>(values_.size()) - 1; }
  IndexWindow support() const noexcept { return {lo_, support_hi()}; }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Scalar>& values() const noexcept { return values_; }

  Scalar at(Index x) const noexcept {
    if (x < lo_ || x > support_hi()) return {};
    return values_[static_cast<std::size_t>(x - lo_)];
  }

  bool is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](Scalar v) { return v == Scalar{}; });
  }

  /// Drops leading and trailing exact zeros.
  CompactVector trimmed() const {
    std::size_t first = 0;
    while (first < values_.size() && values_[first] == Scalar{}) ++first;
    if (first == values_.size()) return {};
    std::size_t last = values_.size() - 1;
    while (values_[last] == Scalar{}) --last;
    return CompactVector(lo_ + static_cast<Index>(first),
                         std::vector<Scalar>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                             values_.begin() + static_cast<std::ptrdiff_t>(last) + 1));
  }

  /// Restriction to a window (values outside are dropped).
  CompactVector restricted(const IndexWindow& window) const {
    const Index lo = std::max(lo_, window.lo);
    const Index hi = std::min(support_hi(), window.hi);
    if (hi < lo) return {};
    std::vector<Scalar> out(values_.begin() + (lo - lo_), values_.begin() + (hi - lo_) + 1);
    return CompactVector(lo, std::move(out));
  }

  CompactVector& operator*=(Scalar c) {
    for (auto& v : values_) v *= c;
    return *this;
  }

  /// this += c * other, growing the stored window as needed.
  CompactVector& add_scaled(const CompactVector& other, Scalar c = 1.0) {
    if (other.empty()) return *this;
    if (empty()) {
      *this = other;
      *this *= c;
      return *this;
    }
    const Index lo = std::min(lo_, other.lo_);
    const Index hi = std::max(support_hi(), other.support_hi());
    if (lo != lo_ || hi != support_hi()) {
      std::vector<Scalar> grown(static_cast<std::size_t>(hi - lo + 1), Scalar{});
      std::copy(values_.begin(), values_.end(), grown.begin() + (lo_ - lo));
      values_ = std::move(grown);
      lo_ = lo;
    }
    for (std::size_t j = 0; j < other.values_.size(); ++j) {
      values_[static_cast<std::size_t>(other.lo_ - lo_) + j] += c * other.values_[j];
    }
    return *this;
  }

  CompactVector& operator+=(const CompactVector& other) { return add_scaled(other, 1.0); }
  CompactVector& operator-=(const CompactVector& other) { return add_scaled(other, -1.0); }

  friend CompactVector operator+(CompactVector a, const CompactVector& b) { return a += b; }
  friend CompactVector operator-(CompactVector a, const CompactVector& b) { return a -= b; }
  friend CompactVector operator*(Scalar c, CompactVector a) { return a *= c; }

  /// Exact equality of the represented functions (zero padding ignored).
  friend bool operator==(const CompactVector& a, const CompactVector& b) {
    const CompactVector ta = a.trimmed();
    const CompactVector tb = b.trimmed();
    if (ta.empty() || tb.empty()) return ta.empty() && tb.empty();
    return ta.lo_ == tb.lo_ && ta.values_ == tb.values_;
  }

 private:
  Index lo_ = 0;
  std::vector<Scalar> values_;
};

/// (f * delta_{g^n})(x) = f(x - n g): an exact index shift.
inline CompactVector translate(const CompactVector& f, Index n, const StepElement& g) {
  return CompactVector(f.support_lo() + n * g.steps, f.values());
}

/// (sum_x |f(x)|^p * mass)^{1/p}.
inline double p_norm(const CompactVector& f, double p, const Lattice& lattice) {
  if (!(p >= 1.0)) throw std::invalid_argument("p-norm requires p >= 1");
  // Scale by the largest modulus so |f|^p cannot overflow for large p.
  double scale = 0.0;
  for (const auto& v : f.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& v : f.values()) {
    const double m = std::abs(v) / scale;
    acc += p == 2.0 ? m * m : std::pow(m, p);
  }
  return scale * std::pow(acc * lattice.measure_weight(), 1.0 / p);
}

/// Bilinear pairing sum_x f(x) * lambda(x).  No conjugation.
inline Scalar pair(const CompactVector& f, const CompactVector& functional) {
  const Index lo = std::max(f.support_lo(), functional.support_lo());
  const Index hi = std::min(f.support_hi(), functional.support_hi());
  Scalar acc{};
  for (Index x = lo; x <= hi; ++x) acc += f.at(x) * functional.at(x);
  return acc;
}

/// Smallest window covering both supports; empty vectors are ignored.
inline IndexWindow support_union(const IndexWindow& a, const IndexWindow& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace wtlab
