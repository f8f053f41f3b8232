#pragma once

// Convex polynomials P(t) = sum_j a_j t^{offset + j} with a_j >= 0 summing
// to one, and their action on a weighted translation.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtlab/lattice.hpp"
#include "wtlab/weighted_translation.hpp"

namespace wtlab {

class ConvexPolynomial {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ConvexPolynomial(std::vector<double> coefficients, int offset = 0)
      : offset_(offset), a_(std::move(coefficients)) {
    if (offset_ < 0) throw std::invalid_argument("convex polynomial offset must be nonnegative");
    if (a_.empty()) throw std::invalid_argument("convex polynomial needs at least one coefficient");
    double sum = 0.0;
    for (double v : a_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("convex polynomial coefficients must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("convex polynomial coefficients must sum to 1 (got " + std::to_string(sum) + ")");
    }
    if (!(a_.back() > 0.0)) throw std::invalid_argument("convex polynomial top coefficient must be positive");
  }

  int offset() const noexcept { return offset_; }
  const std::vector<double>& coefficients() const noexcept { return a_; }
  int degree() const noexcept { return offset_ + static_cast<int>(a_.size()) - 1; }

  /// Coefficient of t^d (zero outside the stored range).
  double coefficient_of_degree(int d) const noexcept {
    const int j = d - offset_;
    if (j < 0 || j >= static_cast<int>(a_.size())) return 0.0;
    return a_[static_cast<std::size_t>(j)];
  }

  /// Dense coefficients indexed by degree 0..degree().
  std::vector<double> by_degree() const {
    std::vector<double> out(static_cast<std::size_t>(degree()) + 1, 0.0);
    std::copy(a_.begin(), a_.end(), out.begin() + offset_);
    return out;
  }

  /// Builds a polynomial from degree-indexed coefficients, dropping the
  /// leading zero block into the offset and trailing zeros.
  static ConvexPolynomial from_degrees(std::vector<double> by_degree) {
    while (!by_degree.empty() && by_degree.back() == 0.0) by_degree.pop_back();
    std::size_t first = 0;
    while (first < by_degree.size() && by_degree[first] == 0.0) ++first;
    if (first == by_degree.size()) throw std::invalid_argument("convex polynomial has no positive coefficient");
    return ConvexPolynomial(std::vector<double>(by_degree.begin() + static_cast<std::ptrdiff_t>(first), by_degree.end()),
                            static_cast<int>(first));
  }

 private:
  int offset_;
  std::vector<double> a_;
};

/// P(T) f = sum_j a_j T^{offset + j} f over one orbit sweep.
inline CompactVector evaluate_poly(const ConvexPolynomial& P, const WeightedTranslation& T, const CompactVector& f) {
  CompactVector power = apply_power(T, f, P.offset());
  CompactVector acc;
  const auto& a = P.coefficients();
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j > 0) power = apply(T, power);
    if (a[j] != 0.0) acc.add_scaled(power, a[j]);
  }
  return acc;
}

/// Polynomials from the sufficiency proof:
///   beta > 1: (beta-1)/(beta^k-1) (beta^{k-1} + beta^{k-2} t + ... + t^{k-1})
///   beta = 1: (1 + t + ... + t^{k-1}) / k
inline ConvexPolynomial proof_polynomial(double beta, int k) {
  if (!(beta >= 1.0)) throw std::invalid_argument("proof_polynomial requires beta >= 1");
  if (k < 1) throw std::invalid_argument("proof_polynomial requires k >= 1");
  std::vector<double> a(static_cast<std::size_t>(k));
  if (beta == 1.0) {
    std::fill(a.begin(), a.end(), 1.0 / k);
    return ConvexPolynomial(std::move(a));
  }
  // a_j = (beta-1) beta^{-(j+1)} / (1 - beta^{-k}); same value, no overflow.
  const double denom = -std::expm1(-k * std::log(beta));
  for (int j = 0; j < k; ++j) a[static_cast<std::size_t>(j)] = (beta - 1.0) * std::pow(beta, -(j + 1)) / denom;
  // Absorb rounding so the sum is one to the last bit we can manage.
  const double sum = std::accumulate(a.begin(), a.end(), 0.0);
  for (double& v : a) v /= sum;
  return ConvexPolynomial(std::move(a));
}

/// (1/2)(t^{N0} P + Q): the combinator used to push a convex polynomial's
/// degree past N0.  Degree is max(deg P + N0, deg Q).
inline ConvexPolynomial lemma_combine(const ConvexPolynomial& P, const ConvexPolynomial& Q, int N0) {
  if (N0 < 0) throw std::invalid_argument("lemma_combine requires N0 >= 0");
  const int degree = std::max(P.degree() + N0, Q.degree());
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int d = 0; d <= P.degree(); ++d) c[static_cast<std::size_t>(d + N0)] += 0.5 * P.coefficient_of_degree(d);
  for (int d = 0; d <= Q.degree(); ++d) c[static_cast<std::size_t>(d)] += 0.5 * Q.coefficient_of_degree(d);
  return ConvexPolynomial::from_degrees(std::move(c));
}

}  // namespace wtlab
