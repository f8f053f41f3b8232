#pragma once

// The weighted translation T_{g,w} f = w * (f * delta_g), i.e.
// (T f)(x) = w(x) f(x - g), with its closed-form powers, inverse, the right
// inverse S and the bilinear adjoint.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wtlab/lattice.hpp"
#include "wtlab/weight.hpp"

namespace wtlab {

struct WeightedTranslation {
  StepElement g;
  LatticeWeight w;
  Lattice lattice = Lattice::integers();

  /// sup w; bounds the operator norm on every L^p.
  double norm_bound() const { return w.sup(); }
};

namespace detail {

/// result(x) = factor(x) * f(x - shift), with factor evaluated in whatever
/// domain the weight is stored.
inline CompactVector multiply_shifted(const CompactVector& f, Index shift, const LatticeWeight& factor,
                                      bool divide = false) {
  std::vector<Scalar> out(f.values().size());
  const Index lo = f.support_lo() + shift;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Index x = lo + static_cast<Index>(j);
    if (f.values()[j] == Scalar{}) continue;
    if (factor.log_domain()) {
      const double lw = factor.log_at(x);
      out[j] = f.values()[j] * std::exp(divide ? -lw : lw);
    } else {
      const double v = factor.raw_at(x);
      out[j] = divide ? f.values()[j] / v : f.values()[j] * v;
    }
  }
  return CompactVector(lo, std::move(out));
}

}  // namespace detail

/// (T f)(x) = w(x) f(x - g).
inline CompactVector apply(const WeightedTranslation& T, const CompactVector& f) {
  return detail::multiply_shifted(f, T.g.steps, T.w);
}

/// T^n f = (prod_{i=0}^{n-1} w * delta_{g^i}) (f * delta_{g^n}), evaluated
/// in closed form from the forward product.
inline CompactVector apply_power(const WeightedTranslation& T, const CompactVector& f, int n) {
  if (n < 0) throw std::invalid_argument("apply_power requires n >= 0");
  if (n == 0) return f;
  return detail::multiply_shifted(f, n * T.g.steps, forward_product(T.w, T.g, n));
}

/// T^{-1} = T_{g^{-1}, (1/w) * delta_{g^{-1}}}: step -g, weight x -> 1/w(x + g).
inline WeightedTranslation inverse(const WeightedTranslation& T) {
  return WeightedTranslation{StepElement(-T.g.steps), translate_weight(reciprocal(T.w), -1, T.g), T.lattice};
}

/// True when inf w is so small that T^{-1} (and S) is numerically unbounded.
inline bool inverse_unbounded_warning(const WeightedTranslation& T) {
  return T.w.log_inf() < std::log(detail::kLinearMin);
}

/// S f = ((1/w) f) * delta_{g^{-1}}: (S f)(x) = f(x + g) / w(x + g).
inline CompactVector right_inverse_S(const WeightedTranslation& T, const CompactVector& f) {
  // Divide at the source points, then shift back by g.
  const CompactVector divided = detail::multiply_shifted(f, 0, T.w, /*divide=*/true);
  return translate(divided, -1, T.g);
}

/// S^k h = (prod_{i=1}^{k} w * delta_{g^{-i}})^{-1} (h * delta_{g^{-k}}).
inline CompactVector S_power(const WeightedTranslation& T, const CompactVector& h, int k) {
  if (k < 0) throw std::invalid_argument("S_power requires k >= 0");
  if (k == 0) return h;
  return detail::multiply_shifted(h, -k * T.g.steps, backward_product(T.w, T.g, k), /*divide=*/true);
}

/// Bilinear adjoint: (T* phi)(y) = w(y + g) phi(y + g), so that
/// pair(T f, phi) = pair(f, T* phi).
inline CompactVector adjoint_apply(const WeightedTranslation& T, const CompactVector& phi) {
  const CompactVector weighted = detail::multiply_shifted(phi, 0, T.w);
  return translate(weighted, -1, T.g);
}

/// Orbit f, T f, ..., T^N f by repeated application; one pass, O(N * support).
inline std::vector<CompactVector> orbit(const WeightedTranslation& T, const CompactVector& f, int N) {
  if (N < 0) throw std::invalid_argument("orbit length must be nonnegative");
  std::vector<CompactVector> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  out.push_back(f);
  for (int n = 1; n <= N; ++n) out.push_back(apply(T, out.back()));
  return out;
}

}  // namespace wtlab
