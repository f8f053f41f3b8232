#pragma once

// The constructive side of the sufficiency proof: the maps S_k, and a
// per-k table of the three quantities the convex-transitive criterion needs
// to vanish.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wtlab/convex_polynomial.hpp"
#include "wtlab/lattice.hpp"
#include "wtlab/weighted_translation.hpp"

namespace wtlab {

/// S_k h = (beta^k - 1)/(1 - beta) (beta I - T) S^k h   for beta > 1,
/// S_k h = -k (I - T) S^k h                             for beta = 1,
/// the beta -> 1 limit of the prefactor.  With this sign
/// P_k(T) S_k h - h = -beta^k S^k h in both branches.
inline CompactVector s_k_map(const WeightedTranslation& T, double beta, int k, const CompactVector& h) {
  if (!(beta >= 1.0)) throw std::invalid_argument("s_k_map requires beta >= 1");
  if (k < 1) throw std::invalid_argument("s_k_map requires k >= 1");
  const CompactVector u = S_power(T, h, k);
  CompactVector v = beta * u;
  v -= apply(T, u);
  const double scale = beta == 1.0 ? -static_cast<double>(k) : std::expm1(k * std::log(beta)) / (1.0 - beta);
  v *= scale;
  return v;
}

struct TransitivityRow {
  int k = 0;
  double q1 = 0.0;  ///< ||P_k(T)(beta I - T) f0||_p
  double q2 = 0.0;  ///< ||S_k h||_p
  double q3 = 0.0;  ///< ||P_k(T) S_k h - h||_p
  /// ||(P_k(T) S_k h - h) + beta^k S^k h||_p / ||h||_p; zero up to round-off.
  double identity_residual = 0.0;
  /// |q3 - ||beta^k S^k h||_p| / max(q3, tiny)
  double q3_identity_mismatch = 0.0;
};

/// Evaluates the proof quantities for k in [k_lo, k_hi].
inline std::vector<TransitivityRow> transitivity_demo(const WeightedTranslation& T, double beta,
                                                      const CompactVector& f0, const CompactVector& h, int k_lo,
                                                      int k_hi, double p) {
  if (!(beta >= 1.0)) throw std::invalid_argument("transitivity_demo requires beta >= 1");
  if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("transitivity_demo needs 1 <= k_lo <= k_hi");
  const Lattice& lattice = T.lattice;
  const double h_norm = p_norm(h, p, lattice);

  CompactVector y = beta * f0;
  y -= apply(T, f0);

  std::vector<TransitivityRow> rows;
  rows.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (int k = k_lo; k <= k_hi; ++k) {
    const ConvexPolynomial P = proof_polynomial(beta, k);
    TransitivityRow row;
    row.k = k;
    row.q1 = p_norm(evaluate_poly(P, T, y), p, lattice);

    const CompactVector sk = s_k_map(T, beta, k, h);
    row.q2 = p_norm(sk, p, lattice);

    CompactVector defect = evaluate_poly(P, T, sk);
    defect -= h;
    row.q3 = p_norm(defect, p, lattice);

    const double beta_k = beta == 1.0 ? 1.0 : std::pow(beta, k);
    const CompactVector scaled_sk = beta_k * S_power(T, h, k);
    const double predicted = p_norm(scaled_sk, p, lattice);
    CompactVector residual = defect;
    residual += scaled_sk;
    row.identity_residual = h_norm > 0.0 ? p_norm(residual, p, lattice) / h_norm : p_norm(residual, p, lattice);
    row.q3_identity_mismatch = std::abs(row.q3 - predicted) / std::max(row.q3, 1e-300);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wtlab
