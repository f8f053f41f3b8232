#pragma once

// Sampled evidence about convex-cyclicity: the Hahn-Banach functional probe
// (sup_n Re Lambda(T^n x) must be +infinity for a convex-cyclic x) and the
// adjoint eigenvector recurrence probe (point spectrum of T*).

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtlab/lattice.hpp"
#include "wtlab/weighted_translation.hpp"

namespace wtlab {

struct FunctionalProbeResult {
  double sup_value = 0.0;  ///< max_{0<=n<=horizon} Re pair(T^n x, Lambda)
  int attained_n = 0;      ///< first n attaining the max
  /// The running max still increased somewhere in the last quarter of the
  /// horizon.  False marks Lambda as a witness candidate against x.
  bool growth_flag = false;
};

inline std::vector<FunctionalProbeResult> hahn_banach_probe(const WeightedTranslation& T, const CompactVector& x,
                                                            const std::vector<CompactVector>& functionals,
                                                            int horizon) {
  if (horizon < 1) throw std::invalid_argument("hahn_banach_probe requires horizon >= 1");
  for (std::size_t i = 0; i < functionals.size(); ++i) {
    if (functionals[i].is_zero()) {
      throw std::invalid_argument("hahn_banach_probe: functional " + std::to_string(i) + " is zero");
    }
  }
  std::vector<FunctionalProbeResult> out(functionals.size());
  std::vector<bool> started(functionals.size(), false);
  const int last_quarter_start = horizon - horizon / 4;

  CompactVector iterate = x;
  for (int n = 0; n <= horizon; ++n) {
    if (n > 0) iterate = apply(T, iterate);
    for (std::size_t i = 0; i < functionals.size(); ++i) {
      const double v = pair(iterate, functionals[i]).real();
      auto& r = out[i];
      if (!started[i] || v > r.sup_value) {
        if (started[i] && n >= last_quarter_start && n > 0) r.growth_flag = true;
        r.sup_value = v;
        r.attained_n = n;
        started[i] = true;
      }
    }
  }
  return out;
}

enum class SpectrumVerdict { kNoEigenvector, kDecayingCandidate };

inline const char* to_string(SpectrumVerdict v) {
  return v == SpectrumVerdict::kNoEigenvector ? "no eigenvector" : "decaying candidate";
}

struct EigenProbeResult {
  Scalar lambda;
  /// Geometric growth rate |phi|^{1/n} of the formal eigenvector walking in
  /// the +g direction (forward) and the -g direction (backward).
  double forward_ratio = 0.0;
  double backward_ratio = 0.0;
  SpectrumVerdict verdict = SpectrumVerdict::kNoEigenvector;
};

/// A ratio this close to one is treated as non-decaying.
inline constexpr double kDecayMargin = 1e-12;

/// Solves T* phi = lambda phi with phi(0) = 1 through the recurrence
///   phi(y + g) = lambda phi(y) / w(y + g)      (forward)
///   phi(y - g) = w(y) phi(y) / lambda          (backward)
/// for `horizon` steps each way.  Growth rates are measured over the last
/// quarter of the walk, where eventually constant weights give exact
/// geometric laws.
inline EigenProbeResult eigen_recurrence_probe(const WeightedTranslation& T, Scalar lambda, int horizon) {
  if (lambda == Scalar{}) {
    throw std::invalid_argument("eigen_recurrence_probe: lambda = 0 (positive weights give T* a trivial kernel)");
  }
  if (horizon < 2) throw std::invalid_argument("eigen_recurrence_probe requires horizon >= 2");
  const double log_lambda = std::log(std::abs(lambda));
  const Index g = T.g.steps;

  // log|phi| along each direction; the phase is irrelevant to decay.
  std::vector<double> fwd(static_cast<std::size_t>(horizon) + 1, 0.0);
  std::vector<double> bwd(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (int n = 1; n <= horizon; ++n) {
    const Index y = (n - 1) * g;
    fwd[static_cast<std::size_t>(n)] = fwd[static_cast<std::size_t>(n - 1)] + log_lambda - T.w.log_at(y + g);
    bwd[static_cast<std::size_t>(n)] = bwd[static_cast<std::size_t>(n - 1)] + T.w.log_at(-y) - log_lambda;
  }
  const int span = std::max(1, horizon / 4);
  const auto rate = [&](const std::vector<double>& l) {
    return std::exp((l[static_cast<std::size_t>(horizon)] - l[static_cast<std::size_t>(horizon - span)]) / span);
  };
  EigenProbeResult r;
  r.lambda = lambda;
  r.forward_ratio = rate(fwd);
  r.backward_ratio = rate(bwd);
  const bool decays = r.forward_ratio < 1.0 - kDecayMargin && r.backward_ratio < 1.0 - kDecayMargin;
  r.verdict = decays ? SpectrumVerdict::kDecayingCandidate : SpectrumVerdict::kNoEigenvector;
  return r;
}

struct LambdaGrid {
  double modulus_min = 0.25;
  double modulus_max = 4.0;
  double modulus_step = 0.25;
  int argument_divisions = 16;  ///< arguments 2 pi j / divisions, j = 0..divisions-1
};

inline std::vector<Scalar> lambda_samples(const LambdaGrid& grid) {
  if (!(grid.modulus_min > 0.0) || !(grid.modulus_step > 0.0) || grid.modulus_max < grid.modulus_min ||
      grid.argument_divisions < 1) {
    throw std::invalid_argument("invalid lambda grid");
  }
  std::vector<Scalar> out;
  const int count = static_cast<int>(std::floor((grid.modulus_max - grid.modulus_min) / grid.modulus_step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) {
    const double r = grid.modulus_min + i * grid.modulus_step;
    for (int j = 0; j < grid.argument_divisions; ++j) {
      out.push_back(std::polar(r, 2.0 * std::numbers::pi * j / grid.argument_divisions));
    }
  }
  return out;
}

inline std::vector<EigenProbeResult> spectrum_sweep(const WeightedTranslation& T, const LambdaGrid& grid,
                                                    int horizon) {
  std::vector<EigenProbeResult> out;
  for (const Scalar& l : lambda_samples(grid)) out.push_back(eigen_recurrence_probe(T, l, horizon));
  return out;
}

}  // namespace wtlab
