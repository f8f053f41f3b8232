#pragma once

// Window-evaluated convex-cyclicity, hypercyclicity and mixing criteria for
// weighted translations, the aperiodic separation constant, and the
// necessary-condition statistic.
//
// Every sup-norm is taken over a finite window of lattice points (the
// compact set K), and every liminf is estimated by the minimum over
// k <= budget.  A PASS is therefore always PASS(budget).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "wtlab/convex_polynomial.hpp"
#include "wtlab/lattice.hpp"
#include "wtlab/weight.hpp"
#include "wtlab/weighted_translation.hpp"

namespace wtlab {

/// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr int kDefaultBudget = 200;

enum class CriterionBranch { kBetaGreaterThanOne, kBetaEqualsOne, kHypercyclic, kMixing };
enum class Verdict { kPass, kFail, kInconclusive };

inline const char* to_string(CriterionBranch b) {
  switch (b) {
    case CriterionBranch::kBetaGreaterThanOne: return "beta-gt-1";
    case CriterionBranch::kBetaEqualsOne: return "beta-eq-1";
    case CriterionBranch::kHypercyclic: return "hypercyclic";
    case CriterionBranch::kMixing: return "mixing";
  }
  return "unknown";
}

/// Which tail a product sequence eventually draws every factor from, and
/// whether the normalized sequence tends to zero because of it.
struct TailLaw {
  const char* side = "right";
  double tail_value = 1.0;
  bool tends_to_zero = false;
};

/// Pointwise witness that one of the two sequences cannot tend to zero.
struct Certificate {
  std::string sequence;  ///< "c" (backward products) or "d" (forward products)
  std::string kind;      ///< "tail-bound"
  double value = 0.0;    ///< inf of w along the tail the products run into
  std::string statement;
};

struct CriterionReport {
  CriterionBranch branch = CriterionBranch::kHypercyclic;
  double beta = 1.0;
  IndexWindow window;
  int budget = 0;
  double tolerance = kDefaultTolerance;
  /// Natural logs of c_k, d_k for k = 1..budget; always finite.
  std::vector<double> log_c;
  std::vector<double> log_d;
  double log_c_liminf = 0.0;
  double log_d_liminf = 0.0;
  TailLaw c_law;
  TailLaw d_law;
  Verdict verdict = Verdict::kInconclusive;
  std::optional<Certificate> certificate;

  double c(int k) const { return std::exp(log_c.at(static_cast<std::size_t>(k - 1))); }
  double d(int k) const { return std::exp(log_d.at(static_cast<std::size_t>(k - 1))); }
  double c_liminf() const { return std::exp(log_c_liminf); }
  double d_liminf() const { return std::exp(log_d_liminf); }

  std::string verdict_label() const {
    switch (verdict) {
      case Verdict::kPass: return "PASS(" + std::to_string(budget) + ")";
      case Verdict::kFail: return "FAIL";
      case Verdict::kInconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
  }
};

/// Least N0 with window and window + n g disjoint for every n > N0;
/// floor((|window| - 1) / |g|) on these lattices.
inline int separation_constant(const IndexWindow& window, const StepElement& g) {
  require_nonempty(window, "separation_constant");
  return static_cast<int>((window.hi - window.lo) / std::llabs(g.steps));
}

/// Least n >= 1 with window and window + n g disjoint; equals the number of
/// window points when |g| = 1.
inline int first_disjoint_power(const IndexWindow& window, const StepElement& g) {
  return separation_constant(window, g) + 1;
}

namespace detail {

enum class Normalizer { kGeometric, kLinear, kUnit };

inline double log_sigma(Normalizer n, double beta, int k) {
  switch (n) {
    case Normalizer::kGeometric: return k * std::log(beta);
    case Normalizer::kLinear: return std::log(static_cast<double>(k));
    case Normalizer::kUnit: return 0.0;
  }
  return 0.0;
}

/// Backward factors w(x + i g) run off toward sign(g); forward factors
/// w(x - i g) the other way.  Once every factor on the window comes from
/// that tail the sequences are exact geometric laws.
inline std::pair<TailLaw, TailLaw> tail_laws(const LatticeWeight& w, const StepElement& g, Normalizer n, double beta) {
  const bool g_positive = g.steps > 0;
  TailLaw c{g_positive ? "right" : "left", g_positive ? w.right_tail() : w.left_tail(), false};
  TailLaw d{g_positive ? "left" : "right", g_positive ? w.left_tail() : w.right_tail(), false};
  const double lb = g_positive ? w.log_right_tail() : w.log_left_tail();
  const double lf = g_positive ? w.log_left_tail() : w.log_right_tail();
  switch (n) {
    case Normalizer::kGeometric:
      c.tends_to_zero = lb < std::log(beta);
      d.tends_to_zero = std::log(beta) < lf;
      break;
    case Normalizer::kLinear:
      c.tends_to_zero = lb <= 0.0;
      d.tends_to_zero = lf > 0.0;
      break;
    case Normalizer::kUnit:
      c.tends_to_zero = lb < 0.0;
      d.tends_to_zero = lf > 0.0;
      break;
  }
  return {c, d};
}

inline Certificate tail_certificate(const char* seq, const TailLaw& law, Normalizer n) {
  const bool backward = std::string(seq) == "c";
  std::string norm = n == Normalizer::kGeometric ? "beta^k" : n == Normalizer::kLinear ? "k" : "1";
  std::string statement =
      backward ? "backward products on the window eventually draw every new factor from the " + std::string(law.side) +
                     " tail w = " + format_number(law.tail_value) + ", so sup_K prod >= C * " +
                     format_number(law.tail_value) + "^k and c_k = sup / " + norm + " does not tend to 0"
               : "forward products on the window eventually draw every new factor from the " + std::string(law.side) +
                     " tail w = " + format_number(law.tail_value) + ", so min_K prod <= C * " +
                     format_number(law.tail_value) + "^k and d_k = " + norm + " / min does not tend to 0";
  return Certificate{seq, "tail-bound", law.tail_value, std::move(statement)};
}

inline CriterionReport evaluate_sequences(const WeightedTranslation& T, CriterionBranch branch, double beta,
                                          Normalizer normalizer, const IndexWindow& window, int budget,
                                          double tolerance) {
  require_nonempty(window, "criterion");
  if (budget < 1) throw std::invalid_argument("criterion budget must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("criterion tolerance must be positive");

  CriterionReport r;
  r.branch = branch;
  r.beta = beta;
  r.window = window;
  r.budget = budget;
  r.tolerance = tolerance;
  r.log_c.reserve(static_cast<std::size_t>(budget));
  r.log_d.reserve(static_cast<std::size_t>(budget));

  RunningProduct backward(T.w, T.g, ProductKind::kBackward);
  RunningProduct forward(T.w, T.g, ProductKind::kForward);
  for (int k = 1; k <= budget; ++k) {
    backward.advance();
    forward.advance();
    const double ls = log_sigma(normalizer, beta, k);
    r.log_c.push_back(window_log_sup(backward.value(), window) - ls);
    r.log_d.push_back(ls - window_log_inf(forward.value(), window));
  }
  r.log_c_liminf = *std::min_element(r.log_c.begin(), r.log_c.end());
  r.log_d_liminf = *std::min_element(r.log_d.begin(), r.log_d.end());
  std::tie(r.c_law, r.d_law) = tail_laws(T.w, T.g, normalizer, beta);
  return r;
}

inline void assign_verdict(CriterionReport& r, bool numeric_pass, Normalizer normalizer) {
  if (numeric_pass) {
    r.verdict = Verdict::kPass;
    return;
  }
  if (!r.c_law.tends_to_zero) {
    r.verdict = Verdict::kFail;
    r.certificate = tail_certificate("c", r.c_law, normalizer);
  } else if (!r.d_law.tends_to_zero) {
    r.verdict = Verdict::kFail;
    r.certificate = tail_certificate("d", r.d_law, normalizer);
  } else {
    // Both sequences provably tend to zero; the budget was too short to see it.
    r.verdict = Verdict::kInconclusive;
  }
}

}  // namespace detail

/// Sufficient condition for convex-cyclicity:
///   c_k = sigma_k^{-1} sup_K prod_{i=1}^{k} w(x + i g)
///   d_k = sigma_k / inf_K prod_{i=0}^{k-1} w(x - i g)
/// with sigma_k = beta^k (beta > 1) or k (beta = 1).
inline CriterionReport theorem_a_check(const WeightedTranslation& T, double beta, const IndexWindow& window,
                                       int budget = kDefaultBudget, double tolerance = kDefaultTolerance) {
  if (!(beta >= 1.0)) throw std::invalid_argument("theorem_a_check requires beta >= 1");
  const bool unit = beta == 1.0;
  const auto normalizer = unit ? detail::Normalizer::kLinear : detail::Normalizer::kGeometric;
  auto r = detail::evaluate_sequences(
      T, unit ? CriterionBranch::kBetaEqualsOne : CriterionBranch::kBetaGreaterThanOne, beta, normalizer, window,
      budget, tolerance);
  const double lt = std::log(tolerance);
  detail::assign_verdict(r, r.log_c_liminf < lt && r.log_d_liminf < lt, normalizer);
  return r;
}

/// The unscaled (sigma_k = 1) pair of liminf conditions.
inline CriterionReport hypercyclicity_check(const WeightedTranslation& T, const IndexWindow& window,
                                            int budget = kDefaultBudget, double tolerance = kDefaultTolerance) {
  auto r = detail::evaluate_sequences(T, CriterionBranch::kHypercyclic, 1.0, detail::Normalizer::kUnit, window,
                                      budget, tolerance);
  const double lt = std::log(tolerance);
  detail::assign_verdict(r, r.log_c_liminf < lt && r.log_d_liminf < lt, detail::Normalizer::kUnit);
  return r;
}

/// Mixing: both unscaled sequences must tend to zero in full, monitored as
/// the last max(1, budget/4) entries all below tolerance.
inline CriterionReport mixing_check(const WeightedTranslation& T, const IndexWindow& window,
                                    int budget = kDefaultBudget, double tolerance = kDefaultTolerance) {
  auto r = detail::evaluate_sequences(T, CriterionBranch::kMixing, 1.0, detail::Normalizer::kUnit, window, budget,
                                      tolerance);
  const double lt = std::log(tolerance);
  const std::size_t tail = static_cast<std::size_t>(std::max(1, budget / 4));
  const auto below = [&](const std::vector<double>& s) {
    return std::all_of(s.end() - static_cast<std::ptrdiff_t>(tail), s.end(), [&](double v) { return v < lt; });
  };
  detail::assign_verdict(r, below(r.log_c) && below(r.log_d), detail::Normalizer::kUnit);
  return r;
}

/// Coefficients a_0..a_n used at step n of the necessary-condition statistic.
class CoefficientSchedule {
 public:
  /// a_j = 1/(n+1).
  static CoefficientSchedule uniform() { return CoefficientSchedule(std::nullopt); }

  /// a_j from P for j < n; all remaining mass of P sits on a_n.
  static CoefficientSchedule mass_shifted(ConvexPolynomial P) { return CoefficientSchedule(std::move(P)); }

  bool is_uniform() const noexcept { return !poly_; }
  const std::optional<ConvexPolynomial>& polynomial() const noexcept { return poly_; }

  std::vector<double> coefficients(int n) const {
    std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
    if (!poly_) {
      std::fill(a.begin(), a.end(), 1.0 / (n + 1));
      return a;
    }
    const auto& p = poly_->coefficients();
    for (std::size_t j = 0; j < p.size(); ++j) a[std::min(j, static_cast<std::size_t>(n))] += p[j];
    return a;
  }

 private:
  explicit CoefficientSchedule(std::optional<ConvexPolynomial> p) : poly_(std::move(p)) {}
  std::optional<ConvexPolynomial> poly_;
};

struct TheoremBRow {
  int n = 0;
  double min_phi = 0.0;    ///< min over kept window points of Phi_n
  double statistic = 0.0;  ///< 1 / min_phi
};

struct TheoremBResult {
  int offset = 0;  ///< N0, the degree of the lowest term
  IndexWindow window;
  double exclude_fraction = 0.0;
  std::vector<TheoremBRow> rows;
};

/// s_n = 1 / min_{x in K} Phi_n(x) with
///   Phi_n(x) = sum_{j=0}^{n} a_j prod_{i=0}^{N0+j-1} w(x - i g).
/// N0 defaults to first_disjoint_power(K, g).  exclude_fraction drops that
/// share of window points with the largest 1/Phi_n (gridded reals).
inline TheoremBResult theorem_b_statistic(const WeightedTranslation& T, const IndexWindow& window,
                                          const CoefficientSchedule& schedule, int n_budget,
                                          std::optional<int> offset = std::nullopt, double exclude_fraction = 0.0) {
  require_nonempty(window, "theorem_b_statistic");
  if (n_budget < 0) throw std::invalid_argument("theorem_b_statistic requires n_budget >= 0");
  if (!(exclude_fraction >= 0.0 && exclude_fraction < 1.0)) {
    throw std::invalid_argument("exclude_fraction must lie in [0, 1)");
  }
  TheoremBResult out;
  out.offset = offset.value_or(first_disjoint_power(window, T.g));
  if (out.offset < 0) throw std::invalid_argument("theorem_b_statistic offset must be >= 0");
  out.window = window;
  out.exclude_fraction = exclude_fraction;

  const auto width = static_cast<std::size_t>(window.size());
  // log F_{N0+j}(x) for j = 0..n_budget, x in the window.
  std::vector<std::vector<double>> log_f;
  log_f.reserve(static_cast<std::size_t>(n_budget) + 1);
  RunningProduct forward(T.w, T.g, ProductKind::kForward);
  forward.advance_to(out.offset);
  for (int j = 0; j <= n_budget; ++j) {
    if (j > 0) forward.advance();
    std::vector<double> row(width);
    for (std::size_t i = 0; i < width; ++i) row[i] = forward.value().log_at(window.lo + static_cast<Index>(i));
    log_f.push_back(std::move(row));
  }

  const auto drop = static_cast<std::size_t>(std::floor(exclude_fraction * static_cast<double>(width)));
  std::vector<double> log_phi(width);
  for (int n = 0; n <= n_budget; ++n) {
    const auto a = schedule.coefficients(n);
    for (std::size_t i = 0; i < width; ++i) {
      // log-sum-exp over the terms with a_j > 0
      double m = -std::numeric_limits<double>::infinity();
      for (int j = 0; j <= n; ++j) {
        if (a[static_cast<std::size_t>(j)] > 0.0) {
          m = std::max(m, std::log(a[static_cast<std::size_t>(j)]) + log_f[static_cast<std::size_t>(j)][i]);
        }
      }
      double s = 0.0;
      for (int j = 0; j <= n; ++j) {
        if (a[static_cast<std::size_t>(j)] > 0.0) {
          s += std::exp(std::log(a[static_cast<std::size_t>(j)]) + log_f[static_cast<std::size_t>(j)][i] - m);
        }
      }
      log_phi[i] = m + std::log(s);
    }
    std::vector<double> sorted = log_phi;
    std::sort(sorted.begin(), sorted.end());
    const double log_min = sorted[std::min(drop, width - 1)];
    out.rows.push_back(TheoremBRow{n, std::exp(log_min), std::exp(-log_min)});
  }
  return out;
}

}  // namespace wtlab
