#pragma once

// Distance from a target to the convex hull of a truncated orbit,
//   min_{a in simplex} || sum_{n=0}^{N} a_n T^n(seed) - target ||_2,
// by Frank-Wolfe with away steps (exact line search on the quadratic), or
// by brute force over a simplex grid for test-scale instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtlab/convex_polynomial.hpp"
#include "wtlab/lattice.hpp"
#include "wtlab/weighted_translation.hpp"

namespace wtlab {

class HullError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f(a) = a^T G a - 2 b^T a + c over the probability simplex.
struct SimplexQuadratic {
  int m = 0;
  std::vector<double> gram;  ///< m x m, row-major
  std::vector<double> linear;
  double constant = 0.0;

  double G(int i, int j) const { return gram[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + j]; }

  double value(const std::vector<double>& a) const {
    double quad = 0.0;
    double lin = 0.0;
    for (int i = 0; i < m; ++i) {
      if (a[i] == 0.0) continue;
      double row = 0.0;
      for (int j = 0; j < m; ++j) row += G(i, j) * a[j];
      quad += a[i] * row;
      lin += linear[i] * a[i];
    }
    return quad - 2.0 * lin + constant;
  }
};

struct SimplexSolution {
  std::vector<double> a;
  double gap = 0.0;  ///< Frank-Wolfe duality gap at a (upper bound on f(a) - f*)
  int iterations = 0;
};

/// Away-step Frank-Wolfe.  Ties in both vertex searches go to the smallest
/// index.  Starts from `start`, which must lie in the simplex.
inline SimplexSolution frank_wolfe_simplex(const SimplexQuadratic& q, std::vector<double> start, int max_iters,
                                           double gap_tol) {
  const int m = q.m;
  std::vector<double>& a = start;
  std::vector<double> Ga(static_cast<std::size_t>(m), 0.0);
  std::vector<double> Gd(static_cast<std::size_t>(m), 0.0);
  std::vector<double> grad(static_cast<std::size_t>(m), 0.0);

  const auto refresh = [&] {
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += q.G(i, j) * a[j];
      Ga[i] = s;
    }
  };
  refresh();

  SimplexSolution out;
  for (int it = 0;; ++it) {
    if (it > 0 && it % 64 == 0) refresh();
    double grad_dot_a = 0.0;
    for (int i = 0; i < m; ++i) {
      grad[i] = 2.0 * (Ga[i] - q.linear[i]);
      grad_dot_a += grad[i] * a[i];
    }
    int j = 0;
    for (int i = 1; i < m; ++i) {
      if (grad[i] < grad[j]) j = i;
    }
    out.gap = grad_dot_a - grad[j];
    out.iterations = it;
    if (out.gap <= gap_tol || it >= max_iters) break;

    int k = -1;
    for (int i = 0; i < m; ++i) {
      if (a[i] > 0.0 && (k < 0 || grad[i] > grad[k])) k = i;
    }
    const double away_gain = grad[k] - grad_dot_a;
    const bool away = away_gain > out.gap && a[k] < 1.0;

    double slope = 0.0;
    double gamma_max = 1.0;
    if (!away) {
      for (int i = 0; i < m; ++i) Gd[i] = q.G(i, j) - Ga[i];
      slope = -out.gap;
    } else {
      for (int i = 0; i < m; ++i) Gd[i] = Ga[i] - q.G(i, k);
      slope = -away_gain;
      gamma_max = a[k] / (1.0 - a[k]);
    }
    // d^T G d, with d = e_j - a (FW) or a - e_k (away).
    double dGd = 0.0;
    for (int i = 0; i < m; ++i) dGd += (away ? a[i] : -a[i]) * Gd[i];
    dGd += away ? -Gd[k] : Gd[j];

    double gamma = dGd > 0.0 ? std::min(gamma_max, -slope / (2.0 * dGd)) : gamma_max;
    if (!(gamma > 0.0)) break;  // no descent possible at working precision

    if (!away) {
      for (int i = 0; i < m; ++i) a[i] *= (1.0 - gamma);
      a[j] += gamma;
    } else {
      for (int i = 0; i < m; ++i) a[i] *= (1.0 + gamma);
      a[k] -= gamma;
      if (gamma == gamma_max || a[k] < 0.0) a[k] = 0.0;  // drop step
    }
    for (int i = 0; i < m; ++i) Ga[i] += gamma * Gd[i];
  }
  out.a = std::move(a);
  return out;
}

namespace detail {

inline double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

inline constexpr double kOracleMaxEvaluations = 2e9;

/// Exhaustive search over the grid { a : a_i in resolution * Z, sum a = 1 }.
/// By Caratheodory only supports of size min(m, dimension + 1) are scanned.
inline std::vector<double> grid_oracle_simplex(const SimplexQuadratic& q, double resolution, int dimension) {
  if (!(resolution > 0.0 && resolution <= 1.0)) throw HullError("oracle grid resolution must lie in (0, 1]");
  const int R = static_cast<int>(std::lround(1.0 / resolution));
  const int m = q.m;
  const int s = std::min(m, std::max(1, dimension + 1));
  const double cost = detail::binomial(m, s) * detail::binomial(R + s - 1, s - 1);
  if (cost > kOracleMaxEvaluations) {
    throw HullError("simplex-grid oracle needs ~" + std::to_string(cost) +
                    " evaluations; instance is beyond test scale");
  }

  std::vector<double> best(static_cast<std::size_t>(m), 0.0);
  best[0] = 1.0;
  double best_value = q.value(best);

  std::vector<int> subset(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) subset[i] = i;
  std::vector<int> counts(static_cast<std::size_t>(s), 0);
  std::vector<double> w(static_cast<std::size_t>(s), 0.0);

  for (;;) {
    // Enumerate compositions of R into s parts (last part is the remainder).
    std::fill(counts.begin(), counts.end(), 0);
    counts[s - 1] = R;
    for (;;) {
      double value = q.constant;
      for (int u = 0; u < s; ++u) {
        w[u] = counts[u] / static_cast<double>(R);
        if (w[u] == 0.0) continue;
        double row = 0.0;
        for (int v = 0; v < s; ++v) row += q.G(subset[u], subset[v]) * (counts[v] / static_cast<double>(R));
        value += w[u] * (row - 2.0 * q.linear[subset[u]]);
      }
      if (value < best_value) {
        best_value = value;
        std::fill(best.begin(), best.end(), 0.0);
        for (int u = 0; u < s; ++u) best[subset[u]] = w[u];
      }
      // Next composition: move one unit from the remainder into the first
      // s-1 parts in odometer order.
      if (s == 1) break;
      int pos = 0;
      while (pos < s - 1) {
        if (counts[s - 1] > 0) {
          ++counts[pos];
          --counts[s - 1];
          break;
        }
        counts[s - 1] += counts[pos];
        counts[pos] = 0;
        ++pos;
      }
      if (pos == s - 1) break;
    }
    // Next subset in lexicographic order.
    int i = s - 1;
    while (i >= 0 && subset[i] == m - s + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int t = i + 1; t < s; ++t) subset[t] = subset[t - 1] + 1;
  }
  return best;
}

enum class HullMethod { kFrankWolfe, kOracle };

inline const char* to_string(HullMethod m) { return m == HullMethod::kFrankWolfe ? "frank-wolfe" : "oracle"; }

struct HullOptions {
  HullMethod method = HullMethod::kFrankWolfe;
  int max_iters = 100000;
  double gap_tol = 1e-13;
  double grid_resolution = 1.0 / 200.0;
  /// Orbit vectors and target are restricted to this window when set;
  /// otherwise the window covering every support is used.
  std::optional<IndexWindow> truncation_window;
  Index support_cap = 1 << 16;
  double truncation_flag_threshold = 1e-9;
};

struct HullTraceRow {
  int N = 0;
  double distance = 0.0;
  double fw_gap = std::numeric_limits<double>::quiet_NaN();  ///< NaN for the oracle
  double truncation_mass = 0.0;
};

struct HullResult {
  double distance = 0.0;
  ConvexPolynomial coefficients{std::vector<double>{1.0}};
  std::vector<HullTraceRow> trace;  ///< one row per orbit budget 0..N
  IndexWindow window;
  double truncation_mass = 0.0;  ///< largest l2 mass dropped outside the window
  bool truncation_flagged = false;
  int iterations = 0;
};

inline HullResult hull_distance(const WeightedTranslation& T, const CompactVector& seed, const CompactVector& target,
                                int orbit_budget, const HullOptions& options = {}) {
  if (orbit_budget < 0) throw std::invalid_argument("hull_distance requires orbit_budget >= 0");
  const std::vector<CompactVector> orb = orbit(T, seed, orbit_budget);

  IndexWindow window = target.support();
  for (const auto& v : orb) window = support_union(window, v.support());
  if (options.truncation_window) window = *options.truncation_window;
  if (window.empty()) window = IndexWindow{0, 0};
  if (window.size() > options.support_cap) {
    throw HullError("hull window of " + std::to_string(window.size()) + " lattice points exceeds the support cap of " +
                    std::to_string(options.support_cap));
  }

  const double mu = T.lattice.measure_weight();
  const double root_mu = std::sqrt(mu);
  const auto width = static_cast<std::size_t>(window.size());

  const auto outside_mass = [&](const CompactVector& v) {
    double acc = 0.0;
    for (Index x = v.support_lo(); x <= v.support_hi(); ++x) {
      if (!window.contains(x)) acc += std::norm(v.at(x));
    }
    return std::sqrt(acc * mu);
  };

  bool complex_data = false;
  const auto coordinates = [&](const CompactVector& v) {
    std::vector<Scalar> c(width);
    for (std::size_t i = 0; i < width; ++i) {
      c[i] = v.at(window.lo + static_cast<Index>(i)) * root_mu;
      complex_data = complex_data || c[i].imag() != 0.0;
    }
    return c;
  };

  const int m = orbit_budget + 1;
  std::vector<std::vector<Scalar>> V;
  V.reserve(static_cast<std::size_t>(m));
  std::vector<double> mass(static_cast<std::size_t>(m));
  for (int n = 0; n < m; ++n) {
    V.push_back(coordinates(orb[n]));
    mass[n] = outside_mass(orb[n]);
  }
  const std::vector<Scalar> t = coordinates(target);
  const double target_mass = outside_mass(target);

  const auto real_inner = [&](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < width; ++i) s += u[i].real() * v[i].real() + u[i].imag() * v[i].imag();
    return s;
  };

  SimplexQuadratic full;
  full.m = m;
  full.gram.assign(static_cast<std::size_t>(m) * m, 0.0);
  full.linear.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double g = real_inner(V[i], V[j]);
      full.gram[static_cast<std::size_t>(i) * m + j] = g;
      full.gram[static_cast<std::size_t>(j) * m + i] = g;
    }
    full.linear[i] = real_inner(V[i], t);
  }
  full.constant = real_inner(t, t);

  const auto residual_distance = [&](const std::vector<double>& a) {
    double acc = 0.0;
    for (std::size_t x = 0; x < width; ++x) {
      Scalar s = -t[x];
      for (std::size_t n = 0; n < a.size(); ++n) {
        if (a[n] != 0.0) s += a[n] * V[n][x];
      }
      acc += std::norm(s);
    }
    return std::sqrt(acc);
  };

  const auto prefix = [&](int k) {
    SimplexQuadratic q;
    q.m = k;
    q.gram.resize(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) q.gram[static_cast<std::size_t>(i) * k + j] = full.G(i, j);
    }
    q.linear.assign(full.linear.begin(), full.linear.begin() + k);
    q.constant = full.constant;
    return q;
  };

  const int dimension = static_cast<int>(width) * (complex_data ? 2 : 1);

  HullResult result;
  result.window = window;
  std::vector<double> incumbent{1.0};
  double incumbent_distance = residual_distance(incumbent);
  double running_mass = target_mass;
  for (int N = 0; N < m; ++N) {
    running_mass = std::max(running_mass, mass[N]);
    const SimplexQuadratic q = prefix(N + 1);
    std::vector<double> start = incumbent;
    start.resize(static_cast<std::size_t>(N) + 1, 0.0);

    HullTraceRow row;
    row.N = N;
    std::vector<double> a;
    if (options.method == HullMethod::kFrankWolfe) {
      SimplexSolution sol = frank_wolfe_simplex(q, start, options.max_iters, options.gap_tol);
      a = std::move(sol.a);
      row.fw_gap = sol.gap;
      result.iterations += sol.iterations;
    } else {
      a = grid_oracle_simplex(q, options.grid_resolution, dimension);
    }
    // Keep the warm start if the solve did not improve the measured distance.
    const double d = residual_distance(a);
    if (N == 0 || d <= incumbent_distance) {
      incumbent = std::move(a);
      incumbent_distance = d;
    } else {
      incumbent = std::move(start);
    }
    row.distance = incumbent_distance;
    row.truncation_mass = running_mass;
    result.trace.push_back(row);
  }

  for (double& v : incumbent) v = std::max(v, 0.0);
  double sum = 0.0;
  for (double v : incumbent) sum += v;
  for (double& v : incumbent) v /= sum;
  result.distance = incumbent_distance;
  result.coefficients = ConvexPolynomial::from_degrees(incumbent);
  result.truncation_mass = running_mass;
  result.truncation_flagged = running_mass > options.truncation_flag_threshold;
  return result;
}

}  // namespace wtlab
