#pragma once

// Shared test helpers: random instances and slow reference implementations
// that share no code with the library beyond its value types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "wtlab/wtlab.hpp"

namespace testing_support {

using wtlab::CompactVector;
using wtlab::Index;
using wtlab::Scalar;

/// Plain description of an eventually constant weight, evaluated directly.
struct RefWeight {
  double left = 1.0;
  double right = 1.0;
  Index core_lo = 0;
  std::vector<double> core;

  double operator()(Index x) const {
    if (x < core_lo) return left;
    if (x >= core_lo + static_cast<Index>(core.size())) return right;
    return core[static_cast<std::size_t>(x - core_lo)];
  }
  wtlab::LatticeWeight lattice_weight() const { return wtlab::LatticeWeight(left, right, core_lo, core); }
};

/// prod_{i=1}^{k} w(x + i g), one factor at a time.
inline double ref_backward(const RefWeight& w, Index g, int k, Index x) {
  double p = 1.0;
  for (int i = 1; i <= k; ++i) p *= w(x + i * g);
  return p;
}

/// prod_{i=0}^{k-1} w(x - i g).
inline double ref_forward(const RefWeight& w, Index g, int k, Index x) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= w(x - i * g);
  return p;
}

using RefVector = std::map<Index, Scalar>;

inline RefVector to_ref(const CompactVector& f) {
  RefVector out;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f.values()[j] != Scalar{}) out[f.support_lo() + static_cast<Index>(j)] = f.values()[j];
  }
  return out;
}

/// (T f)(x) = w(x) f(x - g) on a map.
inline RefVector ref_apply(const RefWeight& w, Index g, const RefVector& f) {
  RefVector out;
  for (const auto& [y, v] : f) out[y + g] = w(y + g) * v;
  return out;
}

/// max |a(x) - b(x)| / max(1, max |b|).
inline double relative_gap(const CompactVector& a, const RefVector& b) {
  double scale = 1.0;
  for (const auto& [x, v] : b) scale = std::max(scale, std::abs(v));
  double gap = 0.0;
  for (const auto& [x, v] : b) gap = std::max(gap, std::abs(a.at(x) - v));
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Index x = a.support_lo() + static_cast<Index>(j);
    if (!b.count(x)) gap = std::max(gap, std::abs(a.values()[j]));
  }
  return gap / scale;
}

/// max |a - b| / max(1, max |b|) over both supports.
inline double relative_gap(const CompactVector& a, const CompactVector& b) { return relative_gap(a, to_ref(b)); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53); }
  Index integer(Index lo, Index hi) { return lo + static_cast<Index>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  RefWeight weight(double lo = 0.3, double hi = 3.0, Index max_core = 8) {
    RefWeight w;
    w.left = uniform(lo, hi);
    w.right = uniform(lo, hi);
    w.core_lo = integer(-10, 10);
    const Index n = integer(0, max_core);
    for (Index i = 0; i < n; ++i) w.core.push_back(uniform(lo, hi));
    return w;
  }

  Index step(Index max_abs = 3) {
    Index g = 0;
    while (g == 0) g = integer(-max_abs, max_abs);
    return g;
  }

  CompactVector vector(Index lo_min = -8, Index lo_max = 8, Index max_len = 6) {
    const Index lo = integer(lo_min, lo_max);
    const Index len = integer(1, max_len);
    std::vector<Scalar> v;
    for (Index i = 0; i < len; ++i) v.emplace_back(uniform(-1, 1), uniform(-1, 1));
    return CompactVector(lo, std::move(v));
  }

  std::vector<double> simplex_point(int m) {
    std::vector<double> a(static_cast<std::size_t>(m));
    double s = 0.0;
    for (auto& v : a) {
      v = -std::log(uniform(1e-12, 1.0));
      s += v;
    }
    for (auto& v : a) v /= s;
    return a;
  }

 private:
  std::mt19937_64 gen_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Returns false when A is numerically singular.
inline bool solve_linear(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    if (std::abs(A[piv][c]) < 1e-12) return false;
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return true;
}

/// Exact minimum of ||sum a_i v_i - t||^2 over the simplex by enumerating
/// supports: on each subset solve the equality-constrained QP through its
/// KKT system and keep feasible solutions.  Vectors are real coordinate
/// arrays.  Feasible for up to ~12 vectors.
inline double ref_hull_distance(const std::vector<std::vector<double>>& v, const std::vector<double>& t,
                                std::vector<double>* best_a = nullptr) {
  const std::size_t m = v.size();
  const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const std::size_t s = idx.size();
    // [G 1; 1^T 0] [a; mu] = [<v_i, t>; 1]
    std::vector<std::vector<double>> A(s + 1, std::vector<double>(s + 1, 0.0));
    std::vector<double> b(s + 1, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) A[i][j] = dot(v[idx[i]], v[idx[j]]);
      A[i][s] = 1.0;
      A[s][i] = 1.0;
      b[i] = dot(v[idx[i]], t);
    }
    b[s] = 1.0;
    std::vector<double> x;
    if (!solve_linear(A, b, x)) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < s; ++i) feasible = feasible && x[i] >= -1e-12;
    if (!feasible) continue;
    std::vector<double> r(t.size(), 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t c = 0; c < t.size(); ++c) r[c] += x[i] * v[idx[i]][c];
    }
    for (std::size_t c = 0; c < t.size(); ++c) r[c] -= t[c];
    const double d = std::sqrt(std::max(0.0, dot(r, r)));
    if (d < best) {
      best = d;
      if (best_a) {
        best_a->assign(m, 0.0);
        for (std::size_t i = 0; i < s; ++i) (*best_a)[idx[i]] = std::max(0.0, x[i]);
      }
    }
  }
  return best;
}

/// Real coordinates of f on [lo, hi] scaled by sqrt(measure): (re..., im...).
inline std::vector<double> coordinates(const CompactVector& f, Index lo, Index hi, double measure = 1.0) {
  std::vector<double> out;
  const double s = std::sqrt(measure);
  for (Index x = lo; x <= hi; ++x) out.push_back(s * f.at(x).real());
  for (Index x = lo; x <= hi; ++x) out.push_back(s * f.at(x).imag());
  return out;
}

}  // namespace testing_support
