#pragma once

// Eventually constant, strictly positive, bounded weights on a lattice and
// the running translate-products that every criterion is built from.
//
// A weight is two tails plus a finite core.  Values are kept linear until a
// product leaves [1e-300, 1e300]; from then on the weight lives in log space
// and stays there.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wtlab/lattice.hpp"

namespace wtlab {

namespace detail {
inline constexpr double kLinearMax = 1e300;
inline constexpr double kLinearMin = 1e-300;

inline bool in_linear_range(double v) { return v >= kLinearMin && v <= kLinearMax; }
}  // namespace detail

class LatticeWeight {
 public:
  /// Linear-domain weight.  left_tail applies below core_lo, right_tail at and
  /// above core_lo + core.size().
  LatticeWeight(double left_tail, double right_tail, Index core_lo, std::vector<double> core)
      : left_(left_tail), right_(right_tail), core_lo_(core_lo), core_(std::move(core)) {
    check_positive(left_, "left tail");
    check_positive(right_, "right tail");
    for (double v : core_) check_positive(v, "core value");
  }

  static LatticeWeight constant(double c) { return LatticeWeight(c, c, 0, {}); }

  /// Weight given by natural logs of its values; stays in log space.
  static LatticeWeight from_logs(double log_left, double log_right, Index core_lo, std::vector<double> log_core) {
    LatticeWeight w;
    w.log_domain_ = true;
    w.left_ = log_left;
    w.right_ = log_right;
    w.core_lo_ = core_lo;
    w.core_ = std::move(log_core);
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(w.left_) || !finite(w.right_) || !std::all_of(w.core_.begin(), w.core_.end(), finite)) {
      throw std::invalid_argument("log-space weight values must be finite");
    }
    return w;
  }

  bool log_domain() const noexcept { return log_domain_; }
  Index core_lo() const noexcept { return core_lo_; }
  /// One past the last core index.
  Index core_end() const noexcept { return core_lo_ + static_cast<Index>(core_.size()); }
  std::size_t core_size() const noexcept { return core_.size(); }

  double log_at(Index x) const noexcept { return to_log(raw_at(x)); }
  double at(Index x) const noexcept { return to_linear(raw_at(x)); }

  double left_tail() const noexcept { return to_linear(left_); }
  double right_tail() const noexcept { return to_linear(right_); }
  double log_left_tail() const noexcept { return to_log(left_); }
  double log_right_tail() const noexcept { return to_log(right_); }

  /// Global supremum (finite by construction) and infimum.
  double log_sup() const noexcept {
    double m = std::max(left_, right_);
    for (double v : core_) m = std::max(m, v);
    return to_log(m);
  }
  double log_inf() const noexcept {
    double m = std::min(left_, right_);
    for (double v : core_) m = std::min(m, v);
    return to_log(m);
  }
  double sup() const noexcept { return std::exp(log_sup()); }
  double inf() const noexcept { return std::exp(log_inf()); }

  /// Storage-domain accessors (logs when log_domain()).  Used by the
  /// closure operations below.
  double raw_left() const noexcept { return left_; }
  double raw_right() const noexcept { return right_; }
  const std::vector<double>& raw_core() const noexcept { return core_; }
  double raw_at(Index x) const noexcept {
    if (x < core_lo_) return left_;
    if (x >= core_end()) return right_;
    return core_[static_cast<std::size_t>(x - core_lo_)];
  }

  /// Same weight in log space.
  LatticeWeight as_log() const {
    if (log_domain_) return *this;
    std::vector<double> logs(core_.size());
    std::transform(core_.begin(), core_.end(), logs.begin(), [](double v) { return std::log(v); });
    return from_logs(std::log(left_), std::log(right_), core_lo_, std::move(logs));
  }

 private:
  LatticeWeight() = default;

  static void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("weight ") + what + " must be positive and finite");
    }
  }
  double to_log(double raw) const noexcept { return log_domain_ ? raw : std::log(raw); }
  double to_linear(double raw) const noexcept { return log_domain_ ? std::exp(raw) : raw; }

  bool log_domain_ = false;
  double left_ = 1.0;
  double right_ = 1.0;
  Index core_lo_ = 0;
  std::vector<double> core_;
};

/// x -> w(x - n g).
inline LatticeWeight translate_weight(const LatticeWeight& w, Index n, const StepElement& g) {
  const Index shift = n * g.steps;
  if (w.log_domain()) return LatticeWeight::from_logs(w.raw_left(), w.raw_right(), w.core_lo() + shift, w.raw_core());
  return LatticeWeight(w.raw_left(), w.raw_right(), w.core_lo() + shift, w.raw_core());
}

/// x -> u(x) v(x).
inline LatticeWeight pointwise_product(const LatticeWeight& u, const LatticeWeight& v) {
  // Region where either factor differs from its tails.  An empty core still
  // marks a tail boundary at core_lo.
  const Index lo = std::min(u.core_lo(), v.core_lo());
  const Index end = std::max(u.core_end(), v.core_end());

  if (!u.log_domain() && !v.log_domain()) {
    const double left = u.raw_left() * v.raw_left();
    const double right = u.raw_right() * v.raw_right();
    std::vector<double> core(static_cast<std::size_t>(end - lo));
    bool linear_ok = detail::in_linear_range(left) && detail::in_linear_range(right);
    for (Index x = lo; x < end; ++x) {
      const double p = u.raw_at(x) * v.raw_at(x);
      core[static_cast<std::size_t>(x - lo)] = p;
      linear_ok = linear_ok && detail::in_linear_range(p);
    }
    if (linear_ok) return LatticeWeight(left, right, lo, std::move(core));
  }
  std::vector<double> core(static_cast<std::size_t>(end - lo));
  for (Index x = lo; x < end; ++x) core[static_cast<std::size_t>(x - lo)] = u.log_at(x) + v.log_at(x);
  return LatticeWeight::from_logs(u.log_left_tail() + v.log_left_tail(), u.log_right_tail() + v.log_right_tail(),
                                  lo, std::move(core));
}

/// x -> 1 / w(x).
inline LatticeWeight reciprocal(const LatticeWeight& w) {
  if (!w.log_domain()) {
    std::vector<double> core(w.raw_core().size());
    bool linear_ok = detail::in_linear_range(1.0 / w.raw_left()) && detail::in_linear_range(1.0 / w.raw_right());
    for (std::size_t j = 0; j < core.size(); ++j) {
      core[j] = 1.0 / w.raw_core()[j];
      linear_ok = linear_ok && detail::in_linear_range(core[j]);
    }
    if (linear_ok) return LatticeWeight(1.0 / w.raw_left(), 1.0 / w.raw_right(), w.core_lo(), std::move(core));
  }
  const LatticeWeight lw = w.as_log();
  std::vector<double> core(lw.raw_core().size());
  std::transform(lw.raw_core().begin(), lw.raw_core().end(), core.begin(), [](double v) { return -v; });
  return LatticeWeight::from_logs(-lw.raw_left(), -lw.raw_right(), lw.core_lo(), std::move(core));
}

/// Scalar multiple c * w.
inline LatticeWeight scaled(const LatticeWeight& w, double c) { return pointwise_product(w, LatticeWeight::constant(c)); }

enum class ProductKind {
  kBackward,  ///< prod_{i=1}^{k} w(x + i g)
  kForward,   ///< prod_{i=0}^{k-1} w(x - i g)
};

/// Incrementally built translate-product of order k (k = 0 is the constant 1).
/// Each advance() multiplies in one more translate, so a full sequence
/// k = 1..K costs one product per step.
class RunningProduct {
 public:
  RunningProduct(LatticeWeight w, StepElement g, ProductKind kind)
      : w_(std::move(w)), g_(g), kind_(kind), value_(LatticeWeight::constant(1.0)) {}

  int order() const noexcept { return order_; }
  const LatticeWeight& value() const noexcept { return value_; }

  void advance() {
    ++order_;
    // Backward factor w * delta_{g^{-k}}; forward factor w * delta_{g^{k-1}}.
    const Index n = kind_ == ProductKind::kBackward ? -static_cast<Index>(order_) : static_cast<Index>(order_ - 1);
    value_ = pointwise_product(value_, translate_weight(w_, n, g_));
  }

  void advance_to(int k) {
    while (order_ < k) advance();
  }

 private:
  LatticeWeight w_;
  StepElement g_;
  ProductKind kind_;
  int order_ = 0;
  LatticeWeight value_;
};

inline LatticeWeight backward_product(const LatticeWeight& w, const StepElement& g, int k) {
  if (k < 1) throw std::invalid_argument("backward_product requires k >= 1");
  RunningProduct p(w, g, ProductKind::kBackward);
  p.advance_to(k);
  return p.value();
}

inline LatticeWeight forward_product(const LatticeWeight& w, const StepElement& g, int k) {
  if (k < 1) throw std::invalid_argument("forward_product requires k >= 1");
  RunningProduct p(w, g, ProductKind::kForward);
  p.advance_to(k);
  return p.value();
}

/// log of max / min of w over the lattice points of a window.
inline double window_log_sup(const LatticeWeight& w, const IndexWindow& window) {
  require_nonempty(window, "window_sup");
  double m = -std::numeric_limits<double>::infinity();
  for (Index x = window.lo; x <= window.hi; ++x) m = std::max(m, w.log_at(x));
  return m;
}

inline double window_log_inf(const LatticeWeight& w, const IndexWindow& window) {
  require_nonempty(window, "window_inf");
  double m = std::numeric_limits<double>::infinity();
  for (Index x = window.lo; x <= window.hi; ++x) m = std::min(m, w.log_at(x));
  return m;
}

inline double window_sup(const LatticeWeight& w, const IndexWindow& window) {
  require_nonempty(window, "window_sup");
  if (w.log_domain()) return std::exp(window_log_sup(w, window));
  double m = 0.0;
  for (Index x = window.lo; x <= window.hi; ++x) m = std::max(m, w.raw_at(x));
  return m;
}

inline double window_inf(const LatticeWeight& w, const IndexWindow& window) {
  require_nonempty(window, "window_inf");
  if (w.log_domain()) return std::exp(window_log_inf(w, window));
  double m = std::numeric_limits<double>::infinity();
  for (Index x = window.lo; x <= window.hi; ++x) m = std::min(m, w.raw_at(x));
  return m;
}

/// Piecewise description of a weight on the real line: constant tails
/// outside (left_end, right_start) and linear interpolation between knots
/// inside.  Sampled once onto lattice points; no interpolation afterwards.
struct PiecewiseLinearWeight {
  double left_tail = 1.0;
  double left_end = 0.0;
  double right_tail = 1.0;
  double right_start = 0.0;
  std::vector<std::pair<double, double>> knots;  ///< (x, w(x)), increasing x

  double operator()(double x) const {
    if (x <= left_end) return left_tail;
    if (x >= right_start) return right_tail;
    if (knots.empty()) return left_tail;
    if (x <= knots.front().first) return knots.front().second;
    if (x >= knots.back().first) return knots.back().second;
    auto it = std::upper_bound(knots.begin(), knots.end(), x,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }

  LatticeWeight sample(const Lattice& lattice) const {
    if (!(left_end <= right_start)) throw std::invalid_argument("piecewise weight needs left_end <= right_start");
    for (std::size_t j = 1; j < knots.size(); ++j) {
      if (!(knots[j].first > knots[j - 1].first)) throw std::invalid_argument("piecewise weight knots must increase");
    }
    const double h = lattice.grid_spacing();
    const auto lo = static_cast<Index>(std::floor(left_end / h)) - 1;
    const auto hi = static_cast<Index>(std::ceil(right_start / h)) + 1;
    std::vector<double> core;
    core.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (Index x = lo; x <= hi; ++x) core.push_back((*this)(lattice.coordinate(x)));
    return LatticeWeight(left_tail, right_tail, lo, std::move(core));
  }
};

}  // namespace wtlab
