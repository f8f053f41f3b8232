#pragma once

// Experiment configuration: JSON schema, validation, and the two presets
// reproducing the piecewise-weight example on R and the step-weight example
// on Z.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wtlab/hull.hpp"
#include "wtlab/lattice.hpp"
#include "wtlab/probes.hpp"
#include "wtlab/weight.hpp"
#include "wtlab/weighted_translation.hpp"

namespace wtlab {

enum class ConfigErrorKind {
  kMalformed = 2,    ///< unreadable file or invalid JSON
  kInvalid = 3,      ///< schema or invariant violation
  kStepGridRatio = 4 ///< step is not an integer multiple of the grid spacing
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ConfigErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ConfigErrorKind kind_;
};

struct WeightSpec {
  enum class Kind { kEventuallyConstant, kPiecewiseLinear };
  Kind kind = Kind::kEventuallyConstant;
  // eventually constant (core_lo in lattice units)
  double left_tail = 1.0;
  double right_tail = 1.0;
  Index core_lo = 0;
  std::vector<double> core;
  // piecewise linear on the real line
  PiecewiseLinearWeight piecewise;
  /// The weight actually used is w * delta_{g^pre_shift}.
  int pre_shift = 0;
};

struct HullSettings {
  int max_iters = 100000;
  double gap_tol = 1e-13;
  double grid_resolution = 1.0 / 200.0;
  Index support_cap = 1 << 16;
};

struct TheoremBSettings {
  std::optional<std::array<double, 2>> window;  ///< defaults to the main window
  int n_budget = 20;
  double exclude_fraction = 0.0;
};

struct ExperimentConfig {
  std::string name = "custom";
  LatticeKind group = LatticeKind::kIntegers;
  double grid_spacing = 1.0;
  double step = 1.0;  ///< real units on gridded reals
  WeightSpec weight;
  double p = 2.0;
  std::optional<double> beta;
  std::array<double, 2> window{-5.0, 5.0};  ///< real units on gridded reals
  int budget = 200;
  int horizon = 200;
  double tolerance = 1e-6;
  std::uint64_t rng_seed = 0;
  int functional_count = 8;
  HullSettings hull;
  LambdaGrid spectrum;
  TheoremBSettings theorem_b;

  Lattice lattice() const {
    return group == LatticeKind::kIntegers ? Lattice::integers() : Lattice::gridded_reals(grid_spacing);
  }

  StepElement step_element() const {
    const double ratio = step / lattice().grid_spacing();
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
      throw ConfigError(ConfigErrorKind::kStepGridRatio,
                        "step " + std::to_string(step) + " is not an integer multiple of the grid spacing " +
                            std::to_string(lattice().grid_spacing()));
    }
    if (rounded == 0.0) throw ConfigError(ConfigErrorKind::kInvalid, "step must be nonzero (aperiodic element)");
    return StepElement(static_cast<Index>(rounded));
  }

  /// Lattice points whose coordinates lie in [lo, hi].
  IndexWindow lattice_window(const std::array<double, 2>& w) const {
    const double h = lattice().grid_spacing();
    const auto lo = static_cast<Index>(std::ceil(w[0] / h - 1e-9));
    const auto hi = static_cast<Index>(std::floor(w[1] / h + 1e-9));
    return IndexWindow{lo, hi};
  }
  IndexWindow lattice_window() const { return lattice_window(window); }
  IndexWindow theorem_b_window() const { return lattice_window(theorem_b.window.value_or(window)); }

  LatticeWeight lattice_weight() const {
    LatticeWeight w = weight.kind == WeightSpec::Kind::kEventuallyConstant
                          ? LatticeWeight(weight.left_tail, weight.right_tail, weight.core_lo, weight.core)
                          : weight.piecewise.sample(lattice());
    if (weight.pre_shift != 0) w = translate_weight(w, weight.pre_shift, step_element());
    return w;
  }

  WeightedTranslation op() const { return WeightedTranslation{step_element(), lattice_weight(), lattice()}; }

  HullOptions hull_options() const {
    HullOptions o;
    o.max_iters = hull.max_iters;
    o.gap_tol = hull.gap_tol;
    o.grid_resolution = hull.grid_resolution;
    o.support_cap = hull.support_cap;
    return o;
  }

  /// Checks every invariant; throws ConfigError.
  void validate() const {
    const auto invalid = [](const std::string& m) { throw ConfigError(ConfigErrorKind::kInvalid, m); };
    if (group == LatticeKind::kGriddedReals && !(grid_spacing > 0.0 && std::isfinite(grid_spacing))) {
      invalid("grid_spacing must be positive");
    }
    (void)step_element();
    if (!(p >= 1.0)) invalid("p must be >= 1");
    if (beta && !(*beta >= 1.0)) invalid("beta must be >= 1");
    if (window[1] < window[0] || lattice_window().empty()) invalid("window contains no lattice point");
    if (theorem_b.window && theorem_b_window().empty()) invalid("theorem_b window contains no lattice point");
    if (budget < 1) invalid("budget must be >= 1");
    if (horizon < 2) invalid("horizon must be >= 2");
    if (!(tolerance > 0.0)) invalid("tolerance must be positive");
    if (functional_count < 0) invalid("functional count must be >= 0");
    if (theorem_b.n_budget < 0) invalid("theorem_b n_budget must be >= 0");
    if (!(theorem_b.exclude_fraction >= 0.0 && theorem_b.exclude_fraction < 1.0)) {
      invalid("theorem_b exclude_fraction must lie in [0, 1)");
    }
    if (weight.kind == WeightSpec::Kind::kPiecewiseLinear && group != LatticeKind::kGriddedReals) {
      invalid("piecewise_linear weights need the reals group");
    }
    try {
      const LatticeWeight w = lattice_weight();
      (void)w;
      (void)lambda_samples(spectrum);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      invalid(e.what());
    }
  }
};

using Json = nlohmann::ordered_json;

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  if (c.group == LatticeKind::kIntegers) {
    j["group"] = {{"kind", "integers"}};
  } else {
    j["group"] = {{"kind", "reals"}, {"grid_spacing", c.grid_spacing}};
  }
  j["step"] = c.step;
  Json w;
  if (c.weight.kind == WeightSpec::Kind::kEventuallyConstant) {
    w["type"] = "eventually_constant";
    w["left_tail"] = c.weight.left_tail;
    w["right_tail"] = c.weight.right_tail;
    w["core_lo"] = c.weight.core_lo;
    w["core"] = c.weight.core;
  } else {
    w["type"] = "piecewise_linear";
    w["left_tail"] = c.weight.piecewise.left_tail;
    w["left_end"] = c.weight.piecewise.left_end;
    w["right_tail"] = c.weight.piecewise.right_tail;
    w["right_start"] = c.weight.piecewise.right_start;
    Json knots = Json::array();
    for (const auto& [x, y] : c.weight.piecewise.knots) knots.push_back({x, y});
    w["knots"] = knots;
  }
  w["pre_shift"] = c.weight.pre_shift;
  j["weight"] = w;
  j["p"] = c.p;
  j["beta"] = c.beta ? Json(*c.beta) : Json(nullptr);
  j["window"] = {c.window[0], c.window[1]};
  j["budget"] = c.budget;
  j["horizon"] = c.horizon;
  j["tolerance"] = c.tolerance;
  j["rng_seed"] = c.rng_seed;
  j["functional_count"] = c.functional_count;
  j["hull"] = {{"max_iters", c.hull.max_iters},
               {"gap_tol", c.hull.gap_tol},
               {"grid_resolution", c.hull.grid_resolution},
               {"support_cap", c.hull.support_cap}};
  j["spectrum"] = {{"modulus_min", c.spectrum.modulus_min},
                   {"modulus_max", c.spectrum.modulus_max},
                   {"modulus_step", c.spectrum.modulus_step},
                   {"argument_divisions", c.spectrum.argument_divisions}};
  Json tb;
  tb["window"] = c.theorem_b.window ? Json{(*c.theorem_b.window)[0], (*c.theorem_b.window)[1]} : Json(nullptr);
  tb["n_budget"] = c.theorem_b.n_budget;
  tb["exclude_fraction"] = c.theorem_b.exclude_fraction;
  j["theorem_b"] = tb;
  return j;
}

namespace detail {

template <class T>
void read_optional(const Json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

inline std::array<double, 2> read_interval(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(ConfigErrorKind::kInvalid, std::string(what) + " must be [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

/// Parses and validates a config document.
inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw ConfigError(ConfigErrorKind::kInvalid, "config must be a JSON object");
    detail::read_optional(j, "name", c.name);
    const Json& group = j.at("group");
    const std::string kind = group.at("kind").get<std::string>();
    if (kind == "integers") {
      c.group = LatticeKind::kIntegers;
      c.grid_spacing = 1.0;
    } else if (kind == "reals") {
      c.group = LatticeKind::kGriddedReals;
      c.grid_spacing = group.at("grid_spacing").get<double>();
    } else {
      throw ConfigError(ConfigErrorKind::kInvalid, "group.kind must be \"integers\" or \"reals\"");
    }
    c.step = j.at("step").get<double>();

    const Json& w = j.at("weight");
    const std::string type = w.at("type").get<std::string>();
    if (type == "eventually_constant") {
      c.weight.kind = WeightSpec::Kind::kEventuallyConstant;
      c.weight.left_tail = w.at("left_tail").get<double>();
      c.weight.right_tail = w.at("right_tail").get<double>();
      detail::read_optional(w, "core_lo", c.weight.core_lo);
      detail::read_optional(w, "core", c.weight.core);
    } else if (type == "piecewise_linear") {
      c.weight.kind = WeightSpec::Kind::kPiecewiseLinear;
      auto& pw = c.weight.piecewise;
      pw.left_tail = w.at("left_tail").get<double>();
      pw.left_end = w.at("left_end").get<double>();
      pw.right_tail = w.at("right_tail").get<double>();
      pw.right_start = w.at("right_start").get<double>();
      pw.knots.clear();
      if (w.contains("knots")) {
        for (const auto& k : w.at("knots")) {
          const auto xy = detail::read_interval(k, "knot");
          pw.knots.emplace_back(xy[0], xy[1]);
        }
      }
    } else {
      throw ConfigError(ConfigErrorKind::kInvalid, "weight.type must be eventually_constant or piecewise_linear");
    }
    detail::read_optional(w, "pre_shift", c.weight.pre_shift);

    detail::read_optional(j, "p", c.p);
    if (j.contains("beta") && !j.at("beta").is_null()) c.beta = j.at("beta").get<double>();
    if (j.contains("window")) c.window = detail::read_interval(j.at("window"), "window");
    detail::read_optional(j, "budget", c.budget);
    detail::read_optional(j, "horizon", c.horizon);
    detail::read_optional(j, "tolerance", c.tolerance);
    detail::read_optional(j, "rng_seed", c.rng_seed);
    detail::read_optional(j, "functional_count", c.functional_count);
    if (j.contains("hull")) {
      const Json& h = j.at("hull");
      detail::read_optional(h, "max_iters", c.hull.max_iters);
      detail::read_optional(h, "gap_tol", c.hull.gap_tol);
      detail::read_optional(h, "grid_resolution", c.hull.grid_resolution);
      detail::read_optional(h, "support_cap", c.hull.support_cap);
    }
    if (j.contains("spectrum")) {
      const Json& s = j.at("spectrum");
      detail::read_optional(s, "modulus_min", c.spectrum.modulus_min);
      detail::read_optional(s, "modulus_max", c.spectrum.modulus_max);
      detail::read_optional(s, "modulus_step", c.spectrum.modulus_step);
      detail::read_optional(s, "argument_divisions", c.spectrum.argument_divisions);
    }
    if (j.contains("theorem_b")) {
      const Json& tb = j.at("theorem_b");
      if (tb.contains("window") && !tb.at("window").is_null()) {
        c.theorem_b.window = detail::read_interval(tb.at("window"), "theorem_b.window");
      }
      detail::read_optional(tb, "n_budget", c.theorem_b.n_budget);
      detail::read_optional(tb, "exclude_fraction", c.theorem_b.exclude_fraction);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(ConfigErrorKind::kInvalid, std::string("config schema error: ") + e.what());
  }
  c.validate();
  return c;
}

/// Piecewise weight on R: s for x <= -1, ramp -x/2 + 1 on (-1, 1), t for
/// x >= 1, with s = 1.25, t = 2, beta = 1.5 between them.
inline ExperimentConfig preset_example1() {
  ExperimentConfig c;
  c.name = "example1";
  c.group = LatticeKind::kGriddedReals;
  c.grid_spacing = 0.25;
  c.step = -1.0;
  c.weight.kind = WeightSpec::Kind::kPiecewiseLinear;
  c.weight.piecewise = PiecewiseLinearWeight{1.25, -1.0, 2.0, 1.0, {{-1.0, 1.5}, {1.0, 0.5}}};
  c.beta = 1.5;
  c.p = 2.0;
  c.window = {-10.0, 10.0};
  c.budget = 200;
  return c;
}

/// Step weight on Z (2 for i >= 1, 1 for i <= 0), g = -1, pre-shifted once so
/// the operator is T_{g, w * delta_g}: effective weight 2 for x >= 0.
inline ExperimentConfig preset_example2() {
  ExperimentConfig c;
  c.name = "example2";
  c.group = LatticeKind::kIntegers;
  c.step = -1.0;
  c.weight.kind = WeightSpec::Kind::kEventuallyConstant;
  c.weight.left_tail = 1.0;
  c.weight.right_tail = 2.0;
  c.weight.core_lo = 1;
  c.weight.pre_shift = 1;
  c.beta = 1.0;
  c.p = 2.0;
  c.window = {-5.0, 5.0};
  c.budget = 100;
  c.theorem_b.window = std::array<double, 2>{-10.0, -1.0};
  return c;
}

inline std::optional<ExperimentConfig> preset(const std::string& name) {
  if (name == "example1") return preset_example1();
  if (name == "example2") return preset_example2();
  return std::nullopt;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(ConfigErrorKind::kMalformed, std::string("malformed config JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::kMalformed, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// A preset name or a path to a JSON config.
inline ExperimentConfig load_config(const std::string& path_or_preset) {
  if (auto p = preset(path_or_preset)) return *p;
  return load_config_file(path_or_preset);
}

}  // namespace wtlab
