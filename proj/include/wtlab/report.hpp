#pragma once

// JSON and CSV emission for the analyses driven by an ExperimentConfig.
// Everything here is deterministic: numbers use shortest round-trip
// formatting and random functionals come from a fixed bit-level recipe.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtlab/config.hpp"
#include "wtlab/convex_polynomial.hpp"
#include "wtlab/criteria.hpp"
#include "wtlab/hull.hpp"
#include "wtlab/probes.hpp"
#include "wtlab/transitivity.hpp"

namespace wtlab {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    const auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw OutputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot move output into " + path.string());
  }
}

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json window_json(const IndexWindow& w, const Lattice& lattice) {
  return Json{{"lattice", {w.lo, w.hi}}, {"coordinates", {lattice.coordinate(w.lo), lattice.coordinate(w.hi)}}};
}

inline Json vector_json(const CompactVector& f) {
  Json entries = Json::array();
  const CompactVector t = f.trimmed();
  for (std::size_t j = 0; j < t.size(); ++j) {
    const Scalar v = t.values()[j];
    if (v == Scalar{}) continue;
    entries.push_back({t.support_lo() + static_cast<Index>(j), v.real(), v.imag()});
  }
  return entries;
}

inline Json polynomial_json(const ConvexPolynomial& P) {
  return Json{{"offset", P.offset()}, {"coefficients", P.coefficients()}};
}

inline Json criterion_json(const CriterionReport& r, const Lattice& lattice) {
  Json j;
  j["branch"] = to_string(r.branch);
  j["beta"] = r.beta;
  j["window"] = window_json(r.window, lattice);
  j["norm_scope"] = "sup over the window only";
  j["budget"] = r.budget;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict_label();
  j["c_liminf"] = number_or_null(r.c_liminf());
  j["d_liminf"] = number_or_null(r.d_liminf());
  j["log_c_liminf"] = r.log_c_liminf;
  j["log_d_liminf"] = r.log_d_liminf;
  const auto law = [](const TailLaw& t) {
    return Json{{"side", t.side}, {"tail_value", t.tail_value}, {"tends_to_zero", t.tends_to_zero}};
  };
  j["c_tail_law"] = law(r.c_law);
  j["d_tail_law"] = law(r.d_law);
  if (r.certificate) {
    j["certificate"] = {{"sequence", r.certificate->sequence},
                        {"kind", r.certificate->kind},
                        {"value", r.certificate->value},
                        {"statement", r.certificate->statement}};
  } else {
    j["certificate"] = nullptr;
  }
  Json c = Json::array();
  Json d = Json::array();
  for (int k = 1; k <= r.budget; ++k) {
    c.push_back(number_or_null(r.c(k)));
    d.push_back(number_or_null(r.d(k)));
  }
  j["c_sequence"] = c;
  j["d_sequence"] = d;
  return j;
}

inline Json theorem_b_json(const TheoremBResult& b, const Lattice& lattice) {
  Json rows = Json::array();
  for (const auto& r : b.rows) {
    rows.push_back({{"n", r.n}, {"min_phi", number_or_null(r.min_phi)}, {"statistic", number_or_null(r.statistic)}});
  }
  return Json{{"offset", b.offset},
              {"window", window_json(b.window, lattice)},
              {"exclude_fraction", b.exclude_fraction},
              {"coefficients", "uniform"},
              {"rows", rows}};
}

inline TheoremBResult run_theorem_b_statistic(const ExperimentConfig& cfg, int n_budget) {
  return theorem_b_statistic(cfg.op(), cfg.theorem_b_window(), CoefficientSchedule::uniform(), n_budget,
                             std::nullopt, cfg.theorem_b.exclude_fraction);
}

/// Every criterion, N0, the necessary-condition statistic, the spectral sweep
/// and a one-line summary.
inline Json classify(const ExperimentConfig& cfg) {
  const WeightedTranslation T = cfg.op();
  const Lattice lattice = cfg.lattice();
  const IndexWindow window = cfg.lattice_window();

  Json j;
  j["config"] = to_json(cfg);
  j["operator"] = {{"step_lattice", T.g.steps},
                   {"grid_spacing", lattice.grid_spacing()},
                   {"measure_weight", lattice.measure_weight()},
                   {"weight_sup", T.w.sup()},
                   {"weight_inf", T.w.inf()},
                   {"left_tail", T.w.left_tail()},
                   {"right_tail", T.w.right_tail()},
                   {"inverse_unbounded_warning", inverse_unbounded_warning(T)}};
  j["separation_constant"] = separation_constant(window, T.g);

  std::string summary;
  if (cfg.beta) {
    const CriterionReport a = theorem_a_check(T, *cfg.beta, window, cfg.budget, cfg.tolerance);
    j["theorem_a"] = criterion_json(a, lattice);
    summary += "theorem_a " + a.verdict_label();
  } else {
    j["theorem_a"] = nullptr;
    summary += "theorem_a skipped (no beta)";
  }
  const CriterionReport hc = hypercyclicity_check(T, window, cfg.budget, cfg.tolerance);
  const CriterionReport mx = mixing_check(T, window, cfg.budget, cfg.tolerance);
  j["hypercyclicity"] = criterion_json(hc, lattice);
  j["mixing"] = criterion_json(mx, lattice);
  summary += "; hypercyclicity " + hc.verdict_label() + "; mixing " + mx.verdict_label();

  const TheoremBResult b = run_theorem_b_statistic(cfg, cfg.theorem_b.n_budget);
  j["theorem_b"] = theorem_b_json(b, lattice);
  bool decreasing = true;
  for (std::size_t i = 1; i < b.rows.size(); ++i) decreasing = decreasing && b.rows[i].statistic < b.rows[i - 1].statistic;
  summary += std::string("; theorem_b statistic ") + (decreasing ? "strictly decreasing" : "not strictly decreasing");

  const auto sweep = spectrum_sweep(T, cfg.spectrum, cfg.horizon);
  Json candidates = Json::array();
  for (const auto& s : sweep) {
    if (s.verdict == SpectrumVerdict::kDecayingCandidate) {
      candidates.push_back({{"re_lambda", s.lambda.real()},
                            {"im_lambda", s.lambda.imag()},
                            {"forward_ratio", s.forward_ratio},
                            {"backward_ratio", s.backward_ratio}});
    }
  }
  const std::size_t rejected = sweep.size() - candidates.size();
  j["spectrum"] = {{"horizon", cfg.horizon},
                   {"sampled", sweep.size()},
                   {"rejected", rejected},
                   {"all_rejected", candidates.empty()},
                   {"decaying_candidates", candidates}};
  summary += "; spectrum " + std::to_string(rejected) + "/" + std::to_string(sweep.size()) + " sampled lambda rejected";
  j["summary"] = summary;
  return j;
}

struct SubcommandOutput {
  Table table;
  Json json;
};

inline Json subcommand_json(const ExperimentConfig& cfg, const std::string& name, Json options) {
  Json j;
  j["subcommand"] = name;
  j["config"] = to_json(cfg);
  j["options"] = std::move(options);
  return j;
}

inline SubcommandOutput run_orbit(const ExperimentConfig& cfg, const CompactVector& seed, int N) {
  const WeightedTranslation T = cfg.op();
  SubcommandOutput out;
  out.table.header = {"n", "p_norm", "support_lo", "support_hi"};
  const auto orb = orbit(T, seed, N);
  for (int n = 0; n <= N; ++n) {
    const CompactVector t = orb[static_cast<std::size_t>(n)].trimmed();
    const bool empty = t.empty();
    out.table.rows.push_back({std::to_string(n), format_number(p_norm(t, cfg.p, T.lattice)),
                              empty ? "" : std::to_string(t.support_lo()), empty ? "" : std::to_string(t.support_hi())});
  }
  out.json = subcommand_json(cfg, "orbit", {{"seed", vector_json(seed)}, {"n", N}});
  return out;
}

inline SubcommandOutput run_hull(const ExperimentConfig& cfg, const CompactVector& seed, const CompactVector& target,
                                 int N, HullMethod method, std::optional<IndexWindow> truncation) {
  const WeightedTranslation T = cfg.op();
  HullOptions opts = cfg.hull_options();
  opts.method = method;
  opts.truncation_window = truncation;
  const HullResult r = hull_distance(T, seed, target, N, opts);
  SubcommandOutput out;
  out.table.header = {"N", "distance", "fw_gap", "truncation_mass"};
  for (const auto& row : r.trace) {
    out.table.rows.push_back(
        {std::to_string(row.N), format_number(row.distance), format_number(row.fw_gap), format_number(row.truncation_mass)});
  }
  Json options{{"seed", vector_json(seed)},
               {"target", vector_json(target)},
               {"n", N},
               {"method", to_string(method)},
               {"truncation_window", truncation ? Json{truncation->lo, truncation->hi} : Json(nullptr)}};
  out.json = subcommand_json(cfg, "hull", options);
  out.json["result"] = {{"distance", r.distance},
                        {"coefficients", polynomial_json(r.coefficients)},
                        {"window", window_json(r.window, T.lattice)},
                        {"truncation_mass", r.truncation_mass},
                        {"truncation_flagged", r.truncation_flagged},
                        {"iterations", r.iterations}};
  return out;
}

inline SubcommandOutput run_transitivity(const ExperimentConfig& cfg, double beta, const CompactVector& f0,
                                         const CompactVector& h, int k_lo, int k_hi) {
  const auto rows = transitivity_demo(cfg.op(), beta, f0, h, k_lo, k_hi, cfg.p);
  SubcommandOutput out;
  out.table.header = {"k", "q1", "q2", "q3", "identity_residual"};
  for (const auto& r : rows) {
    out.table.rows.push_back({std::to_string(r.k), format_number(r.q1), format_number(r.q2), format_number(r.q3),
                              format_number(r.identity_residual)});
  }
  out.json = subcommand_json(cfg, "demo-transitivity",
                             {{"beta", beta}, {"f0", vector_json(f0)}, {"h", vector_json(h)}, {"k", {k_lo, k_hi}}});
  return out;
}

/// Uniform double in [0, 1) from the top 53 bits; same on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Dense functionals over `window` with coefficients uniform on the unit disc.
inline std::vector<CompactVector> random_functionals(std::uint64_t seed, int count, const IndexWindow& window) {
  require_nonempty(window, "random_functionals");
  std::mt19937_64 rng(seed);
  std::vector<CompactVector> out;
  for (int i = 0; i < count; ++i) {
    std::vector<Scalar> values(static_cast<std::size_t>(window.size()));
    for (auto& v : values) {
      const double r = std::sqrt(unit_uniform(rng));
      const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
      v = std::polar(r, theta);
    }
    out.emplace_back(window.lo, std::move(values));
  }
  return out;
}

inline SubcommandOutput run_functionals(const ExperimentConfig& cfg, const CompactVector& x,
                                        const std::vector<CompactVector>& explicit_functionals, int count,
                                        int horizon) {
  std::vector<CompactVector> functionals = explicit_functionals;
  const std::size_t n_explicit = functionals.size();
  for (auto& f : random_functionals(cfg.rng_seed, count, cfg.lattice_window())) functionals.push_back(std::move(f));
  const auto res = hahn_banach_probe(cfg.op(), x, functionals, horizon);
  SubcommandOutput out;
  out.table.header = {"functional_id", "sup", "attained_n", "growth_flag"};
  for (std::size_t i = 0; i < res.size(); ++i) {
    out.table.rows.push_back({std::to_string(i), format_number(res[i].sup_value), std::to_string(res[i].attained_n),
                              res[i].growth_flag ? "true" : "false"});
  }
  Json given = Json::array();
  for (std::size_t i = 0; i < n_explicit; ++i) given.push_back(vector_json(functionals[i]));
  out.json = subcommand_json(cfg, "probe-functionals",
                             {{"x", vector_json(x)},
                              {"horizon", horizon},
                              {"explicit_functionals", given},
                              {"random_functionals", count},
                              {"random_window", {cfg.lattice_window().lo, cfg.lattice_window().hi}}});
  return out;
}

inline SubcommandOutput run_spectrum(const ExperimentConfig& cfg, int horizon) {
  const auto sweep = spectrum_sweep(cfg.op(), cfg.spectrum, horizon);
  SubcommandOutput out;
  out.table.header = {"re_lambda", "im_lambda", "forward_ratio", "backward_ratio", "verdict"};
  std::size_t rejected = 0;
  for (const auto& s : sweep) {
    if (s.verdict == SpectrumVerdict::kNoEigenvector) ++rejected;
    out.table.rows.push_back({format_number(s.lambda.real()), format_number(s.lambda.imag()),
                              format_number(s.forward_ratio), format_number(s.backward_ratio), to_string(s.verdict)});
  }
  out.json = subcommand_json(cfg, "probe-spectrum", {{"horizon", horizon}});
  out.json["result"] = {{"sampled", sweep.size()}, {"rejected", rejected}};
  return out;
}

inline SubcommandOutput run_theorem_b(const ExperimentConfig& cfg, int n_budget) {
  const TheoremBResult b = run_theorem_b_statistic(cfg, n_budget);
  SubcommandOutput out;
  out.table.header = {"n", "min_phi", "statistic"};
  for (const auto& r : b.rows) {
    out.table.rows.push_back({std::to_string(r.n), format_number(r.min_phi), format_number(r.statistic)});
  }
  out.json = subcommand_json(cfg, "theorem-b", {{"n", n_budget}});
  out.json["result"] = {{"offset", b.offset}, {"window", window_json(b.window, cfg.lattice())}};
  return out;
}

}  // namespace wtlab
