// Command-line front end.  Exit codes: 0 ok, 1 usage, 2 malformed config,
// 3 config invariant violated, 4 step not a multiple of the grid spacing,
// 5 runtime failure, 6 output not writable.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtlab/wtlab.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kRuntime = 5, kWrite = 6 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Range {
  int lo = 1;
  int hi = 1;
};

// "lo:hi" or "hi" (meaning 1:hi).
Range parse_range(const std::string& s) {
  try {
    const auto colon = s.find(':');
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const int hi = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {1, hi};
    }
    Range r;
    const std::string a = s.substr(0, colon);
    const std::string b = s.substr(colon + 1);
    r.lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    r.hi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return r;
  } catch (const std::logic_error&) {
    throw UsageError("bad range '" + s + "', expected lo:hi");
  }
}

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::string seed_vector = "0:1";
  std::string target = "";
  std::string h_vector;
  std::optional<int> n;
  std::string k_range = "1:60";
  std::optional<std::uint64_t> rng_seed;
  std::optional<double> tolerance;
  std::optional<int> budget;
  std::optional<double> beta;
  std::optional<int> horizon;
  std::optional<int> count;
  std::string method = "frank-wolfe";
  std::string truncation;
  std::vector<std::string> functionals;
};

wtlab::ExperimentConfig resolve_config(const Options& o) {
  wtlab::ExperimentConfig cfg;
  if (!o.preset_name.empty()) {
    auto p = wtlab::preset(o.preset_name);
    if (!p) throw UsageError("unknown preset '" + o.preset_name + "' (choose example1 or example2)");
    cfg = *p;
  } else if (!o.config_path.empty()) {
    cfg = wtlab::load_config(o.config_path);
  } else {
    throw UsageError("one of --config or --preset is required");
  }
  if (o.rng_seed) cfg.rng_seed = *o.rng_seed;
  if (o.tolerance) cfg.tolerance = *o.tolerance;
  if (o.budget) cfg.budget = *o.budget;
  if (o.beta) cfg.beta = *o.beta;
  if (o.horizon) cfg.horizon = *o.horizon;
  cfg.validate();
  return cfg;
}

void emit(const Options& o, const std::string& name, const wtlab::SubcommandOutput& out) {
  if (o.out_dir.empty()) {
    std::cout << out.table.csv();
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw wtlab::OutputError("cannot create output directory " + o.out_dir);
  const std::filesystem::path dir(o.out_dir);
  wtlab::write_file_atomic(dir / (name + ".csv"), out.table.csv());
  wtlab::write_file_atomic(dir / (name + ".json"), out.json.dump(2) + "\n");
}

int run(const std::string& command, const Options& o) {
  const wtlab::ExperimentConfig cfg = resolve_config(o);
  const wtlab::CompactVector seed = wtlab::parse_sparse_vector(o.seed_vector);

  if (command == "classify") {
    const std::string doc = wtlab::classify(cfg).dump(2) + "\n";
    if (o.out_dir.empty()) {
      std::cout << doc;
    } else {
      std::error_code ec;
      std::filesystem::create_directories(o.out_dir, ec);
      if (ec) throw wtlab::OutputError("cannot create output directory " + o.out_dir);
      wtlab::write_file_atomic(std::filesystem::path(o.out_dir) / "classify.json", doc);
    }
  } else if (command == "orbit") {
    emit(o, command, wtlab::run_orbit(cfg, seed, o.n.value_or(20)));
  } else if (command == "hull") {
    wtlab::HullMethod method;
    if (o.method == "frank-wolfe") {
      method = wtlab::HullMethod::kFrankWolfe;
    } else if (o.method == "oracle") {
      method = wtlab::HullMethod::kOracle;
    } else {
      throw UsageError("--method must be frank-wolfe or oracle");
    }
    std::optional<wtlab::IndexWindow> window;
    if (!o.truncation.empty()) {
      const Range r = parse_range(o.truncation);
      window = wtlab::IndexWindow{r.lo, r.hi};
    }
    emit(o, command,
         wtlab::run_hull(cfg, seed, wtlab::parse_sparse_vector(o.target), o.n.value_or(10), method, window));
  } else if (command == "demo-transitivity") {
    const double beta = cfg.beta ? *cfg.beta : throw UsageError("demo-transitivity needs beta (config or --beta)");
    const Range k = parse_range(o.k_range);
    const wtlab::CompactVector h = o.h_vector.empty() ? seed : wtlab::parse_sparse_vector(o.h_vector);
    emit(o, command, wtlab::run_transitivity(cfg, beta, seed, h, k.lo, k.hi));
  } else if (command == "probe-functionals") {
    std::vector<wtlab::CompactVector> given;
    for (const auto& f : o.functionals) given.push_back(wtlab::parse_sparse_vector(f));
    emit(o, command, wtlab::run_functionals(cfg, seed, given, o.count.value_or(cfg.functional_count), cfg.horizon));
  } else if (command == "probe-spectrum") {
    emit(o, command, wtlab::run_spectrum(cfg, cfg.horizon));
  } else if (command == "theorem-b") {
    emit(o, command, wtlab::run_theorem_b(cfg, o.n.value_or(cfg.theorem_b.n_budget)));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted translation dynamics lab"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  auto* config = app.add_option("--config", o.config_path, "JSON config file");
  auto* preset = app.add_option("--preset", o.preset_name, "Built-in config: example1 or example2");
  config->excludes(preset);
  preset->excludes(config);
  app.add_option("--out", o.out_dir, "Output directory (default: CSV or JSON on stdout)");
  app.add_option("--seed-vector", o.seed_vector, "Sparse vector, e.g. \"0:1,3:0.5+0.5i\"")->capture_default_str();
  app.add_option("--target", o.target, "Sparse target vector for hull (default 0)");
  app.add_option("--h-vector", o.h_vector, "Sparse h for demo-transitivity (default: the seed vector)");
  app.add_option("-n", o.n, "Orbit budget N");
  app.add_option("-k", o.k_range, "k range lo:hi")->capture_default_str();
  app.add_option("--rng-seed", o.rng_seed, "Override rng_seed");
  app.add_option("--tolerance", o.tolerance, "Override tolerance");
  app.add_option("--budget", o.budget, "Override criterion budget");
  app.add_option("--beta", o.beta, "Override beta");
  app.add_option("--horizon", o.horizon, "Override probe horizon");
  app.add_option("--count", o.count, "Number of random functionals");
  app.add_option("--method", o.method, "Hull solver: frank-wolfe or oracle")->capture_default_str();
  app.add_option("--window", o.truncation, "Hull truncation window lo:hi in lattice units");
  app.add_option("--functional", o.functionals, "Explicit sparse functional (repeatable)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "All criteria, N0, the necessary-condition statistic and the spectral sweep as JSON"},
      {"orbit", "p-norms and supports of T^n seed"},
      {"hull", "Distance from target to the convex hull of the orbit"},
      {"demo-transitivity", "Proof quantities q1, q2, q3 per k"},
      {"probe-functionals", "Suprema of Re Lambda(T^n x) for sampled functionals"},
      {"probe-spectrum", "Adjoint eigenvector recurrence over the lambda grid"},
      {"theorem-b", "Necessary-condition statistic per n"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const wtlab::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const wtlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const wtlab::OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kWrite;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
