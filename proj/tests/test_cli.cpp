#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wtlab/wtlab.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(WTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("wtlab_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("orbit of e_0 on the step example stays at norm one") {
  const Run r = run("orbit --preset example2 --seed-vector 0:1 -n 5");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 7);
  CHECK(l[0] == "n,p_norm,support_lo,support_hi");
  for (int n = 0; n <= 5; ++n) {
    CHECK(l[n + 1] == std::to_string(n) + ",1," + std::to_string(-n) + "," + std::to_string(-n));
  }
}

TEST_CASE("hull on the pure shift") {
  const Run r = run(std::string("hull --config ") + WTLAB_SAMPLES_DIR + "/pure_shift.json --seed-vector 0:1 -n 3");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 5);
  CHECK(l[0] == "N,distance,fw_gap,truncation_mass");
  CHECK(l[4].rfind("3,0.5,", 0) == 0);
}

TEST_CASE("demo-transitivity identity residuals are tiny") {
  const Run r = run("demo-transitivity --preset example1 -k 1:60");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 61);
  CHECK(l[0] == "k,q1,q2,q3,identity_residual");
  for (std::size_t i = 1; i < l.size(); ++i) {
    const double residual = std::stod(l[i].substr(l[i].rfind(',') + 1));
    CHECK(residual < 1e-8);
  }
}

TEST_CASE("every subcommand writes CSV and JSON with the resolved config") {
  const fs::path dir = scratch("all");
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"orbit", "-n 4"},
      {"hull", "-n 4 --target 0:0.5"},
      {"demo-transitivity", "-k 1:5"},
      {"probe-functionals", "--count 3 --functional 0:1"},
      {"probe-spectrum", ""},
      {"theorem-b", "-n 6"},
  };
  for (const auto& [name, extra] : cmds) {
    const Run r = run(name + " --preset example2 --out " + dir.string() + " " + extra);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    REQUIRE(fs::exists(dir / (name + ".csv")));
    const wtlab::Json j = wtlab::Json::parse(slurp(dir / (name + ".json")));
    CHECK(j["subcommand"] == name);
    CHECK(j["config"] == wtlab::to_json(wtlab::preset_example2()));
  }
  CHECK(lines(slurp(dir / "probe-functionals.csv")).size() == 5);
  CHECK(lines(slurp(dir / "probe-spectrum.csv"))[0] == "re_lambda,im_lambda,forward_ratio,backward_ratio,verdict");
  CHECK(lines(slurp(dir / "theorem-b.csv"))[0] == "n,min_phi,statistic");
  CHECK(lines(slurp(dir / "probe-functionals.csv"))[0] == "functional_id,sup,attained_n,growth_flag");
}

TEST_CASE("classify is deterministic and its embedded config reproduces it") {
  for (const char* preset : {"example1", "example2"}) {
    const Run a = run(std::string("classify --preset ") + preset + " --rng-seed 42");
    const Run b = run(std::string("classify --preset ") + preset + " --rng-seed 42");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const wtlab::Json j = wtlab::Json::parse(a.out);
    const fs::path dir = scratch(std::string("roundtrip_") + preset);
    std::ofstream(dir / "config.json") << j["config"].dump(2);
    const Run c = run("classify --config " + (dir / "config.json").string());
    REQUIRE(c.code == 0);
    CHECK(c.out == a.out);
  }
}

TEST_CASE("probe-functionals is reproducible for a fixed seed") {
  const Run a = run("probe-functionals --preset example1 --count 6 --rng-seed 9");
  const Run b = run("probe-functionals --preset example1 --count 6 --rng-seed 9");
  const Run c = run("probe-functionals --preset example1 --count 6 --rng-seed 10");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(run("").code == 1);
  CHECK(run("frobnicate --preset example1").code == 1);
  CHECK(run("orbit").code == 1);
  CHECK(run("orbit --preset example9").code == 1);
  CHECK(run("orbit --preset example1 --seed-vector 0:x").code == 1);
  CHECK(run("demo-transitivity --preset example1 -k 5:x").code == 1);

  std::ofstream(dir / "bad.json") << "{\"group\": ";
  CHECK(run("classify --config " + (dir / "bad.json").string()).code == 2);
  CHECK(run("classify --config " + (dir / "missing.json").string()).code == 2);

  std::ofstream(dir / "zero_step.json")
      << R"({"group": {"kind": "integers"}, "step": 0, "weight": {"type": "eventually_constant", "left_tail": 1, "right_tail": 1}})";
  CHECK(run("classify --config " + (dir / "zero_step.json").string()).code == 3);

  std::ofstream(dir / "off_grid.json")
      << R"({"group": {"kind": "reals", "grid_spacing": 0.25}, "step": 0.1, "weight": {"type": "eventually_constant", "left_tail": 1, "right_tail": 1}})";
  CHECK(run("classify --config " + (dir / "off_grid.json").string()).code == 4);

  CHECK(run("hull --preset example1 -n 6 --method oracle").code == 5);

  std::ofstream(dir / "blocker") << "x";
  CHECK(run("orbit --preset example1 --out " + (dir / "blocker" / "sub").string()).code == 6);
}
