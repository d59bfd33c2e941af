#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "bohm/cli.hpp"

using namespace bohm;
using namespace bohm::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bohm_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_main(std::vector<std::string> args, std::string* out_text = nullptr,
             std::string* err_text = nullptr) {
  args.insert(args.begin(), "bohm-measure");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST_CASE("command-line parsing") {
  const auto cmd = parse_run_arguments(
      {"exp_born", "--samples", "10000", "--seed", "42", "--m=2", "--q0", "-1", "--out", "x"});
  CHECK(cmd.experiment == "exp_born");
  CHECK(cmd.out_dir == fs::path("x"));
  std::map<std::string, std::string> kv(cmd.overrides.begin(), cmd.overrides.end());
  CHECK(kv["samples"] == "10000");
  CHECK(kv["seed"] == "42");
  CHECK(kv["m"] == "2");
  CHECK(kv["q0"] == "-1");
  CHECK_THROWS_AS(parse_run_arguments({"exp_born", "--m"}), ConfigError);
  CHECK_THROWS_AS(parse_run_arguments({"exp_born", "--format", "xml"}), ConfigError);
}

TEST_CASE("configuration precedence: flag > file > default") {
  const auto dir = scratch("precedence");
  std::ofstream(dir / "run.cfg") << "# comment\nm = 1000\nintegrator.rho_min = 1e-9  # inline\n";
  CommandLine cmd;
  cmd.experiment = "exp_born";
  cmd.config_file = dir / "run.cfg";
  cmd.overrides = {{"m", "1"}};
  const auto cfg = parse_config(cmd);
  CHECK(cfg.params.real("m") == 1.0);
  CHECK(cfg.sources.at("m") == "flag");
  CHECK(cfg.params.real("integrator.rho_min") == 1e-9);
  CHECK(cfg.sources.at("integrator.rho_min") == "file");
  CHECK(cfg.params.real("lambda") == 1.0);
  CHECK(cfg.sources.at("lambda") == "default");
  cmd.overrides.clear();
  CHECK(parse_config(cmd).params.real("m") == 1000.0);
}

TEST_CASE("configuration errors name the key and expected type") {
  CommandLine cmd;
  cmd.experiment = "exp_born";
  cmd.overrides = {{"lamda", "1"}};
  try {
    parse_config(cmd);
    FAIL("expected UnknownKey");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::unknown_key);
    CHECK(e.key() == "lamda");
    CHECK(e.suggestion() == "lambda");
    CHECK(std::string(e.what()).find("lambda") != std::string::npos);
  }
  cmd.overrides = {{"samples", "1.5"}};
  try {
    parse_config(cmd);
    FAIL("expected TypeMismatch");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::type_mismatch);
    CHECK(e.key() == "samples");
    CHECK(e.expected_type() == "integer");
  }
  cmd.overrides.clear();
  cmd.experiment = "exp_bron";
  try {
    parse_config(cmd);
    FAIL("expected MissingExperiment");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::missing_experiment);
    CHECK(e.suggestion() == "exp_born");
  }
  const auto dir = scratch("badfile");
  std::ofstream(dir / "bad.cfg") << "m 1000\n";
  cmd.experiment = "exp_born";
  cmd.config_file = dir / "bad.cfg";
  CHECK_THROWS_AS(parse_config(cmd), ConfigError);
  std::ofstream(dir / "dup.cfg") << "m = 1\nm = 2\n";
  cmd.config_file = dir / "dup.cfg";
  CHECK_THROWS_AS(parse_config(cmd), ConfigError);
}

TEST_CASE("tables round-trip exactly") {
  const auto dir = scratch("roundtrip");
  DataTable t{"series", {"a", "b", "c"}, {}};
  t.add_row({0.1, 1.0 / 3.0, -2.5e-300});
  t.add_row({1e300, 0.30000000000000004, std::nextafter(1.0, 2.0)});
  t.add_row({NAN, INFINITY, -0.0});
  for (auto fmt : {OutputFormat::tsv, OutputFormat::csv}) {
    const auto path = dir / (fmt == OutputFormat::tsv ? "t.tsv" : "t.csv");
    write_table(t, path, fmt);
    const auto back = read_table(path, fmt);
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.rows[i] == t.rows[i]);
    CHECK(std::isnan(back.rows[2][0]));
    CHECK(back.rows[2][1] == INFINITY);
    CHECK(std::signbit(back.rows[2][2]));
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("list output") {
  std::string out;
  CHECK(run_main({"list"}, &out) == kExitPass);
  CHECK(out.find("exp_born\tFig. 2") != std::string::npos);
  CHECK(out.find("exp_sequential_uncertainty\tFigs. 4–6") != std::string::npos);
  std::string again;
  run_main({"list"}, &again);
  CHECK(out == again);
}

TEST_CASE("runs are byte-identical and write a manifest") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  CHECK(run_main({"run", "exp_born", "--samples", "100", "--seed", "7", "--control_samples",
                  "5", "--out", a.string()}) == kExitPass);
  CHECK(run_main({"run", "exp_born", "--samples", "100", "--seed", "7", "--control_samples",
                  "5", "--threads", "2", "--out", b.string()}) == kExitPass);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    CHECK(slurp(entry.path()) == slurp(b / name));
    ++compared;
  }
  CHECK(compared >= 2);
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["parameters"]["samples"] == 100);
  CHECK(manifest["parameter_sources"]["samples"] == "flag");
  CHECK(manifest["experiment"] == "exp_born");
  CHECK(manifest.contains("wall_time_seconds"));
  CHECK(manifest["counters"].contains("ensemble.node_excluded"));
  const auto hist = read_table(a / "histogram.tsv", OutputFormat::tsv);
  CHECK(hist.columns[0] == "outcome_index");
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  std::string err;
  CHECK(run_main({"run", "exp_born", "--lamda", "1"}, nullptr, &err) == kExitConfigError);
  CHECK(err.find("lambda") != std::string::npos);
  CHECK(run_main({"run", "exp_nothing"}) == kExitConfigError);
  CHECK(run_main({"run", "exp_coordinate", "--T", "3", "--lambda", "1", "--out",
                  dir.string()}) == kExitConfigError);
  CHECK(run_main({"frobnicate"}) == kExitConfigError);
  // A sequential run with an impossible group floor fails its checks.
  CHECK(run_main({"run", "exp_sequential_uncertainty", "--samples", "40", "--bundle", "0",
                  "--group_floor", "1000", "--out", dir.string()}) == kExitCheckFailure);
  CHECK(run_main({"run", "exp_coordinate", "--samples", "10", "--format", "csv", "--out",
                  dir.string()}) == kExitPass);
  CHECK(fs::exists(dir / "readout.csv"));
  CHECK(fs::exists(dir / "summary.csv"));
}
