#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "bohm/cli.hpp"
#include "bohm/rng.hpp"

namespace bohm::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string extension(OutputFormat format) { return format == OutputFormat::csv ? ".csv" : ".tsv"; }

std::string iso_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const ParamValue& value) {
  return std::visit([](const auto& v) { return Json(v); }, value);
}

// Non-finite counters become strings so the manifest stays valid JSON.
Json number_json(double v) {
  if (std::isfinite(v)) return Json(v);
  return Json(format_number(v));
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_summary(const ExperimentResult& result, const std::filesystem::path& path,
                   OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const char d = format == OutputFormat::csv ? ',' : '\t';
  const auto text = [&](const std::string& s) {
    return format == OutputFormat::csv ? csv_field(s) : s;
  };
  out << "check" << d << "status" << d << "acceptance" << d << "value" << d << "relation" << d
      << "threshold" << d << "note\n";
  for (const auto& c : result.checks) {
    out << text(c.name) << d << (c.passed ? "pass" : "fail") << d
        << (c.acceptance ? "yes" : "no") << d << format_number(c.value) << d
        << text(c.relation) << d << format_number(c.threshold) << d << text(c.note) << '\n';
  }
}

// --key value / --key=value pairs left over after the fixed options.
std::vector<std::pair<std::string, std::string>> pair_overrides(
    const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) {
      throw ConfigError(ConfigError::Kind::syntax, tok,
                        "unexpected argument '" + tok + "' (overrides are --key value)");
    }
    const std::string body = tok.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < tokens.size()) {
      out.emplace_back(body, tokens[++i]);
    } else {
      throw ConfigError(ConfigError::Kind::syntax, body, "missing value for --" + body);
    }
  }
  return out;
}

}  // namespace

CommandLine parse_run_arguments(const std::vector<std::string>& args) {
  CommandLine cmd;
  CLI::App app{"run an experiment", "run"};
  app.allow_extras();
  std::string config;
  std::string out_dir;
  std::string format = "tsv";
  std::string seed;
  std::string samples;
  app.add_option("experiment", cmd.experiment, "experiment name (see 'list')");
  app.add_option("--config", config, "flat key = value file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "tsv or csv");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--samples", samples, "ensemble size");

  // Negative numeric values (e.g. --q0 -1) must reach the override list
  // verbatim; a leading "--" keeps CLI11 from reading them as flags.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(ConfigError::Kind::syntax, "", e.what());
  }
  if (!config.empty()) cmd.config_file = config;
  if (!out_dir.empty()) cmd.out_dir = out_dir;
  if (format == "tsv") {
    cmd.format = OutputFormat::tsv;
  } else if (format == "csv") {
    cmd.format = OutputFormat::csv;
  } else {
    throw ConfigError(ConfigError::Kind::type_mismatch, "format",
                      "--format expects one of tsv, csv; got '" + format + "'", "tsv|csv");
  }
  cmd.overrides = pair_overrides(app.remaining());
  if (!seed.empty()) cmd.overrides.emplace_back("seed", seed);
  if (!samples.empty()) cmd.overrides.emplace_back("samples", samples);
  return cmd;
}

std::string list_experiments() {
  std::ostringstream out;
  for (const auto& e : experiment_catalog()) {
    out << e.name << "\t" << e.figure << "\t" << e.description << "\n";
  }
  return out.str();
}

int run_experiment(const RunConfig& cfg, std::ostream& log) {
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult result = cfg.experiment->run(cfg.params);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto finished = std::chrono::system_clock::now();

  std::filesystem::create_directories(cfg.out_dir);
  const std::string ext = extension(cfg.format);
  Json tables = Json::array();
  for (const auto& table : result.tables) {
    const std::string file = table.name + ext;
    write_table(table, cfg.out_dir / file, cfg.format);
    tables.push_back({{"name", table.name},
                      {"file", file},
                      {"columns", table.columns},
                      {"rows", table.rows.size()}});
  }
  write_summary(result, cfg.out_dir / ("summary" + ext), cfg.format);

  const bool passed = result.acceptance_passed();
  const int status = passed ? kExitPass : kExitCheckFailure;

  Json params = Json::object();
  for (const auto& [key, value] : cfg.params.values()) params[key] = to_json(value);
  Json counters = Json::object();
  for (const auto& [key, value] : result.counters) counters[key] = number_json(value);
  Json checks = Json::array();
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"acceptance", c.acceptance},
                      {"value", number_json(c.value)},
                      {"relation", c.relation},
                      {"threshold", number_json(c.threshold)}});
  }
  Json manifest = {
      {"tool", "bohm-measure"},
      {"version", BOHM_VERSION},
      {"experiment", cfg.experiment->name},
      {"figure", cfg.experiment->figure},
      {"seed", cfg.seed()},
      {"rng_algorithm", kRngAlgorithm},
      {"parameters", params},
      {"parameter_sources", cfg.sources},
      {"config_file", cfg.config_file ? cfg.config_file->string() : ""},
      {"format", cfg.format == OutputFormat::csv ? "csv" : "tsv"},
      {"counters", counters},
      {"checks", checks},
      {"tables", tables},
      {"summary_file", "summary" + ext},
      {"acceptance_passed", passed},
      {"exit_status", status},
      {"started_at", iso_utc(started)},
      {"finished_at", iso_utc(finished)},
      {"wall_time_seconds", wall},
  };
  std::ofstream(cfg.out_dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';

  for (const auto& c : result.checks) {
    log << (c.passed ? "PASS" : "FAIL") << (c.acceptance ? "  " : "* ") << c.name << "  "
        << format_number(c.value) << " " << c.relation << " " << format_number(c.threshold)
        << "\n";
  }
  log << cfg.experiment->name << ": " << (passed ? "all acceptance checks passed" : "FAILED")
      << " (" << wall << " s) -> " << cfg.out_dir.string() << "\n";
  return status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const std::string usage =
      "usage: bohm-measure list\n"
      "       bohm-measure run <experiment> [--key value ...] [--config file] [--out dir]\n"
      "                        [--seed u64] [--samples n] [--format tsv|csv]\n";
  if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    (args.empty() ? err : out) << usage;
    return args.empty() ? kExitConfigError : kExitPass;
  }
  if (args[0] == "--version") {
    out << "bohm-measure " << BOHM_VERSION << "\n";
    return kExitPass;
  }
  if (args[0] == "list") {
    out << list_experiments();
    return kExitPass;
  }
  if (args[0] != "run") {
    err << "unknown command '" << args[0] << "'\n" << usage;
    return kExitConfigError;
  }
  try {
    const auto cmd = parse_run_arguments({args.begin() + 1, args.end()});
    const auto cfg = parse_config(cmd);
    return run_experiment(cfg, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ProjectiveLimitViolation& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace bohm::cli
