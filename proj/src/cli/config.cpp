#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "bohm/cli.hpp"

namespace bohm::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string kind_label(ConfigError::Kind kind) {
  switch (kind) {
    case ConfigError::Kind::unknown_key:
      return "unknown key";
    case ConfigError::Kind::type_mismatch:
      return "type mismatch";
    case ConfigError::Kind::missing_experiment:
      return "missing experiment";
    case ConfigError::Kind::syntax:
      return "syntax error";
  }
  return "configuration error";
}

template <typename Range>
std::string nearest(std::string_view wanted, const Range& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const std::string& c : candidates) {
    const auto d = edit_distance(wanted, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  // Only suggest plausibly related names.
  if (best_d > std::max<std::size_t>(2, wanted.size() / 2)) return {};
  return best;
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::string key, std::string detail, std::string expected,
                         std::string suggestion)
    : std::runtime_error(kind_label(kind) + ": " + detail),
      kind_(kind),
      key_(std::move(key)),
      expected_(std::move(expected)),
      suggestion_(std::move(suggestion)) {}

std::uint64_t RunConfig::seed() const {
  return params.contains("seed") ? params.seed("seed") : 0;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ConfigError::Kind::syntax, path.string(),
                      "cannot open config file " + path.string());
  }
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(ConfigError::Kind::syntax, where,
                        where + ": expected 'key = value', got '" + body + "'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(ConfigError::Kind::syntax, where,
                        where + ": empty key or value in '" + body + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(ConfigError::Kind::syntax, key,
                        where + ": key '" + key + "' given twice");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

RunConfig parse_config(const CommandLine& cmd) {
  RunConfig cfg;
  cfg.experiment = find_experiment(cmd.experiment);
  if (!cfg.experiment) {
    std::vector<std::string> names;
    for (const auto& e : experiment_catalog()) names.push_back(e.name);
    const std::string hint = nearest(cmd.experiment, names);
    throw ConfigError(ConfigError::Kind::missing_experiment, cmd.experiment,
                      cmd.experiment.empty()
                          ? "no experiment given (try 'bohm-measure list')"
                          : "no experiment named '" + cmd.experiment + "'" +
                                (hint.empty() ? "" : "; did you mean '" + hint + "'?"),
                      {}, hint);
  }
  const auto& specs = cfg.experiment->params;
  cfg.params = ParamSet(specs);
  for (const auto& s : specs) cfg.sources[s.key] = "default";

  const auto apply = [&](const std::string& key, const std::string& text,
                         const std::string& source) {
    const auto it = std::find_if(specs.begin(), specs.end(),
                                 [&](const ParamSpec& s) { return s.key == key; });
    if (it == specs.end()) {
      std::vector<std::string> keys;
      for (const auto& s : specs) keys.push_back(s.key);
      const std::string hint = nearest(key, keys);
      throw ConfigError(ConfigError::Kind::unknown_key, key,
                        "'" + key + "' (" + source + ") is not a parameter of " +
                            cfg.experiment->name +
                            (hint.empty() ? "" : "; nearest valid key is '" + hint + "'"),
                        {}, hint);
    }
    try {
      cfg.params.set(key, parse_value(it->type, text));
    } catch (const std::invalid_argument&) {
      const std::string expected(type_name(it->type));
      throw ConfigError(ConfigError::Kind::type_mismatch, key,
                        "'" + key + "' (" + source + ") expects " + expected + ", got '" +
                            text + "'",
                        expected);
    }
    cfg.sources[key] = source;
  };

  if (cmd.config_file) {
    cfg.config_file = cmd.config_file;
    for (const auto& [k, v] : read_config_file(*cmd.config_file)) apply(k, v, "file");
  }
  for (const auto& [k, v] : cmd.overrides) apply(k, v, "flag");

  cfg.format = cmd.format;
  cfg.out_dir = cmd.out_dir ? *cmd.out_dir
                            : std::filesystem::path("bohm-out") / cfg.experiment->name;
  return cfg;
}

}  // namespace bohm::cli
