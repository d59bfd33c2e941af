#pragma once

// Scripted numerical experiments. Each one takes a fully resolved ParamSet and
// returns figure-ready tables plus machine-checkable summary checks.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bohm/dynamics.hpp"
#include "bohm/errors.hpp"

namespace bohm {

enum class ParamType { real, integer, seed, text };

using ParamValue = std::variant<double, std::int64_t, std::uint64_t, std::string>;

std::string_view type_name(ParamType type);
ParamType type_of(const ParamValue& value);
/// Shortest text that parses back to the same value.
std::string format_value(const ParamValue& value);
/// Throws std::invalid_argument when `text` is not a valid `type` literal.
ParamValue parse_value(ParamType type, std::string_view text);

struct ParamSpec {
  std::string key;
  ParamType type;
  ParamValue default_value;
  std::string description;
};

class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(const std::vector<ParamSpec>& specs);

  void set(const std::string& key, ParamValue value);
  bool contains(const std::string& key) const;

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  const std::map<std::string, ParamValue>& values() const noexcept { return values_; }

 private:
  const ParamValue& at(const std::string& key) const;
  std::map<std::string, ParamValue> values_;
};

struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< numeric evidence
  double threshold = 0.0;
  std::string relation;    ///< how value relates to threshold, e.g. "<", ">="
  bool acceptance = false; ///< failing it makes the run fail
  std::string note;
};

struct ExperimentResult {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<DataTable> tables;
  std::vector<Check> checks;
  std::map<std::string, double> counters;  ///< trajectory/exclusion bookkeeping
  std::uint64_t seed = 0;

  bool acceptance_passed() const;
  const DataTable& table(std::string_view name) const;
  const Check& check(std::string_view name) const;
  bool has_check(std::string_view name) const;
};

/// Raised by exp_coordinate when the requested (T, lambda) leave the
/// projective regime of the coordinate device.
class ProjectiveLimitViolation : public BohmError {
 public:
  ProjectiveLimitViolation(double T, double lam, ValidityReport report);
  const ValidityReport& report() const noexcept { return report_; }
  double T() const noexcept { return T_; }
  double coupling() const noexcept { return lam_; }

 private:
  double T_;
  double lam_;
  ValidityReport report_;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string figure;  ///< cross-reference to the reproduced figure/result
  std::vector<ParamSpec> params;
  std::function<ExperimentResult(const ParamSet&)> run;
};

/// All experiments, in a fixed order.
const std::vector<ExperimentInfo>& experiment_catalog();
/// nullptr when unknown.
const ExperimentInfo* find_experiment(std::string_view name);

/// Resolves defaults, applies textual overrides (validated against the
/// schema; throws std::invalid_argument on unknown keys or bad literals) and
/// runs the experiment.
ExperimentResult run_named(std::string_view name,
                           const std::map<std::string, std::string>& overrides = {});

ExperimentResult exp_momentum_basic(const ParamSet& params);
/// Variant 'a', 'b' or 'c' with every other parameter at its default.
ExperimentResult exp_momentum_basic(char variant);
ExperimentResult exp_born(const ParamSet& params);
ExperimentResult exp_contextuality(const ParamSet& params);
ExperimentResult exp_coordinate(const ParamSet& params);
ExperimentResult exp_sequential_uncertainty(const ParamSet& params);
ExperimentResult exp_decoherence(const ParamSet& params);

}  // namespace bohm
