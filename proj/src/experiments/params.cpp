#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include "bohm/experiments.hpp"

namespace bohm {

std::string_view type_name(ParamType type) {
  switch (type) {
    case ParamType::real:
      return "real";
    case ParamType::integer:
      return "integer";
    case ParamType::seed:
      return "unsigned 64-bit integer";
    case ParamType::text:
      return "text";
  }
  return "unknown";
}

ParamType type_of(const ParamValue& value) {
  switch (value.index()) {
    case 0:
      return ParamType::real;
    case 1:
      return ParamType::integer;
    case 2:
      return ParamType::seed;
    default:
      return ParamType::text;
  }
}

std::string format_value(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          char buf[64];
          auto res = std::to_chars(buf, buf + sizeof buf, v);
          return std::string(buf, res.ptr);
        }
      },
      value);
}

namespace {

template <typename T>
T parse_number(std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("cannot parse '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ParamValue parse_value(ParamType type, std::string_view text) {
  switch (type) {
    case ParamType::real: {
      const double v = parse_number<double>(text);
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite real");
      return v;
    }
    case ParamType::integer:
      return parse_number<std::int64_t>(text);
    case ParamType::seed:
      if (!text.empty() && text.front() == '-') {
        throw std::invalid_argument("seed must be nonnegative");
      }
      return parse_number<std::uint64_t>(text);
    case ParamType::text:
      return std::string(text);
  }
  throw std::invalid_argument("unknown parameter type");
}

ParamSet::ParamSet(const std::vector<ParamSpec>& specs) {
  for (const auto& s : specs) values_[s.key] = s.default_value;
}

void ParamSet::set(const std::string& key, ParamValue value) {
  values_[key] = std::move(value);
}

bool ParamSet::contains(const std::string& key) const {
  return values_.count(key) > 0;
}

const ParamValue& ParamSet::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::out_of_range("missing parameter '" + key + "'");
  return it->second;
}

double ParamSet::real(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw std::invalid_argument("parameter '" + key + "' is not real");
}

std::int64_t ParamSet::integer(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw std::invalid_argument("parameter '" + key + "' is not an integer");
}

std::uint64_t ParamSet::seed(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* s = std::get_if<std::uint64_t>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v); i && *i >= 0) {
    return static_cast<std::uint64_t>(*i);
  }
  throw std::invalid_argument("parameter '" + key + "' is not a seed");
}

const std::string& ParamSet::text(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw std::invalid_argument("parameter '" + key + "' is not text");
}

void DataTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row width does not match columns of table " + name);
  }
  rows.push_back(std::move(row));
}

bool ExperimentResult::acceptance_passed() const {
  for (const auto& c : checks) {
    if (c.acceptance && !c.passed) return false;
  }
  return true;
}

const DataTable& ExperimentResult::table(std::string_view wanted) const {
  for (const auto& t : tables) {
    if (t.name == wanted) return t;
  }
  throw std::out_of_range("no table named " + std::string(wanted));
}

const Check& ExperimentResult::check(std::string_view wanted) const {
  for (const auto& c : checks) {
    if (c.name == wanted) return c;
  }
  throw std::out_of_range("no check named " + std::string(wanted));
}

bool ExperimentResult::has_check(std::string_view wanted) const {
  for (const auto& c : checks) {
    if (c.name == wanted) return true;
  }
  return false;
}

ProjectiveLimitViolation::ProjectiveLimitViolation(double T, double lam,
                                                   ValidityReport report)
    : BohmError("coordinate measurement outside the projective limit: T*lambda = " +
                format_value(report.ratio) + " is not below " +
                format_value(report.threshold) + " (requires T << 1/lambda)"),
      T_(T),
      lam_(lam),
      report_(report) {}

}  // namespace bohm
