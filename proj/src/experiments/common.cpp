#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bohm/parallel.hpp"
#include "bohm/statistics.hpp"

namespace bohm::detail {

std::vector<ParamSpec> integrator_params() {
  return {
      {"integrator.rho_min", ParamType::real, 1e-10,
       "node threshold relative to the peak density"},
      {"integrator.max_halvings", ParamType::integer, std::int64_t{8},
       "step halvings allowed near a node before exclusion"},
      {"integrator.record_stride", ParamType::integer, std::int64_t{1},
       "store every k-th base step"},
      {"integrator.stationary_tol", ParamType::real, 0.05,
       "outcome tolerance in units of lambda * min momentum gap"},
      {"integrator.window_fraction", ParamType::real, 0.1,
       "trailing fraction of t_end averaged for outcome detection"},
  };
}

ParamSpec threads_param() {
  return {"threads", ParamType::integer, std::int64_t{0},
          "worker threads (0 = hardware concurrency); results do not depend on it"};
}

IntegratorConfig integrator_from(const ParamSet& params,
                                 const MomentumSuperposition& model, double t_end,
                                 double dt) {
  IntegratorConfig cfg = default_integrator_config(model);
  if (dt > 0.0) cfg.dt = dt;
  if (t_end > 0.0) cfg.t_end = t_end;
  cfg.rho_min = params.real("integrator.rho_min");
  cfg.max_substep_halvings = static_cast<int>(params.integer("integrator.max_halvings"));
  cfg.record_stride = static_cast<int>(params.integer("integrator.record_stride"));
  cfg.stationary_tol = params.real("integrator.stationary_tol");
  cfg.stationary_window = params.real("integrator.window_fraction") * cfg.t_end;
  cfg.validate();
  return cfg;
}

unsigned threads_from(const ParamSet& params) {
  const auto n = params.integer("threads");
  if (n < 0) throw std::invalid_argument("threads must be >= 0");
  return static_cast<unsigned>(n);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty list element");
    out.push_back(std::get<double>(parse_value(ParamType::real,
                                               item.substr(first, last - first + 1))));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<BeableState> quantile_bundle(const MomentumSuperposition& model,
                                         std::pair<double, double> q_window,
                                         std::size_t count) {
  const MarginalSampler sampler(model, q_window);
  const double sigma = model.params().sigma;
  const double phi = std::numbers::phi;
  std::vector<BeableState> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    double v = std::fmod((static_cast<double>(k) + 0.5) * phi, 1.0);
    v = std::clamp(v, 1e-6, 1.0 - 1e-6);
    out[k] = {sampler.sample(u), sigma * normal_quantile(v), 0.0};
  }
  return out;
}

DataTable trajectory_table(std::string name) {
  return {std::move(name), {"t", "trajectory_id", "q", "r", "v_q", "v_r"}, {}};
}

void append_trajectories(DataTable& table, std::span<const Trajectory> trajectories,
                         double min_spacing, std::size_t first_id) {
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto& tr = trajectories[k];
    const auto id = static_cast<double>(first_id + k);
    double last_written = -INFINITY;
    for (std::size_t s = 0; s < tr.size(); ++s) {
      const bool last = s + 1 == tr.size();
      if (!last && tr.times[s] - last_written < min_spacing * (1.0 - 1e-9)) continue;
      table.add_row({tr.times[s], id, tr.states[s].q, tr.states[s].r,
                     tr.velocities[s].v_q, tr.velocities[s].v_r});
      last_written = tr.times[s];
    }
  }
}

ParamSpec output_spacing_param() {
  return {"output_spacing", ParamType::real, 0.02,
          "minimum time spacing of rows in trajectory tables"};
}

double outcome_code(const Trajectory& traj) {
  if (traj.node_excluded) return -2.0;
  if (!traj.outcome) return -1.0;
  return static_cast<double>(*traj.outcome);
}

Check make_check(std::string name, bool passed, double value, double threshold,
                 std::string relation, bool acceptance, std::string note) {
  return {std::move(name), passed, value, threshold, std::move(relation), acceptance,
          std::move(note)};
}

void echo_parameters(ExperimentResult& result, const ParamSet& params) {
  result.parameters.clear();
  for (const auto& [key, value] : params.values()) {
    result.parameters.emplace_back(key, format_value(value));
  }
}

MultinomialDeviation multinomial_deviation(std::size_t count, std::size_t total, double p) {
  MultinomialDeviation d;
  const auto n = static_cast<double>(total);
  const double sd = std::sqrt(n * p * (1.0 - p));
  const double diff = static_cast<double>(count) - n * p;
  d.z = sd > 0.0 ? diff / sd : (diff == 0.0 ? 0.0 : INFINITY);
  d.within = std::abs(d.z) <= 3.0;
  return d;
}

void record_counts(ExperimentResult& result, const std::string& prefix,
                   const OutcomeHistogram& hist) {
  result.counters[prefix + ".trajectories"] = static_cast<double>(hist.total());
  result.counters[prefix + ".resolved"] = static_cast<double>(hist.n_effective);
  result.counters[prefix + ".unresolved"] = static_cast<double>(hist.unresolved);
  result.counters[prefix + ".node_excluded"] = static_cast<double>(hist.node_excluded);
}

}  // namespace bohm::detail
