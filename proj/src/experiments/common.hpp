#pragma once

// Helpers shared by the experiment implementations. Not installed.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bohm/dynamics.hpp"
#include "bohm/ensemble.hpp"
#include "bohm/experiments.hpp"

namespace bohm::detail {

/// Parameters understood by every ensemble experiment.
std::vector<ParamSpec> integrator_params();
ParamSpec threads_param();

/// Integrator settings for `model`: dt <= 0 selects default_time_step,
/// t_end <= 0 selects twice the measurement time.
IntegratorConfig integrator_from(const ParamSet& params,
                                 const MomentumSuperposition& model,
                                 double t_end, double dt);

unsigned threads_from(const ParamSet& params);

/// Comma-separated reals.
std::vector<double> parse_list(const std::string& text);

/// Deterministic Born quantiles: q from the inverse CDF of g at (k + 1/2)/n,
/// r from the normal quantile at the golden-ratio sequence frac((k + 1/2) phi).
std::vector<BeableState> quantile_bundle(const MomentumSuperposition& model,
                                         std::pair<double, double> q_window,
                                         std::size_t count);

DataTable trajectory_table(std::string name);
/// Appends (t, trajectory_id, q, r, v_q, v_r) rows, thinned so consecutive
/// rows of one trajectory are at least `min_spacing` apart in time (the last
/// stored sample is always written).
void append_trajectories(DataTable& table, std::span<const Trajectory> trajectories,
                         double min_spacing, std::size_t first_id = 0);

/// Parameter controlling the time spacing of trajectory tables.
ParamSpec output_spacing_param();

/// Outcome code for tables: index when resolved, -1 unresolved, -2 excluded.
double outcome_code(const Trajectory& traj);

Check make_check(std::string name, bool passed, double value, double threshold,
                 std::string relation, bool acceptance, std::string note = {});

/// Copies the resolved parameters into result.parameters in key order.
void echo_parameters(ExperimentResult& result, const ParamSet& params);

/// |count - N p| <= 3 sqrt(N p (1 - p)).
struct MultinomialDeviation {
  double z = 0.0;       ///< (count - N p) / sqrt(N p (1 - p))
  bool within = false;  ///< |z| <= 3
};
MultinomialDeviation multinomial_deviation(std::size_t count, std::size_t total, double p);

/// Stores trajectory/exclusion counts of an ensemble under `prefix`.
void record_counts(ExperimentResult& result, const std::string& prefix,
                   const OutcomeHistogram& hist);

}  // namespace bohm::detail
