// Needle velocity under a two-momentum measurement, p = (1, -1).

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohm/ensemble.hpp"
#include "bohm/experiments.hpp"
#include "common.hpp"

namespace bohm {

namespace {

struct Variant {
  double prob_plus;  // A^2 of p = +1
  double mass;
};

Variant variant_of(const std::string& name) {
  if (name == "a") return {0.5, 1.0};
  if (name == "b") return {0.1, 1.0};
  if (name == "c") return {0.1, 0.01};
  throw std::invalid_argument("variant must be one of a, b, c; got '" + name + "'");
}

MomentumSuperposition two_momentum_model(double prob_plus, double mass, double lam,
                                         double sigma) {
  return MomentumSuperposition({1.0, -1.0},
                               {std::sqrt(prob_plus), std::sqrt(1.0 - prob_plus)},
                               {mass, lam, sigma});
}

// (1/T) sum |v_r(t_{k+1}) - v_r(t_k)| over samples inside [0, T], averaged over
// the bundle: the mean absolute time derivative of the needle velocity.
double mean_abs_needle_acceleration(std::span<const Trajectory> bundle, double T) {
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& tr : bundle) {
    if (tr.node_excluded || tr.size() < 2) continue;
    double variation = 0.0;
    for (std::size_t k = 1; k < tr.size() && tr.times[k] <= T; ++k) {
      variation += std::abs(tr.velocities[k].v_r - tr.velocities[k - 1].v_r);
    }
    total += variation / T;
    ++used;
  }
  return used ? total / static_cast<double>(used) : 0.0;
}

}  // namespace

ExperimentResult exp_momentum_basic(const ParamSet& params) {
  const std::string variant_name = params.text("variant");
  const Variant variant = variant_of(variant_name);
  const double mass = params.real("m") > 0.0 ? params.real("m") : variant.mass;
  const double lam = params.real("lambda");
  const double sigma = params.real("sigma");
  const auto samples = static_cast<std::size_t>(params.integer("samples"));
  const auto bundle_size = static_cast<std::size_t>(params.integer("bundle"));
  const std::uint64_t seed = params.seed("seed");
  const unsigned threads = detail::threads_from(params);
  const double spacing = params.real("output_spacing");

  const auto model = two_momentum_model(variant.prob_plus, mass, lam, sigma);
  const auto cfg = detail::integrator_from(params, model, params.real("t_end"),
                                           params.real("dt"));
  const auto window = default_q_window(model);
  const double T = measurement_time(model);

  ExperimentResult result;
  result.name = "exp_momentum_basic";
  result.seed = seed;
  detail::echo_parameters(result, params);

  // Statistical ensemble.
  const EnsembleSpec spec{model, samples, seed, window};
  const auto initial = sample_initial(spec);
  auto trajectories = evolve_ensemble(model, initial, cfg, threads);
  const auto outcomes = outcomes_of(trajectories);
  const auto hist = born_histogram(outcomes, model);
  detail::record_counts(result, "ensemble", hist);

  DataTable outcome_table{"outcomes", {"outcome_index", "momentum", "count", "born_probability"}, {}};
  for (std::size_t i = 0; i < model.size(); ++i) {
    outcome_table.add_row({static_cast<double>(i), model.momentum(i),
                           static_cast<double>(hist.counts[i]), hist.born_probability[i]});
  }

  const std::size_t non_excluded = hist.total() - hist.node_excluded;
  const double resolved_fraction =
      non_excluded ? static_cast<double>(hist.n_effective) / static_cast<double>(non_excluded)
                   : 0.0;
  const double excluded_fraction =
      static_cast<double>(hist.node_excluded) / static_cast<double>(hist.total());
  const std::size_t plus_index = 1;  // sorted: {-1, +1}
  const auto dev = detail::multinomial_deviation(hist.counts[plus_index], hist.n_effective,
                                                 model.probability(plus_index));

  result.checks.push_back(detail::make_check(
      "resolved_fraction", resolved_fraction >= 0.99, resolved_fraction, 0.99, ">=",
      true, "fraction of non-excluded trajectories locked onto one lambda*p_i by t_end"));
  result.checks.push_back(detail::make_check(
      "outcome_split_p_plus", dev.within, dev.z, 3.0, "|z|<=", true,
      "multinomial z-score of the p=+1 count against A^2=" +
          format_value(model.probability(plus_index))));
  result.checks.push_back(detail::make_check(
      "node_excluded_fraction", excluded_fraction < 0.05, excluded_fraction, 0.05, "<",
      true, "trajectories stopped at density nodes"));

  // Mean locked needle velocity of resolved trajectories, per outcome.
  double worst_lock = 0.0;
  for (const auto& tr : trajectories) {
    if (!tr.outcome) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = tr.size(); k-- > 0 && tr.times[k] >= tr.times.back() - cfg.stationary_window;) {
      sum += tr.velocities[k].v_r;
      ++count;
    }
    const double target = lam * model.momentum(*tr.outcome);
    worst_lock = std::max(worst_lock, std::abs(sum / static_cast<double>(count) - target));
  }
  result.checks.push_back(detail::make_check(
      "locked_velocity_residual", worst_lock <= 0.05 * lam, worst_lock, 0.05 * lam, "<=",
      false,
      "max |<v_r> - lambda p_i| over resolved trajectories"));
  trajectories.clear();
  trajectories.shrink_to_fit();

  // Figure bundle at deterministic Born quantiles, every step recorded.
  IntegratorConfig bundle_cfg = cfg;
  bundle_cfg.record_stride = 1;
  const auto bundle_init = detail::quantile_bundle(model, window, bundle_size);

  if (variant_name == "c") {
    // Same initial points under m = 1 for the fluctuation comparison; both on
    // the finer of the two time grids.
    const auto reference = two_momentum_model(variant.prob_plus, 1.0, lam, sigma);
    bundle_cfg.dt = std::min(bundle_cfg.dt, default_time_step(reference));
    const auto bundle = evolve_ensemble(model, bundle_init, bundle_cfg, threads);
    const auto ref_bundle = evolve_ensemble(reference, bundle_init, bundle_cfg, threads);

    DataTable table = detail::trajectory_table("needle_velocity");
    detail::append_trajectories(table, bundle, spacing);
    DataTable ref_table = detail::trajectory_table("needle_velocity_reference_m1");
    detail::append_trajectories(ref_table, ref_bundle, spacing);
    result.tables.push_back(std::move(table));
    result.tables.push_back(std::move(ref_table));

    const double rough = mean_abs_needle_acceleration(bundle, T);
    const double rough_ref = mean_abs_needle_acceleration(ref_bundle, T);
    result.counters["bundle.mean_abs_dvr_dt"] = rough;
    result.counters["bundle_reference.mean_abs_dvr_dt"] = rough_ref;
    result.checks.push_back(detail::make_check(
        "fluctuations_grow_as_mass_drops", rough > rough_ref, rough, rough_ref, ">", true,
        "pre-convergence mean |dv_r/dt| over [0, T] for m=" + format_value(mass) +
            " vs m=1 (same initial points)"));
  } else {
    const auto bundle = evolve_ensemble(model, bundle_init, bundle_cfg, threads);
    DataTable table = detail::trajectory_table("needle_velocity");
    detail::append_trajectories(table, bundle, spacing);
    result.tables.push_back(std::move(table));
    result.counters["bundle.mean_abs_dvr_dt"] = mean_abs_needle_acceleration(bundle, T);
  }
  result.tables.push_back(std::move(outcome_table));
  result.counters["measurement_time"] = T;
  result.counters["dt"] = cfg.dt;
  return result;
}

ExperimentResult exp_momentum_basic(char variant) {
  const auto* info = find_experiment("exp_momentum_basic");
  ParamSet params(info->params);
  params.set("variant", std::string(1, variant));
  return exp_momentum_basic(params);
}

}  // namespace bohm
