// Needle-velocity statistics of a seven-momentum measurement against A_i^2.

#include <cmath>

#include "bohm/ensemble.hpp"
#include "bohm/experiments.hpp"
#include "bohm/statistics.hpp"
#include "common.hpp"

namespace bohm {

namespace {

MomentumSuperposition centered_spectrum(const std::vector<double>& amplitudes,
                                        double spacing, const PhysicalParams& prm) {
  const std::size_t n = amplitudes.size();
  std::vector<double> momenta(n);
  for (std::size_t k = 0; k < n; ++k) {
    momenta[k] = (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1)) * spacing;
  }
  return MomentumSuperposition(std::move(momenta), amplitudes, prm);
}

}  // namespace

ExperimentResult exp_born(const ParamSet& params) {
  const PhysicalParams prm{params.real("m"), params.real("lambda"), params.real("sigma")};
  const auto amplitudes = detail::parse_list(params.text("amplitudes"));
  const double spacing = params.real("spacing");
  const auto samples = static_cast<std::size_t>(params.integer("samples"));
  const auto control_samples = static_cast<std::size_t>(params.integer("control_samples"));
  const std::uint64_t seed = params.seed("seed");
  const unsigned threads = detail::threads_from(params);

  const auto model = centered_spectrum(amplitudes, spacing, prm);
  const auto cfg = detail::integrator_from(params, model, params.real("t_end"),
                                           params.real("dt"));

  ExperimentResult result;
  result.name = "exp_born";
  result.seed = seed;
  detail::echo_parameters(result, params);

  const EnsembleSpec spec{model, samples, seed, default_q_window(model)};
  const auto initial = sample_initial(spec);
  const auto outcomes = outcomes_of(evolve_ensemble(model, initial, cfg, threads));
  const auto hist = born_histogram(outcomes, model);
  detail::record_counts(result, "ensemble", hist);

  DataTable table{"histogram",
                  {"outcome_index", "momentum", "count", "frequency", "born_probability"},
                  {}};
  double worst_z = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    table.add_row({static_cast<double>(i), model.momentum(i),
                   static_cast<double>(hist.counts[i]), hist.frequency(i),
                   hist.born_probability[i]});
    const auto dev =
        detail::multinomial_deviation(hist.counts[i], hist.n_effective, model.probability(i));
    worst_z = std::max(worst_z, std::abs(dev.z));
  }
  result.tables.push_back(std::move(table));

  const double critical = chi_square_critical(kSignificance, hist.dof);
  result.counters["chi_square.dof"] = hist.dof;
  result.counters["chi_square.p_value"] = hist.p_value;
  result.checks.push_back(detail::make_check(
      "born_chi_square", hist.chi_square < critical, hist.chi_square, critical, "<", true,
      "Pearson chi-square of resolved outcomes vs A_i^2, " + std::to_string(hist.dof) +
          " dof, significance 0.01"));
  result.checks.push_back(detail::make_check(
      "max_frequency_z", worst_z <= 3.0, worst_z, 3.0, "<=", false,
      "largest per-momentum multinomial z-score"));
  const double resolved_fraction =
      static_cast<double>(hist.n_effective) /
      static_cast<double>(hist.total() - hist.node_excluded);
  result.checks.push_back(detail::make_check("resolved_fraction", resolved_fraction >= 0.99,
                                             resolved_fraction, 0.99, ">=", false));

  // Degenerate control: a single momentum must always be read out.
  if (control_samples > 0) {
    const MomentumSuperposition single({model.momentum(model.size() / 2)}, {1.0}, prm);
    IntegratorConfig control_cfg = cfg;
    control_cfg.record_stride = std::numeric_limits<int>::max();
    const EnsembleSpec control{single, control_samples, seed, default_q_window(single)};
    const auto control_hist = born_histogram(
        outcomes_of(evolve_ensemble(single, sample_initial(control), control_cfg, threads)),
        single);
    detail::record_counts(result, "control", control_hist);
    const double frac = static_cast<double>(control_hist.counts[0]) /
                        static_cast<double>(control_hist.total());
    result.checks.push_back(detail::make_check(
        "control_single_outcome", frac == 1.0, frac, 1.0, "==", true,
        "single-momentum control ensemble"));
  }
  result.counters["measurement_time"] = measurement_time(model);
  result.counters["dt"] = cfg.dt;
  return result;
}

}  // namespace bohm
