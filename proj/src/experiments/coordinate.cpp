// Projective coordinate measurement: frozen particle, needle drifting at
// lambda q, readout by inverting the linear needle law.

#include <algorithm>
#include <cmath>

#include "bohm/dynamics.hpp"
#include "bohm/experiments.hpp"
#include "bohm/guidance.hpp"
#include "bohm/rng.hpp"
#include "common.hpp"

namespace bohm {

namespace {

void add_validity_row(DataTable& table, double T, double lam) {
  const auto v = projective_validity(T, lam);
  table.add_row({T, lam, v.ratio, v.threshold, v.valid ? 1.0 : 0.0});
}

}  // namespace

ExperimentResult exp_coordinate(const ParamSet& params) {
  const double lam = params.real("lambda");
  const double T = params.real("T");
  const PhysicalParams prm{params.real("m"), lam, params.real("sigma")};
  prm.validate();
  const auto samples = static_cast<std::size_t>(params.integer("samples"));
  const double q_spread = params.real("q_spread");
  const auto steps = params.integer("steps");
  const std::uint64_t seed = params.seed("seed");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");

  const auto validity = projective_validity(T, lam);
  if (!validity.valid) throw ProjectiveLimitViolation(T, lam, validity);

  ExperimentResult result;
  result.name = "exp_coordinate";
  result.seed = seed;
  detail::echo_parameters(result, params);

  IntegratorConfig cfg;
  cfg.t_end = T;
  cfg.dt = T / static_cast<double>(steps);
  cfg.stationary_window = 0.5 * T;
  cfg.validate();
  const VelocityField field = [prm](const ConfigPoint& p) {
    return velocity_coordinate(prm, p);
  };
  const auto needle_at_T = [&](double q0, double r0) {
    return integrate_trajectory(field, {q0, r0, 0.0}, cfg);
  };

  // Ensemble: q0 ~ N(0, q_spread^2) from the target, r0 ~ N(0, sigma^2) from
  // the device packet.
  DataTable table{"readout",
                  {"trajectory_id", "q0", "r0", "q_T", "r_T", "law_error", "q_readout",
                   "readout_error"},
                  {}};
  double worst_law = 0.0;
  double worst_readout = 0.0;
  double worst_vq = 0.0;
  double worst_q_drift = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    SampleStream stream(seed, k);
    const double q0 = q_spread * stream.normal();
    const double r0 = prm.sigma * stream.normal();
    const auto tr = needle_at_T(q0, r0);
    const auto& end = tr.states.back();
    const double law_error = std::abs(end.r - (r0 + lam * q0 * T));
    const double q_hat = (end.r - r0) / (lam * T);
    const double readout_error = std::abs(q_hat - q0);
    for (const auto& v : tr.velocities) worst_vq = std::max(worst_vq, std::abs(v.v_q));
    worst_q_drift = std::max(worst_q_drift, std::abs(end.q - q0));
    worst_law = std::max(worst_law, law_error);
    worst_readout = std::max(worst_readout, readout_error);
    table.add_row({static_cast<double>(k), q0, r0, end.q, end.r, law_error, q_hat,
                   readout_error});
  }
  result.tables.push_back(std::move(table));

  result.checks.push_back(detail::make_check(
      "linear_needle_law", worst_law <= 1e-9, worst_law, 1e-9, "<=", true,
      "max |r(T) - r0 - lambda q0 T| over the ensemble"));
  result.checks.push_back(detail::make_check(
      "readout_inversion", worst_readout <= 1e-9, worst_readout, 1e-9, "<=", true,
      "max |(r(T) - r0)/(lambda T) - q0|"));
  result.checks.push_back(detail::make_check(
      "particle_frozen", worst_vq == 0.0 && worst_q_drift == 0.0,
      std::max(worst_vq, worst_q_drift), 0.0, "==", true,
      "max |v_q| and |q(T) - q0| during the interaction"));

  // Single worked point q0 = 2, r0 = 0.
  const auto point = needle_at_T(2.0, 0.0);
  const double point_error = std::abs(point.states.back().r - 2.0 * lam * T);
  result.counters["point_q0_2.r_T"] = point.states.back().r;
  result.checks.push_back(detail::make_check(
      "needle_reading_q0_2", point_error <= 1e-10, point_error, 1e-10, "<=", true,
      "|r(T) - 2 lambda T| for q0 = 2, r0 = 0"));

  // Validity bound: the configured point, a strong-coupling configuration
  // (T lambda = 3) and the decoherence-time composition for lambda = 0.01,
  // delta q = 10.
  DataTable validity_table{"validity", {"T", "lambda", "ratio", "threshold", "valid"}, {}};
  add_validity_row(validity_table, T, lam);
  add_validity_row(validity_table, 3.0, 1.0);
  const double T_composed = decoherence_time(prm.sigma, 0.01, 0.0, 10.0);
  add_validity_row(validity_table, T_composed, 0.01);
  result.tables.push_back(std::move(validity_table));

  bool rejected = false;
  double rejected_ratio = 0.0;
  {
    ParamSet strong = params;
    strong.set("T", 3.0);
    strong.set("lambda", 1.0);
    strong.set("samples", std::int64_t{1});
    try {
      (void)exp_coordinate(strong);
    } catch (const ProjectiveLimitViolation& e) {
      rejected = !e.report().valid;
      rejected_ratio = e.report().ratio;
    }
  }
  result.checks.push_back(detail::make_check(
      "rejects_strong_coupling", rejected, rejected_ratio, 0.1, ">=", true,
      "T = 3, lambda = 1 must raise ProjectiveLimitViolation"));
  const auto composed = projective_validity(T_composed, 0.01);
  result.counters["composed.T"] = T_composed;
  result.checks.push_back(detail::make_check(
      "decoherence_projective_tension", !composed.valid, composed.ratio, composed.threshold,
      ">=", false,
      "T from the decoherence estimate (sigma, lambda = 0.01, delta q = 10) breaks T lambda << 1"));
  result.counters["validity.ratio"] = validity.ratio;
  return result;
}

}  // namespace bohm
