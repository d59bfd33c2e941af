// Decoherence-time estimate T = 6 sigma / (lambda dp) over a parameter grid,
// the packet-overlap decay behind it, and the observed lock-in times of the
// two-momentum ensemble.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/dynamics.hpp"
#include "bohm/ensemble.hpp"
#include "bohm/experiments.hpp"
#include "bohm/wavefield.hpp"
#include "common.hpp"

namespace bohm {

namespace {

// Composite Simpson of K(r - a) K(r - b) over a range covering both packets.
double overlap_quadrature(const GaussianDevicePacket& packet, double a, double b) {
  const double s = packet.sigma();
  const double lo = std::min(a, b) - 14.0 * s;
  const double hi = std::max(a, b) + 14.0 * s;
  const int n = 4000;
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = lo + k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * packet(r - a) * packet(r - b);
  }
  return sum * h / 3.0;
}

// First t > 0 with overlap(t) <= level, by bisection on [0, t_hi]; overlap is
// monotone decreasing in t.
template <typename F>
double crossing_time(F&& overlap, double level, double t_hi) {
  double lo = 0.0;
  double hi = t_hi;
  while (overlap(hi) > level) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (overlap(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ExperimentResult exp_decoherence(const ParamSet& params) {
  const auto sigmas = detail::parse_list(params.text("sigmas"));
  const auto lambdas = detail::parse_list(params.text("lambdas"));
  const auto gaps = detail::parse_list(params.text("dps"));
  const auto curve_points = params.integer("curve_points");
  const auto lock_samples = static_cast<std::size_t>(params.integer("lock_samples"));
  const std::uint64_t seed = params.seed("seed");
  const unsigned threads = detail::threads_from(params);
  if (curve_points < 2) throw std::invalid_argument("curve_points must be >= 2");

  ExperimentResult result;
  result.name = "exp_decoherence";
  result.seed = seed;
  detail::echo_parameters(result, params);

  const double level = std::exp(-4.5);
  DataTable grid{"grid",
                 {"grid_id", "sigma", "lambda", "dp", "T", "T_times_lambda", "crossing_time",
                  "overlap_at_T", "measurement_time"},
                 {}};
  DataTable curves{"overlap", {"grid_id", "t", "overlap", "overlap_quadrature"}, {}};

  double worst_crossing = 0.0;
  double worst_overlap_at_T = 0.0;
  double worst_quadrature = 0.0;
  double worst_scaling = 0.0;
  bool formula_matches_dynamics = true;
  double reference_T = NAN;
  std::size_t id = 0;
  for (const double sigma : sigmas) {
    for (const double gap : gaps) {
      double base_T_lambda = NAN;
      for (const double lam : lambdas) {
        const double T = decoherence_time(sigma, lam, -0.5 * gap, 0.5 * gap);
        const MomentumSuperposition model({-0.5 * gap, 0.5 * gap}, {1.0, 1.0},
                                          {1.0, lam, sigma});
        const auto overlap = [&](double t) { return packet_overlap(model, 0, 1, t); };
        const double crossing = crossing_time(overlap, level, T);
        const double at_T = overlap(T);
        const double mt = measurement_time(model);
        if (mt != T) formula_matches_dynamics = false;
        if (sigma == 1.0 && lam == 1.0 && gap == 2.0) reference_T = T;

        worst_crossing = std::max(worst_crossing, std::abs(crossing - T) / T);
        worst_overlap_at_T = std::max(worst_overlap_at_T, std::abs(at_T - level) / level);
        if (std::isnan(base_T_lambda)) base_T_lambda = T * lam;
        worst_scaling =
            std::max(worst_scaling, std::abs(T * lam - base_T_lambda) / base_T_lambda);

        grid.add_row({static_cast<double>(id), sigma, lam, gap, T, T * lam, crossing, at_T,
                      mt});
        const double t_max = 2.0 * T;
        for (std::int64_t k = 0; k < curve_points; ++k) {
          const double t = t_max * static_cast<double>(k) / static_cast<double>(curve_points - 1);
          const double a = lam * model.momentum(0) * t;
          const double b = lam * model.momentum(1) * t;
          const double quad = overlap_quadrature(model.packet(), a, b);
          const double closed = overlap(t);
          worst_quadrature = std::max(worst_quadrature, std::abs(quad - closed));
          curves.add_row({static_cast<double>(id), t, closed, quad});
        }
        ++id;
      }
    }
  }
  result.tables.push_back(std::move(grid));
  result.tables.push_back(std::move(curves));

  result.counters["reference.T"] = reference_T;
  result.checks.push_back(detail::make_check(
      "reference_time_sigma1_lambda1_dp2", reference_T == 3.0, reference_T, 3.0, "==", true,
      "decoherence_time(1, 1, -1, 1)"));
  result.checks.push_back(detail::make_check(
      "crossing_matches_formula", worst_crossing <= 1e-9, worst_crossing, 1e-9, "<=", true,
      "max relative |t(overlap = exp(-4.5)) - T| over the grid"));
  result.checks.push_back(detail::make_check(
      "overlap_at_T", worst_overlap_at_T <= 1e-12, worst_overlap_at_T, 1e-12, "<=", true,
      "max relative |overlap(T) - exp(-4.5)|"));
  result.checks.push_back(detail::make_check(
      "overlap_closed_form_vs_quadrature", worst_quadrature <= 1e-8, worst_quadrature, 1e-8,
      "<=", true, "max absolute difference over every curve sample"));
  result.checks.push_back(detail::make_check(
      "inverse_coupling_scaling", worst_scaling <= 1e-15, worst_scaling, 1e-15, "<=", true,
      "max relative spread of T * lambda at fixed (sigma, dp)"));
  result.checks.push_back(detail::make_check(
      "formula_equals_measurement_time", formula_matches_dynamics,
      formula_matches_dynamics ? 1.0 : 0.0, 1.0, "==", false,
      "decoherence_time equals the integrator's measurement_time for every grid model"));

  // Lock-in times of the Fig. 1(a) ensemble against T.
  if (lock_samples > 0) {
    const MomentumSuperposition model({1.0, -1.0}, {1.0, 1.0},
                                      {params.real("lock.m"), 1.0, 1.0});
    const double T = measurement_time(model);
    const auto cfg = detail::integrator_from(params, model, params.real("t_end"),
                                             params.real("dt"));
    const EnsembleSpec spec{model, lock_samples, seed, default_q_window(model)};
    const auto trajectories = evolve_ensemble(model, sample_initial(spec), cfg, threads);
    detail::record_counts(result, "lock", born_histogram(outcomes_of(trajectories), model));

    DataTable locks{"lock_times", {"trajectory_id", "outcome_index", "lock_time"}, {}};
    std::vector<double> times;
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
      const auto& tr = trajectories[k];
      if (!tr.outcome) continue;
      const auto lt = lock_time(tr, model, cfg, *tr.outcome);
      if (!lt) continue;
      times.push_back(*lt);
      locks.add_row({static_cast<double>(k), static_cast<double>(*tr.outcome), *lt});
    }
    result.tables.push_back(std::move(locks));
    double median = INFINITY;
    if (!times.empty()) {
      std::vector<double> sorted = times;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t n = sorted.size();
      median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }
    result.counters["lock.median"] = median;
    result.counters["lock.T"] = T;
    result.checks.push_back(detail::make_check(
        "median_lock_time", median <= 1.5 * T, median, 1.5 * T, "<=", true,
        "median time after which resolved trajectories stay locked, vs 1.5 T"));
  }
  return result;
}

}  // namespace bohm
