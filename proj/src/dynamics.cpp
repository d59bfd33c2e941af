#include "bohm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

constexpr double kSeparationInSigmas = 6.0;
constexpr double kValidityThreshold = 0.1;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

struct StepResult {
  Position end;
  bool ok = false;
};

Position rk4_step(const VelocityField& field, const Position& x, double t,
                  double h, const VelocityPair& k1) {
  const VelocityPair k2 =
      field({x.q + 0.5 * h * k1.v_q, x.r + 0.5 * h * k1.v_r, t + 0.5 * h});
  const VelocityPair k3 =
      field({x.q + 0.5 * h * k2.v_q, x.r + 0.5 * h * k2.v_r, t + 0.5 * h});
  const VelocityPair k4 = field({x.q + h * k3.v_q, x.r + h * k3.v_r, t + h});
  return {x.q + h / 6.0 * (k1.v_q + 2.0 * k2.v_q + 2.0 * k3.v_q + k4.v_q),
          x.r + h / 6.0 * (k1.v_r + 2.0 * k2.v_r + 2.0 * k3.v_r + k4.v_r)};
}

// Advances x over [t, t + h]; on a node hit the interval is split in two and
// each half retried, down to `depth_left` levels.
StepResult advance(const VelocityField& field, const Position& x, double t,
                   double h, const VelocityPair* k1_cached, int depth_left) {
  try {
    const VelocityPair k1 = k1_cached ? *k1_cached : field({x.q, x.r, t});
    const Position end = rk4_step(field, x, t, h, k1);
    if (std::isfinite(end.q) && std::isfinite(end.r)) return {end, true};
  } catch (const NodeError&) {
  }
  if (depth_left == 0) return {};
  const double half = 0.5 * h;
  const StepResult first = advance(field, x, t, half, nullptr, depth_left - 1);
  if (!first.ok) return {};
  return advance(field, first.end, t + half, half, nullptr, depth_left - 1);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!positive_finite(dt)) throw std::invalid_argument("dt must be positive");
  if (!positive_finite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (!(dt < t_end)) throw std::invalid_argument("dt must be smaller than t_end");
  if (!positive_finite(rho_min)) throw std::invalid_argument("rho_min must be positive");
  if (max_substep_halvings < 0 || max_substep_halvings > 40) {
    throw std::invalid_argument("max_substep_halvings must be in [0, 40]");
  }
  if (!positive_finite(stationary_window) || !(stationary_window < t_end)) {
    throw std::invalid_argument("stationary_window must be in (0, t_end)");
  }
  if (!positive_finite(stationary_tol)) {
    throw std::invalid_argument("stationary_tol must be positive");
  }
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
}

double measurement_time(const MomentumSuperposition& model) {
  const double gap = model.min_gap();
  if (!std::isfinite(gap)) return std::numeric_limits<double>::infinity();
  const auto& prm = model.params();
  return kSeparationInSigmas * prm.sigma / (prm.coupling * gap);
}

double default_time_step(const MomentumSuperposition& model) {
  double dt = 0.01;
  const double T = measurement_time(model);
  if (std::isfinite(T)) dt = std::min(dt, T / 300.0);
  const auto momenta = model.momenta();
  const double span = momenta.back() - momenta.front();
  const double phase_rate = span * model.max_abs_momentum() / model.params().mass;
  if (phase_rate > 0.0) dt = std::min(dt, 0.2 / phase_rate);
  return dt;
}

IntegratorConfig default_integrator_config(const MomentumSuperposition& model) {
  IntegratorConfig cfg;
  cfg.dt = default_time_step(model);
  const double T = measurement_time(model);
  cfg.t_end = std::isfinite(T) ? 2.0 * T : 1.0;
  cfg.stationary_window = 0.1 * cfg.t_end;
  cfg.stationary_tol = 0.05;
  return cfg;
}

VelocityField momentum_field(const MomentumSuperposition& model,
                             const IntegratorConfig& cfg) {
  const double rho_min = cfg.rho_min * model.peak_density();
  return [&model, rho_min](const ConfigPoint& x) {
    return velocity_momentum(model, x, rho_min);
  };
}

Trajectory integrate_trajectory(const VelocityField& field,
                                const BeableState& initial,
                                const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(initial.t >= 0.0) || !(initial.t < cfg.t_end)) {
    throw std::invalid_argument("initial time must lie in [0, t_end)");
  }

  VelocityPair v;
  try {
    v = field(initial);
  } catch (const NodeError& e) {
    throw InvalidStart(std::string("field undefined at initial point: ") + e.what());
  }

  const double t0 = initial.t;
  const double span = cfg.t_end - t0;
  auto steps = static_cast<long long>(std::ceil(span / cfg.dt - 1e-9));
  steps = std::max(steps, 1LL);

  Trajectory traj;
  const auto expected = static_cast<std::size_t>(steps / cfg.record_stride + 2);
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  traj.velocities.reserve(expected);

  Position x{initial.q, initial.r};
  traj.times.push_back(t0);
  traj.states.push_back(x);
  traj.velocities.push_back(v);

  double t = t0;
  for (long long k = 1; k <= steps; ++k) {
    const double t_next = (k == steps) ? cfg.t_end : t0 + static_cast<double>(k) * cfg.dt;
    const StepResult step =
        advance(field, x, t, t_next - t, &v, cfg.max_substep_halvings);
    if (!step.ok) {
      traj.node_excluded = true;
      return traj;
    }
    x = step.end;
    t = t_next;
    try {
      v = field({x.q, x.r, t});
    } catch (const NodeError&) {
      traj.node_excluded = true;
      return traj;
    }
    if (k % cfg.record_stride == 0 || k == steps) {
      traj.times.push_back(t);
      traj.states.push_back(x);
      traj.velocities.push_back(v);
    }
  }
  return traj;
}

std::optional<std::size_t> detect_outcome(const Trajectory& traj,
                                          const MomentumSuperposition& model,
                                          const IntegratorConfig& cfg) {
  if (traj.node_excluded || traj.times.empty()) return std::nullopt;
  const double t_final = traj.times.back();
  const double t_start = t_final - cfg.stationary_window;

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = traj.size(); k-- > 0;) {
    if (traj.times[k] < t_start) break;
    sum += traj.velocities[k].v_r;
    ++count;
  }
  if (count == 0) return std::nullopt;
  const double mean_vr = sum / static_cast<double>(count);

  const double lam = model.params().coupling;
  std::size_t best = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double residual = std::abs(mean_vr - lam * model.momentum(i));
    if (residual < best_residual) {
      best_residual = residual;
      best = i;
    }
  }
  if (best_residual < cfg.stationary_tol * lam * model.min_gap()) return best;
  return std::nullopt;
}

std::optional<double> lock_time(const Trajectory& traj,
                                const MomentumSuperposition& model,
                                const IntegratorConfig& cfg,
                                std::size_t outcome) {
  if (traj.times.empty() || outcome >= model.size()) return std::nullopt;
  const double lam = model.params().coupling;
  const double target = lam * model.momentum(outcome);
  const double tol = cfg.stationary_tol * lam * model.min_gap();
  std::optional<double> locked;
  for (std::size_t k = traj.size(); k-- > 0;) {
    if (std::abs(traj.velocities[k].v_r - target) >= tol) break;
    locked = traj.times[k];
  }
  return locked;
}

double decoherence_time(double sigma, double lam, double f1, double f2) {
  if (!positive_finite(sigma) || !positive_finite(lam)) {
    throw std::invalid_argument("sigma and lambda must be positive");
  }
  if (f1 == f2) {
    throw DegenerateValues("decoherence time undefined for equal values f = f'");
  }
  return kSeparationInSigmas * sigma / (lam * std::abs(f2 - f1));
}

ValidityReport projective_validity(double T, double lam) {
  ValidityReport report;
  report.ratio = T * lam;
  report.threshold = kValidityThreshold;
  report.valid = report.ratio < kValidityThreshold;
  return report;
}

}  // namespace bohm
