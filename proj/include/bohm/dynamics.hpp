#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bohm/guidance.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

struct IntegratorConfig {
  double dt = 0.01;             ///< base RK4 step
  double t_end = 6.0;           ///< absolute end time
  double rho_min = kDefaultRelativeNodeThreshold;  ///< relative to peak density
  int max_substep_halvings = 8;
  double stationary_window = 0.6;  ///< trailing window for outcome averaging
  double stationary_tol = 0.05;    ///< in units of lambda * min momentum gap
  int record_stride = 1;           ///< store every k-th base step (and the last)

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Measurement-time estimate for the closest momentum pair (6 sigma
/// separation of the needle packets); +infinity for a single momentum.
double measurement_time(const MomentumSuperposition& model);

/// Base step: min(0.01, T/300, 0.2 m / (span(p) max|p|)). The last term keeps
/// the correlation-phase advance per step bounded when v_q ~ p/m is large.
double default_time_step(const MomentumSuperposition& model);

/// dt from default_time_step, t_end = 2 T, trailing window 10% of t_end,
/// stationary_tol 0.05. A single-momentum model uses t_end = 1.
IntegratorConfig default_integrator_config(const MomentumSuperposition& model);

struct Position {
  double q = 0.0;
  double r = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Position> states;
  std::vector<VelocityPair> velocities;
  bool node_excluded = false;
  std::optional<std::size_t> outcome;

  std::size_t size() const noexcept { return times.size(); }
};

/// A velocity field evaluated at (q, r, t). May throw NodeError.
using VelocityField = std::function<VelocityPair(const ConfigPoint&)>;

/// Guidance field of the momentum device with the node threshold
/// cfg.rho_min * model.peak_density().
VelocityField momentum_field(const MomentumSuperposition& model,
                             const IntegratorConfig& cfg);

/// Classical RK4 from initial.t to cfg.t_end with fixed base step. A base step
/// whose stages hit a node is retried as two half steps, recursively, up to
/// cfg.max_substep_halvings times; past that the trajectory is truncated and
/// flagged node_excluded.
///
/// Throws InvalidStart when the field is undefined at the initial point.
Trajectory integrate_trajectory(const VelocityField& field,
                                const BeableState& initial,
                                const IntegratorConfig& cfg);

/// Averages v_r over the trailing stationary window and returns the index i
/// minimizing |<v_r> - lambda p_i|, provided the residual is below
/// stationary_tol * lambda * min_gap. Returns nullopt (unresolved) otherwise
/// and for node-excluded trajectories.
std::optional<std::size_t> detect_outcome(const Trajectory& traj,
                                          const MomentumSuperposition& model,
                                          const IntegratorConfig& cfg);

/// Earliest stored time after which v_r stays within the outcome tolerance
/// of lambda p_outcome.
std::optional<double> lock_time(const Trajectory& traj,
                                const MomentumSuperposition& model,
                                const IntegratorConfig& cfg,
                                std::size_t outcome);

/// T = 6 sigma / (lambda |f2 - f1|). Throws DegenerateValues if f1 == f2.
double decoherence_time(double sigma, double lam, double f1, double f2);

struct ValidityReport {
  double ratio = 0.0;  ///< T * lambda
  double threshold = 0.1;
  bool valid = false;
};

/// Projective limit of the coordinate device requires T << 1/lambda;
/// accepted when T * lambda < 0.1.
ValidityReport projective_validity(double T, double lam);

}  // namespace bohm
