#pragma once

#include "bohm/wavefield.hpp"

namespace bohm {

/// Beable velocities: target particle (v_q) and device needle (v_r).
struct VelocityPair {
  double v_q = 0.0;
  double v_r = 0.0;
};

/// Relative node threshold used when no explicit one is given.
inline constexpr double kDefaultRelativeNodeThreshold = 1e-10;

/// kDefaultRelativeNodeThreshold * peak_density().
double default_node_threshold(const MomentumSuperposition& model);

/// Guidance field of the momentum-measuring device,
///
///   v_r = (lambda/2) sum_ij w_ij (p_i + p_j) cos a_ij / rho
///   v_q = v_r / (lambda m)
///       + (lambda/2) sum_ij w_ij (K_i'/K_i - K_j'/K_j) sin a_ij / rho
///
/// with w_ij = A_i A_j K_i K_j and rho = sum_ij w_ij cos a_ij. The v_q
/// coupling term is written so that v_q = lambda Im(psi_r/psi) + Im(psi_q/psi)/m.
///
/// Throws NodeError when rho < rho_min.
VelocityPair velocity_momentum(const MomentumSuperposition& model,
                               const ConfigPoint& point, double rho_min);

/// Projective coordinate device: the particle is frozen (v_q = 0) and the
/// needle drifts at v_r = lambda q.
VelocityPair velocity_coordinate(const PhysicalParams& params,
                                 const ConfigPoint& point);

/// 1e-5 * max(sigma, 1/max|p|).
double default_fd_step(const MomentumSuperposition& model);

/// Independent estimate of the momentum-device field from central
/// differences of psi: v_r = lambda Im(psi_q/psi),
/// v_q = lambda Im(psi_r/psi) + Im(psi_q/psi)/m.
VelocityPair velocity_fd_oracle(const MomentumSuperposition& model,
                                const ConfigPoint& point, double h,
                                double rho_min);

/// 1e-3 * sigma.
double default_qp_step(const MomentumSuperposition& model);

/// Quantum potential of the momentum measurement,
/// -lambda A_rq / A - A_qq / (2 m A) with A = |psi|, by central differences.
double quantum_potential(const MomentumSuperposition& model,
                         const ConfigPoint& point, double h, double rho_min);

/// Reference motion with the quantum potential switched off: beables move
/// with the Born-weighted mean momentum <p> = sum A_i^2 p_i, i.e.
/// v_r = lambda <p> and v_q = <p> / m.
VelocityPair classical_velocity(const MomentumSuperposition& model);

}  // namespace bohm
