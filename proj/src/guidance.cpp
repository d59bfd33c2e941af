#include "bohm/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

// Small spectra fit on the stack; larger ones fall back to the heap.
constexpr std::size_t kInlineTerms = 32;

struct BranchScratch {
  double weight[kInlineTerms];
  double log_deriv[kInlineTerms];
  double cos_phase[kInlineTerms];
  double sin_phase[kInlineTerms];
};

VelocityPair momentum_field(const MomentumSuperposition& model,
                            const ConfigPoint& point, double rho_min,
                            double* weight, double* log_deriv,
                            double* cos_phase, double* sin_phase) {
  const auto& prm = model.params();
  const auto& packet = model.packet();
  const std::size_t n = model.size();
  const double lam = prm.coupling;
  const double half_inv_mass = 0.5 / prm.mass;

  for (std::size_t i = 0; i < n; ++i) {
    const double p = model.momentum(i);
    const double x = point.r - lam * p * point.t;
    weight[i] = model.amplitude(i) * packet(x);
    log_deriv[i] = packet.log_derivative(x);
    const double phase = p * point.q - p * p * point.t * half_inv_mass;
    cos_phase[i] = std::cos(phase);
    sin_phase[i] = std::sin(phase);
  }

  // cos a_ij = c_i c_j + s_i s_j and sin a_ij = s_i c_j - c_i s_j, since
  // a_ij is the difference of the single-branch phases.
  double rho = 0.0;
  double current_r = 0.0;
  double current_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weight[i];
    if (wi == 0.0) continue;
    const double pi = model.momentum(i);
    rho += wi * wi;
    current_r += wi * wi * 2.0 * pi;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double wij = wi * weight[j];
      if (wij == 0.0) continue;
      const double cos_a = cos_phase[i] * cos_phase[j] + sin_phase[i] * sin_phase[j];
      const double sin_a = sin_phase[i] * cos_phase[j] - cos_phase[i] * sin_phase[j];
      rho += 2.0 * wij * cos_a;
      current_r += 2.0 * wij * (pi + model.momentum(j)) * cos_a;
      current_q += 2.0 * wij * (log_deriv[i] - log_deriv[j]) * sin_a;
    }
  }

  if (!(rho >= rho_min) || rho <= 0.0) {
    throw NodeError(rho, rho_min);
  }
  VelocityPair v;
  v.v_r = 0.5 * lam * current_r / rho;
  // Explicit double-sum form of v_r / (lambda m); finite as lambda -> 0.
  v.v_q = 0.5 * current_r / (rho * prm.mass) + 0.5 * lam * current_q / rho;
  if (!std::isfinite(v.v_q) || !std::isfinite(v.v_r)) {
    throw NodeError(rho, rho_min);
  }
  return v;
}

}  // namespace

double default_node_threshold(const MomentumSuperposition& model) {
  return kDefaultRelativeNodeThreshold * model.peak_density();
}

VelocityPair velocity_momentum(const MomentumSuperposition& model,
                               const ConfigPoint& point, double rho_min) {
  const std::size_t n = model.size();
  if (n <= kInlineTerms) {
    BranchScratch s;
    return momentum_field(model, point, rho_min, s.weight, s.log_deriv,
                          s.cos_phase, s.sin_phase);
  }
  std::vector<double> buf(4 * n);
  return momentum_field(model, point, rho_min, buf.data(), buf.data() + n,
                        buf.data() + 2 * n, buf.data() + 3 * n);
}

VelocityPair velocity_coordinate(const PhysicalParams& params,
                                 const ConfigPoint& point) {
  return {0.0, params.coupling * point.q};
}

double default_fd_step(const MomentumSuperposition& model) {
  const double pmax = model.max_abs_momentum();
  const double sigma = model.params().sigma;
  const double scale = pmax > 0.0 ? std::max(sigma, 1.0 / pmax) : sigma;
  return 1e-5 * scale;
}

VelocityPair velocity_fd_oracle(const MomentumSuperposition& model,
                                const ConfigPoint& point, double h,
                                double rho_min) {
  const std::complex<double> psi = eval_psi_momentum(model, point);
  const double rho = std::norm(psi);
  if (!(rho >= rho_min) || rho <= 0.0) {
    throw NodeError(rho, rho_min);
  }
  auto shifted = [&](double dq, double dr) {
    return eval_psi_momentum(model, {point.q + dq, point.r + dr, point.t});
  };
  const std::complex<double> psi_q = (shifted(h, 0.0) - shifted(-h, 0.0)) / (2.0 * h);
  const std::complex<double> psi_r = (shifted(0.0, h) - shifted(0.0, -h)) / (2.0 * h);

  const double lam = model.params().coupling;
  const double im_q = (psi_q / psi).imag();
  const double im_r = (psi_r / psi).imag();
  return {lam * im_r + im_q / model.params().mass, lam * im_q};
}

double default_qp_step(const MomentumSuperposition& model) {
  return 1e-3 * model.params().sigma;
}

double quantum_potential(const MomentumSuperposition& model,
                         const ConfigPoint& point, double h, double rho_min) {
  auto modulus = [&](double dq, double dr) {
    return std::abs(eval_psi_momentum(model, {point.q + dq, point.r + dr, point.t}));
  };
  const double a0 = modulus(0.0, 0.0);
  if (!(a0 * a0 >= rho_min) || a0 <= 0.0) {
    throw NodeError(a0 * a0, rho_min);
  }
  const double a_qq = (modulus(h, 0.0) - 2.0 * a0 + modulus(-h, 0.0)) / (h * h);
  const double a_rq = (modulus(h, h) - modulus(h, -h) - modulus(-h, h) +
                       modulus(-h, -h)) /
                      (4.0 * h * h);
  const auto& prm = model.params();
  return -prm.coupling * a_rq / a0 - a_qq / (2.0 * prm.mass * a0);
}

VelocityPair classical_velocity(const MomentumSuperposition& model) {
  double mean_p = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    mean_p += model.probability(i) * model.momentum(i);
  }
  const auto& prm = model.params();
  return {mean_p / prm.mass, prm.coupling * mean_p};
}

}  // namespace bohm
