#include "bohm/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bohm {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void PhysicalParams::validate() const {
  if (!positive_finite(mass)) {
    throw std::invalid_argument("mass must be positive, got " +
                                std::to_string(mass));
  }
  if (!positive_finite(coupling)) {
    throw std::invalid_argument("coupling must be positive, got " +
                                std::to_string(coupling));
  }
  if (!positive_finite(sigma)) {
    throw std::invalid_argument("sigma must be positive, got " +
                                std::to_string(sigma));
  }
}

GaussianDevicePacket::GaussianDevicePacket(double sigma) : sigma_(sigma) {
  if (!positive_finite(sigma)) {
    throw std::invalid_argument("packet width must be positive");
  }
  norm_ = std::pow(2.0 * std::numbers::pi, -0.25) / std::sqrt(sigma);
  inv_four_sigma_sq_ = 1.0 / (4.0 * sigma * sigma);
}

double GaussianDevicePacket::operator()(double x) const noexcept {
  return norm_ * std::exp(-x * x * inv_four_sigma_sq_);
}

double GaussianDevicePacket::log_derivative(double x) const noexcept {
  return -2.0 * x * inv_four_sigma_sq_;
}

double packet_eval(const GaussianDevicePacket& packet, double x) {
  return packet(x);
}

double packet_log_deriv(const GaussianDevicePacket& packet, double x) {
  return packet.log_derivative(x);
}

MomentumSuperposition::MomentumSuperposition(std::vector<double> momenta,
                                             std::vector<double> amplitudes,
                                             PhysicalParams params)
    : params_(params), packet_((params.validate(), params.sigma)) {
  if (momenta.empty()) {
    throw std::invalid_argument("momentum spectrum is empty");
  }
  if (momenta.size() != amplitudes.size()) {
    throw std::invalid_argument("momenta and amplitudes differ in length");
  }
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    if (!std::isfinite(momenta[i])) {
      throw std::invalid_argument("non-finite momentum");
    }
    if (!std::isfinite(amplitudes[i]) || amplitudes[i] < 0.0) {
      throw std::invalid_argument("amplitudes must be finite and nonnegative");
    }
  }

  std::vector<std::size_t> order(momenta.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return momenta[a] < momenta[b]; });

  momenta_.reserve(order.size());
  amplitudes_.reserve(order.size());
  for (std::size_t k : order) {
    if (!momenta_.empty() && momenta[k] == momenta_.back()) {
      throw std::invalid_argument("duplicate momentum " +
                                  std::to_string(momenta[k]));
    }
    momenta_.push_back(momenta[k]);
    amplitudes_.push_back(amplitudes[k]);
  }

  double norm_sq = 0.0;
  for (double a : amplitudes_) norm_sq += a * a;
  if (!(norm_sq > 0.0)) {
    throw std::invalid_argument("all amplitudes are zero");
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (double& a : amplitudes_) a *= scale;
}

double MomentumSuperposition::probability(std::size_t i) const {
  const double a = amplitudes_.at(i);
  return a * a;
}

double MomentumSuperposition::peak_density() const noexcept {
  double amax = 0.0;
  for (double a : amplitudes_) amax = std::max(amax, a);
  const double k0 = packet_.peak();
  return amax * amax * k0 * k0;
}

double MomentumSuperposition::min_gap() const noexcept {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < momenta_.size(); ++i) {
    gap = std::min(gap, momenta_[i] - momenta_[i - 1]);
  }
  return gap;
}

double MomentumSuperposition::max_abs_momentum() const noexcept {
  return std::max(std::abs(momenta_.front()), std::abs(momenta_.back()));
}

double correlation_phase(const MomentumSuperposition& model, std::size_t i,
                         std::size_t j, double q, double t) {
  const double pi = model.momentum(i);
  const double pj = model.momentum(j);
  return (pi - pj) * q + (pj * pj - pi * pi) * t / (2.0 * model.params().mass);
}

std::complex<double> eval_psi_momentum(const MomentumSuperposition& model,
                                       const ConfigPoint& point) {
  const auto& prm = model.params();
  const auto& packet = model.packet();
  std::complex<double> psi{0.0, 0.0};
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double p = model.momentum(i);
    const double envelope =
        model.amplitude(i) * packet(point.r - prm.coupling * p * point.t);
    const double phase = p * point.q - p * p * point.t / (2.0 * prm.mass);
    psi += std::polar(envelope, phase);
  }
  return psi;
}

double eval_density(const MomentumSuperposition& model,
                    const ConfigPoint& point) {
  const auto& prm = model.params();
  const auto& packet = model.packet();
  const std::size_t n = model.size();

  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = model.amplitude(i) *
                packet(point.r - prm.coupling * model.momentum(i) * point.t);
  }

  double rho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rho += weight[i] * weight[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      rho += 2.0 * weight[i] * weight[j] *
             std::cos(correlation_phase(model, i, j, point.q, point.t));
    }
  }
  // Cancellation at nodes can leave a tiny negative residue.
  return std::max(rho, 0.0);
}

MomentumSuperposition regularized_delta_spectrum(int half_width, double dp,
                                                 const PhysicalParams& params) {
  if (half_width < 1) {
    throw std::invalid_argument("regularized delta needs N >= 1");
  }
  if (!positive_finite(dp)) {
    throw std::invalid_argument("momentum spacing must be positive");
  }
  const auto count = static_cast<std::size_t>(2 * half_width + 1);
  std::vector<double> momenta(count);
  for (std::size_t k = 0; k < count; ++k) {
    momenta[k] = (static_cast<double>(k) - half_width) * dp;
  }
  return MomentumSuperposition(std::move(momenta),
                               std::vector<double>(count, 1.0), params);
}

}  // namespace bohm
