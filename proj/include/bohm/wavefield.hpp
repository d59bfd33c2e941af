#pragma once

// Closed-form pilot waves of the von Neumann momentum measurement.
//
// The target particle (coordinate q) starts in a discrete momentum
// superposition and the device needle (coordinate r) in a real Gaussian
// packet K. The interaction -lambda d^2/dq dr entangles them into
//
//   psi(q, r, t) = sum_i A_i K(r - lambda p_i t) exp(i (p_i q - p_i^2 t / 2m))
//
// which solves the full Schroedinger equation exactly (kinetic term included).
// Units: hbar = 1.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bohm {

struct PhysicalParams {
  double mass = 1.0;      ///< target particle mass m
  double coupling = 1.0;  ///< device coupling lambda
  double sigma = 1.0;     ///< device packet width

  /// Throws std::invalid_argument unless all three are finite and positive.
  void validate() const;
};

/// Real, L2-normalized Gaussian needle packet
/// K(x) = (2 pi)^(-1/4) sigma^(-1/2) exp(-x^2 / (4 sigma^2)),
/// so that K^2 is the normal density with standard deviation sigma.
class GaussianDevicePacket {
 public:
  explicit GaussianDevicePacket(double sigma);

  double sigma() const noexcept { return sigma_; }
  double operator()(double x) const noexcept;
  /// K'(x) / K(x) = -x / (2 sigma^2).
  double log_derivative(double x) const noexcept;
  double peak() const noexcept { return norm_; }

 private:
  double sigma_;
  double norm_;
  double inv_four_sigma_sq_;
};

double packet_eval(const GaussianDevicePacket& packet, double x);
double packet_log_deriv(const GaussianDevicePacket& packet, double x);

/// A point (q, r) of configuration space at time t.
struct ConfigPoint {
  double q = 0.0;
  double r = 0.0;
  double t = 0.0;
};

/// Hidden-variable configuration of particle and needle.
using BeableState = ConfigPoint;

/// Discrete momentum spectrum {p_i, A_i} of the target system together with
/// the device it is measured by.
///
/// Momenta are stored sorted ascending (amplitudes follow their momentum) and
/// amplitudes are normalized so that sum A_i^2 = 1. Outcome indices used
/// throughout the library refer to this sorted order.
class MomentumSuperposition {
 public:
  /// Throws std::invalid_argument on empty/mismatched input, duplicate or
  /// non-finite momenta, negative amplitudes, or an all-zero amplitude set.
  MomentumSuperposition(std::vector<double> momenta,
                        std::vector<double> amplitudes, PhysicalParams params);

  std::size_t size() const noexcept { return momenta_.size(); }
  std::span<const double> momenta() const noexcept { return momenta_; }
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  double momentum(std::size_t i) const { return momenta_.at(i); }
  double amplitude(std::size_t i) const { return amplitudes_.at(i); }
  /// Born probability A_i^2.
  double probability(std::size_t i) const;

  const PhysicalParams& params() const noexcept { return params_; }
  const GaussianDevicePacket& packet() const noexcept { return packet_; }

  /// max_i A_i^2 K(0)^2, the reference scale for node thresholds.
  double peak_density() const noexcept;
  /// Smallest spacing between adjacent momenta; +infinity when n = 1.
  double min_gap() const noexcept;
  double max_abs_momentum() const noexcept;

 private:
  std::vector<double> momenta_;
  std::vector<double> amplitudes_;
  PhysicalParams params_;
  GaussianDevicePacket packet_;
};

/// alpha_ij = (p_i - p_j) q + (p_j^2 - p_i^2) t / (2m).
double correlation_phase(const MomentumSuperposition& model, std::size_t i,
                         std::size_t j, double q, double t);

std::complex<double> eval_psi_momentum(const MomentumSuperposition& model,
                                       const ConfigPoint& point);

/// rho = sum_ij A_i A_j K_i K_j cos(alpha_ij), the diagonal of the
/// device-traced density matrix. Equals |psi|^2.
double eval_density(const MomentumSuperposition& model,
                    const ConfigPoint& point);

/// 2N+1 equally weighted momenta p_n = n dp, n = -N..N: the finite-band
/// Fourier image of a position eigenstate localized at q = 0.
MomentumSuperposition regularized_delta_spectrum(int half_width, double dp,
                                                 const PhysicalParams& params);

}  // namespace bohm
