#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bohm/dynamics.hpp"
#include "bohm/statistics.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

struct EnsembleSpec {
  MomentumSuperposition model;
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  std::pair<double, double> q_window{-1.0, 1.0};

  void validate() const;
};

/// One central period [-pi/d, pi/d] of g(q) = |sum A_i exp(i p_i q)|^2 when
/// all momentum differences are integer multiples of the smallest gap d.
/// Otherwise [-6 s, 6 s] with s the RMS width of g over [-pi/d, pi/d].
/// A single momentum uses [-pi, pi].
std::pair<double, double> default_q_window(const MomentumSuperposition& model);

/// Number of grid points used to tabulate the q-marginal CDF.
inline constexpr std::size_t kSamplerGridPoints = 10000;

/// Inverse-CDF sampler for the t = 0 q-marginal g(q) restricted to a window.
class MarginalSampler {
 public:
  /// Throws ZeroMass when g integrates to less than 1e-12 over the window.
  MarginalSampler(const MomentumSuperposition& model, std::pair<double, double> window);

  /// Maps u in [0, 1) to q by linear interpolation of the tabulated CDF.
  double sample(double u) const;
  /// Trapezoid integral of g over the window.
  double mass() const noexcept { return mass_; }

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
  double mass_ = 0.0;
};

/// Born-distributed initial beables at t = 0, where rho factorizes into
/// K(r)^2 g(q): q by inverse CDF of g on the window, r ~ N(0, sigma^2).
/// Sample k uses SampleStream(seed, k).
std::vector<BeableState> sample_initial(const EnsembleSpec& spec);

/// Integrates every member of the ensemble under the momentum-device field and
/// fills in the detected outcomes. Members whose start lies below the node
/// threshold are returned empty and flagged node_excluded. Results are
/// ordered by sample index and independent of `threads`.
std::vector<Trajectory> evolve_ensemble(const MomentumSuperposition& model,
                                        std::span<const BeableState> initial,
                                        const IntegratorConfig& cfg,
                                        unsigned threads = 0);

enum class OutcomeStatus { resolved, unresolved, node_excluded };

struct Outcome {
  OutcomeStatus status = OutcomeStatus::unresolved;
  std::size_t index = 0;  ///< meaningful only when resolved
};

Outcome outcome_of(const Trajectory& traj);
std::vector<Outcome> outcomes_of(std::span<const Trajectory> trajectories);

struct OutcomeHistogram {
  std::vector<std::size_t> counts;        ///< per momentum index
  std::vector<double> born_probability;   ///< A_i^2
  std::size_t unresolved = 0;
  std::size_t node_excluded = 0;
  std::size_t n_effective = 0;            ///< resolved count
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 1.0;

  std::size_t total() const noexcept;
  double frequency(std::size_t i) const;
};

/// Tallies outcomes and computes Pearson chi-square of the resolved counts
/// against A_i^2 (cells with zero Born weight are left out; any count landing
/// there makes the statistic infinite).
OutcomeHistogram born_histogram(std::span<const Outcome> outcomes,
                                const MomentumSuperposition& model);

struct GoodnessOfFit {
  std::vector<double> edges;     ///< bins + 1 edges; outer bins are open-ended
  std::vector<double> observed;
  std::vector<double> expected;  ///< counts
  ChiSquareResult chi;
  std::size_t node_excluded = 0;
  std::size_t used = 0;
};

/// Theoretical needle marginal int_window rho(q, r, t) dq, by Simpson
/// quadrature in q, normalized over r.
class NeedleMarginal {
 public:
  NeedleMarginal(const MomentumSuperposition& model, std::pair<double, double> q_window,
                 double t);
  double density(double r) const;  ///< unnormalized
  /// Probability of each bin [edges[k], edges[k+1]); the two outer bins are
  /// extended to cover the tails.
  std::vector<double> bin_probabilities(std::span<const double> edges) const;

 private:
  MomentumSuperposition model_;
  std::pair<double, double> window_;
  double t_;
};

/// Bin edges spanning [min_i lambda p_i t - 8 sigma, max_i lambda p_i t + 8 sigma].
std::vector<double> needle_bin_edges(const MomentumSuperposition& model, double t,
                                     int bins);

/// Evolves the Born-sampled ensemble to time t and tests the empirical needle
/// marginal against the quadrature marginal. t = 0 tests the sampler itself.
GoodnessOfFit equivariance_check(const EnsembleSpec& spec, double t, int bins,
                                 unsigned threads = 0);
GoodnessOfFit equivariance_check(const EnsembleSpec& spec, double t, int bins,
                                 const IntegratorConfig& cfg, unsigned threads = 0);

/// int K(r - lambda p_i t) K(r - lambda p_j t) dr
///   = exp(-(lambda (p_i - p_j) t)^2 / (8 sigma^2)).
double packet_overlap(const MomentumSuperposition& model, std::size_t i,
                      std::size_t j, double t);

struct DispersionSeries {
  std::vector<double> times;
  std::vector<double> delta_q;
  std::size_t members = 0;
};

/// Population standard deviation of q across the trajectories that resolved
/// to `outcome`, at each stored time. Throws InsufficientGroup below two
/// members and std::invalid_argument if members disagree on the time grid.
DispersionSeries subensemble_dispersion(std::span<const Trajectory> trajectories,
                                        std::size_t outcome);

/// Same statistic over every trajectory that was not node-excluded.
DispersionSeries ensemble_dispersion(std::span<const Trajectory> trajectories);

/// Lower bound hbar/2 of the uncertainty product.
inline constexpr double kUncertaintyBound = 0.5;

struct UncertaintyReport {
  std::vector<double> times;
  std::vector<double> delta_q;
  double dp = 0.0;
  std::vector<double> product;
  double T = 0.0;
  bool satisfied = false;  ///< product >= 0.5 for all t >= T
  double min_product_after_T = 0.0;
};

UncertaintyReport uncertainty_product(const DispersionSeries& disp, double dp, double T);

}  // namespace bohm
