#include "bohm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bohm/errors.hpp"
#include "bohm/parallel.hpp"
#include "bohm/rng.hpp"

namespace bohm {

namespace {

constexpr double kZeroMass = 1e-12;
constexpr int kMarginalQIntervals = 2000;
constexpr int kBinRIntervals = 16;
constexpr double kBinPaddingSigmas = 8.0;
constexpr double kTailSigmas = 4.0;

// |sum_i A_i exp(i p_i q)|^2, the t = 0 q-marginal up to the K(r)^2 factor.
double initial_q_marginal(const MomentumSuperposition& model, double q) {
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t i = 0; i < model.size(); ++i) {
    sum += std::polar(model.amplitude(i), model.momentum(i) * q);
  }
  return std::norm(sum);
}

template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  }
  return sum * h / 3.0;
}

bool commensurate(const MomentumSuperposition& model, double gap) {
  const auto p = model.momenta();
  for (double pk : p) {
    const double ratio = (pk - p.front()) / gap;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) return false;
  }
  return true;
}

}  // namespace

void EnsembleSpec::validate() const {
  if (n_samples < 1) throw std::invalid_argument("ensemble needs at least one sample");
  if (!(q_window.first < q_window.second) || !std::isfinite(q_window.first) ||
      !std::isfinite(q_window.second)) {
    throw std::invalid_argument("q window must be a nonempty finite interval");
  }
}

std::pair<double, double> default_q_window(const MomentumSuperposition& model) {
  const double gap = model.min_gap();
  if (!std::isfinite(gap)) return {-std::numbers::pi, std::numbers::pi};
  const double half_period = std::numbers::pi / gap;
  if (commensurate(model, gap)) return {-half_period, half_period};

  const double norm = simpson([&](double q) { return initial_q_marginal(model, q); },
                              -half_period, half_period, kMarginalQIntervals);
  const double second = simpson(
      [&](double q) { return q * q * initial_q_marginal(model, q); }, -half_period,
      half_period, kMarginalQIntervals);
  const double width = std::sqrt(second / norm);
  return {-6.0 * width, 6.0 * width};
}

MarginalSampler::MarginalSampler(const MomentumSuperposition& model,
                                 std::pair<double, double> window) {
  const auto [lo, hi] = window;
  if (!(lo < hi)) throw std::invalid_argument("sampler window is empty");
  grid_.resize(kSamplerGridPoints);
  cdf_.resize(kSamplerGridPoints);
  const double step = (hi - lo) / static_cast<double>(kSamplerGridPoints - 1);
  double previous = 0.0;
  CompensatedSum acc;
  for (std::size_t k = 0; k < kSamplerGridPoints; ++k) {
    grid_[k] = (k + 1 == kSamplerGridPoints) ? hi : lo + static_cast<double>(k) * step;
    const double g = initial_q_marginal(model, grid_[k]);
    if (k > 0) acc.add(0.5 * (g + previous) * (grid_[k] - grid_[k - 1]));
    cdf_[k] = acc.value();
    previous = g;
  }
  mass_ = cdf_.back();
  if (!(mass_ >= kZeroMass)) {
    throw ZeroMass("q-marginal integrates to " + std::to_string(mass_) +
                   " over the sampling window");
  }
}

double MarginalSampler::sample(double u) const {
  const double target = u * mass_;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  if (it == cdf_.begin()) return grid_.front();
  if (it == cdf_.end()) return grid_.back();
  const auto k = static_cast<std::size_t>(it - cdf_.begin());
  const double c0 = cdf_[k - 1];
  const double c1 = cdf_[k];
  const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
  return grid_[k - 1] + frac * (grid_[k] - grid_[k - 1]);
}

std::vector<BeableState> sample_initial(const EnsembleSpec& spec) {
  spec.validate();
  const MarginalSampler sampler(spec.model, spec.q_window);
  const double sigma = spec.model.params().sigma;
  std::vector<BeableState> states(spec.n_samples);
  for (std::size_t k = 0; k < spec.n_samples; ++k) {
    SampleStream stream(spec.seed, k);
    const double q = sampler.sample(stream.uniform());
    const double r = sigma * stream.normal();
    states[k] = {q, r, 0.0};
  }
  return states;
}

std::vector<Trajectory> evolve_ensemble(const MomentumSuperposition& model,
                                        std::span<const BeableState> initial,
                                        const IntegratorConfig& cfg,
                                        unsigned threads) {
  cfg.validate();
  const VelocityField field = momentum_field(model, cfg);
  std::vector<Trajectory> out(initial.size());
  parallel_for(initial.size(), threads, [&](std::size_t k) {
    Trajectory traj;
    try {
      traj = integrate_trajectory(field, initial[k], cfg);
    } catch (const InvalidStart&) {
      traj.node_excluded = true;
    }
    traj.outcome = detect_outcome(traj, model, cfg);
    out[k] = std::move(traj);
  });
  return out;
}

Outcome outcome_of(const Trajectory& traj) {
  if (traj.node_excluded) return {OutcomeStatus::node_excluded, 0};
  if (!traj.outcome) return {OutcomeStatus::unresolved, 0};
  return {OutcomeStatus::resolved, *traj.outcome};
}

std::vector<Outcome> outcomes_of(std::span<const Trajectory> trajectories) {
  std::vector<Outcome> out;
  out.reserve(trajectories.size());
  for (const auto& t : trajectories) out.push_back(outcome_of(t));
  return out;
}

std::size_t OutcomeHistogram::total() const noexcept {
  std::size_t sum = unresolved + node_excluded;
  for (auto c : counts) sum += c;
  return sum;
}

double OutcomeHistogram::frequency(std::size_t i) const {
  if (n_effective == 0) return 0.0;
  return static_cast<double>(counts.at(i)) / static_cast<double>(n_effective);
}

OutcomeHistogram born_histogram(std::span<const Outcome> outcomes,
                                const MomentumSuperposition& model) {
  OutcomeHistogram h;
  const std::size_t n = model.size();
  h.counts.assign(n, 0);
  h.born_probability.resize(n);
  for (std::size_t i = 0; i < n; ++i) h.born_probability[i] = model.probability(i);

  for (const auto& o : outcomes) {
    switch (o.status) {
      case OutcomeStatus::resolved:
        if (o.index >= n) throw std::out_of_range("outcome index out of range");
        ++h.counts[o.index];
        ++h.n_effective;
        break;
      case OutcomeStatus::unresolved:
        ++h.unresolved;
        break;
      case OutcomeStatus::node_excluded:
        ++h.node_excluded;
        break;
    }
  }

  const auto total = static_cast<double>(h.n_effective);
  CompensatedSum stat;
  int cells = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = total * h.born_probability[i];
    const auto observed = static_cast<double>(h.counts[i]);
    if (h.born_probability[i] > 0.0) {
      ++cells;
      if (expected > 0.0) stat.add((observed - expected) * (observed - expected) / expected);
    } else if (observed > 0.0) {
      stat.add(std::numeric_limits<double>::infinity());
    }
  }
  h.chi_square = stat.value();
  h.dof = std::max(cells - 1, 0);
  h.p_value = h.dof > 0 ? chi_square_survival(h.chi_square, h.dof) : 1.0;
  return h;
}

NeedleMarginal::NeedleMarginal(const MomentumSuperposition& model,
                               std::pair<double, double> q_window, double t)
    : model_(model), window_(q_window), t_(t) {}

double NeedleMarginal::density(double r) const {
  return simpson([&](double q) { return eval_density(model_, {q, r, t_}); },
                 window_.first, window_.second, kMarginalQIntervals);
}

std::vector<double> NeedleMarginal::bin_probabilities(std::span<const double> edges) const {
  if (edges.size() < 2) throw std::invalid_argument("need at least one bin");
  const double tail = kTailSigmas * model_.params().sigma;
  const std::size_t bins = edges.size() - 1;
  std::vector<double> prob(bins);
  CompensatedSum total;
  for (std::size_t k = 0; k < bins; ++k) {
    const double a = (k == 0) ? edges[0] - tail : edges[k];
    const double b = (k + 1 == bins) ? edges[bins] + tail : edges[k + 1];
    const int intervals = (k == 0 || k + 1 == bins) ? 4 * kBinRIntervals : kBinRIntervals;
    prob[k] = simpson([&](double r) { return density(r); }, a, b, intervals);
    total.add(prob[k]);
  }
  for (double& p : prob) p /= total.value();
  return prob;
}

std::vector<double> needle_bin_edges(const MomentumSuperposition& model, double t,
                                     int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be positive");
  const double lam = model.params().coupling;
  const double pad = kBinPaddingSigmas * model.params().sigma;
  const double lo = lam * model.momenta().front() * t;
  const double hi = lam * model.momenta().back() * t;
  const double a = std::min(lo, hi) - pad;
  const double b = std::max(lo, hi) + pad;
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) edges[k] = a + (b - a) * k / bins;
  return edges;
}

GoodnessOfFit equivariance_check(const EnsembleSpec& spec, double t, int bins,
                                 unsigned threads) {
  IntegratorConfig cfg = default_integrator_config(spec.model);
  return equivariance_check(spec, t, bins, cfg, threads);
}

GoodnessOfFit equivariance_check(const EnsembleSpec& spec, double t, int bins,
                                 const IntegratorConfig& base, unsigned threads) {
  if (!(t >= 0.0)) throw std::invalid_argument("equivariance time must be >= 0");
  const auto initial = sample_initial(spec);

  GoodnessOfFit fit;
  std::vector<double> needles;
  needles.reserve(initial.size());
  if (t == 0.0) {
    for (const auto& s : initial) needles.push_back(s.r);
  } else {
    IntegratorConfig cfg = base;
    cfg.t_end = t;
    cfg.dt = std::min(cfg.dt, 0.5 * t);
    cfg.stationary_window = 0.1 * t;
    cfg.record_stride = std::numeric_limits<int>::max();
    const auto trajectories = evolve_ensemble(spec.model, initial, cfg, threads);
    for (const auto& traj : trajectories) {
      if (traj.node_excluded) {
        ++fit.node_excluded;
        continue;
      }
      needles.push_back(traj.states.back().r);
    }
  }
  fit.used = needles.size();

  fit.edges = needle_bin_edges(spec.model, t, bins);
  fit.observed.assign(static_cast<std::size_t>(bins), 0.0);
  for (double r : needles) {
    auto it = std::upper_bound(fit.edges.begin(), fit.edges.end(), r);
    auto k = static_cast<long>(it - fit.edges.begin()) - 1;
    k = std::clamp<long>(k, 0, bins - 1);
    fit.observed[static_cast<std::size_t>(k)] += 1.0;
  }

  const NeedleMarginal marginal(spec.model, spec.q_window, t);
  const auto prob = marginal.bin_probabilities(fit.edges);
  fit.expected.resize(prob.size());
  for (std::size_t k = 0; k < prob.size(); ++k) {
    fit.expected[k] = prob[k] * static_cast<double>(fit.used);
  }
  fit.chi = pearson_chi_square(fit.observed, prob);
  return fit;
}

double packet_overlap(const MomentumSuperposition& model, std::size_t i,
                      std::size_t j, double t) {
  const auto& prm = model.params();
  const double shift = prm.coupling * (model.momentum(i) - model.momentum(j)) * t;
  return std::exp(-shift * shift / (8.0 * prm.sigma * prm.sigma));
}

namespace {

DispersionSeries dispersion_over(std::span<const Trajectory> trajectories,
                                 const std::vector<std::size_t>& members) {
  if (members.size() < 2) {
    throw InsufficientGroup("dispersion needs at least 2 trajectories, got " +
                            std::to_string(members.size()));
  }
  const Trajectory& first = trajectories[members.front()];
  for (std::size_t m : members) {
    if (trajectories[m].times != first.times) {
      throw std::invalid_argument("group members do not share a time grid");
    }
  }
  DispersionSeries d;
  d.members = members.size();
  d.times = first.times;
  d.delta_q.resize(d.times.size());
  std::vector<double> column(members.size());
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      column[m] = trajectories[members[m]].states[k].q;
    }
    d.delta_q[k] = population_stddev(column);
  }
  return d;
}

}  // namespace

DispersionSeries subensemble_dispersion(std::span<const Trajectory> trajectories,
                                        std::size_t outcome) {
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto& t = trajectories[k];
    if (!t.node_excluded && t.outcome == outcome) members.push_back(k);
  }
  return dispersion_over(trajectories, members);
}

DispersionSeries ensemble_dispersion(std::span<const Trajectory> trajectories) {
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    if (!trajectories[k].node_excluded) members.push_back(k);
  }
  return dispersion_over(trajectories, members);
}

UncertaintyReport uncertainty_product(const DispersionSeries& disp, double dp, double T) {
  UncertaintyReport rep;
  rep.times = disp.times;
  rep.delta_q = disp.delta_q;
  rep.dp = dp;
  rep.T = T;
  rep.product.resize(disp.delta_q.size());
  rep.satisfied = true;
  rep.min_product_after_T = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.product.size(); ++k) {
    rep.product[k] = dp * disp.delta_q[k];
    if (rep.times[k] >= T) {
      rep.min_product_after_T = std::min(rep.min_product_after_T, rep.product[k]);
      if (rep.product[k] < kUncertaintyBound) rep.satisfied = false;
    }
  }
  return rep;
}

}  // namespace bohm
