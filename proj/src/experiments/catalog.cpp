#include <stdexcept>

#include "bohm/experiments.hpp"
#include "common.hpp"

namespace bohm {

namespace {

using P = ParamSpec;
using I = std::int64_t;
using U = std::uint64_t;

std::vector<ParamSpec> with_ensemble_params(std::vector<ParamSpec> specs) {
  for (auto& s : detail::integrator_params()) specs.push_back(std::move(s));
  specs.push_back(detail::threads_param());
  specs.push_back(detail::output_spacing_param());
  return specs;
}

void set_default(std::vector<ParamSpec>& specs, const std::string& key, ParamValue value) {
  for (auto& s : specs) {
    if (s.key == key) {
      s.default_value = std::move(value);
      return;
    }
  }
  throw std::logic_error("no parameter " + key);
}

std::vector<ExperimentInfo> build_catalog() {
  std::vector<ExperimentInfo> out;

  out.push_back({"exp_momentum_basic",
                 "needle velocity v_r(t) under a two-momentum measurement p = (1, -1)",
                 "Fig. 1",
                 with_ensemble_params({
                     P{"variant", ParamType::text, std::string("a"),
                       "a: A^2 = (0.5, 0.5), m = 1; b: (0.1, 0.9), m = 1; c: (0.1, 0.9), m = 0.01"},
                     P{"m", ParamType::real, -1.0, "target mass (<= 0: variant default)"},
                     P{"lambda", ParamType::real, 1.0, "coupling constant"},
                     P{"sigma", ParamType::real, 1.0, "device packet width"},
                     P{"samples", ParamType::integer, I{10000}, "Born-sampled trajectories"},
                     P{"bundle", ParamType::integer, I{200}, "plotted trajectories"},
                     P{"seed", ParamType::seed, U{1}, "RNG seed"},
                     P{"t_end", ParamType::real, 5.0, "end time (<= 0: 2 T)"},
                     P{"dt", ParamType::real, 0.0, "base step (<= 0: automatic)"},
                 }),
                 [](const ParamSet& p) { return exp_momentum_basic(p); }});

  out.push_back({"exp_born",
                 "outcome statistics of a seven-momentum measurement vs A_i^2",
                 "Fig. 2",
                 with_ensemble_params({
                     P{"amplitudes", ParamType::text, std::string("9,3,8,7,2,4,3"),
                       "unnormalized amplitudes, lowest momentum first"},
                     P{"spacing", ParamType::real, 1.0, "momentum spacing (centered on 0)"},
                     P{"m", ParamType::real, 1.0, "target mass"},
                     P{"lambda", ParamType::real, 1.0, "coupling constant"},
                     P{"sigma", ParamType::real, 1.0, "device packet width"},
                     P{"samples", ParamType::integer, I{10000}, "Born-sampled trajectories"},
                     P{"control_samples", ParamType::integer, I{200},
                       "single-momentum control trajectories (0 disables)"},
                     P{"seed", ParamType::seed, U{2}, "RNG seed"},
                     P{"t_end", ParamType::real, 0.0, "end time (<= 0: 2 T)"},
                     P{"dt", ParamType::real, 0.0, "base step (<= 0: automatic)"},
                 }),
                 [](const ParamSet& p) { return exp_born(p); }});

  out.push_back({"exp_contextuality",
                 "outcome vs initial needle position at fixed q0, with the classical line",
                 "Fig. 3",
                 with_ensemble_params({
                     P{"q0", ParamType::real, 0.0, "fixed initial particle position"},
                     P{"prob_minus", ParamType::real, 0.2, "A^2 of p = -1 (p = +1 gets the rest)"},
                     P{"m", ParamType::real, 1.0, "target mass"},
                     P{"lambda", ParamType::real, 1.0, "coupling constant"},
                     P{"sigma", ParamType::real, 1.0, "device packet width"},
                     P{"sweep", ParamType::integer, I{41}, "r0 quantiles of the device packet"},
                     P{"samples", ParamType::integer, I{2000},
                       "Born-weighted r0 samples at q0 (0 disables)"},
                     P{"seed", ParamType::seed, U{3}, "RNG seed"},
                     P{"t_end", ParamType::real, 0.0, "end time (<= 0: 2 T)"},
                     P{"dt", ParamType::real, 0.0, "base step (<= 0: automatic)"},
                 }),
                 [](const ParamSet& p) { return exp_contextuality(p); }});

  out.push_back({"exp_coordinate",
                 "projective coordinate measurement: linear needle law and readout",
                 "coordinate device (projective limit)",
                 {
                     P{"lambda", ParamType::real, 0.01, "coupling constant"},
                     P{"T", ParamType::real, 1.0, "interaction time (needs T lambda < 0.1)"},
                     P{"m", ParamType::real, 1.0, "target mass"},
                     P{"sigma", ParamType::real, 1.0, "device packet width"},
                     P{"samples", ParamType::integer, I{1000}, "ensemble size"},
                     P{"q_spread", ParamType::real, 2.0, "std. deviation of the target q0"},
                     P{"steps", ParamType::integer, I{100}, "RK4 steps over [0, T]"},
                     P{"seed", ParamType::seed, U{4}, "RNG seed"},
                 },
                 [](const ParamSet& p) { return exp_coordinate(p); }});

  auto seq = with_ensemble_params({
      P{"N", ParamType::integer, I{5}, "half width: momenta -N dp .. N dp"},
      P{"dp", ParamType::real, 1.0, "momentum spacing / resolution"},
      P{"m", ParamType::real, 1000.0, "target mass"},
      P{"lambda", ParamType::real, 1.0, "coupling constant"},
      P{"sigma", ParamType::real, 1.0, "device packet width"},
      P{"samples", ParamType::integer, I{3000}, "Born-sampled trajectories"},
      P{"group_floor", ParamType::integer, I{30}, "minimum outcome-group size"},
      P{"bundle", ParamType::integer, I{200}, "plotted trajectories"},
      P{"seed", ParamType::seed, U{5}, "RNG seed"},
      P{"t_end", ParamType::real, 0.0, "end time (<= 0: 2 T)"},
      P{"dt", ParamType::real, 0.0, "base step (<= 0: automatic)"},
      P{"reverse.lambda", ParamType::real, 0.01, "coordinate device of the reverse-order demo"},
      P{"reverse.T", ParamType::real, 1.0, "interaction time of the reverse-order demo"},
  });
  set_default(seq, "integrator.record_stride", I{5});
  out.push_back({"exp_sequential_uncertainty",
                 "coordinate then momentum measurement: uncertainty-product restoration",
                 "Figs. 4–6", std::move(seq),
                 [](const ParamSet& p) { return exp_sequential_uncertainty(p); }});

  out.push_back({"exp_decoherence",
                 "decoherence time over a (sigma, lambda, dp) grid and ensemble lock-in times",
                 "decoherence-time estimate T = 6 sigma / (lambda dp)",
                 with_ensemble_params({
                     P{"sigmas", ParamType::text, std::string("0.5,1,2"), "device widths"},
                     P{"lambdas", ParamType::text, std::string("0.5,1,2"), "couplings"},
                     P{"dps", ParamType::text, std::string("1,2,4"), "momentum gaps"},
                     P{"curve_points", ParamType::integer, I{101}, "samples per overlap curve"},
                     P{"lock_samples", ParamType::integer, I{2000},
                       "Fig. 1(a) trajectories for lock-in times (0 disables)"},
                     P{"lock.m", ParamType::real, 1.0, "target mass of the lock-in ensemble"},
                     P{"seed", ParamType::seed, U{6}, "RNG seed"},
                     P{"t_end", ParamType::real, 0.0, "lock-in end time (<= 0: 2 T)"},
                     P{"dt", ParamType::real, 0.0, "base step (<= 0: automatic)"},
                 }),
                 [](const ParamSet& p) { return exp_decoherence(p); }});
  return out;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = build_catalog();
  return catalog;
}

const ExperimentInfo* find_experiment(std::string_view name) {
  for (const auto& e : experiment_catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ExperimentResult run_named(std::string_view name,
                           const std::map<std::string, std::string>& overrides) {
  const auto* info = find_experiment(name);
  if (!info) throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
  ParamSet params(info->params);
  for (const auto& [key, text] : overrides) {
    const ParamSpec* spec = nullptr;
    for (const auto& s : info->params) {
      if (s.key == key) spec = &s;
    }
    if (!spec) throw std::invalid_argument("unknown parameter '" + key + "'");
    try {
      params.set(key, parse_value(spec->type, text));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("parameter '" + key + "' expects " +
                                  std::string(type_name(spec->type)) + ", got '" + text + "'");
    }
  }
  return info->run(params);
}

}  // namespace bohm
