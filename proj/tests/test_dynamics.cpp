#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bohm/dynamics.hpp"
#include "bohm/errors.hpp"

using namespace bohm;

namespace {

IntegratorConfig config(double dt, double t_end) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.stationary_window = 0.1 * t_end;
  return c;
}

Trajectory constant_velocity_trajectory(double v_r, double t_end, double dt) {
  Trajectory tr;
  for (int k = 0; k * dt <= t_end + 1e-12; ++k) {
    tr.times.push_back(k * dt);
    tr.states.push_back({0.0, v_r * k * dt});
    tr.velocities.push_back({0.0, v_r});
  }
  return tr;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(IntegratorConfig{}.validate());
  auto c = config(0.01, 1.0);
  c.dt = 0;
  CHECK_THROWS(c.validate());
  c = config(0.01, 1.0);
  c.record_stride = 0;
  CHECK_THROWS(c.validate());
  c = config(0.01, 1.0);
  c.stationary_window = 2.0;
  CHECK_THROWS(c.validate());
  c = config(2.0, 1.0);
  CHECK_THROWS(c.validate());
}

TEST_CASE("constant field is integrated exactly") {
  const VelocityField field = [](const ConfigPoint&) { return VelocityPair{1.0, 2.0}; };
  const auto tr = integrate_trajectory(field, {0, 0, 0}, config(0.01, 1.0));
  CHECK(std::abs(tr.states.back().q - 1.0) < 1e-12);
  CHECK(std::abs(tr.states.back().r - 2.0) < 1e-12);
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.size() == 101);
  CHECK_FALSE(tr.node_excluded);
}

TEST_CASE("single-momentum field moves beables on straight lines") {
  const MomentumSuperposition m({1.0}, {1.0}, {1, 1, 1});
  const auto cfg = config(0.01, 2.0);
  const auto tr = integrate_trajectory(momentum_field(m, cfg), {0.3, -0.4, 0}, cfg);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(tr.states[k].q == doctest::Approx(0.3 + tr.times[k]).epsilon(1e-12));
    CHECK(tr.states[k].r == doctest::Approx(-0.4 + tr.times[k]).epsilon(1e-12));
  }
}

TEST_CASE("record stride keeps every k-th step and the last") {
  const VelocityField field = [](const ConfigPoint&) { return VelocityPair{1.0, 0.0}; };
  auto cfg = config(0.1, 1.05);
  cfg.record_stride = 3;
  const auto tr = integrate_trajectory(field, {0, 0, 0}, cfg);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(1.05).epsilon(1e-15));
  CHECK(tr.times[1] == doctest::Approx(0.3));
  CHECK(tr.states.back().q == doctest::Approx(1.05).epsilon(1e-12));
}

TEST_CASE("RK4 convergence order") {
  const MomentumSuperposition m({1.0, -1.0}, {std::sqrt(0.3), std::sqrt(0.7)}, {1, 1, 1});
  const BeableState start{0.2, 0.1, 0.0};
  const auto run = [&](double dt) {
    const auto cfg = config(dt, 1.0);
    return integrate_trajectory(momentum_field(m, cfg), start, cfg).states.back();
  };
  const auto a = run(0.04), b = run(0.02), c = run(0.01);
  const double e1 = std::hypot(a.q - b.q, a.r - b.r);
  const double e2 = std::hypot(b.q - c.q, b.r - c.r);
  REQUIRE(e2 > 0.0);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
}

TEST_CASE("start on a node is rejected") {
  const MomentumSuperposition m({1.0, -1.0}, {1, 1}, {1, 1, 1});
  const auto cfg = config(0.01, 1.0);
  CHECK_THROWS_AS(
      integrate_trajectory(momentum_field(m, cfg), {std::numbers::pi / 2, 0, 0}, cfg),
      InvalidStart);
}

TEST_CASE("node encountered mid-run truncates and flags") {
  // A field that is undefined for q > 0.5 everywhere.
  const VelocityField field = [](const ConfigPoint& p) {
    if (p.q > 0.5) throw NodeError(0.0, 1.0);
    return VelocityPair{1.0, 0.0};
  };
  auto cfg = config(0.1, 1.0);
  cfg.max_substep_halvings = 3;
  const auto tr = integrate_trajectory(field, {0, 0, 0}, cfg);
  CHECK(tr.node_excluded);
  CHECK(tr.times.back() < 0.5 + 1e-12);
  CHECK(tr.states.back().q <= 0.5);
  CHECK_FALSE(tr.outcome.has_value());
}

TEST_CASE("outcome detection") {
  const MomentumSuperposition m({-1.0, 0.0, 1.0}, {1, 1, 1}, {1, 1, 1});
  const auto cfg = config(0.01, 2.0);
  CHECK(detect_outcome(constant_velocity_trajectory(1.0, 2.0, 0.01), m, cfg) == 2u);
  CHECK(detect_outcome(constant_velocity_trajectory(-1.0, 2.0, 0.01), m, cfg) == 0u);
  CHECK_FALSE(detect_outcome(constant_velocity_trajectory(0.5, 2.0, 0.01), m, cfg));
  auto excluded = constant_velocity_trajectory(1.0, 2.0, 0.01);
  excluded.node_excluded = true;
  CHECK_FALSE(detect_outcome(excluded, m, cfg));

  auto late = constant_velocity_trajectory(1.0, 2.0, 0.01);
  for (std::size_t k = 0; k < late.size(); ++k) {
    if (late.times[k] < 0.75) late.velocities[k].v_r = 0.3;
  }
  const auto lt = lock_time(late, m, cfg, 2);
  REQUIRE(lt);
  CHECK(*lt == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("measurement time and default steps") {
  const MomentumSuperposition m({1.0, -1.0}, {1, 1}, {1, 1, 1});
  CHECK(measurement_time(m) == 3.0);
  CHECK(default_time_step(m) == doctest::Approx(0.01));
  const auto cfg = default_integrator_config(m);
  CHECK(cfg.t_end == 6.0);
  CHECK(cfg.stationary_window == doctest::Approx(0.6));
  const MomentumSuperposition light({1.0, -1.0}, {1, 1}, {0.01, 1, 1});
  CHECK(default_time_step(light) == doctest::Approx(0.001));
  const MomentumSuperposition one({1.0}, {1}, {1, 1, 1});
  CHECK(std::isinf(measurement_time(one)));
  CHECK(default_integrator_config(one).t_end == 1.0);
}

TEST_CASE("decoherence time") {
  CHECK(decoherence_time(1, 1, -1, 1) == 3.0);
  CHECK(decoherence_time(2, 1, -1, 1) == 6.0);
  CHECK(decoherence_time(1, 3, -1, 1) == 1.0);
  CHECK(decoherence_time(1, 1, 1, -1) == 3.0);
  CHECK(decoherence_time(1, 0.01, 0, 10) == doctest::Approx(60.0));
  CHECK_THROWS_AS(decoherence_time(1, 1, 2, 2), DegenerateValues);
  CHECK_THROWS_AS(decoherence_time(0, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(decoherence_time(1, -1, 0, 1), std::invalid_argument);
}

TEST_CASE("projective validity") {
  const auto ok = projective_validity(0.05, 1);
  CHECK(ok.ratio == 0.05);
  CHECK(ok.valid);
  const auto bad = projective_validity(3, 1);
  CHECK(bad.ratio == 3);
  CHECK_FALSE(bad.valid);
  const auto composed = projective_validity(decoherence_time(1, 0.01, 0, 10), 0.01);
  CHECK(composed.ratio == doctest::Approx(0.6));
  CHECK_FALSE(composed.valid);
}
