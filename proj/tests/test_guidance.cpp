#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bohm/errors.hpp"
#include "bohm/guidance.hpp"
#include "oracle_support.hpp"

using namespace bohm;

TEST_CASE("single momentum field is exact") {
  for (double p : {1.0, -2.5, 0.0, 3.0}) {
    const MomentumSuperposition m({p}, {1.0}, {2.0, 0.5, 1.5});
    for (const ConfigPoint pt : {ConfigPoint{0, 0, 0}, ConfigPoint{1.2, -0.3, 0.7},
                                 ConfigPoint{-3, 2, 4}}) {
      const auto v = velocity_momentum(m, {pt.q, pt.r + 0.5 * p * pt.t, pt.t}, 0.0);
      // machine precision: a few ulp of the exact p/m and lambda p
      CHECK(std::abs(v.v_q - p / 2.0) <= 4e-16 * std::abs(p / 2.0));
      CHECK(std::abs(v.v_r - 0.5 * p) <= 4e-16 * std::abs(0.5 * p));
    }
  }
  const MomentumSuperposition unit({1.0}, {1.0}, {1, 1, 1});
  const auto v = velocity_momentum(unit, {0.3, 0.1, 0.2}, 0.0);
  CHECK(v.v_q == 1.0);
  CHECK(v.v_r == 1.0);
  const auto fd = velocity_fd_oracle(unit, {0.3, 0.1, 0.2}, 1e-5, 0.0);
  CHECK(std::abs(fd.v_q - 1.0) < 1e-8);
  CHECK(std::abs(fd.v_r - 1.0) < 1e-8);
}

TEST_CASE("symmetric two-momentum origin") {
  const MomentumSuperposition m({1.0, -1.0}, {1, 1}, {1, 1, 1});
  const auto v = velocity_momentum(m, {0, 0, 0}, 0.0);
  CHECK(std::abs(v.v_q) < 1e-15);
  CHECK(std::abs(v.v_r) < 1e-15);
  const auto fd = velocity_fd_oracle(m, {0, 0, 0}, 1e-5, 0.0);
  CHECK(std::abs(fd.v_q) < 1e-8);
  CHECK(std::abs(fd.v_r) < 1e-8);
}

TEST_CASE("paper point matches the oracle") {
  const MomentumSuperposition m({1.0, -1.0}, {std::sqrt(0.1), std::sqrt(0.9)}, {1, 1, 1});
  const ConfigPoint pt{0.3, 0.2, 0.5};
  const auto v = velocity_momentum(m, pt, 0.0);
  const auto fd = velocity_fd_oracle(m, pt, default_fd_step(m), 0.0);
  CHECK(v.v_q == doctest::Approx(fd.v_q).epsilon(1e-6));
  CHECK(v.v_r == doctest::Approx(fd.v_r).epsilon(1e-6));
  CHECK(v.v_q == doctest::Approx(-0.4360).epsilon(1e-3));
}

TEST_CASE("oracle property sweep over random models") {
  const auto sweep = testing::oracle_sweep(20261015, 500);
  CHECK(sweep.points == 500);
  for (int n = 1; n <= 7; ++n) CHECK(sweep.models_by_size[n] > 0);
  CHECK(sweep.worst < 1e-6);
}

TEST_CASE("node threshold") {
  const MomentumSuperposition m({1.0, -1.0}, {1, 1}, {1, 1, 1});
  const ConfigPoint node{std::numbers::pi / 2, 0, 0};
  CHECK_THROWS_AS(velocity_momentum(m, node, default_node_threshold(m)), NodeError);
  try {
    velocity_momentum(m, node, 1e-3);
  } catch (const NodeError& e) {
    CHECK(e.threshold() == 1e-3);
    CHECK(e.density() < 1e-12);
  }
  CHECK_THROWS_AS(velocity_fd_oracle(m, node, 1e-5, 1e-3), NodeError);
  CHECK(default_node_threshold(m) == doctest::Approx(1e-10 * m.peak_density()));
}

TEST_CASE("parity: negating spectrum and coordinates flips velocities") {
  const MomentumSuperposition m({0.7, -1.3, 2.0}, {0.5, 1.0, 0.8}, {1.3, 0.9, 1.1});
  const MomentumSuperposition neg({-0.7, 1.3, -2.0}, {0.5, 1.0, 0.8}, {1.3, 0.9, 1.1});
  for (const ConfigPoint pt : {ConfigPoint{0.4, 0.2, 0.3}, ConfigPoint{-1.1, 0.9, 1.7}}) {
    const auto a = velocity_momentum(m, pt, 0.0);
    const auto b = velocity_momentum(neg, {-pt.q, -pt.r, pt.t}, 0.0);
    CHECK(b.v_q == doctest::Approx(-a.v_q).epsilon(1e-12));
    CHECK(b.v_r == doctest::Approx(-a.v_r).epsilon(1e-12));
  }
}

TEST_CASE("coordinate device field") {
  CHECK(velocity_coordinate({1, 1, 1}, {2, 5, 0}).v_r == 2.0);
  CHECK(velocity_coordinate({1, 1, 1}, {2, 5, 0}).v_q == 0.0);
  CHECK(velocity_coordinate({1, 0.5, 1}, {-4, 0, 3}).v_r == -2.0);
  // independent of r
  CHECK(velocity_coordinate({1, 0.5, 1}, {-4, 100, 3}).v_r == -2.0);
}

TEST_CASE("quantum potential") {
  const MomentumSuperposition one({1.0}, {1.0}, {1, 1, 1});
  for (const ConfigPoint pt : {ConfigPoint{0, 0, 0}, ConfigPoint{0.5, 1.0, 0.5}}) {
    CHECK(std::abs(quantum_potential(one, pt, default_qp_step(one), 0.0)) < 1e-6);
  }
  const MomentumSuperposition two({1.0, -1.0}, {std::sqrt(0.2), std::sqrt(0.8)}, {1, 1, 1});
  const ConfigPoint pt{0.0, 0.0, 0.5};
  const double h = default_qp_step(two);
  const double q1 = quantum_potential(two, pt, h, 0.0);
  CHECK(std::abs(q1) > 1e-3);
  // Richardson cross-check: 4th-order combination of steps h and h/2.
  const double q2 = quantum_potential(two, pt, h / 2, 0.0);
  const double richardson = (4 * q2 - q1) / 3;
  CHECK(q1 == doctest::Approx(richardson).epsilon(1e-3));
  CHECK_THROWS_AS(
      quantum_potential(MomentumSuperposition({1.0, -1.0}, {1, 1}, {1, 1, 1}),
                        {std::numbers::pi / 2, 0, 0}, h, 1e-6),
      NodeError);
}

TEST_CASE("classical reference velocity") {
  const MomentumSuperposition ctx({-1.0, 1.0}, {std::sqrt(0.2), std::sqrt(0.8)}, {1, 1, 1});
  CHECK(classical_velocity(ctx).v_r == doctest::Approx(0.6).epsilon(1e-14));
  const MomentumSuperposition sym({-1.0, 1.0}, {1, 1}, {1, 1, 1});
  CHECK(std::abs(classical_velocity(sym).v_r) < 1e-15);
  const MomentumSuperposition one({1.7}, {1}, {2, 3, 1});
  CHECK(classical_velocity(one).v_r == doctest::Approx(3 * 1.7));
  CHECK(classical_velocity(one).v_q == doctest::Approx(1.7 / 2));
}
