#include "doctest.h"
#include "oracles.hpp"

#include "schwarziso/charts.hpp"

using namespace schwarziso;

TEST_SUITE("charts") {

TEST_CASE("symmetry plane maps to theta = 0, u = 0") {
  const ModelParams p;
  const auto s = cyl_to_mcgehee(p, CylState{1.3, 0.0, 0.4, 0.0});
  CHECK(s.theta == 0.0);
  CHECK(s.u == 0.0);
}

TEST_CASE("hand-composed McGehee image") {
  const ModelParams p;
  const auto s = cyl_to_mcgehee(p, CylState{1.0, 0.0, -1.0, 0.0});
  CHECK(s.r == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(s.v == doctest::Approx(-std::pow(0.5, 0.75) * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s.v == doctest::Approx(-0.8409).epsilon(1e-4));
}

TEST_CASE("round trips") {
  const ModelParams p;
  auto g = oracle::rng(4);
  for (int i = 0; i < 1000; ++i) {
    const CylState c{oracle::uni(g, 0.05, 10), oracle::uni(g, -5, 5), oracle::uni(g, -3, 3), oracle::uni(g, -3, 3)};
    const auto m = cyl_to_mcgehee(p, c);
    const auto c2 = mcgehee_to_cyl(p, m);
    CHECK(oracle::rel(c2.R, c.R) < 1e-12);
    CHECK(oracle::rel(c2.z, c.z) < 1e-12);
    CHECK(oracle::rel(c2.P_R, c.P_R) < 1e-12);
    CHECK(oracle::rel(c2.P_z, c.P_z) < 1e-12);
    const auto m2 = reg_to_mcgehee(p, mcgehee_to_reg(p, m));
    CHECK(oracle::rel(m2.u, m.u) < 1e-12);
    CHECK(oracle::rel(m2.theta, m.theta) < 1e-12);
  }
}

TEST_CASE("w at theta = 0 and u = 0") {
  const ModelParams p;
  const double W0 = std::pow(0.5, 1.5) * 3.4;
  CHECK(mcgehee_to_reg(p, McGeheeState{0.3, 0.1, 0.0, 0.7}).w == doctest::Approx(0.7 / std::sqrt(W0)).epsilon(1e-14));
  CHECK(mcgehee_to_reg(p, McGeheeState{0.3, 0.1, 1.1, 0.0}).w == 0.0);
  CHECK_THROWS_AS(reg_to_mcgehee(p, RegState{0.3, 0.1, kHalfPi, 0.0}), InvalidInput);
}

TEST_CASE("energy residuals across charts") {
  const ModelParams p;
  const double C = 1.7;
  auto g = oracle::rng(5);
  for (int i = 0; i < 200; ++i) {
    const CylState c{oracle::uni(g, 0.2, 4), oracle::uni(g, -2, 2), oracle::uni(g, -2, 2), oracle::uni(g, -2, 2)};
    const double h = reduced_hamiltonian(p, C, c);
    CHECK(energy_residual(p, C, h, c) == 0.0);
    const auto m = cyl_to_mcgehee(p, c);
    const auto r = mcgehee_to_reg(p, m);
    const double scale = std::max(1.0, std::abs(h) * std::pow(m.r, 3));
    CHECK(std::abs(energy_residual(p, C, h, m)) < 1e-10 * scale);
    CHECK(std::abs(energy_residual(p, C, h, r)) < 1e-10 * scale);
  }
}

TEST_CASE("collision manifold relation at Q") {
  const ModelParams p;
  const double W0 = std::pow(0.5, 1.5) * 3.4;
  CHECK(std::abs(collision_manifold_residual(p, std::sqrt(2 * W0), 0.0, 0.0)) < 1e-15);
  // at r = 0 the reg relation is U times the collision relation, whatever C and h
  const RegState s{0.0, 0.4, 0.3, 0.5};
  const double U = eval_angular(p, 0.3).U;
  CHECK(energy_residual(p, 2.0, -1.0, s) ==
        doctest::Approx(U * collision_manifold_residual(p, 0.4, 0.3, 0.5)).epsilon(1e-14));
}

TEST_CASE("phase rate") {
  const ModelParams p;
  CHECK(phi_rate(p, 0.0, 2.0) == 0.0);
  CHECK(phi_rate(p, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(phi_rate(p, 1.0, 0.0), InvalidInput);
}

}
