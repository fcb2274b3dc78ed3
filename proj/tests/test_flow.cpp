#include "doctest.h"
#include "oracles.hpp"

#include "schwarziso/flow.hpp"
#include "schwarziso/orbits.hpp"

using namespace schwarziso;

namespace {
const double W0 = std::pow(0.5, 1.5) * 3.4;
const double V0 = std::sqrt(0.5) * 5;

State vec(std::initializer_list<double> xs) {
  State s(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) s(i++) = x;
  return s;
}
}  // namespace

TEST_SUITE("flow") {

TEST_CASE("Q is an equilibrium of the collision field") {
  const VectorField f(Chart::collision, ModelParams{}, 0.0, 0.0);
  const State d = f.evaluate(vec({std::sqrt(2 * W0), 0.0, 0.0}));
  CHECK(d.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("v' on the collision manifold") {
  const ModelParams p;
  const VectorField f(Chart::collision, p, 0.0, 0.0);
  const State d = f.evaluate(vec({0.0, 0.0, std::sqrt(2.0)}));
  CHECK(d(0) == doctest::Approx(-std::sqrt(W0)).epsilon(1e-14));
  CHECK(d(0) == doctest::Approx(-1.0964).epsilon(1e-4));
  // the substituted form -sqrt(U) w^2 / (2 cos^3) at generic points on the manifold
  auto g = oracle::rng(8);
  for (int i = 0; i < 20; ++i) {
    const double th = oracle::uni(g, -1.2, 1.2), c3 = std::pow(std::cos(th), 3);
    const double w = oracle::uni(g, -1, 1) * std::sqrt(2 * c3);
    const double U = eval_angular(p, th).U;
    const double v = std::sqrt((2 * c3 - w * w) * U / (c3 * c3));
    const State y = vec({v, th, w});
    CHECK(std::abs(f.residual(y)) < 1e-13);
    CHECK(f.evaluate(y)(0) == doctest::Approx(-std::sqrt(U) * w * w / (2 * c3)).epsilon(1e-10));
  }
}

TEST_CASE("profile slope at the origin") {
  const VectorField f(Chart::profile, ModelParams{}, 0.0, 0.0);
  const double s = f.evaluate(vec({0.0}), 0.0)(0);
  CHECK(s == doctest::Approx(-std::sqrt(W0 / 2)).epsilon(1e-14));
  CHECK(s == doctest::Approx(-0.77527).epsilon(1e-5));
}

TEST_CASE("automatic-differentiation Jacobians match finite differences") {
  const ModelParams p;
  auto g = oracle::rng(9);
  for (Chart ch : {Chart::reduced, Chart::mcgehee, Chart::regularized, Chart::collision, Chart::planar}) {
    const VectorField f(ch, p, 1.3, -0.7);
    State y(f.dim());
    for (int k = 0; k < f.dim(); ++k) y(k) = oracle::uni(g, 0.2, 0.9);
    const Eigen::MatrixXd J = f.jacobian(y);
    for (int k = 0; k < f.dim(); ++k) {
      for (int i = 0; i < f.dim(); ++i) {
        const double fd = oracle::diff(
            [&](double x) {
              State z = y;
              z(k) = x;
              return f.evaluate(z)(i);
            },
            y(k), 1e-4);
        CHECK(std::abs(J(i, k) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("planar infall from the turning point") {
  const ModelParams p;
  const double C = 2.1723, h = -1.0;
  const double r0 = oracle::bisect(
      [&](double r) { return 2 * h * r * r * r + 2 * V0 * r * r - C * C * r + 2 * W0; }, 2.0, 4.0);
  CHECK(r0 == doctest::Approx(2.853).epsilon(2e-3));
  const VectorField f(Chart::planar, p, C, h);
  // the turning point is a tangency; start a hair inside
  State y0 = vec({r0, -1e-9});
  IntegratorOptions io;
  double prev = r0;
  bool monotone = true;
  io.observer = [&](double, const State& y) {
    monotone = monotone && y(0) <= prev;
    prev = y(0);
  };
  const auto tr = integrate(f, y0, 0.0, 1e3, io, {event_r_below(1e-8)});
  CHECK(tr.status == IntegrationStatus::event);
  CHECK(monotone);
  CHECK(tr.back()(1) == doctest::Approx(-std::sqrt(2 * W0)).epsilon(1e-6));
  CHECK(std::abs(tr.back()(0) - 1e-8) < 1e-16);
}

TEST_CASE("reduced chart conserves energy") {
  const ModelParams p;
  const double C = 3.0;
  const VectorField f(Chart::reduced, p, C, 0.0);
  const State y0 = vec({2.6, 0.05, 0.0, 0.02});
  const auto tr = integrate(f, y0, 0.0, 200.0);
  REQUIRE(tr.status == IntegrationStatus::completed);
  const double h = reduced_hamiltonian(p, C, CylState{y0(0), y0(1), y0(2), y0(3)});
  const State& y = tr.back();
  CHECK(oracle::rel(reduced_hamiltonian(p, C, CylState{y(0), y(1), y(2), y(3)}), h) < 1e-8);
}

TEST_CASE("backwards integration returns to the start") {
  const VectorField f(Chart::mcgehee, ModelParams{}, 1.0, 0.0);
  const State y0 = vec({0.8, 0.1, 0.2, 0.05});
  const auto fw = integrate(f, y0, 0.0, 2.0);
  const auto bw = integrate(f, fw.back(), 2.0, 0.0);
  CHECK((bw.back() - y0).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(bw.t_end() == doctest::Approx(0.0));
}

TEST_CASE("step budget and bad input") {
  const VectorField f(Chart::reduced, ModelParams{}, 3.0, 0.0);
  IntegratorOptions io;
  io.max_steps = 10;
  const auto tr = integrate(f, vec({2.6, 0.05, 0.0, 0.02}), 0.0, 1e4, io);
  CHECK(tr.status == IntegrationStatus::budget_exhausted);
  CHECK(tr.stats.accepted == 10);
  CHECK_THROWS_AS((void)f.evaluate(vec({1.0, 2.0})), InvalidInput);
  const VectorField col(Chart::collision, ModelParams{}, 0.0, 0.0);
  CHECK_THROWS_AS(col.check_initial(vec({5.0, 0.0, 0.0})), InvalidInput);
}

TEST_CASE("chart names") {
  for (Chart c : {Chart::reduced, Chart::mcgehee, Chart::regularized, Chart::collision, Chart::planar, Chart::profile})
    CHECK(chart_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(chart_from_string("polar"), InvalidInput);
  CHECK(chart_columns(Chart::regularized, true).back() == "phi");
}

TEST_CASE("projection restores the energy relation") {
  const VectorField f(Chart::regularized, ModelParams{}, 1.0, -0.5);
  State y = vec({0.3, -0.4, 0.2, 0.1});
  f.project(y);
  CHECK(std::abs(f.residual(y)) < 1e-13);
}

}

TEST_SUITE("flow") {

// w' exactly as printed for the regularized system, without the chain-rule
// correction.  Kept only to show it does not preserve the energy relation.
namespace {
double printed_w_prime(const Model& mdl, double C, const State& y) {
  const double r = y(0), v = y(1), th = y(2), w = y(3);
  const double c = std::cos(th), s = std::sin(th), U = mdl.U(th);
  const double c3 = c * c * c;
  return 0.5 * v * w * c3 / std::sqrt(U) + r * r * mdl.dV_cos6(th) / U + (mdl.dU(th) / U) * (c3 - 0.5 * w * w) +
         3 * s * c * c - s * c3 * C * C * r / U;
}
}  // namespace

TEST_CASE("regularized field preserves the energy relation, the printed w' does not") {
  const ModelParams p;
  const double C = 1.4, h = -0.6;
  const VectorField f(Chart::regularized, p, C, h);
  auto g = oracle::rng(31);
  double worst_lib = 0, worst_printed = 0;
  for (int i = 0; i < 100;) {
    const double r = oracle::uni(g, 0.05, 0.6), v = oracle::uni(g, -2, 2), th = oracle::uni(g, -1.3, 1.3);
    const double w2 = w_squared_from_energy(p, C, h, r, v, th);
    if (w2 < 0) continue;
    ++i;
    const State y = vec({r, v, th, (i % 2 ? 1 : -1) * std::sqrt(w2)});
    REQUIRE(std::abs(f.residual(y)) < 1e-12);
    const Eigen::VectorXd grad = f.residual_gradient(y);
    State dy = f.evaluate(y);
    worst_lib = std::max(worst_lib, std::abs(grad.dot(dy)) / std::max(1.0, grad.norm() * dy.norm()));
    dy(3) = printed_w_prime(f.model(), C, y);
    worst_printed = std::max(worst_printed, std::abs(grad.dot(dy)) / std::max(1.0, grad.norm() * dy.norm()));
  }
  CHECK(worst_lib < 1e-12);
  CHECK(worst_printed > 1e-4);
}

TEST_CASE("McGehee relation obeys d(relation)/dtau = 3 v relation") {
  const ModelParams p;
  const VectorField f(Chart::mcgehee, p, 1.1, -0.4);
  auto g = oracle::rng(32);
  for (int i = 0; i < 50; ++i) {
    // arbitrary states, on or off the level set
    const State y = vec({oracle::uni(g, 0.05, 2), oracle::uni(g, -2, 2), oracle::uni(g, -1.3, 1.3), oracle::uni(g, -1, 1)});
    const double lhs = f.residual_gradient(y).dot(f.evaluate(y));
    const double rhs = 3 * y(1) * f.residual(y);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
  }
}

}
