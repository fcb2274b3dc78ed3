#include "doctest.h"
#include "oracles.hpp"

#include "schwarziso/charts.hpp"
#include "schwarziso/equilibria.hpp"

using namespace schwarziso;

namespace {
// zero of dU_eff/dR on z = 0 for alpha = 5, beta = 3.4, M = 1
double radial_root(double C, double a, double b) {
  return oracle::bisect([&](double R) { return -2 * C * C / std::pow(R, 3) + 5 / (R * R) + 10.2 / std::pow(R, 4); },
                        a, b);
}
}  // namespace

TEST_SUITE("equilibria") {

TEST_CASE("no equilibria below C0") {
  CHECK(relative_equilibria(ModelParams{}, 2.0).empty());
  CHECK(relative_equilibria(ModelParams{}, 0.0).empty());
}

TEST_CASE("one degenerate equilibrium at C0") {
  const ModelParams p;
  const auto eqs = relative_equilibria(p, derive(p).C0);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].R == doctest::Approx(std::sqrt(51.0) / 5).epsilon(1e-10));
  CHECK(eqs[0].kind == EquilibriumKind::degenerate);
  int zeros = 0;
  for (auto z : eqs[0].eigenvalues) zeros += std::abs(z) < 1e-6;
  CHECK(zeros == 2);
}

TEST_CASE("two equilibria above C0") {
  const ModelParams p;
  const auto eqs = relative_equilibria(p, 3.0);
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[0].kind == EquilibriumKind::stable);
  CHECK(eqs[1].kind == EquilibriumKind::unstable);
  CHECK(std::abs(eqs[0].R - radial_root(3.0, 1.5, 5.0)) < 1e-12);
  CHECK(std::abs(eqs[1].R - radial_root(3.0, 0.3, 1.4)) < 1e-12);
  CHECK(eqs[0].R == doctest::Approx(2.89545).epsilon(1e-5));
  CHECK(eqs[1].R == doctest::Approx(0.70455).epsilon(1e-5));
  CHECK(eqs[0].hessian_positive_definite);
  for (auto z : eqs[0].eigenvalues) CHECK(std::abs(z.real()) < 1e-8);
  int real_pairs = 0;
  for (auto z : eqs[1].eigenvalues) real_pairs += std::abs(z.imag()) < 1e-8 && std::abs(z.real()) > 1e-8;
  CHECK(real_pairs == 2);
  for (const auto& e : eqs) {
    CHECK(e.gradient_norm < 1e-9);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(e.eigenvalues[k] - e.closed_form_eigenvalues[k]) < 1e-8);
  }
}

TEST_CASE("energy of the outer equilibrium at C = 3") {
  const auto eqs = relative_equilibria(ModelParams{}, 3.0);
  const double R = eqs[0].R;
  CHECK(eqs[0].h == doctest::Approx(9 / (R * R) - 5 / R - 3.4 / (R * R * R)).epsilon(1e-13));
  CHECK(eqs[0].h == doctest::Approx(-0.793).epsilon(1e-3));
}

TEST_CASE("two routes to the linearization agree") {
  const ModelParams p;
  for (double C : {2.8, 3.0, 4.5}) {
    for (const auto& e : relative_equilibria(p, C)) {
      const Eigen::Matrix4d a = linearization(p, C, e.R), b = linearization_from_field(p, C, e.R);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("energy-momentum diagram") {
  const ModelParams p;
  const auto pts = em_diagram(p, 0.2, 20.0, 2000);
  REQUIRE(pts.size() == 2000);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].C <= pts[i].C);
  for (const auto& q : pts) CHECK(q.h == doctest::Approx(equilibrium_energy(p, q.C, q.R)).epsilon(1e-12));
  const auto rep = em_self_intersections(pts);
  CHECK(rep.violations == 0);
  CHECK_THROWS_AS(em_diagram(p, -1.0, 2.0, 10), InvalidInput);
}

}

TEST_SUITE("equilibria") {

TEST_CASE("imaginary pair at the inner equilibrium: printed closed form is 4x too large") {
  const ModelParams p;
  for (double C : {2.8, 3.0, 4.0}) {
    const auto eqs = relative_equilibria(p, C);
    REQUIRE(eqs.size() == 2);
    const auto& e = eqs[1];
    const double Uzz = eval_effective(p, C, e.R, 0.0).hess[1][1];
    const double derived = std::sqrt(kz_factor(p) * Uzz);
    const double printed = 4 * derived;
    double im = 0;
    for (auto z : e.eigenvalues) im = std::max(im, std::abs(z.imag()));
    CHECK(im == doctest::Approx(derived).epsilon(1e-8));
    CHECK(im != doctest::Approx(printed).epsilon(0.5));
    double im_cf = 0;
    for (auto z : e.closed_form_eigenvalues) im_cf = std::max(im_cf, std::abs(z.imag()));
    CHECK(im_cf == doctest::Approx(derived).epsilon(1e-10));
  }
}

}
