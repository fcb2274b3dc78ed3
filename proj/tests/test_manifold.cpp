#include "doctest.h"
#include "oracles.hpp"

#include "schwarziso/manifold.hpp"

using namespace schwarziso;

namespace {
const double W0 = std::pow(0.5, 1.5) * 3.4;

double max_gap(const Spectrum& a, const Spectrum& b) {
  // order-free: match each entry to its nearest partner
  double g = 0;
  for (auto x : a) {
    double best = 1e300;
    for (auto y : b) best = std::min(best, std::abs(x - y) / std::max(1.0, std::abs(y)));
    g = std::max(g, best);
  }
  return g;
}
}  // namespace

TEST_SUITE("manifold") {

TEST_CASE("Q and its spectrum") {
  const auto Q = cm_equilibrium(ModelParams{}, 0.0, CMName::Q);
  CHECK(Q.state.v == doctest::Approx(std::sqrt(2 * W0)).epsilon(1e-14));
  CHECK(Q.state.v == doctest::Approx(1.55054).epsilon(1e-5));
  CHECK(Q.radial_eigenvalue == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(Q.classification == CMClass::spiral_source);
  REQUIRE(Q.delta_eigenvalues.size() == 2);
  for (auto z : Q.delta_eigenvalues) {
    CHECK(z.real() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-10));
    CHECK(std::abs(z.imag()) > 1.0);
  }
}

TEST_CASE("all six equilibria: numerical spectra against closed forms") {
  const auto eqs = cm_equilibria(ModelParams{}, 0.0);
  REQUIRE(eqs.size() == 6);
  for (const auto& e : eqs) {
    CAPTURE(to_string(e.name));
    CHECK(max_gap(e.tangent_eigenvalues, e.closed_form) < 1e-8);
    CHECK(max_gap(e.tangent_eigenvalues_explicit_basis, e.tangent_eigenvalues) < 1e-8);
    CHECK(max_gap(e.delta_eigenvalues, e.delta_closed_form) < 1e-8);
    CHECK(std::abs(collision_manifold_residual(ModelParams{}, e.state.v, e.state.theta, e.state.w)) < 1e-14);
    CHECK(e.dim_stable + e.dim_unstable == 3);
  }
  CHECK(eqs[1].classification == CMClass::spiral_sink);
  for (int k = 2; k < 6; ++k) CHECK(eqs[k].classification == CMClass::saddle);
}

TEST_CASE("Q* spectrum is the negative of Q's") {
  const auto Q = cm_equilibrium(ModelParams{}, 0.0, CMName::Q);
  const auto Qs = cm_equilibrium(ModelParams{}, 0.0, CMName::Qstar);
  Spectrum neg;
  for (auto z : Q.tangent_eigenvalues) neg.push_back(-z);
  CHECK(max_gap(Qs.tangent_eigenvalues, neg) < 1e-12);
}

TEST_CASE("closed-form pair at Q from the printed constant") {
  const auto pr = q_closed_form_pair(ModelParams{}, 1.0);
  REQUIRE(pr.size() == 2);
  CHECK(pr[0].real() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
  CHECK(std::abs(pr[0].imag()) == doctest::Approx(23.757).epsilon(1e-4));
}

TEST_CASE("connection condition for the reference parameters") {
  const ModelParams p;
  const auto cc = connection_condition(p);
  CHECK(cc.lhs == doctest::Approx(std::sqrt(W0 / 2)).epsilon(1e-14));
  CHECK(cc.lhs == doctest::Approx(0.775).epsilon(1e-3));
  // rhs from the oracle minimizer of W
  const oracle::P op;
  const double tw = oracle::golden_min([&](double t) { return oracle::W(op, t); }, 0.001, kHalfPi - 0.001);
  CHECK(cc.rhs == doctest::Approx(std::sqrt(2 * oracle::W(op, tw)) / tw).epsilon(1e-6));
  CHECK(cc.rhs == doctest::Approx(1.300475487).epsilon(1e-9));
  CHECK(cc.cond_up_holds);
  CHECK(cc.cond_param_holds);
  CHECK(cc.agree);
}

TEST_CASE("parameter form tends to a tautology as mu grows") {
  ModelParams p;
  p.m = 1e-9;
  const auto cc = connection_condition(p);
  CHECK(cc.param_rhs == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(cc.param_lhs <= 1.0);
}

TEST_CASE("unstable manifold of E- ends in B+(0)") {
  const ModelParams p;
  const auto Em = cm_equilibrium(p, 0.0, CMName::Eminus);
  const auto tr = trace_manifold(p, Em, Branch::w_pos);
  CHECK(tr.outcome == TraceOutcome::B_plus_0);
  CHECK(tr.richardson_agrees);
  CHECK(tr.max_constraint_residual < 1e-8);
  CHECK(gradient_like_audit(tr.trajectory).monotone);
  // mirror image
  const auto Ep = cm_equilibrium(p, 0.0, CMName::Eplus);
  CHECK(trace_manifold(p, Ep, Branch::w_neg).outcome == TraceOutcome::B_minus_0);
}

TEST_CASE("generic rays out of Q end at a binary-collision wall") {
  const ModelParams p;
  TraceOptions o;
  o.richardson = false;
  for (double a : {0.3, 1.9, 4.0}) {
    const auto tr = trace_ray(p, a, o);
    CAPTURE(a);
    CHECK((tr.outcome == TraceOutcome::B_plus_0 || tr.outcome == TraceOutcome::B_minus_0));
  }
}

TEST_CASE("gradient-like audit") {
  Trajectory t;
  t.chart = Chart::collision;
  State q(3);
  q << std::sqrt(2 * W0), 0.0, 0.0;
  t.t = {0.0, 1.0, 2.0};
  t.states = {q, q, q};
  auto a = gradient_like_audit(t);
  CHECK(a.monotone);
  CHECK(a.max_violation == 0.0);
  // v increasing along the samples, as in reversed time
  t.states[1](0) -= 0.1;
  t.states[0](0) -= 0.2;
  a = gradient_like_audit(t);
  CHECK_FALSE(a.monotone);
  CHECK(a.max_violation == doctest::Approx(0.1));
}

TEST_CASE("profile curve") {
  const ModelParams p;
  const auto c = profile_curve(p, 0.0);
  REQUIRE(c.theta.size() > 2);
  CHECK(c.theta.front() == 0.0);
  for (std::size_t i = 1; i < c.v.size(); ++i) CHECK(c.v[i] <= c.v[i - 1]);
  const std::size_t k = c.theta.size() / 2;
  CHECK(profile_at(p, c, c.theta[k]) == doctest::Approx(c.v[k]).epsilon(1e-14));
  // starting on the boundary |v| = sqrt(2 W(0)) is outside the open domain
  CHECK_THROWS_AS(profile_curve(p, 3.0), InvalidInput);
}

TEST_CASE("regime requirements and names") {
  ModelParams heavy{1.0, 1.0, 1.0, 1.0, 5.0, 0.1};
  CHECK_THROWS_AS(cm_equilibria(heavy, 0.0), RegimeError);
  for (CMName n : {CMName::Q, CMName::Qstar, CMName::Eplus, CMName::Eminus, CMName::EplusStar, CMName::EminusStar})
    CHECK(cm_name_from_string(to_string(n)) == n);
}

}
