#include "doctest.h"
#include "oracles.hpp"

#include "schwarziso/orbits.hpp"

using namespace schwarziso;

namespace {
const double W0 = std::pow(0.5, 1.5) * 3.4;
const double V0 = std::sqrt(0.5) * 5;
const double C0 = std::pow(51.0, 0.25);

double radicand(double C, double h, double r) { return 2 * h * r * r * r + 2 * V0 * r * r - C * C * r + 2 * W0; }
}  // namespace

TEST_SUITE("orbits") {

TEST_CASE("planar level curve") {
  const ModelParams p;
  const double C = C0 - 0.5;
  const auto s = planar_curve(p, C, 0.0, 1.0, 2.0, 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0].valid);
  CHECK(s[0].v == doctest::Approx(2.1809).epsilon(1e-4));
  // the worked radicand uses the rounded C = 2.1723
  CHECK(planar_curve(p, 2.1723, 0.0, 1.0, 2.0, 2)[0].radicand ==
        doctest::Approx(7.07107 - 4.71889 + 2.40417).epsilon(1e-5));
  // near r = 0 every curve funnels into +-sqrt(2 W(0))
  for (double h : {1.0, 0.0, -1.0, -5.0})
    CHECK(planar_curve(p, C, h, 1e-10, 1.0, 2)[0].v == doctest::Approx(std::sqrt(2 * W0)).epsilon(1e-8));
  const auto logs = planar_curve(p, C, -1.0, 1e-3, 10.0, 5, true);
  CHECK(logs[1].r == doctest::Approx(1e-2));
  CHECK_FALSE(logs.back().valid);
  CHECK(std::isnan(logs.back().v));
}

TEST_CASE("turning points against bisection") {
  const ModelParams p;
  const double C = C0 - 0.5;
  for (double h : {-0.1, -1.0, -5.0}) {
    const auto tp = planar_turning_points(p, C, h);
    REQUIRE(tp.size() == 1);
    const double r = oracle::bisect([&](double x) { return radicand(C, h, x); }, 1e-3, 100.0);
    CHECK(tp[0] == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK(planar_turning_points(p, C, 1.0).empty());
}

TEST_CASE("planar equilibria") {
  const ModelParams p;
  CHECK(planar_equilibria(p, 2.0).equilibria.empty());
  const auto r3 = planar_equilibria(p, 3.0);
  REQUIRE(r3.equilibria.size() == 2);
  CHECK(r3.equilibria[0].type == PlanarPointType::saddle);
  CHECK(r3.equilibria[1].type == PlanarPointType::center);
  for (const auto& e : r3.equilibria) {
    // a rest point has v = 0 and r' = 0, v' = 0: 1.5 v^2 + C^2 r - V0 r^2 - 3 W0 = 0
    CHECK(std::abs(9.0 * e.r - V0 * e.r * e.r - 3 * W0) < 1e-12);
    CHECK(std::abs(radicand(3.0, e.h, e.r)) < 1e-10);
  }
  CHECK(std::abs(r3.equilibria[0].eigenvalues[0].imag()) < 1e-12);
  CHECK(std::abs(r3.equilibria[1].eigenvalues[0].real()) < 1e-12);
  const auto rc = planar_equilibria(p, C0);
  REQUIRE(rc.equilibria.size() == 1);
  CHECK(rc.equilibria[0].type == PlanarPointType::degenerate);
  CHECK(rc.equilibria[0].r == doctest::Approx(C0 * C0 / (2 * V0)).epsilon(1e-10));
  CHECK(planar_equilibria(p, 2.0, -1.0).planar_case == PlanarCase::A_a);
  CHECK(planar_equilibria(p, 2.0, 0.0).planar_case == PlanarCase::A_b);
  CHECK(planar_equilibria(p, C0, -1.0).planar_case == PlanarCase::B_case);
  CHECK(planar_equilibria(p, 3.0, -1.0).planar_case == PlanarCase::C_a);
}

TEST_CASE("homographic candidates") {
  const ModelParams p;
  const auto d = derive(p);
  auto v0 = homographic_admissible(p, 1.0, 0.0);
  CHECK(v0.admissible);
  CHECK(v0.hcase == HomographicCase::planar);
  auto vv = homographic_admissible(p, 1.0, *d.theta_v);
  CHECK_FALSE(vv.admissible);
  CHECK(vv.hcase == HomographicCase::theta_v_Cnonzero);
  CHECK(vv.r0_squared < 0);
  auto vz = homographic_admissible(p, 0.0, *d.theta_v);
  CHECK_FALSE(vz.admissible);
  CHECK(vz.dW_at_theta != 0.0);
  auto vg = homographic_admissible(p, 1.0, 0.2);
  CHECK_FALSE(vg.admissible);
  CHECK(vg.hcase == HomographicCase::generic_theta);
  CHECK((std::abs(vg.mismatch_V) > 1e-6 || std::abs(vg.mismatch_W) > 1e-6));
}

TEST_CASE("sink predicate") {
  const ModelParams p;
  const double C = 2.1723;
  CHECK(sink_radius(p, C) == doctest::Approx(0.5777).epsilon(1e-4));
  CHECK(sink_predicate(p, C, RegState{0.5, -0.1, 0.0, 0.0}));
  CHECK_FALSE(sink_predicate(p, C, RegState{1.0, -0.1, 0.0, 0.0}));
  CHECK_FALSE(sink_predicate(p, C, RegState{0.5, 0.1, 0.0, 0.0}));
  CHECK(sink_radius(p, C, SinkBound::sharp) == doctest::Approx(C * C / (4 * V0)).epsilon(1e-14));
  CHECK_FALSE(sink_predicate(p, C, RegState{0.5, -0.1, 0.0, 0.0}, SinkBound::sharp));
  CHECK(sink_bound_from_string("sharp") == SinkBound::sharp);
}

TEST_CASE("homothetic infall at C = 0") {
  const ModelParams p;
  const double r0 = planar_turning_points(p, 0.0, -1.0).at(0);
  const auto f = classify_fate(p, 0.0, -1.0, RegState{r0, 0.0, 0.0, 0.0});
  CHECK(f.fate == Fate::triple_collision_Qstar);
  CHECK(f.winding == 0.0);
  CHECK(f.plane_crossings == 0);
}

TEST_CASE("winding of the planar collision orbit against quadrature") {
  const ModelParams p;
  const double C = 2.1723, h = -1.0;
  const double r0 = planar_turning_points(p, C, h).at(0);
  FateOptions o;
  o.triple_r = 1e-5;
  const auto f = classify_fate(p, C, h, RegState{r0, 0.0, 0.0, 0.0}, o);
  CHECK(f.fate == Fate::triple_collision_Qstar);
  // dphi/dr = C / (sqrt(r) v) with v = -sqrt(radicand) on the way in
  const double q = oracle::integrate([&](double r) { return C / (std::sqrt(r) * std::sqrt(radicand(C, h, r))); },
                                     1e-5, r0);
  CHECK(f.winding == doctest::Approx(q).epsilon(1e-6));
  // and the total up to r = 0 is finite
  const double total = oracle::integrate(
      [&](double r) { return C / (std::sqrt(r) * std::sqrt(radicand(C, h, r))); }, 0.0, r0);
  CHECK(std::isfinite(total));
  CHECK(total < 20 * std::numbers::pi);
}

TEST_CASE("planar fates below C0") {
  const ModelParams p;
  const double C = C0 - 0.5;
  for (double r : {0.3, 1.0, 2.0}) {
    const double h = -1.0;
    const double rad = radicand(C, h, r);
    if (rad <= 0) continue;
    CHECK(classify_fate(p, C, h, RegState{r, -std::sqrt(rad), 0.0, 0.0}).fate == Fate::triple_collision_Qstar);
  }
  const double h = 0.5;
  CHECK(classify_fate(p, C, h, RegState{1.0, std::sqrt(radicand(C, h, 1.0)), 0.0, 0.0}).fate == Fate::escape);
}

TEST_CASE("fate is symmetric under (theta, w) -> (-theta, -w)") {
  const ModelParams p;
  auto g = oracle::rng(21);
  for (int i = 0; i < 6;) {
    const double C = oracle::uni(g, 0.5, 3.0);
    const RegState s{sink_radius(p, C, SinkBound::sharp) * oracle::uni(g, 0.1, 0.9), -oracle::uni(g, 0.1, 3.0),
                     oracle::uni(g, -1.2, 1.2), oracle::uni(g, -0.3, 0.3)};
    const double h = energy_of(p, C, s);
    if (!(h < 0)) continue;
    ++i;
    const auto a = classify_fate(p, C, h, s);
    const auto b = classify_fate(p, C, h, RegState{s.r, s.v, -s.theta, -s.w});
    CAPTURE(i);
    CHECK(a.fate == b.fate);
    CHECK(is_collision(a.fate));
    if (a.limiting_theta && b.limiting_theta) CHECK(*a.limiting_theta == doctest::Approx(-*b.limiting_theta).epsilon(1e-6));
  }
}

TEST_CASE("batch runner matches serial runs") {
  const ModelParams p;
  std::vector<FateJob> jobs;
  const double C = C0 - 0.5;
  for (double r : {0.5, 1.0, 1.5, 2.0}) jobs.push_back({C, -1.0, RegState{r, -std::sqrt(radicand(C, -1.0, r)), 0.0, 0.0}});
  jobs.push_back({C, -1.0, RegState{1.0, 5.0, 0.0, 0.0}});  // inconsistent with h
  const auto par = classify_batch(p, jobs, {}, 4);
  REQUIRE(par.size() == jobs.size());
  for (std::size_t i = 0; i + 1 < jobs.size(); ++i) {
    const auto s = classify_fate(p, jobs[i].C, jobs[i].h, jobs[i].state0);
    CHECK(par[i].fate == s.fate);
    CHECK(par[i].winding == s.winding);
    CHECK(par[i].steps == s.steps);
  }
  CHECK(par.back().fate == Fate::undetermined);
  CHECK(par.back().status == IntegrationStatus::invalid_initial);
  CHECK_THROWS_AS(classify_fate(p, C, -1.0, RegState{1.0, 5.0, 0.0, 0.0}), InvalidInput);
}

TEST_CASE("energy helpers are inverse to each other") {
  const ModelParams p;
  const RegState s{0.4, -0.3, 0.5, 0.2};
  const double h = energy_of(p, 1.2, s);
  CHECK(w_squared_from_energy(p, 1.2, h, s.r, s.v, s.theta) == doctest::Approx(s.w * s.w).epsilon(1e-10));
}

}
