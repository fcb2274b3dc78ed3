#include "schwarziso/verify.hpp"

#include "schwarziso/charts.hpp"
#include "schwarziso/equilibria.hpp"
#include "schwarziso/flow.hpp"
#include "schwarziso/manifold.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

namespace schwarziso {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

using Rng = std::mt19937_64;

double uni(Rng& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

ModelParams random_in_regime(Rng& g) {
  for (;;) {
    ModelParams p;
    p.M = uni(g, 0.5, 2.0);
    p.m = p.M * uni(g, 0.0005, 0.02);
    p.A = uni(g, 0.1, 5.0);
    p.A1 = uni(g, 0.1, 5.0);
    p.B = uni(g, 0.1, 5.0);
    p.B1 = uni(g, 0.1, 5.0);
    if (regime(p).all()) return p;
  }
}

// argmin of W on (0, pi/2) by Brent's method, independent of the closed form
double theta_w_by_minimization(const Model& mdl) {
  const auto r = boost::math::tools::brent_find_minima([&](double t) { return mdl.W(t); }, 1e-3,
                                                       kHalfPi - 1e-3, 52);
  return r.first;
}

double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

CriterionResult c1_constants(const VerifyOptions& o) {
  CriterionResult res{1, "constants and dual C0 formula", true, {}};
  ModelParams p;
  p.M = 1;
  p.m = 0.01;
  p.A = p.A1 = 1;
  p.B = p.B1 = 0.2;
  const DerivedConstants d = derive(p);
  const bool exact = d.alpha == 5.0 && std::abs(d.beta - 3.4) <= 4.0 * 3.4 * 1e-16;
  const double c0_ref = std::pow(51.0, 0.25);
  const bool c0_ok = std::abs(d.C0 - c0_ref) < 1e-12 && std::abs(d.C0 - 2.67) < 0.01;
  res.details.push_back(fmt("alpha=%.17g beta=%.17g C0=%.17g (51^(1/4)=%.17g)", d.alpha, d.beta, d.C0, c0_ref));
  Rng g(o.seed);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    ModelParams q = p;
    q.A = uni(g, 0.1, 5);
    q.A1 = uni(g, 0.1, 5);
    q.B = uni(g, 0.1, 5);
    q.B1 = uni(g, 0.1, 5);
    const DerivedConstants e = derive(q);
    const AngularPotentials a = eval_angular(q, 0.0);
    const double lhs = std::pow(3.0 * e.alpha * e.beta, 0.25);
    const double rhs = std::pow(12.0 * a.V * a.W, 0.25);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  res.details.push_back(fmt("max |(3 alpha beta)^(1/4) - (12 V0 W0)^(1/4)| over 1000 draws = %.3g", worst));
  res.passed = exact && c0_ok && worst < 1e-12;
  return res;
}

CriterionResult c2_relative_equilibria(const VerifyOptions& o) {
  CriterionResult res{2, "relative equilibria gradient, Hessian and spectra", true, {}};
  const DerivedConstants d = derive(o.params);
  Rng g(o.seed + 2);
  double worst_grad = 0;
  int bad_hess = 0, bad_spec = 0, bad_f = 0;
  for (int i = 0; i < 100; ++i) {
    const double C = d.C0 * uni(g, 1.0 + 1e-6, 2.0);
    const auto eqs = relative_equilibria(o.params, C);
    if (eqs.size() != 2) {
      ++bad_spec;
      continue;
    }
    for (const auto& e : eqs) worst_grad = std::max(worst_grad, e.gradient_norm);
    if (!eqs[0].hessian_positive_definite) ++bad_hess;
    if (!(eqs[0].f_value > 0) || !(eqs[1].f_value < 0)) ++bad_f;
    double scale = 0;
    for (auto l : eqs[1].eigenvalues) scale = std::max(scale, std::abs(l));
    int real_pair = 0, imag_pair = 0;
    for (auto l : eqs[1].eigenvalues) {
      const double re = std::abs(l.real()) / scale, im = std::abs(l.imag()) / scale;
      if (im < 1e-8 && re > 1e-8) ++real_pair;
      if (re < 1e-8 && im > 1e-8) ++imag_pair;
    }
    if (real_pair != 2 || imag_pair != 2) ++bad_spec;
  }
  res.details.push_back(fmt("max |grad U_eff| = %.3g (limit 1e-9)", worst_grad));
  res.details.push_back(fmt("R1 Hessian not positive definite: %d/100; R2 spectrum not (real pair, imaginary pair): %d/100",
                            bad_hess, bad_spec));
  res.details.push_back(fmt("f(R) sign pattern f(R1) > 0 > f(R2) violated: %d/100", bad_f));
  res.passed = worst_grad < 1e-9 && bad_hess == 0 && bad_spec == 0 && bad_f == 0;
  return res;
}

CriterionResult c3_em_diagram(const VerifyOptions& o) {
  CriterionResult res{3, "energy-momentum curve has no self-intersection", true, {}};
  const auto pts = em_diagram(o.params, 0.05, 50.0, 10000);
  const auto rep = em_self_intersections(pts, 1e-9, 1e-9, 1e-6);
  res.details.push_back(fmt("10000 points, pairs with |dC|,|dh| < 1e-9: %zu, of which |dR| >= 1e-6: %zu",
                            rep.close_pairs, rep.violations));
  res.passed = rep.violations == 0;
  return res;
}

CriterionResult c4_charts(const VerifyOptions& o) {
  CriterionResult res{4, "chart round trips and cross-chart energy residuals", true, {}};
  const ModelParams& p = o.params;
  Rng g(o.seed + 4);
  double worst_rt = 0, worst_res = 0;
  for (int i = 0; i < 1000; ++i) {
    const CylState s{uni(g, 0.1, 5), uni(g, -2, 2), uni(g, -2, 2), uni(g, -2, 2)};
    const McGeheeState m = cyl_to_mcgehee(p, s);
    const RegState r = mcgehee_to_reg(p, m);
    const CylState back = mcgehee_to_cyl(p, reg_to_mcgehee(p, r));
    const auto a = to_array(s), b = to_array(back);
    for (int k = 0; k < 4; ++k)
      worst_rt = std::max(worst_rt, std::abs(a[k] - b[k]) / std::max(std::abs(a[k]), 1e-3));
    const double C = uni(g, 0, 4);
    const double h = reduced_hamiltonian(p, C, s);
    const double c = std::cos(m.theta);
    // both relations are r^3 (H - h) up to the factor 2 cos^6 in the regularized chart
    const double scale_m = std::abs(h) * std::pow(m.r, 3) + 0.5 * (m.u * m.u + m.v * m.v) + 1.0;
    const double scale_r = 2.0 * std::pow(c, 6) * scale_m;
    worst_res = std::max(worst_res, std::abs(energy_residual(p, C, h, m)) / scale_m);
    worst_res = std::max(worst_res, std::abs(energy_residual(p, C, h, r)) / scale_r);
  }
  res.details.push_back(fmt("max relative round-trip error = %.3g (limit 1e-10)", worst_rt));
  res.details.push_back(fmt("max scaled energy residual in mcgehee/reg charts = %.3g (limit 1e-8)", worst_res));
  res.passed = worst_rt < 1e-10 && worst_res < 1e-8;
  return res;
}

CriterionResult c5_conservation(const VerifyOptions& o) {
  CriterionResult res{5, "energy conservation in the reduced chart", true, {}};
  const ModelParams& p = o.params;
  const double C = 3.0;
  const auto eqs = relative_equilibria(p, C);
  const double R1 = eqs.at(0).R;
  const CylState s{1.08 * R1, 0.05, 0.02, -0.01};
  const double h = reduced_hamiltonian(p, C, s);
  const VectorField f(Chart::reduced, p, C, h);
  State y0(4);
  y0 << s.R, s.z, s.P_R, s.P_z;
  double worst = 0;
  IntegratorOptions io;
  io.store_stride = 0;
  io.observer = [&](double, const State& y) {
    worst = std::max(worst, std::abs(reduced_hamiltonian(p, C, {y(0), y(1), y(2), y(3)}) - h));
  };
  const Trajectory tr = integrate(f, y0, 0.0, 1000.0, io);
  res.details.push_back(fmt("h=%.10g, %ld steps, status %s, max |H - h|/|h| = %.3g (limit 1e-8)", h,
                            tr.stats.accepted, to_string(tr.status).c_str(), worst / std::abs(h)));
  res.details.push_back(fmt("P_phi is the fixed parameter C = %.17g of the field (%.17g)", C, f.C()));
  res.passed = tr.status == IntegrationStatus::completed && worst / std::abs(h) < 1e-8 && f.C() == C;
  return res;
}

CriterionResult c6_spectra(const VerifyOptions& o) {
  CriterionResult res{6, "collision-manifold spectra against closed forms", true, {}};
  const ModelParams& p = o.params;
  const auto eqs = cm_equilibria(p, 0.0);
  bool ok = true;
  for (const auto& e : eqs) {
    double worst = 0, worst_basis = 0, worst_delta = 0;
    for (std::size_t k = 0; k < e.tangent_eigenvalues.size(); ++k) {
      worst = std::max(worst, rel(e.tangent_eigenvalues[k], e.closed_form[k]));
      worst_basis = std::max(worst_basis, rel(e.tangent_eigenvalues_explicit_basis[k], e.tangent_eigenvalues[k]));
    }
    for (std::size_t k = 0; k < e.delta_eigenvalues.size(); ++k)
      worst_delta = std::max(worst_delta, rel(e.delta_eigenvalues[k], e.delta_closed_form[k]));
    int want_u = 0, want_s = 0;
    CMClass want = CMClass::saddle;
    switch (e.name) {
      case CMName::Q: want_u = 3, want_s = 0, want = CMClass::spiral_source; break;
      case CMName::Qstar: want_u = 0, want_s = 3, want = CMClass::spiral_sink; break;
      case CMName::Eplus:
      case CMName::Eminus: want_u = 2, want_s = 1; break;
      case CMName::EplusStar:
      case CMName::EminusStar: want_u = 1, want_s = 2; break;
    }
    const bool this_ok = worst < 1e-8 && worst_basis < 1e-8 && worst_delta < 1e-8 && e.classification == want &&
                         e.dim_unstable == want_u && e.dim_stable == want_s;
    ok = ok && this_ok;
    res.details.push_back(fmt("%-10s %-13s dims (%d,%d)  rel err closed form %.2g, basis %.2g, on-manifold %.2g",
                              to_string(e.name).c_str(), to_string(e.classification).c_str(), e.dim_unstable,
                              e.dim_stable, worst, worst_basis, worst_delta));
  }
  // Q: lambda_r = sqrt(2), spiral pair with real part sqrt(2)/4
  const auto& Q = eqs[0];
  double re_pair = 0, im_pair = 0;
  for (auto l : Q.delta_eigenvalues) re_pair = l.real(), im_pair = std::max(im_pair, std::abs(l.imag()));
  const bool q_ok = std::abs(Q.radial_eigenvalue - std::sqrt(2.0)) < 1e-14 &&
                    std::abs(re_pair - std::sqrt(2.0) / 4.0) < 1e-8 * std::sqrt(2.0) / 4.0 && im_pair > 0;
  const Spectrum printed = q_closed_form_pair(p, 1.0);
  double worst_printed = 0;
  for (std::size_t k = 0; k < 2; ++k) worst_printed = std::max(worst_printed, rel(Q.delta_eigenvalues[k], printed[k]));
  res.details.push_back(fmt("Q: lambda_r=%.12g, pair %.12g +- %.12g i; printed discriminant form rel err %.2g",
                            Q.radial_eigenvalue, re_pair, im_pair, worst_printed));
  res.passed = ok && q_ok && worst_printed < 1e-8;
  return res;
}

CriterionResult c7_gradient_like(const VerifyOptions& o) {
  CriterionResult res{7, "gradient-like flow on the collision manifold", true, {}};
  const ModelParams& p = o.params;
  const Model mdl(p);
  const VectorField f(Chart::collision, p, 0.0, 0.0);
  Rng g(o.seed + 7);
  double worst = 0;
  int bad = 0;
  const double K = 5.0 * std::sqrt(2.0 * mdl.derived().W0);
  for (int i = 0; i < 50; ++i) {
    const double th = uni(g, -kHalfPi + 0.05, kHalfPi - 0.05);
    const double c = std::cos(th), c3 = c * c * c;
    const double w = std::sqrt(2.0 * c3) * uni(g, -0.999, 0.999);
    State y0(3);
    y0 << (i % 2 ? -1.0 : 1.0) * std::sqrt(mdl.U(th) * (2.0 * c3 - w * w)) / c3, th, w;
    IntegratorOptions io;
    io.project = true;
    const Trajectory tr = integrate(f, y0, 0.0, 30.0, io, {event_v_below(-K)});
    const GradientAudit a = gradient_like_audit(tr);
    worst = std::max(worst, a.max_violation);
    if (!a.monotone) ++bad;
  }
  res.details.push_back(fmt("50 trajectories, non-monotone: %d, max increase of v = %.3g (limit 1e-9)", bad, worst));
  res.passed = bad == 0 && worst < 1e-9;
  return res;
}

CriterionResult c8_connection(const VerifyOptions& o) {
  CriterionResult res{8, "connection condition and W_u(E-) reaching B+(0)", true, {}};
  const ModelParams& p = o.params;
  const Model mdl(p);
  const ConnectionCondition cc = connection_condition(p);
  const double tw = theta_w_by_minimization(mdl);
  const double lhs_o = std::sqrt(mdl.W(0.0) / 2.0), rhs_o = std::sqrt(2.0 * mdl.W(tw)) / tw;
  const bool values_ok = std::abs(cc.lhs - lhs_o) < 1e-10 && std::abs(cc.rhs - rhs_o) < 1e-6 &&
                         std::abs(cc.lhs - 0.775) < 0.01 && std::abs(cc.rhs - 1.303) < 0.01;
  res.details.push_back(fmt("mu=%.6g lhs=%.10g rhs=%.10g (minimizer oracle: theta_w=%.12g lhs=%.10g rhs=%.10g) cond_up=%d",
                            mdl.mu(), cc.lhs, cc.rhs, tw, lhs_o, rhs_o, int(cc.cond_up_holds)));
  const CMEquilibrium em = cm_equilibrium(p, 0.0, CMName::Eminus);
  const ManifoldTrace mt = trace_manifold(p, em, Branch::w_pos);
  res.details.push_back(fmt("W_u(E-)|w>0 -> %s at tau=%.6g (eps/10 run: %s), end state v=%.6g theta=%.10g",
                            to_string(mt.outcome).c_str(), mt.tau_end, to_string(mt.richardson_outcome).c_str(),
                            mt.trajectory.back()(0), mt.trajectory.back()(1)));
  Rng g(o.seed + 8);
  int disagree = 0, beyond = 0, disagree_within = 0;
  for (int i = 0; i < 1000; ++i) {
    const ModelParams q = random_in_regime(g);
    const ConnectionCondition c = connection_condition(q);
    if (c.sqrt_Y > kHalfPi) ++beyond;
    if (!c.agree) {
      ++disagree;
      if (c.sqrt_Y <= kHalfPi) ++disagree_within;
    }
  }
  res.details.push_back(fmt("cond_up vs cond_param over 1000 in-regime sets: %d disagree "
                            "(%d sets with sqrt(Y) > pi/2, %d disagreements with sqrt(Y) <= pi/2)",
                            disagree, beyond, disagree_within));
  res.passed = values_ok && cc.cond_up_holds && mt.outcome == TraceOutcome::B_plus_0 && mt.richardson_agrees &&
               disagree == 0;
  return res;
}

CriterionResult c9_planar(const VerifyOptions& o) {
  CriterionResult res{9, "planar regimes and planar fates", true, {}};
  const ModelParams& p = o.params;
  const DerivedConstants d = derive(p);
  const auto below = planar_equilibria(p, 0.8 * d.C0);
  const auto at = planar_equilibria(p, d.C0);
  const auto above = planar_equilibria(p, 1.2 * d.C0);
  const bool counts = below.equilibria.empty() && at.equilibria.size() == 1 && above.equilibria.size() == 2;
  const bool types = counts && at.equilibria[0].type == PlanarPointType::degenerate &&
                     above.equilibria[0].type == PlanarPointType::saddle &&
                     above.equilibria[1].type == PlanarPointType::center;
  // each reported point must be a rest point of the planar field
  double worst_rest = 0;
  for (const auto* reg : {&at, &above}) {
    const double Cr = reg == &at ? d.C0 : 1.2 * d.C0;
    const VectorField f(Chart::planar, p, Cr, 0.0);
    for (const auto& e : reg->equilibria) {
      State y(2);
      y << e.r, 0.0;
      worst_rest = std::max(worst_rest, f.evaluate(y).cwiseAbs().maxCoeff() / std::max(1.0, Cr * Cr * e.r));
    }
  }
  const bool rest = worst_rest < 1e-10;
  res.details.push_back(fmt("largest planar field norm at the reported equilibria: %.3g", worst_rest));
  res.details.push_back(fmt("equilibrium counts below/at/above C0: %zu/%zu/%zu; types at C>C0: %s, %s",
                            below.equilibria.size(), at.equilibria.size(), above.equilibria.size(),
                            above.equilibria.size() == 2 ? to_string(above.equilibria[0].type).c_str() : "-",
                            above.equilibria.size() == 2 ? to_string(above.equilibria[1].type).c_str() : "-"));
  const double C = d.C0 - 0.5;
  Rng g(o.seed + 9);
  std::vector<FateJob> neg, pos;
  {
    const double h = -1.0;
    const double rt = planar_turning_points(p, C, h).back();
    for (int i = 0; i < 20; ++i) {
      const double r = rt * uni(g, 0.05, 0.95);
      const double v = (i % 2 ? -1.0 : 1.0) * std::sqrt(((2 * h * r + 2 * d.V0) * r - C * C) * r + 2 * d.W0);
      neg.push_back({C, h, {r, v, 0.0, 0.0}});
    }
  }
  for (int i = 0; i < 20; ++i) {
    const double h = i < 10 ? 0.0 : uni(g, 0.1, 2.0);
    const double r = uni(g, 0.2, 3.0);
    const double v = std::sqrt(((2 * h * r + 2 * d.V0) * r - C * C) * r + 2 * d.W0);
    pos.push_back({C, h, {r, v, 0.0, 0.0}});
  }
  const auto fn = classify_batch(p, neg, {}, o.threads);
  const auto fp = classify_batch(p, pos, {}, o.threads);
  int triple = 0, escape = 0;
  for (const auto& f : fn)
    if (f.fate == Fate::triple_collision_Qstar) ++triple;
  for (const auto& f : fp)
    if (f.fate == Fate::escape) ++escape;
  res.details.push_back(fmt("C=C0-0.5, h=-1: %d/20 triple collision (Q*)", triple));
  res.details.push_back(fmt("C=C0-0.5, h>=0, ejecting (v>0) states: %d/20 escape", escape));
  for (std::size_t i = 0; i < fn.size(); ++i)
    if (fn[i].fate != Fate::triple_collision_Qstar)
      res.details.push_back(fmt("  h<0 job %zu: %s (%s)", i, to_string(fn[i].fate).c_str(), fn[i].note.c_str()));
  for (std::size_t i = 0; i < fp.size(); ++i)
    if (fp[i].fate != Fate::escape)
      res.details.push_back(fmt("  h>=0 job %zu: %s (%s)", i, to_string(fp[i].fate).c_str(), fp[i].note.c_str()));
  res.passed = counts && types && rest && triple == 20 && escape == 20;
  return res;
}

CriterionResult c10_homographic(const VerifyOptions& o) {
  CriterionResult res{10, "homographic solutions only on the plane", true, {}};
  const ModelParams& p = o.params;
  int admissible = 0;
  bool zero_ok = false;
  for (int k = -49; k <= 50; ++k) {
    const double th = k * std::numbers::pi / 101.0;
    const auto v = homographic_admissible(p, 1.0, th);
    if (v.admissible) {
      ++admissible;
      if (k == 0) zero_ok = true;
    }
  }
  res.details.push_back(fmt("100-point grid: admissible at %d point(s), at theta0=0: %d", admissible, int(zero_ok)));
  Rng g(o.seed + 10);
  int bad = 0;
  double worst = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const ModelParams q = random_in_regime(g);
    const double C = uni(g, 0.1, 5.0);
    const double tv = derive(q).require_theta_v();
    for (double th : {tv, -tv}) {
      const auto v = homographic_admissible(q, C, th);
      worst = std::max(worst, v.r0_squared);
      if (v.hcase != HomographicCase::theta_v_Cnonzero || !(v.r0_squared < 0) || v.admissible) ++bad;
    }
  }
  res.details.push_back(fmt("r0^2 at +-theta_v over 100 in-regime sets: largest value %.6g, failures %d", worst, bad));
  res.passed = admissible == 1 && zero_ok && bad == 0;
  return res;
}

CriterionResult c11_winding(const VerifyOptions& o) {
  CriterionResult res{11, "black-hole winding of the planar collision orbit", true, {}};
  const ModelParams& p = o.params;
  const double h = -1.0;
  auto run = [&](double C) {
    const double r0 = planar_turning_points(p, C, h).back();
    FateOptions fo;
    fo.triple_r = 1e-5;
    return std::pair{r0, classify_fate(p, C, h, {r0, 0.0, 0.0, 0.0}, fo)};
  };
  const auto [r1, spin] = run(2.1723);
  const auto [r2, rect] = run(0.0);
  const double target = 20.0 * std::numbers::pi;
  res.details.push_back(fmt("C=2.1723: r0=%.12g fate=%s winding=%.10g rad (needs > 20 pi = %.6g), r_end=%.3g",
                            r1, to_string(spin.fate).c_str(), spin.winding, target, spin.final_state.r));
  res.details.push_back(fmt("C=0: r0=%.12g fate=%s winding=%.17g plane_crossings=%d", r2,
                            to_string(rect.fate).c_str(), rect.winding, rect.plane_crossings));
  res.passed = spin.fate == Fate::triple_collision_Qstar && spin.winding > target &&
               rect.fate == Fate::triple_collision_Qstar && rect.winding == 0.0 && rect.plane_crossings == 0;
  return res;
}

CriterionResult c12_sink(const VerifyOptions& o) {
  CriterionResult res{12, "global sink: collision with monotone r and v", true, {}};
  const ModelParams& p = o.params;
  const Model mdl(p);
  const double vq = std::sqrt(2.0 * mdl.derived().W0);
  Rng g(o.seed + 12);
  std::vector<FateJob> jobs;
  while (jobs.size() < 200) {
    const double C = uni(g, 0.5, 4.0);
    const double r = sink_radius(p, C, o.sink_bound) * uni(g, 0.01, 0.999);
    const double th = uni(g, -1.3, 1.3);
    const double v = -uni(g, 0.01, 3.0) * vq;
    const double c = std::cos(th);
    const double w = uni(g, -1.0, 1.0) * std::sqrt(2.0 * c * c * c);
    const RegState s{r, v, th, w};
    if (!sink_predicate(p, C, s, o.sink_bound)) continue;
    const double h = energy_of(p, C, s);
    if (!(h < 0)) continue;
    jobs.push_back({C, h, s});
  }
  const auto rep = classify_batch(p, jobs, {}, o.threads);
  int not_collision = 0, r_up = 0, v_up = 0, deep = 0, deep_unsettled = 0;
  double worst_r = 0, worst_v = 0;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const auto& f = rep[i];
    const double tol_r = 1e-9 * std::max(1.0, jobs[i].state0.r);
    const double tol_v = 1e-9 * std::max(1.0, std::abs(jobs[i].state0.v));
    if (!is_collision(f.fate)) ++not_collision;
    if (f.max_r_increase > tol_r) ++r_up;
    if (f.max_v_increase > tol_v) ++v_up;
    worst_r = std::max(worst_r, f.max_r_increase);
    worst_v = std::max(worst_v, f.max_v_increase);
    if (jobs[i].state0.v < -vq) {
      ++deep;
      if (f.crossings_in_terminal_decade > 0) ++deep_unsettled;
    }
  }
  res.details.push_back(fmt("sink bound '%s': 200 states, not collision: %d, r increased: %d (max %.3g), v increased: %d (max %.3g)",
                            to_string(o.sink_bound).c_str(), not_collision, r_up, worst_r, v_up, worst_v));
  res.details.push_back(fmt("%d states with v0 < -sqrt(2 W(0)); plane crossings in the terminal decade of r: %d", deep,
                            deep_unsettled));
  for (std::size_t i = 0; i < rep.size(); ++i)
    if (jobs[i].state0.v < -vq)
      res.details.push_back(fmt("  v0=%.6g: %s, %d plane crossings", jobs[i].state0.v, to_string(rep[i].fate).c_str(),
                                rep[i].plane_crossings));
  int shown = 0;
  for (std::size_t i = 0; i < rep.size() && shown < 5; ++i) {
    const auto& f = rep[i];
    if (is_collision(f.fate) && f.max_r_increase <= 1e-9 * std::max(1.0, jobs[i].state0.r) &&
        f.max_v_increase <= 1e-9 * std::max(1.0, std::abs(jobs[i].state0.v)))
      continue;
    ++shown;
    const auto& s = jobs[i].state0;
    res.details.push_back(fmt("  e.g. C=%.6g h=%.6g (r,v,theta,w)=(%.6g,%.6g,%.6g,%.6g): %s, r up %.3g, v up %.3g, "
                              "2 r V0 = %.4g vs C^2/2 = %.4g%s%s",
                              jobs[i].C, jobs[i].h, s.r, s.v, s.theta, s.w, to_string(f.fate).c_str(),
                              f.max_r_increase, f.max_v_increase, 2 * s.r * mdl.derived().V0,
                              0.5 * jobs[i].C * jobs[i].C, f.note.empty() ? "" : "; ", f.note.c_str()));
  }
  res.passed = not_collision == 0 && r_up == 0 && v_up == 0 && deep_unsettled == 0;
  return res;
}

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& opt) {
  switch (id) {
    case 1: return c1_constants(opt);
    case 2: return c2_relative_equilibria(opt);
    case 3: return c3_em_diagram(opt);
    case 4: return c4_charts(opt);
    case 5: return c5_conservation(opt);
    case 6: return c6_spectra(opt);
    case 7: return c7_gradient_like(opt);
    case 8: return c8_connection(opt);
    case 9: return c9_planar(opt);
    case 10: return c10_homographic(opt);
    case 11: return c11_winding(opt);
    case 12: return c12_sink(opt);
    default: throw InvalidInput("criterion id must be in 1..12");
  }
}

std::vector<CriterionResult> run_all_criteria(const VerifyOptions& opt) {
  std::vector<CriterionResult> out;
  for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i, opt));
  return out;
}

}  // namespace schwarziso
