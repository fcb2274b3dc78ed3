#include "schwarziso/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace schwarziso {

std::string to_string(CMName n) {
  switch (n) {
    case CMName::Q: return "Q";
    case CMName::Qstar: return "Qstar";
    case CMName::Eplus: return "Eplus";
    case CMName::Eminus: return "Eminus";
    case CMName::EplusStar: return "EplusStar";
    case CMName::EminusStar: return "EminusStar";
  }
  return "?";
}

CMName cm_name_from_string(const std::string& s) {
  for (CMName n : {CMName::Q, CMName::Qstar, CMName::Eplus, CMName::Eminus, CMName::EplusStar,
                   CMName::EminusStar})
    if (to_string(n) == s) return n;
  throw InvalidInput("unknown collision-manifold equilibrium '" + s + "'");
}

std::string to_string(CMClass c) {
  switch (c) {
    case CMClass::spiral_source: return "spiral_source";
    case CMClass::spiral_sink: return "spiral_sink";
    case CMClass::saddle: return "saddle";
    case CMClass::other: return "other";
  }
  return "?";
}

std::string to_string(TraceOutcome o) {
  switch (o) {
    case TraceOutcome::B_plus_0: return "B_plus_0";
    case TraceOutcome::B_minus_0: return "B_minus_0";
    case TraceOutcome::Qstar: return "Qstar";
    case TraceOutcome::E_connection: return "E_connection";
    case TraceOutcome::undetermined: return "undetermined";
  }
  return "?";
}

std::string to_string(ProfileEnd e) {
  switch (e) {
    case ProfileEnd::reached_half_pi: return "reached_half_pi";
    case ProfileEnd::left_domain: return "left_domain";
    case ProfileEnd::completed: return "completed";
  }
  return "?";
}

namespace {

void sort_spectrum(Spectrum& s) {
  std::sort(s.begin(), s.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
}

Spectrum eig(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  Spectrum s;
  for (int i = 0; i < A.rows(); ++i) s.push_back(es.eigenvalues()(i));
  sort_spectrum(s);
  return s;
}

// Orthonormal basis of the orthogonal complement of g.
Eigen::MatrixXd kernel_basis(const Eigen::VectorXd& g) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g.transpose(), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(g.size() - 1);
}

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& J, const Eigen::MatrixXd& B) {
  // B has full column rank and spans a J-invariant subspace
  return (B.transpose() * B).ldlt().solve(B.transpose() * J * B);
}

struct CMLocation {
  double theta_c;
  double sign;
};

CMLocation locate(const DerivedConstants& d, CMName name) {
  switch (name) {
    case CMName::Q: return {0.0, 1.0};
    case CMName::Qstar: return {0.0, -1.0};
    case CMName::Eplus: return {d.require_theta_w(), 1.0};
    case CMName::Eminus: return {-d.require_theta_w(), 1.0};
    case CMName::EplusStar: return {d.require_theta_w(), -1.0};
    case CMName::EminusStar: return {-d.require_theta_w(), -1.0};
  }
  return {0.0, 1.0};
}

State collision_state(double v, double th, double w) {
  State y(3);
  y << v, th, w;
  return y;
}

}  // namespace

Spectrum q_closed_form_pair(const ModelParams& p, double sign) {
  const DerivedConstants d = derive(p);
  const double num = 25.0 * p.B + 16.0 * p.B1 * (1.0 - 24.0 * (d.mu - 1.0));
  const std::complex<double> root = std::sqrt(std::complex<double>(num / (2.0 * (p.B + 16.0 * p.B1))));
  const double a = sign * std::sqrt(2.0) / 2.0;
  Spectrum s{0.5 * (a + root), 0.5 * (a - root)};
  sort_spectrum(s);
  return s;
}

CMEquilibrium cm_equilibrium(const ModelParams& p, double C, CMName name) {
  const Model mdl(p);
  const DerivedConstants& d = mdl.derived();
  const CMLocation loc = locate(d, name);
  CMEquilibrium eq;
  eq.name = name;
  eq.theta_c = loc.theta_c;
  eq.sign = loc.sign;
  const double Wc = mdl.W(loc.theta_c);
  eq.state = {0.0, loc.sign * std::sqrt(2.0 * Wc), loc.theta_c, 0.0};

  // full 4-dimensional regularized field
  const VectorField reg(Chart::regularized, p, C, 0.0);
  State y(4);
  y << 0.0, eq.state.v, eq.state.theta, 0.0;
  const Eigen::MatrixXd J = reg.jacobian(y);
  const Eigen::VectorXd gF = reg.residual_gradient(y);

  const Eigen::MatrixXd B = kernel_basis(gF);
  eq.tangent_eigenvalues = eig(B.transpose() * J * B);

  Eigen::MatrixXd Bx = Eigen::MatrixXd::Zero(4, 3);
  Bx(0, 0) = gF(1);
  Bx(1, 0) = -gF(0);
  Bx(2, 1) = 1.0;
  Bx(3, 2) = 1.0;
  eq.tangent_eigenvalues_explicit_basis = eig(restrict_to(J, Bx));

  const double c = std::cos(loc.theta_c);
  const double c3 = c * c * c;
  eq.radial_eigenvalue = loc.sign * std::sqrt(2.0 * c3);
  const double ratio = mdl.d2W(loc.theta_c) / Wc;
  const double b = loc.sign * std::sqrt(c3 / 2.0);
  const std::complex<double> disc = std::sqrt(std::complex<double>(c3 / 2.0 + 4.0 * ratio * c3));
  eq.delta_closed_form = {0.5 * (b + disc), 0.5 * (b - disc)};
  sort_spectrum(eq.delta_closed_form);
  eq.closed_form = eq.delta_closed_form;
  eq.closed_form.emplace_back(eq.radial_eigenvalue, 0.0);
  sort_spectrum(eq.closed_form);

  // flow on the collision manifold
  const VectorField col(Chart::collision, p, C, 0.0);
  const State yc = collision_state(eq.state.v, eq.state.theta, 0.0);
  const Eigen::MatrixXd Jc = col.jacobian(yc);
  const Eigen::MatrixXd Bc = kernel_basis(col.residual_gradient(yc));
  const Eigen::MatrixXd Jd = Bc.transpose() * Jc * Bc;
  eq.delta_eigenvalues = eig(Jd);

  int nu = 0, ns = 0;
  bool complex_pair = false;
  for (const auto& l : eq.tangent_eigenvalues) {
    if (l.real() > 0) ++nu;
    if (l.real() < 0) ++ns;
    if (std::abs(l.imag()) > 1e-12) complex_pair = true;
  }
  eq.dim_unstable = nu;
  eq.dim_stable = ns;
  if (nu == 3 && complex_pair)
    eq.classification = CMClass::spiral_source;
  else if (ns == 3 && complex_pair)
    eq.classification = CMClass::spiral_sink;
  else if (nu > 0 && ns > 0)
    eq.classification = CMClass::saddle;
  else
    eq.classification = CMClass::other;

  // (theta, w) eigenvectors on the collision manifold; the tangent plane
  // there is spanned by e_theta and e_w
  const Eigen::Matrix2d A2 = Jc.block<2, 2>(1, 1);
  Eigen::EigenSolver<Eigen::Matrix2d> es2(A2, true);
  for (int i = 0; i < 2; ++i) {
    const auto lam = es2.eigenvalues()(i);
    if (std::abs(lam.imag()) > 1e-12) continue;
    Eigen::Vector2d vec = es2.eigenvectors().col(i).real();
    vec.normalize();
    if (lam.real() > 0) {
      eq.unstable_dir_theta = vec(0);
      eq.unstable_dir_w = vec(1);
    } else {
      eq.stable_dir_theta = vec(0);
      eq.stable_dir_w = vec(1);
    }
  }
  return eq;
}

std::vector<CMEquilibrium> cm_equilibria(const ModelParams& p, double C) {
  const DerivedConstants d = derive(p);
  (void)d.require_theta_w();  // throws RegimeError early
  std::vector<CMEquilibrium> out;
  for (CMName n : {CMName::Q, CMName::Qstar, CMName::Eplus, CMName::Eminus, CMName::EplusStar,
                   CMName::EminusStar})
    out.push_back(cm_equilibrium(p, C, n));
  return out;
}

namespace {

ManifoldTrace shoot(const ModelParams& p, const State& y0, std::optional<CMName> exclude,
                    const TraceOptions& opt) {
  const Model mdl(p);
  const DerivedConstants& d = mdl.derived();
  const VectorField col(Chart::collision, p, 0.0, 0.0);
  const double K = opt.K_factor * std::sqrt(2.0 * d.W0);

  std::vector<EventSpec> ev;
  ev.push_back(event_v_below(-K));
  ev.back().label = "v_below_K";

  EventSpec q;
  q.kind = EventKind::custom;
  q.direction = -1;
  q.label = "Qstar";
  const double vq = -std::sqrt(2.0 * d.W0);
  q.custom = [vq, r = opt.qstar_radius](double, const State& y) {
    return std::sqrt((y(0) - vq) * (y(0) - vq) + y(1) * y(1) + y(2) * y(2)) - r;
  };
  ev.push_back(q);

  std::vector<CMName> saddles;
  if (d.theta_w) {
    for (CMName n : {CMName::Eplus, CMName::Eminus, CMName::EplusStar, CMName::EminusStar}) {
      if (exclude && *exclude == n) continue;
      const CMLocation loc = locate(d, n);
      const double vs = loc.sign * std::sqrt(2.0 * mdl.W(loc.theta_c));
      EventSpec e;
      e.kind = EventKind::custom;
      e.direction = -1;
      e.label = to_string(n);
      e.custom = [vs, th = loc.theta_c, r = opt.saddle_radius](double, const State& y) {
        return std::sqrt((y(0) - vs) * (y(0) - vs) + (y(1) - th) * (y(1) - th) + y(2) * y(2)) - r;
      };
      ev.push_back(e);
      saddles.push_back(n);
    }
  }

  IntegratorOptions io = opt.integrator;
  io.project = true;
  ManifoldTrace mt;
  mt.trajectory = integrate(col, y0, 0.0, opt.tau_max, io, ev);
  const Trajectory& tr = mt.trajectory;
  mt.tau_end = tr.t_end();
  mt.max_constraint_residual = tr.stats.max_abs_residual;
  if (tr.status == IntegrationStatus::event) {
    const EventRecord& e = tr.events.back();
    if (e.spec_index == 0) {
      const double th = e.state(1);
      if (std::abs(th) > kHalfPi - opt.theta_margin)
        mt.outcome = th > 0 ? TraceOutcome::B_plus_0 : TraceOutcome::B_minus_0;
    } else if (e.spec_index == 1) {
      mt.outcome = TraceOutcome::Qstar;
    } else {
      mt.outcome = TraceOutcome::E_connection;
      mt.connected_to = saddles[e.spec_index - 2];
    }
  }
  return mt;
}

State start_on_manifold(const ModelParams& p, double sign, double th, double w) {
  const Model mdl(p);
  const double c = std::cos(th);
  const double c3 = c * c * c;
  const double rad = mdl.U(th) * (2.0 * c3 - w * w) / (c3 * c3);
  if (!(rad > 0.0)) throw InvalidInput("offset leaves the collision manifold; use a smaller eps");
  return collision_state(sign * std::sqrt(rad), th, w);
}

}  // namespace

ManifoldTrace trace_manifold(const ModelParams& p, const CMEquilibrium& eq, Branch branch,
                             const TraceOptions& opt) {
  if (eq.classification != CMClass::saddle)
    throw InvalidInput("trace_manifold needs a saddle equilibrium (E+-, E+-*)");
  if (!(opt.eps > 1e-10 && opt.eps < 1e-4)) throw InvalidInput("eps must lie in (1e-10, 1e-4)");
  double dt = eq.unstable_dir_theta, dw = eq.unstable_dir_w;
  const double want = branch == Branch::w_pos ? 1.0 : -1.0;
  if (dw * want < 0) {
    dt = -dt;
    dw = -dw;
  }
  auto run = [&](double eps) {
    const State y0 = start_on_manifold(p, eq.sign, eq.theta_c + eps * dt, eps * dw);
    return shoot(p, y0, eq.name, opt);
  };
  ManifoldTrace mt = run(opt.eps);
  if (opt.richardson) {
    const ManifoldTrace fine = run(opt.eps / 10.0);
    mt.richardson_outcome = fine.outcome;
    mt.richardson_agrees = fine.outcome == mt.outcome && fine.connected_to == mt.connected_to;
  }
  return mt;
}

ManifoldTrace trace_ray(const ModelParams& p, double angle, const TraceOptions& opt) {
  if (!(opt.eps > 1e-10 && opt.eps < 1e-4)) throw InvalidInput("eps must lie in (1e-10, 1e-4)");
  auto run = [&](double eps) {
    const State y0 = start_on_manifold(p, 1.0, eps * std::cos(angle), eps * std::sin(angle));
    return shoot(p, y0, std::nullopt, opt);
  };
  ManifoldTrace mt = run(opt.eps);
  if (opt.richardson) {
    const ManifoldTrace fine = run(opt.eps / 10.0);
    mt.richardson_outcome = fine.outcome;
    mt.richardson_agrees = fine.outcome == mt.outcome && fine.connected_to == mt.connected_to;
  }
  return mt;
}

ConnectionCondition connection_condition(const ModelParams& p) {
  const Model mdl(p);
  const DerivedConstants& d = mdl.derived();
  const double tw = d.require_theta_w();
  ConnectionCondition cc;
  cc.lhs = std::sqrt(d.W0 / 2.0);
  cc.rhs = std::sqrt(2.0 * mdl.W(tw)) / tw;
  cc.cond_up_holds = cc.lhs <= cc.rhs;

  const double mu = d.mu, g = d.gamma;
  const double x = 1.0 + std::pow(g, 0.4) / std::pow(mu - 1.0, 0.6);
  cc.sqrt_Y = std::sqrt(4.0 / (1.0 + g)) * std::pow(1.0 - 1.0 / mu, 0.75) * std::pow(x, 1.25);
  const double cy = std::cos(cc.sqrt_Y);
  cc.param_lhs = cy * cy;
  cc.param_rhs = 1.0 / ((1.0 - 1.0 / mu) * x);
  cc.cond_param_holds = cc.param_lhs <= cc.param_rhs;
  cc.agree = cc.cond_up_holds == cc.cond_param_holds;
  return cc;
}

GradientAudit gradient_like_audit(const Trajectory& traj, double tol) {
  if (traj.chart != Chart::collision)
    throw InvalidInput("gradient-like audit needs a collision-chart trajectory");
  GradientAudit a;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double inc = (traj.states[i](0) - traj.states[i - 1](0)) *
                       (traj.t[i] >= traj.t[i - 1] ? 1.0 : -1.0);
    a.max_violation = std::max(a.max_violation, inc);
  }
  a.monotone = a.max_violation <= tol;
  return a;
}

ProfileCurve profile_curve(const ModelParams& p, double v_at_zero, double theta_end,
                           const IntegratorOptions& opt) {
  const Model mdl(p);
  const DerivedConstants& d = mdl.derived();
  if (!(std::abs(v_at_zero) < std::sqrt(2.0 * d.W0)))
    throw InvalidInput("profile curve needs |v(0)| < sqrt(2 W(0))");
  if (!(std::abs(theta_end) < kHalfPi)) throw InvalidInput("profile end angle must satisfy |theta| < pi/2");
  const VectorField f(Chart::profile, p, 0.0, 0.0);
  EventSpec edge;
  edge.kind = EventKind::custom;
  edge.direction = -1;
  edge.label = "domain_boundary";
  edge.custom = [&mdl](double th, const State& y) { return mdl.W(th) - 0.5 * y(0) * y(0); };
  State y0(1);
  y0 << v_at_zero;
  IntegratorOptions io = opt;
  io.store_stride = 1;
  const Trajectory tr = integrate(f, y0, 0.0, theta_end, io, {edge});
  ProfileCurve pc;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    pc.theta.push_back(tr.t[i]);
    pc.v.push_back(tr.states[i](0));
  }
  const double th = tr.t_end();
  const double gap = mdl.W(th) - 0.5 * tr.back()(0) * tr.back()(0);
  if (tr.status == IntegrationStatus::event ||
      ((tr.status == IntegrationStatus::step_underflow || tr.status == IntegrationStatus::domain_exit) &&
       gap < 1e-8 * mdl.W(th)))
    pc.end = ProfileEnd::left_domain;
  else if (tr.status == IntegrationStatus::completed && std::abs(theta_end) >= kHalfPi - 1e-5)
    pc.end = ProfileEnd::reached_half_pi;
  else
    pc.end = ProfileEnd::completed;
  return pc;
}

double profile_at(const ModelParams& p, const ProfileCurve& c, double theta) {
  if (c.theta.size() < 2) throw InvalidInput("profile curve has fewer than two samples");
  const bool fwd = c.theta.back() > c.theta.front();
  const double lo = fwd ? c.theta.front() : c.theta.back();
  const double hi = fwd ? c.theta.back() : c.theta.front();
  if (theta < lo || theta > hi) throw InvalidInput("theta outside the sampled profile range");
  const Model mdl(p);
  auto slope = [&](double th, double v) {
    const double rad = std::max(mdl.W(th) - 0.5 * v * v, 0.0);
    return -std::sqrt(rad / 2.0);
  };
  std::size_t i = 0;
  if (fwd) {
    i = std::upper_bound(c.theta.begin(), c.theta.end(), theta) - c.theta.begin();
  } else {
    i = std::upper_bound(c.theta.begin(), c.theta.end(), theta, std::greater<double>()) -
        c.theta.begin();
  }
  i = std::clamp<std::size_t>(i, 1, c.theta.size() - 1);
  const double t0 = c.theta[i - 1], t1 = c.theta[i];
  const double v0 = c.v[i - 1], v1 = c.v[i];
  const double hstep = t1 - t0;
  const double s = (theta - t0) / hstep;
  const double m0 = slope(t0, v0) * hstep, m1 = slope(t1, v1) * hstep;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * v1 +
         (s3 - s2) * m1;
}

}  // namespace schwarziso
