#include "schwarziso/orbits.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <thread>

namespace schwarziso {

std::string to_string(PlanarPointType t) {
  switch (t) {
    case PlanarPointType::saddle: return "saddle";
    case PlanarPointType::center: return "center";
    case PlanarPointType::degenerate: return "degenerate";
  }
  return "?";
}

std::string to_string(PlanarCase c) {
  switch (c) {
    case PlanarCase::A_a: return "A_a";
    case PlanarCase::A_b: return "A_b";
    case PlanarCase::B_case: return "B";
    case PlanarCase::C_a: return "C_a";
    case PlanarCase::C_b: return "C_b";
  }
  return "?";
}

std::string to_string(HomographicCase c) {
  switch (c) {
    case HomographicCase::planar: return "planar";
    case HomographicCase::theta_v_C0: return "theta_v_C0";
    case HomographicCase::theta_v_Cnonzero: return "theta_v_Cnonzero";
    case HomographicCase::generic_theta: return "generic_theta";
  }
  return "?";
}

std::string to_string(SinkBound b) { return b == SinkBound::printed ? "printed" : "sharp"; }

SinkBound sink_bound_from_string(const std::string& s) {
  if (s == "printed") return SinkBound::printed;
  if (s == "sharp") return SinkBound::sharp;
  throw InvalidInput("sink bound must be 'printed' or 'sharp', got '" + s + "'");
}

std::string to_string(Fate f) {
  switch (f) {
    case Fate::triple_collision_Qstar: return "triple_collision_Qstar";
    case Fate::triple_collision_Estar: return "triple_collision_Estar";
    case Fate::triple_collision_Bpm0: return "triple_collision_Bpm0";
    case Fate::double_collision_Bpm_r: return "double_collision_Bpm_r";
    case Fate::escape: return "escape";
    case Fate::bounded: return "bounded";
    case Fate::undetermined: return "undetermined";
  }
  return "?";
}

bool is_collision(Fate f) {
  return f == Fate::triple_collision_Qstar || f == Fate::triple_collision_Estar ||
         f == Fate::triple_collision_Bpm0 || f == Fate::double_collision_Bpm_r;
}

// ---- planar ----------------------------------------------------------------

namespace {

double planar_radicand(const DerivedConstants& d, double C, double h, double r) {
  return ((2.0 * h * r + 2.0 * d.V0) * r - C * C) * r + 2.0 * d.W0;
}

}  // namespace

std::vector<PlanarSample> planar_curve(const ModelParams& p, double C, double h, double r_lo,
                                       double r_hi, std::size_t n, bool log_spacing) {
  const DerivedConstants d = derive(p);
  if (!(r_lo >= 0.0) || !(r_hi > r_lo) || !std::isfinite(r_hi))
    throw InvalidInput("planar_curve needs 0 <= r_lo < r_hi");
  if (log_spacing && !(r_lo > 0.0)) throw InvalidInput("log spacing needs r_lo > 0");
  if (n < 2) throw InvalidInput("planar_curve needs n >= 2");
  std::vector<PlanarSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = double(i) / double(n - 1);
    const double r = log_spacing ? std::exp(std::log(r_lo) + f * (std::log(r_hi) - std::log(r_lo)))
                                 : r_lo + f * (r_hi - r_lo);
    PlanarSample& s = out[i];
    s.r = r;
    s.radicand = planar_radicand(d, C, h, r);
    s.valid = s.radicand >= 0.0;
    s.v = s.valid ? std::sqrt(s.radicand) : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<double> planar_turning_points(const ModelParams& p, double C, double h) {
  const DerivedConstants d = derive(p);
  Eigen::VectorXd coeff;
  if (h == 0.0) {
    coeff.resize(3);
    coeff << 2.0 * d.W0, -C * C, 2.0 * d.V0;
  } else {
    coeff.resize(4);
    coeff << 2.0 * d.W0, -C * C, 2.0 * d.V0, 2.0 * h;
  }
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeff);
  std::vector<double> roots;
  for (int i = 0; i < solver.roots().size(); ++i) {
    const auto z = solver.roots()(i);
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z)) || !(z.real() > 0.0)) continue;
    double r = z.real();
    for (int k = 0; k < 4; ++k) {  // Newton polish
      const double f = planar_radicand(d, C, h, r);
      const double df = (6.0 * h * r + 4.0 * d.V0) * r - C * C;
      if (df == 0.0) break;
      r -= f / df;
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

PlanarRegime planar_equilibria(const ModelParams& p, double C, std::optional<double> h) {
  if (!(C >= 0.0) || !std::isfinite(C)) throw InvalidInput("angular momentum must be >= 0");
  const DerivedConstants d = derive(p);
  const VectorField f(Chart::planar, p, C, 0.0);
  PlanarRegime out;
  const double C4 = C * C * C * C, C04 = d.C0 * d.C0 * d.C0 * d.C0;
  const double disc = C4 - C04;
  const bool degenerate = std::abs(disc) <= 1e-12 * C04;
  auto make = [&](double r) {
    PlanarEquilibrium e;
    e.r = r;
    State y(2);
    y << r, 0.0;
    const Eigen::MatrixXd J = f.jacobian(y);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
    e.eigenvalues = {es.eigenvalues()(0), es.eigenvalues()(1)};
    std::sort(e.eigenvalues.begin(), e.eigenvalues.end(),
              [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    const double det = J.determinant();
    const double scale = std::max(1.0, J.norm() * J.norm());
    if (degenerate || std::abs(det) <= 1e-10 * scale)
      e.type = PlanarPointType::degenerate;
    else
      e.type = det < 0.0 ? PlanarPointType::saddle : PlanarPointType::center;
    // energy level through (r, 0)
    e.h = (0.5 * C * C * r - r * r * d.V0 - d.W0) / (r * r * r);
    return e;
  };
  if (degenerate) {
    out.equilibria.push_back(make(C * C / (2.0 * d.V0)));
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    // product of roots is 3 W(0)/V(0), so r_small = 6 W(0)/(C^2 + sq)
    out.equilibria.push_back(make(6.0 * d.W0 / (C * C + sq)));
    out.equilibria.push_back(make((C * C + sq) / (2.0 * d.V0)));
  }
  if (h) {
    if (degenerate)
      out.planar_case = PlanarCase::B_case;
    else if (disc < 0.0)
      out.planar_case = *h < 0.0 ? PlanarCase::A_a : PlanarCase::A_b;
    else
      out.planar_case = *h < 0.0 ? PlanarCase::C_a : PlanarCase::C_b;
  }
  return out;
}

// ---- homographic candidates -----------------------------------------------

HomographicVerdict homographic_admissible(const ModelParams& p, double C, double theta0,
                                          double angle_tol) {
  if (!(std::abs(theta0) < kHalfPi)) throw InvalidInput("theta0 must satisfy |theta0| < pi/2");
  const Model mdl(p);
  HomographicVerdict out;
  if (std::abs(theta0) <= angle_tol) {
    out.admissible = true;
    out.hcase = HomographicCase::planar;
    return out;
  }
  const auto tv = mdl.derived().theta_v;
  const double t = std::tan(theta0);
  if (tv && std::abs(std::abs(theta0) - *tv) <= angle_tol) {
    const double th = theta0 > 0 ? *tv : -*tv;
    out.dW_at_theta = mdl.dW(th);
    if (C == 0.0) {
      out.hcase = HomographicCase::theta_v_C0;
      out.admissible = out.dW_at_theta == 0.0;
      return out;
    }
    out.hcase = HomographicCase::theta_v_Cnonzero;
    const double W = mdl.W(th);
    out.r0_squared = W / mdl.V(th) / std::tan(th) * (out.dW_at_theta / W - 3.0 * std::tan(th));
    out.admissible = out.r0_squared > 0.0;
    return out;
  }
  out.hcase = HomographicCase::generic_theta;
  out.mismatch_V = mdl.dV(theta0) / mdl.V(theta0) - t;
  out.mismatch_W = mdl.dW(theta0) / (3.0 * mdl.W(theta0)) - t;
  out.admissible = false;
  return out;
}

// ---- sink predicate ---------------------------------------------------------

double sink_radius(const ModelParams& p, double C, SinkBound bound) {
  const DerivedConstants d = derive(p);
  const double x = C * C / (4.0 * d.V0);
  return bound == SinkBound::printed ? std::sqrt(x) : x;
}

bool sink_predicate(const ModelParams& p, double C, const RegState& s, SinkBound bound) {
  const DerivedConstants d = derive(p);
  const double lhs = bound == SinkBound::printed ? 2.0 * s.r * s.r * d.V0 : 2.0 * s.r * d.V0;
  return lhs < 0.5 * C * C && s.v < 0.0;
}

double w_squared_from_energy(const ModelParams& p, double C, double h, double r, double v,
                             double theta) {
  const Model mdl(p);
  const double c = std::cos(theta);
  const double c3 = c * c * c, c4 = c3 * c, c6 = c3 * c3;
  const double U = mdl.U(theta);
  return (2.0 * h * r * r * r * c6 - (v * v * c3 - 2.0 * U) * c3 - C * C * r * c4 +
          2.0 * r * r * mdl.V_cos_pow(theta, 6)) /
         U;
}

double energy_of(const ModelParams& p, double C, const RegState& s) {
  if (!(s.r > 0.0) || !(std::abs(s.theta) < kHalfPi))
    throw InvalidInput("energy_of needs r > 0 and |theta| < pi/2");
  return energy_residual(p, C, 0.0, s) /
         (2.0 * s.r * s.r * s.r * std::pow(std::cos(s.theta), 6));
}

// ---- fate classification ----------------------------------------------------

namespace {

struct Sample {
  double t, r, theta;
};

struct Tracker {
  bool have_prev = false;
  double prev_r = 0, prev_v = 0;
  double max_dr = 0, max_dv = 0;
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0;
  std::deque<Sample> window;

  void add(double t, const ChartView& cv) {
    if (have_prev) {
      max_dr = std::max(max_dr, cv.r - prev_r);
      max_dv = std::max(max_dv, cv.v - prev_v);
    }
    have_prev = true;
    prev_r = cv.r;
    prev_v = cv.v;
    r_min = std::min(r_min, cv.r);
    r_max = std::max(r_max, cv.r);
    window.push_back({t, cv.r, cv.theta});
    while (window.size() > 2 && window.front().r > 10.0 * cv.r) window.pop_front();
  }

  [[nodiscard]] std::optional<double> average_theta() const {
    if (window.size() < 2) return std::nullopt;
    double num = 0, den = 0;
    for (std::size_t i = 1; i < window.size(); ++i) {
      const double dt = window[i].t - window[i - 1].t;
      num += 0.5 * dt * (window[i].theta + window[i - 1].theta);
      den += dt;
    }
    if (!(den > 0)) return window.back().theta;
    return num / den;
  }
};

constexpr double kLongSpan = 1e12;

}  // namespace

FateReport classify_fate(const ModelParams& p, double C, double h, const RegState& s0,
                         const FateOptions& opt) {
  const Model mdl(p);
  const DerivedConstants& d = mdl.derived();
  if (!(s0.r > 0.0)) throw InvalidInput("classify_fate needs r > 0 at the start");
  if (!(std::abs(s0.theta) <= kHalfPi)) throw InvalidInput("theta outside [-pi/2, pi/2]");
  const double res0 = energy_residual(p, C, h, s0);
  const double c0 = std::cos(s0.theta);
  const double c3 = c0 * c0 * c0;
  const double r0 = s0.r;
  const double scale =
      std::max({1.0, mdl.U(s0.theta) * s0.w * s0.w, s0.v * s0.v * c3 * c3, 2.0 * mdl.U(s0.theta) * c3,
                C * C * r0 * c3 * c0, 2.0 * r0 * r0 * std::abs(mdl.V_cos_pow(s0.theta, 6)),
                2.0 * std::abs(h) * r0 * r0 * r0 * c3 * c3});
  if (!(std::abs(res0) <= opt.initial_residual_tol * scale)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.3g (scale %.3g)", res0, scale);
    throw InvalidInput(std::string("initial state is inconsistent with (h, C): energy residual ") + buf);
  }

  FateReport rep;
  Tracker trk;
  std::vector<double> crossing_r;
  const double r_init = s0.r;
  long used = 0;
  double phi = 0.0;

  IntegratorOptions io;
  io.rtol = opt.rtol;
  io.atol = opt.atol;
  io.store_stride = opt.keep_trajectory ? 1 : 0;

  auto escape_event = [&](const VectorField& f) {
    EventSpec e = event_r_above(opt.escape_factor * r_init);
    e.label = "escape";
    e.accept = [&f, h](double t, const State& y) { return h >= 0.0 && f.view(y, t).v > 0.0; };
    return e;
  };

  State yreg(5);
  const bool start_regularized = std::abs(s0.theta) > kHalfPi - opt.switch_theta_margin;
  if (!start_regularized) {
    // phase 1: reduced chart, physical time
    const VectorField f(Chart::reduced, p, C, h, true);
    const CylState cs = mcgehee_to_cyl(p, reg_to_mcgehee(p, s0));
    State y0(5);
    y0 << cs.R, cs.z, cs.P_R, cs.P_z, 0.0;
    std::vector<EventSpec> ev;
    EventSpec sw;
    sw.kind = EventKind::custom;
    sw.direction = -1;
    sw.label = "switch_r";
    const double r_switch = opt.switch_r_factor * r_init;
    sw.custom = [&f, r_switch](double t, const State& y) { return f.view(y, t).r - r_switch; };
    ev.push_back(sw);
    ev.push_back(event_theta_near_half_pi(opt.switch_theta_margin));
    ev.back().label = "switch_theta";
    ev.push_back(escape_event(f));
    ev.push_back(event_plane_crossing());
    io.max_steps = opt.max_steps;
    io.observer = [&](double t, const State& y) { trk.add(t, f.view(y, t)); };
    trk.add(0.0, f.view(y0));
    Trajectory tr = integrate(f, y0, 0.0, kLongSpan, io, ev);
    used += tr.stats.accepted;
    rep.t_reduced = tr.t_end();
    rep.max_residual = std::max(rep.max_residual, tr.stats.max_abs_residual);
    rep.status = tr.status;
    for (const auto& e : tr.events)
      if (e.spec_index == 3) crossing_r.push_back(f.view(e.state, e.t).r);
    const State yend = tr.status == IntegrationStatus::event ? tr.events.back().state : tr.back();
    phi = yend(4);
    const CylState ce{yend(0), yend(1), yend(2), yend(3)};
    const McGeheeState me = cyl_to_mcgehee(p, ce);
    rep.final_state = mcgehee_to_reg(p, me);
    if (opt.keep_trajectory) rep.legs.push_back(tr);

    bool switch_now = false;
    if (tr.status == IntegrationStatus::event) {
      const std::size_t k = tr.events.back().spec_index;
      if (k == 2) {
        rep.fate = Fate::escape;
      } else {
        switch_now = true;
      }
    } else if (tr.status == IntegrationStatus::budget_exhausted) {
      rep.fate = trk.r_min >= r_switch && trk.r_max < opt.escape_factor * r_init ? Fate::bounded
                                                                                 : Fate::undetermined;
      rep.note = "budget exhausted in the reduced chart";
    } else {
      rep.fate = Fate::undetermined;
      rep.note = "reduced chart stopped with status " + to_string(tr.status);
    }
    if (!switch_now) {
      rep.winding = phi;
      rep.plane_crossings = int(crossing_r.size());
      rep.max_r_increase = trk.max_dr;
      rep.max_v_increase = trk.max_dv;
      rep.r_min = trk.r_min;
      rep.r_max = trk.r_max;
      rep.steps = used;
      rep.limiting_theta = std::nullopt;
      return rep;
    }
    yreg << rep.final_state.r, rep.final_state.v, rep.final_state.theta, rep.final_state.w, phi;
  } else {
    yreg << s0.r, s0.v, s0.theta, s0.w, 0.0;
    trk.add(0.0, {s0.r, s0.v, s0.theta});
  }

  // phase 2: regularized chart
  const VectorField g(Chart::regularized, p, C, h, true);
  std::vector<EventSpec> ev;
  ev.push_back(event_r_below(opt.triple_r));
  ev.back().label = "triple";
  EventSpec dc;
  dc.kind = EventKind::custom;
  dc.direction = +1;
  dc.label = "double";
  dc.custom = [&opt](double, const State& y) {
    return std::abs(y(2)) - (kHalfPi - opt.double_theta_margin);
  };
  dc.accept = [&opt](double, const State& y) { return y(0) > opt.double_r_min; };
  ev.push_back(dc);
  ev.push_back(escape_event(g));
  ev.push_back(event_plane_crossing());
  io.max_steps = std::max(1L, opt.max_steps - used);
  io.observer = [&](double t, const State& y) { trk.add(t, g.view(y, t)); };
  trk.window.clear();
  trk.add(0.0, g.view(yreg));
  Trajectory tr = integrate(g, yreg, 0.0, kLongSpan, io, ev);
  used += tr.stats.accepted;
  rep.sigma_regularized = tr.t_end();
  rep.max_residual = std::max(rep.max_residual, tr.stats.max_abs_residual);
  rep.status = tr.status;
  for (const auto& e : tr.events)
    if (e.spec_index == 3) crossing_r.push_back(e.state(0));
  const State yend = tr.status == IntegrationStatus::event ? tr.events.back().state : tr.back();
  rep.final_state = {yend(0), yend(1), yend(2), yend(3)};
  rep.winding = yend(4);
  if (opt.keep_trajectory) rep.legs.push_back(tr);
  trk.add(tr.t_end(), g.view(yend));

  rep.plane_crossings = int(crossing_r.size());
  const double r_end = rep.final_state.r;
  rep.crossings_in_terminal_decade =
      int(std::count_if(crossing_r.begin(), crossing_r.end(), [r_end](double r) { return r <= 10.0 * r_end; }));
  rep.max_r_increase = trk.max_dr;
  rep.max_v_increase = trk.max_dv;
  rep.r_min = trk.r_min;
  rep.r_max = trk.r_max;
  rep.steps = used;

  if (tr.status == IntegrationStatus::event) {
    const std::size_t k = tr.events.back().spec_index;
    if (k == 0) {
      rep.limiting_theta = trk.average_theta();
      const double th_lim = rep.limiting_theta.value_or(rep.final_state.theta);
      const double v = rep.final_state.v;
      const double tol = opt.limit_angle_tol;
      const bool v_q = v < -opt.triple_v_factor * std::sqrt(2.0 * d.W0);
      if (std::abs(th_lim) > kHalfPi - tol || std::abs(rep.final_state.theta) > kHalfPi - tol) {
        rep.fate = Fate::triple_collision_Bpm0;
      } else if (v_q && (rep.crossings_in_terminal_decade > 0 || std::abs(th_lim) < tol)) {
        rep.fate = Fate::triple_collision_Qstar;
      } else if (d.theta_w && std::abs(std::abs(th_lim) - *d.theta_w) < tol &&
                 v < -opt.triple_v_factor * std::sqrt(2.0 * mdl.W(*d.theta_w))) {
        rep.fate = Fate::triple_collision_Estar;
      } else {
        rep.fate = Fate::undetermined;
        rep.note = "triple collision with an unrecognized limit";
      }
    } else if (k == 1) {
      rep.fate = Fate::double_collision_Bpm_r;
      rep.collision_r = rep.final_state.r;
      rep.limiting_theta = rep.final_state.theta > 0 ? kHalfPi : -kHalfPi;
    } else {
      rep.fate = Fate::escape;
    }
  } else if (tr.status == IntegrationStatus::budget_exhausted) {
    rep.fate = trk.r_min > opt.triple_r && trk.r_max < opt.escape_factor * r_init ? Fate::bounded
                                                                                  : Fate::undetermined;
    rep.note = "budget exhausted in the regularized chart";
  } else if (tr.status == IntegrationStatus::domain_exit && rep.final_state.r > opt.double_r_min &&
             std::abs(rep.final_state.theta) > kHalfPi - 1e3 * opt.double_theta_margin) {
    rep.fate = Fate::double_collision_Bpm_r;
    rep.collision_r = rep.final_state.r;
    rep.limiting_theta = rep.final_state.theta > 0 ? kHalfPi : -kHalfPi;
    rep.note = "left the chart at the binary-collision wall";
  } else {
    rep.fate = Fate::undetermined;
    rep.note = "regularized chart stopped with status " + to_string(tr.status);
  }
  return rep;
}

std::vector<FateReport> classify_batch(const ModelParams& p, const std::vector<FateJob>& jobs,
                                       const FateOptions& opt, unsigned threads) {
  std::vector<FateReport> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, jobs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        out[i] = classify_fate(p, jobs[i].C, jobs[i].h, jobs[i].state0, opt);
      } catch (const std::exception& e) {
        out[i].fate = Fate::undetermined;
        out[i].status = IntegrationStatus::invalid_initial;
        out[i].note = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace schwarziso
