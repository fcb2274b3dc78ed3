#include "schwarziso/flow.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>

namespace schwarziso {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Dense {
  double t0 = 0, h = 0;
  State r1, r2, r3, r4, r5;
  [[nodiscard]] State at(double t) const {
    const double s = (t - t0) / h, s1 = 1.0 - s;
    return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
  }
};

int default_direction(EventKind k) {
  switch (k) {
    case EventKind::r_below:
    case EventKind::v_below: return -1;
    case EventKind::r_above:
    case EventKind::theta_near_pm_half: return +1;
    case EventKind::plane_crossing:
    case EventKind::custom: return 0;
  }
  return 0;
}

double event_value(const VectorField& f, const EventSpec& e, double t, const State& y) {
  if (e.kind == EventKind::custom) return e.custom(t, y);
  const ChartView cv = f.view(y, t);
  switch (e.kind) {
    case EventKind::r_below:
    case EventKind::r_above: return cv.r - e.threshold;
    case EventKind::theta_near_pm_half: return std::abs(cv.theta) - (kHalfPi - e.threshold);
    case EventKind::v_below: return cv.v - e.threshold;
    case EventKind::plane_crossing: return cv.theta;
    case EventKind::custom: break;
  }
  return 0.0;
}

int sgn(double x) { return (x > 0) - (x < 0); }

double initial_step(const VectorField& f, double t0, const State& y0, const State& f0,
                    double dir, const IntegratorOptions& o) {
  // Hairer-Wanner starting step heuristic
  const Eigen::ArrayXd sc = o.atol + o.rtol * y0.array().abs();
  const double d0 = std::sqrt((y0.array() / sc).square().mean());
  const double d1n = std::sqrt((f0.array() / sc).square().mean());
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, o.max_step);
  State y1 = y0 + dir * h0 * f0, f1;
  if (!f.rhs(t0 + dir * h0, y1, f1)) return h0 * 1e-3;
  const double d2 = std::sqrt((((f1 - f0).array()) / sc).square().mean()) / h0;
  const double m = std::max(d1n, d2);
  const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
  return std::min({100.0 * h0, h1, o.max_step});
}

}  // namespace

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::r_below: return "r_below";
    case EventKind::r_above: return "r_above";
    case EventKind::theta_near_pm_half: return "theta_near_pm_half";
    case EventKind::v_below: return "v_below";
    case EventKind::plane_crossing: return "plane_crossing";
    case EventKind::custom: return "custom";
  }
  return "?";
}

std::string to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::completed: return "completed";
    case IntegrationStatus::event: return "event";
    case IntegrationStatus::step_underflow: return "step_underflow";
    case IntegrationStatus::budget_exhausted: return "budget_exhausted";
    case IntegrationStatus::domain_exit: return "domain_exit";
    case IntegrationStatus::invalid_initial: return "invalid_initial";
  }
  return "?";
}

EventSpec event_r_below(double level, bool terminal) {
  EventSpec e;
  e.kind = EventKind::r_below;
  e.threshold = level;
  e.terminal = terminal;
  e.label = "r_below";
  return e;
}

EventSpec event_r_above(double level, bool terminal) {
  EventSpec e;
  e.kind = EventKind::r_above;
  e.threshold = level;
  e.terminal = terminal;
  e.label = "r_above";
  return e;
}

EventSpec event_theta_near_half_pi(double margin, bool terminal) {
  EventSpec e;
  e.kind = EventKind::theta_near_pm_half;
  e.threshold = margin;
  e.terminal = terminal;
  e.label = "theta_near_pm_half";
  return e;
}

EventSpec event_v_below(double level, bool terminal) {
  EventSpec e;
  e.kind = EventKind::v_below;
  e.threshold = level;
  e.terminal = terminal;
  e.label = "v_below";
  return e;
}

EventSpec event_plane_crossing() {
  EventSpec e;
  e.kind = EventKind::plane_crossing;
  e.terminal = false;
  e.label = "plane_crossing";
  return e;
}

Trajectory integrate(const VectorField& f, const State& y0, double t0, double t1,
                     const IntegratorOptions& o, const std::vector<EventSpec>& events) {
  if (!(o.rtol > 0.0) || !(o.atol > 0.0)) throw InvalidInput("integrator tolerances must be > 0");
  for (const auto& e : events) {
    if (!std::isfinite(e.threshold)) throw InvalidInput("event thresholds must be finite");
    if (e.kind == EventKind::custom && !e.custom) throw InvalidInput("custom event needs a function");
  }
  f.check_initial(y0, t0);

  Trajectory tr;
  tr.chart = f.chart();
  tr.with_phase = f.with_phase();
  tr.t.push_back(t0);
  tr.states.push_back(y0);
  auto& st = tr.stats;
  st.max_abs_residual = std::abs(f.residual(y0, t0));

  if (t1 == t0) return tr;
  const double dir = t1 > t0 ? 1.0 : -1.0;

  State y = y0, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  if (!f.rhs(t0, y, k1)) {
    tr.status = IntegrationStatus::invalid_initial;
    return tr;
  }
  ++st.evaluations;
  double h = o.initial_step > 0 ? o.initial_step : initial_step(f, t0, y, k1, dir, o);
  ++st.evaluations;
  h = std::min(h, o.max_step);
  double t = t0;

  // Last nonzero sign of every event function.
  std::vector<int> last_sign(events.size(), 0);
  std::vector<double> last_val(events.size(), 0.0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    last_val[i] = event_value(f, events[i], t0, y0);
    last_sign[i] = sgn(last_val[i]);
  }

  const double safety = 0.9, fac_min = 0.2, fac_max = 5.0;
  bool last = false;
  long since_store = 0;

  while (true) {
    if (st.accepted >= o.max_steps) {
      tr.status = IntegrationStatus::budget_exhausted;
      break;
    }
    const double hmin = o.min_step_factor * std::max(1.0, std::abs(t));
    if (h < hmin) {
      tr.status = IntegrationStatus::step_underflow;
      break;
    }
    if ((t + dir * h - t1) * dir >= 0.0) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;

    bool ok = true;
    ytmp = y + hs * a21 * k1;
    ok = ok && f.rhs(t + c2 * hs, ytmp, k2);
    if (ok) {
      ytmp = y + hs * (a31 * k1 + a32 * k2);
      ok = f.rhs(t + c3 * hs, ytmp, k3);
    }
    if (ok) {
      ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      ok = f.rhs(t + c4 * hs, ytmp, k4);
    }
    if (ok) {
      ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      ok = f.rhs(t + c5 * hs, ytmp, k5);
    }
    if (ok) {
      ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      ok = f.rhs(t + hs, ytmp, k6);
    }
    if (ok) {
      ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      ok = f.rhs(t + hs, ynew, k7);
    }
    st.evaluations += 6;
    if (!ok) {
      ++st.rejected;
      h *= 0.25;
      last = false;
      continue;
    }

    const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Eigen::ArrayXd sc =
        o.atol + o.rtol * y.array().abs().max(ynew.array().abs());
    const double en = std::sqrt((err.array() / sc).square().mean());
    if (!std::isfinite(en)) {
      ++st.rejected;
      h *= 0.25;
      last = false;
      continue;
    }
    if (en > 1.0) {
      ++st.rejected;
      h *= std::max(fac_min, safety * std::pow(en, -0.2));
      last = false;
      continue;
    }

    // accepted
    ++st.accepted;
    Dense dn;
    dn.t0 = t;
    dn.h = hs;
    dn.r1 = y;
    dn.r2 = ynew - y;
    dn.r3 = hs * k1 - dn.r2;
    dn.r4 = dn.r2 - hs * k7 - dn.r3;
    dn.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    const double tnew = last ? t1 : t + hs;

    // events on [t, tnew]
    struct Hit {
      double t;
      std::size_t i;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const EventSpec& e = events[i];
      const double gnew = event_value(f, e, tnew, ynew);
      const int snew = sgn(gnew);
      if (snew != 0 && last_sign[i] != 0 && snew != last_sign[i]) {
        int want = e.direction != 0 ? e.direction : default_direction(e.kind);
        if (want == 0 || want == snew) {
          auto g = [&](double tt) { return event_value(f, e, tt, dn.at(tt)); };
          double a = t, b = tnew;
          const double ga = last_val[i], gb = gnew;
          double troot = b;
          if (ga == 0.0) {
            troot = a;
          } else if (sgn(ga) != sgn(gb)) {
            boost::uintmax_t iters = 200;
            auto tol = [&](double x, double y2) { return std::abs(x - y2) <= o.event_tol; };
            try {
              auto br = dir > 0 ? boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters)
                                : boost::math::tools::toms748_solve(g, b, a, gb, ga, tol, iters);
              // the side past the crossing, so the new sign holds there
              troot = dir > 0 ? br.second : br.first;
            } catch (const std::exception&) {
              troot = b;
            }
          }
          hits.push_back({troot, i});
        }
      }
      if (snew != 0) last_sign[i] = snew;
      last_val[i] = gnew;
    }
    std::sort(hits.begin(), hits.end(),
              [&](const Hit& x, const Hit& y2) { return (x.t - y2.t) * dir < 0; });

    bool stop = false;
    for (const Hit& hit : hits) {
      const EventSpec& e = events[hit.i];
      State ye = dn.at(hit.t);
      bool term = e.terminal;
      if (term && e.accept && !e.accept(hit.t, ye)) term = false;
      tr.events.push_back({hit.t, hit.i, e.label.empty() ? to_string(e.kind) : e.label, term, ye});
      if (term) {
        if (o.project) f.project(ye);
        tr.t.push_back(hit.t);
        tr.states.push_back(ye);
        st.max_abs_residual = std::max(st.max_abs_residual, std::abs(f.residual(ye, hit.t)));
        tr.status = IntegrationStatus::event;
        stop = true;
        break;
      }
    }
    if (stop) break;

    t = tnew;
    y = ynew;
    bool projected = false;
    if (o.project) {
      f.project(y);
      projected = true;
    }
    if (projected) {
      if (!f.rhs(t, y, k1)) {
        tr.t.push_back(t);
        tr.states.push_back(y);
        tr.status = IntegrationStatus::domain_exit;
        break;
      }
      ++st.evaluations;
    } else {
      k1 = k7;
    }
    const double res = std::abs(f.residual(y, t));
    if (std::isfinite(res)) st.max_abs_residual = std::max(st.max_abs_residual, res);
    if (o.observer) o.observer(t, y);

    if (!f.in_domain(y, t)) {
      tr.t.push_back(t);
      tr.states.push_back(y);
      tr.status = IntegrationStatus::domain_exit;
      break;
    }
    if (last) {
      tr.t.push_back(t);
      tr.states.push_back(y);
      tr.status = IntegrationStatus::completed;
      break;
    }
    ++since_store;
    if (o.store_stride > 0 && since_store >= o.store_stride) {
      tr.t.push_back(t);
      tr.states.push_back(y);
      since_store = 0;
    }

    const double fac = std::clamp(safety * std::pow(std::max(en, 1e-12), -0.2), fac_min, fac_max);
    h = std::min(h * fac, o.max_step);
  }

  if (tr.status != IntegrationStatus::completed && tr.status != IntegrationStatus::event &&
      tr.t.back() != t) {
    tr.t.push_back(t);
    tr.states.push_back(y);
  }
  return tr;
}

}  // namespace schwarziso
