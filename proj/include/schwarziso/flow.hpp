#pragma once

// Vector fields for every chart and an adaptive Dormand-Prince 5(4)
// integrator with dense output, event location and optional projection
// back onto the chart's invariant relation.

#include "schwarziso/charts.hpp"
#include "schwarziso/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace schwarziso {

using State = Eigen::VectorXd;

enum class Chart {
  reduced,      // (R, z, P_R, P_z), physical time
  mcgehee,      // (r, v, theta, u), time tau
  regularized,  // (r, v, theta, w), time sigma, h substituted in v'
  collision,    // (v, theta, w) on r = 0
  planar,       // (r, v) on theta = u = 0
  profile       // v as a function of theta on the collision manifold
};

std::string to_string(Chart c);
Chart chart_from_string(const std::string& s);

/// Base dimension of a chart (without the optional phase coordinate).
int chart_dim(Chart c);

/// Coordinate names in storage order, phase last when present.
std::vector<std::string> chart_columns(Chart c, bool with_phase);

/// (r, v, theta) read off a state of any chart.  `t` is only used by the
/// profile chart, whose independent variable is theta.
struct ChartView {
  double r;
  double v;
  double theta;
};

class VectorField {
 public:
  VectorField(Chart chart, const ModelParams& p, double C, double h, bool with_phase = false);

  [[nodiscard]] Chart chart() const { return chart_; }
  [[nodiscard]] const Model& model() const { return model_; }
  [[nodiscard]] double C() const { return C_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] bool with_phase() const { return with_phase_; }
  [[nodiscard]] int dim() const { return chart_dim(chart_) + (with_phase_ ? 1 : 0); }

  /// Non-throwing evaluation used by the integrator; false when the state
  /// is outside the field's domain or the result is not finite.
  bool rhs(double t, const State& y, State& dy) const;

  /// Checked evaluation: throws InvalidInput on domain violations.
  [[nodiscard]] State evaluate(const State& y, double t = 0.0) const;

  /// Energy-type residual of the chart (0 for the profile chart).
  [[nodiscard]] double residual(const State& y, double t = 0.0) const;

  /// Newton projection onto residual = 0 along its gradient.  No-op for
  /// charts without a relation or where the gradient vanishes.
  void project(State& y) const;

  /// Domain test applied to accepted steps.
  [[nodiscard]] bool in_domain(const State& y, double t = 0.0) const;

  /// Initial-state test; collision states must lie on the collision
  /// manifold and profile states inside the square-root domain.
  void check_initial(const State& y, double t = 0.0, double tol = 1e-8) const;

  [[nodiscard]] ChartView view(const State& y, double t = 0.0) const;

  /// Exact Jacobian of the base field (forward-mode automatic differentiation).
  [[nodiscard]] Eigen::MatrixXd jacobian(const State& y, double t = 0.0) const;
  /// Exact gradient of the residual.
  [[nodiscard]] Eigen::VectorXd residual_gradient(const State& y, double t = 0.0) const;

  /// Extra slack on |theta| <= pi/2 for charts that reach the double collision
  /// boundary.
  double theta_slack = 1e-6;

 private:
  Chart chart_;
  Model model_;
  double C_;
  double h_;
  bool with_phase_;
};

enum class EventKind { r_below, r_above, theta_near_pm_half, v_below, plane_crossing, custom };

std::string to_string(EventKind k);

struct EventSpec {
  EventKind kind = EventKind::custom;
  double threshold = 0.0;  // r_below/r_above/v_below: level; theta_near_pm_half: margin
  int direction = 0;       // +1 rising, -1 falling, 0 either; 0 keeps the kind's default
  bool terminal = true;
  std::string label;
  std::function<double(double, const State&)> custom;
  // Optional acceptance test evaluated at the located root; when it returns
  // false a terminal event is logged but integration continues.
  std::function<bool(double, const State&)> accept;
};

struct EventRecord {
  double t;
  std::size_t spec_index;
  std::string label;
  bool terminal;
  State state;
};

enum class IntegrationStatus {
  completed,        // reached the end of the span
  event,            // stopped by a terminal event
  step_underflow,   // step size fell below the resolvable minimum
  budget_exhausted, // max_steps accepted steps
  domain_exit,      // an accepted step left the chart's domain
  invalid_initial
};

std::string to_string(IntegrationStatus s);

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks one automatically
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 10'000'000;
  int store_stride = 1;  // keep every n-th accepted step; 0 keeps only the endpoints
  bool project = false;
  double event_tol = 1e-12;
  double min_step_factor = 1e-14;  // underflow when |step| < factor * max(1, |t|)
  std::function<void(double, const State&)> observer;  // called on every accepted step
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double max_abs_residual = 0.0;
};

struct Trajectory {
  Chart chart = Chart::reduced;
  bool with_phase = false;
  std::vector<double> t;
  std::vector<State> states;
  std::vector<EventRecord> events;
  IntegratorStats stats;
  IntegrationStatus status = IntegrationStatus::completed;

  [[nodiscard]] const State& back() const { return states.back(); }
  [[nodiscard]] double t_end() const { return t.back(); }
};

/// Integrates from (t0, y0) towards t1 (t1 < t0 integrates backwards).
Trajectory integrate(const VectorField& field, const State& y0, double t0, double t1,
                     const IntegratorOptions& opt = {}, const std::vector<EventSpec>& events = {});

/// Convenience builders for the common events.
EventSpec event_r_below(double level, bool terminal = true);
EventSpec event_r_above(double level, bool terminal = true);
EventSpec event_theta_near_half_pi(double margin, bool terminal = true);
EventSpec event_v_below(double level, bool terminal = true);
EventSpec event_plane_crossing();

}  // namespace schwarziso
