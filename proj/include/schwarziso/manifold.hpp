#pragma once

// Flow on the triple collision manifold (r = 0): its six equilibria and
// their spectra, invariant-manifold shooting, the connection condition and
// the dv/dtheta profile equation.

#include "schwarziso/charts.hpp"
#include "schwarziso/flow.hpp"
#include "schwarziso/model.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace schwarziso {

enum class CMName { Q, Qstar, Eplus, Eminus, EplusStar, EminusStar };
enum class CMClass { spiral_source, spiral_sink, saddle, other };

std::string to_string(CMName n);
std::string to_string(CMClass c);
CMName cm_name_from_string(const std::string& s);

using Spectrum = std::vector<std::complex<double>>;

struct CMEquilibrium {
  CMName name = CMName::Q;
  RegState state;
  double theta_c = 0;  // 0 or +-theta_w
  double sign = 1;     // +1 for v > 0, -1 for v < 0
  // spectrum on the 3-dimensional tangent space of the energy relation,
  // from an orthonormal kernel basis (authoritative)
  Spectrum tangent_eigenvalues;
  // same spectrum from the explicit basis {(dF/dv, -dF/dr, 0, 0), e_theta, e_w}
  Spectrum tangent_eigenvalues_explicit_basis;
  double radial_eigenvalue = 0;  // +-sqrt(2 cos^3 theta_c)
  // roots of lambda^2 -+ sqrt(c^3/2) lambda - (W''/W) c^3 = 0 plus lambda_r
  Spectrum closed_form;
  // the two eigenvalues of the flow restricted to the collision manifold
  Spectrum delta_eigenvalues;
  Spectrum delta_closed_form;
  CMClass classification = CMClass::other;
  int dim_unstable = 0;  // in the 4-dimensional regularized phase space
  int dim_stable = 0;
  // unstable/stable eigenvector on the collision manifold, as (theta, w) direction
  double unstable_dir_theta = 0, unstable_dir_w = 0;
  double stable_dir_theta = 0, stable_dir_w = 0;
};

/// Closed form at theta_c = 0 with the constant 25 B + 16 B1 (1 - 24 (mu - 1)).
Spectrum q_closed_form_pair(const ModelParams& p, double sign);

/// All six equilibria.  Requires the interior minimum of W (RegimeError otherwise).
std::vector<CMEquilibrium> cm_equilibria(const ModelParams& p, double C);
CMEquilibrium cm_equilibrium(const ModelParams& p, double C, CMName name);

enum class TraceOutcome { B_plus_0, B_minus_0, Qstar, E_connection, undetermined };
std::string to_string(TraceOutcome o);

struct TraceOptions {
  double eps = 1e-7;
  double K_factor = 5.0;          // v < -K_factor sqrt(2 W(0))
  double theta_margin = 0.05;     // |theta| > pi/2 - margin
  double qstar_radius = 1e-3;
  double saddle_radius = 1e-5;
  double tau_max = 1e3;
  bool richardson = true;         // repeat at eps/10
  IntegratorOptions integrator{};
};

struct ManifoldTrace {
  TraceOutcome outcome = TraceOutcome::undetermined;
  std::optional<CMName> connected_to;  // for E_connection
  Trajectory trajectory;               // collision chart (v, theta, w)
  double tau_end = 0;
  TraceOutcome richardson_outcome = TraceOutcome::undetermined;
  bool richardson_agrees = true;
  double max_constraint_residual = 0;
};

enum class Branch { w_pos, w_neg };

/// Shoots the unstable manifold of a saddle (E+-, E+-*) on the collision
/// manifold into the requested half-space w > 0 or w < 0.
ManifoldTrace trace_manifold(const ModelParams& p, const CMEquilibrium& eq, Branch branch,
                             const TraceOptions& opt = {});

/// One ray of the 2-dimensional unstable manifold of Q: the start point is
/// Q + eps (0, cos a, sin a) projected onto the collision manifold.
ManifoldTrace trace_ray(const ModelParams& p, double angle, const TraceOptions& opt = {});

struct ConnectionCondition {
  double lhs = 0;  // sqrt(W(0)/2)
  double rhs = 0;  // sqrt(2 W(theta_w))/theta_w
  bool cond_up_holds = false;
  double param_lhs = 0;  // cos^2(sqrt(Y))
  double param_rhs = 0;  // 1/((1 - 1/mu)(1 + gamma^(2/5)/(mu - 1)^(3/5)))
  double sqrt_Y = 0;
  bool cond_param_holds = false;
  bool agree = false;
};

ConnectionCondition connection_condition(const ModelParams& p);

struct GradientAudit {
  bool monotone = true;
  double max_violation = 0;  // largest increase of v between consecutive samples
};

/// v must be non-increasing along a collision-chart trajectory.
GradientAudit gradient_like_audit(const Trajectory& traj, double tol = 1e-9);

enum class ProfileEnd { reached_half_pi, left_domain, completed };
std::string to_string(ProfileEnd e);

struct ProfileCurve {
  std::vector<double> theta;
  std::vector<double> v;
  ProfileEnd end = ProfileEnd::completed;
};

/// Integrates dv/dtheta = -sqrt(W(theta) - v^2/2)/sqrt(2) from (0, v_at_zero)
/// to theta_end (negative values integrate backwards) or until the curve
/// meets the boundary |v| = sqrt(2 W(theta)).
ProfileCurve profile_curve(const ModelParams& p, double v_at_zero,
                           double theta_end = kHalfPi - 1e-6,
                           const IntegratorOptions& opt = {});

/// Evaluates a sampled profile curve at theta by cubic Hermite interpolation
/// of the samples (using the ODE for slopes).
double profile_at(const ModelParams& p, const ProfileCurve& c, double theta);

}  // namespace schwarziso
