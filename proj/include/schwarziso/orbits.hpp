#pragma once

// Planar (homographic) motion, exclusion of the other homographic
// candidates, the global sink predicate and orbit-fate classification.

#include "schwarziso/charts.hpp"
#include "schwarziso/flow.hpp"
#include "schwarziso/model.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace schwarziso {

// ---- planar motion --------------------------------------------------------

struct PlanarSample {
  double r = 0;
  double radicand = 0;  // 2 h r^3 + 2 V(0) r^2 - C^2 r + 2 W(0)
  bool valid = false;   // radicand >= 0
  double v = 0;         // +sqrt(radicand) when valid, NaN otherwise
};

/// Level set of the planar energy on n log- or linearly spaced radii.
std::vector<PlanarSample> planar_curve(const ModelParams& p, double C, double h, double r_lo,
                                       double r_hi, std::size_t n, bool log_spacing = false);

/// Positive roots of the planar radicand (turning points), ascending.
std::vector<double> planar_turning_points(const ModelParams& p, double C, double h);

enum class PlanarPointType { saddle, center, degenerate };
std::string to_string(PlanarPointType t);

struct PlanarEquilibrium {
  double r = 0;
  PlanarPointType type = PlanarPointType::degenerate;
  std::array<std::complex<double>, 2> eigenvalues{};  // numerical, of the 2x2 linearization
  double h = 0;  // energy level through the point
};

enum class PlanarCase { A_a, A_b, B_case, C_a, C_b };
std::string to_string(PlanarCase c);

struct PlanarRegime {
  std::optional<PlanarCase> planar_case;  // set when an energy is supplied
  std::vector<PlanarEquilibrium> equilibria;
};

PlanarRegime planar_equilibria(const ModelParams& p, double C, std::optional<double> h = std::nullopt);

// ---- homographic candidates ----------------------------------------------

enum class HomographicCase { planar, theta_v_C0, theta_v_Cnonzero, generic_theta };
std::string to_string(HomographicCase c);

struct HomographicVerdict {
  bool admissible = false;
  HomographicCase hcase = HomographicCase::generic_theta;
  // theta_v_Cnonzero: the right side of the r0^2 formula (negative)
  double r0_squared = 0;
  // theta_v_C0: W'(theta_v), nonzero in the generic case
  double dW_at_theta = 0;
  // generic_theta: V'/V - tan(theta0) and W'/(3W) - tan(theta0)
  double mismatch_V = 0;
  double mismatch_W = 0;
};

HomographicVerdict homographic_admissible(const ModelParams& p, double C, double theta0,
                                          double angle_tol = 1e-9);

// ---- sink predicate ------------------------------------------------------

/// `printed`: 2 r^2 V(0) < C^2/2.  `sharp`: 2 r V(0) < C^2/2, the bound that
/// actually makes v' negative along the regularized flow.
enum class SinkBound { printed, sharp };
std::string to_string(SinkBound b);
SinkBound sink_bound_from_string(const std::string& s);

bool sink_predicate(const ModelParams& p, double C, const RegState& s,
                    SinkBound bound = SinkBound::printed);

/// Largest r accepted by the predicate.
double sink_radius(const ModelParams& p, double C, SinkBound bound = SinkBound::printed);

// ---- fate classification -------------------------------------------------

enum class Fate {
  triple_collision_Qstar,
  triple_collision_Estar,
  triple_collision_Bpm0,
  double_collision_Bpm_r,
  escape,
  bounded,
  undetermined
};
std::string to_string(Fate f);
bool is_collision(Fate f);

struct FateOptions {
  double switch_r_factor = 0.05;       // reduced -> regularized when r < factor r_init
  double switch_theta_margin = 0.1;    // ... or |theta| > pi/2 - margin
  double triple_r = 1e-6;
  double triple_v_factor = 0.9;        // v < -factor sqrt(2 W(theta_c))
  double limit_angle_tol = 0.05;
  double double_theta_margin = 1e-4;
  double double_r_min = 1e-4;
  double escape_factor = 1e3;
  long max_steps = 10'000'000;
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_residual_tol = 1e-8;
  bool keep_trajectory = false;
};

struct FateReport {
  Fate fate = Fate::undetermined;
  std::optional<double> limiting_theta;
  double winding = 0;
  int plane_crossings = 0;
  int crossings_in_terminal_decade = 0;
  std::optional<double> collision_r;  // r* for a double collision
  RegState final_state;
  double max_r_increase = 0;  // largest step-to-step increase of r
  double max_v_increase = 0;  // ... of v
  double r_min = 0, r_max = 0;
  double t_reduced = 0;       // physical time spent in the reduced chart
  double sigma_regularized = 0;
  long steps = 0;
  double max_residual = 0;
  IntegrationStatus status = IntegrationStatus::completed;
  std::string note;
  std::vector<Trajectory> legs;  // filled when keep_trajectory is set
};

/// state0 is a regularized-chart state at energy h and angular momentum C.
FateReport classify_fate(const ModelParams& p, double C, double h, const RegState& state0,
                         const FateOptions& opt = {});

struct FateJob {
  double C = 0;
  double h = 0;
  RegState state0;
};

/// Runs the jobs on up to `threads` workers (0 = hardware concurrency); the
/// output order follows the input.
std::vector<FateReport> classify_batch(const ModelParams& p, const std::vector<FateJob>& jobs,
                                       const FateOptions& opt = {}, unsigned threads = 0);

/// w^2 from the energy relation at (r, v, theta); negative when the state is
/// not reachable at energy h.
double w_squared_from_energy(const ModelParams& p, double C, double h, double r, double v,
                             double theta);

/// Energy h that makes (r, v, theta, w) consistent; requires r > 0 and |theta| < pi/2.
double energy_of(const ModelParams& p, double C, const RegState& s);

}  // namespace schwarziso
