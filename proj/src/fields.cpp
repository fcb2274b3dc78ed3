#include "schwarziso/flow.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <sstream>

namespace schwarziso {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::VectorXd>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
void reduced_field(const Model& mdl, double C, const Vec<T>& y, Vec<T>& dy) {
  using std::sqrt;
  const ModelParams& p = mdl.params();
  const double kz = kz_factor(p);
  const T R = y(0), z = y(1);
  const T rho2 = R * R + 4.0 * z * z;
  const T rho = sqrt(rho2);
  const T rho3 = rho2 * rho, rho5 = rho3 * rho2;
  const T R2 = R * R;
  const T dUdR = -2.0 * C * C / (p.M * R2 * R) + p.A / R2 + 3.0 * p.B / (R2 * R2) +
                 4.0 * p.A1 * R / rho3 + 48.0 * p.B1 * R / rho5;
  const T dUdz = (4.0 * p.A1 / rho3 + 48.0 * p.B1 / rho5) * 4.0 * z;
  dy(0) = (2.0 / p.M) * y(2);
  dy(1) = kz * y(3);
  dy(2) = -dUdR;
  dy(3) = -dUdz;
}

template <class T>
void mcgehee_field(const Model& mdl, double C, const Vec<T>& y, Vec<T>& dy) {
  using std::cos;
  using std::sin;
  const T r = y(0), v = y(1), th = y(2), u = y(3);
  const T c = cos(th), s = sin(th);
  dy(0) = r * v;
  dy(1) = 1.5 * v * v + u * u + C * C * r / (c * c) - r * r * mdl.V(th) - 3.0 * mdl.W(th);
  dy(2) = u;
  dy(3) = 0.5 * u * v - C * C * s * r / (c * c * c) + r * r * mdl.dV(th) + mdl.dW(th);
}

// Regularized field.  The w' equation carries the chain-rule term
// -3 tan(theta) w^2, rewritten with the energy relation so that it stays
// analytic at theta = +-pi/2.
template <class T>
void regularized_field(const Model& mdl, double C, double h, const Vec<T>& y, Vec<T>& dy) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T r = y(0), v = y(1), th = y(2), w = y(3);
  const T c = cos(th), s = sin(th);
  const T c2 = c * c, c3 = c2 * c, c5 = c3 * c2;
  const T U = mdl.U(th);
  const T sqU = sqrt(U);
  const T g = c3 / sqU;
  const T r2 = r * r, r3 = r2 * r;
  dy(0) = g * r * v;
  dy(1) = 0.5 * g * v * v - sqU + r2 * (2.0 * h * r * g + mdl.V_cos_pow(th, 3) / sqU);
  dy(2) = w;
  dy(3) = 0.5 * v * w * g + r2 * mdl.dV_cos6(th) / U + (mdl.dU(th) / U) * (c3 - 0.5 * w * w) -
          3.0 * s * c2 + 2.0 * C * C * r * s * c3 / U + 3.0 * s * c5 * (v * v - 2.0 * h * r3) / U -
          6.0 * s * r2 * mdl.V_cos_pow(th, 5) / U;
}

template <class T>
void collision_field(const Model& mdl, const Vec<T>& y, Vec<T>& dy) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T v = y(0), th = y(1), w = y(2);
  const T c = cos(th), s = sin(th);
  const T c2 = c * c, c3 = c2 * c, c5 = c3 * c2;
  const T U = mdl.U(th);
  const T sqU = sqrt(U);
  const T g = c3 / sqU;
  dy(0) = 0.5 * g * v * v - sqU;
  dy(1) = w;
  dy(2) = 0.5 * v * w * g + (mdl.dU(th) / U) * (c3 - 0.5 * w * w) - 3.0 * s * c2 +
          3.0 * s * c5 * v * v / U;
}

template <class T>
void planar_field(const Model& mdl, double C, const Vec<T>& y, Vec<T>& dy) {
  const DerivedConstants& d = mdl.derived();
  const T r = y(0), v = y(1);
  dy(0) = r * v;
  dy(1) = 1.5 * v * v + C * C * r - r * r * d.V0 - 3.0 * d.W0;
}

template <class T>
bool profile_field(const Model& mdl, double theta, const Vec<T>& y, Vec<T>& dy) {
  using std::sqrt;
  const T rad = mdl.W(theta) - 0.5 * y(0) * y(0);
  if (!(rad >= 0.0)) return false;
  dy(0) = -sqrt(rad) / std::sqrt(2.0);
  return true;
}

template <class T>
bool base_field(Chart chart, const Model& mdl, double C, double h, double t, const Vec<T>& y,
                Vec<T>& dy) {
  switch (chart) {
    case Chart::reduced: reduced_field(mdl, C, y, dy); return true;
    case Chart::mcgehee: mcgehee_field(mdl, C, y, dy); return true;
    case Chart::regularized: regularized_field(mdl, C, h, y, dy); return true;
    case Chart::collision: collision_field(mdl, y, dy); return true;
    case Chart::planar: planar_field(mdl, C, y, dy); return true;
    case Chart::profile: return profile_field(mdl, t, y, dy);
  }
  return false;
}

template <class T>
T base_residual(Chart chart, const Model& mdl, double C, double h, const Vec<T>& y) {
  using std::cos;
  const ModelParams& p = mdl.params();
  switch (chart) {
    case Chart::reduced: {
      const T R = y(0), z = y(1);
      const T rho2 = R * R + 4.0 * z * z;
      using std::sqrt;
      const T rho = sqrt(rho2);
      const T Ueff = C * C / (p.M * R * R) - p.A / R - p.B / (R * R * R) - 4.0 * p.A1 / rho -
                     16.0 * p.B1 / (rho2 * rho);
      return y(2) * y(2) / p.M + 0.5 * kz_factor(p) * y(3) * y(3) + Ueff - h;
    }
    case Chart::mcgehee: {
      const T r = y(0), v = y(1), th = y(2), u = y(3);
      const T c = cos(th);
      return 0.5 * (u * u + v * v) + C * C * r / (2.0 * c * c) - r * r * mdl.V(th) - mdl.W(th) -
             h * r * r * r;
    }
    case Chart::regularized: {
      const T r = y(0), v = y(1), th = y(2), w = y(3);
      const T c = cos(th);
      const T c3 = c * c * c;
      const T U = mdl.U(th);
      return U * w * w + (v * v * c3 - 2.0 * U) * c3 + C * C * r * c3 * c -
             2.0 * r * r * mdl.V_cos_pow(th, 6) - 2.0 * h * r * r * r * c3 * c3;
    }
    case Chart::collision: {
      const T v = y(0), th = y(1), w = y(2);
      const T c = cos(th);
      const T c3 = c * c * c;
      return w * w + c3 * c3 * v * v / mdl.U(th) - 2.0 * c3;
    }
    case Chart::planar: {
      const DerivedConstants& d = mdl.derived();
      const T r = y(0), v = y(1);
      return 0.5 * v * v + 0.5 * C * C * r - r * r * d.V0 - d.W0 - h * r * r * r;
    }
    case Chart::profile: return T(0.0);
  }
  return T(0.0);
}

double phase_rate(Chart chart, const Model& mdl, double C, const State& y) {
  if (C == 0.0) return 0.0;
  const ModelParams& p = mdl.params();
  switch (chart) {
    case Chart::reduced: return 2.0 * C / (p.M * y(0) * y(0));
    case Chart::mcgehee: {
      const double c = std::cos(y(2));
      return C * std::sqrt(std::max(y(0), 0.0)) / (c * c);
    }
    case Chart::regularized:
      return C * std::sqrt(std::max(y(0), 0.0)) * std::cos(y(2)) / std::sqrt(mdl.U(y(2)));
    case Chart::planar: return C * std::sqrt(std::max(y(0), 0.0));
    case Chart::collision:
    case Chart::profile: return 0.0;
  }
  return 0.0;
}

}  // namespace

std::string to_string(Chart c) {
  switch (c) {
    case Chart::reduced: return "reduced";
    case Chart::mcgehee: return "mcgehee";
    case Chart::regularized: return "regularized";
    case Chart::collision: return "collision";
    case Chart::planar: return "planar";
    case Chart::profile: return "profile";
  }
  return "?";
}

Chart chart_from_string(const std::string& s) {
  for (Chart c : {Chart::reduced, Chart::mcgehee, Chart::regularized, Chart::collision,
                  Chart::planar, Chart::profile})
    if (to_string(c) == s) return c;
  throw InvalidInput("unknown chart '" + s + "'");
}

int chart_dim(Chart c) {
  switch (c) {
    case Chart::reduced:
    case Chart::mcgehee:
    case Chart::regularized: return 4;
    case Chart::collision: return 3;
    case Chart::planar: return 2;
    case Chart::profile: return 1;
  }
  return 0;
}

std::vector<std::string> chart_columns(Chart c, bool with_phase) {
  std::vector<std::string> cols;
  switch (c) {
    case Chart::reduced: cols = {"R", "z", "P_R", "P_z"}; break;
    case Chart::mcgehee: cols = {"r", "v", "theta", "u"}; break;
    case Chart::regularized: cols = {"r", "v", "theta", "w"}; break;
    case Chart::collision: cols = {"v", "theta", "w"}; break;
    case Chart::planar: cols = {"r", "v"}; break;
    case Chart::profile: cols = {"v"}; break;
  }
  if (with_phase && c != Chart::collision && c != Chart::profile) cols.emplace_back("phi");
  return cols;
}

VectorField::VectorField(Chart chart, const ModelParams& p, double C, double h, bool with_phase)
    : chart_(chart), model_(p), C_(C), h_(h),
      with_phase_(with_phase && chart != Chart::collision && chart != Chart::profile) {
  if (!std::isfinite(C) || !std::isfinite(h)) throw InvalidInput("C and h must be finite");
}

bool VectorField::rhs(double t, const State& y, State& dy) const {
  const int n = chart_dim(chart_);
  if (y.size() != dim()) return false;
  dy.resize(dim());
  Vec<double> yb = y.head(n);
  Vec<double> db(n);
  if (!base_field<double>(chart_, model_, C_, h_, t, yb, db)) return false;
  dy.head(n) = db;
  if (with_phase_) dy(n) = phase_rate(chart_, model_, C_, y);
  return dy.allFinite();
}

bool VectorField::in_domain(const State& y, double t) const {
  if (y.size() != dim() || !y.allFinite()) return false;
  switch (chart_) {
    case Chart::reduced: return y(0) > 0.0;
    case Chart::mcgehee: return y(0) >= 0.0 && std::abs(y(2)) < kHalfPi;
    case Chart::regularized: return y(0) >= 0.0 && std::abs(y(2)) <= kHalfPi + theta_slack;
    case Chart::collision: return std::abs(y(1)) <= kHalfPi + theta_slack;
    case Chart::planar: return y(0) >= 0.0;
    case Chart::profile:
      return std::abs(t) < kHalfPi && model_.W(t) - 0.5 * y(0) * y(0) >= 0.0;
  }
  return false;
}

State VectorField::evaluate(const State& y, double t) const {
  if (y.size() != dim()) throw InvalidInput("state has wrong dimension for chart " + to_string(chart_));
  if (!in_domain(y, t)) {
    if (chart_ == Chart::profile)
      throw InvalidInput("profile field needs |theta| < pi/2 and |v| < sqrt(2 W(theta))");
    throw InvalidInput("state outside the domain of chart " + to_string(chart_));
  }
  State dy;
  if (!rhs(t, y, dy)) throw InvalidInput("vector field not finite at this state");
  return dy;
}

double VectorField::residual(const State& y, double t) const {
  (void)t;
  Vec<double> yb = y.head(chart_dim(chart_));
  return base_residual<double>(chart_, model_, C_, h_, yb);
}

Eigen::VectorXd VectorField::residual_gradient(const State& y, double t) const {
  (void)t;
  const int n = chart_dim(chart_);
  Vec<AD> ya(n);
  for (int i = 0; i < n; ++i) ya(i) = AD(y(i), n, i);
  const AD F = base_residual<AD>(chart_, model_, C_, h_, ya);
  Eigen::VectorXd g = F.derivatives();
  if (g.size() != n) g = Eigen::VectorXd::Zero(n);
  return g;
}

void VectorField::project(State& y) const {
  if (chart_ == Chart::profile) return;
  const int n = chart_dim(chart_);
  for (int it = 0; it < 8; ++it) {
    const double F = residual(y);
    if (!std::isfinite(F) || std::abs(F) < 1e-15) return;
    Eigen::VectorXd g = residual_gradient(y);
    // the phase-free part of r = 0 stays on r = 0
    if (chart_ == Chart::regularized || chart_ == Chart::mcgehee || chart_ == Chart::planar) {
      if (y(0) == 0.0) g(0) = 0.0;
    }
    const double g2 = g.squaredNorm();
    if (!(g2 > 1e-24)) return;
    const Eigen::VectorXd step = (F / g2) * g;
    if (!step.allFinite()) return;
    y.head(n) -= step;
  }
}

void VectorField::check_initial(const State& y, double t, double tol) const {
  if (y.size() != dim())
    throw InvalidInput("initial state has wrong dimension for chart " + to_string(chart_));
  if (!in_domain(y, t)) throw InvalidInput("initial state outside the domain of chart " + to_string(chart_));
  if (chart_ == Chart::collision) {
    const double G = residual(y);
    if (std::abs(G) > tol) {
      std::ostringstream os;
      os << "collision-chart state is off the collision manifold (residual " << G << ")";
      throw InvalidInput(os.str());
    }
  }
  if (chart_ == Chart::profile && !(model_.W(t) - 0.5 * y(0) * y(0) > 0.0))
    throw InvalidInput("profile state must satisfy |v| < sqrt(2 W(theta))");
}

ChartView VectorField::view(const State& y, double t) const {
  switch (chart_) {
    case Chart::reduced: {
      const McGeheeState m = cyl_to_mcgehee(model_.params(), {y(0), y(1), y(2), y(3)});
      return {m.r, m.v, m.theta};
    }
    case Chart::mcgehee:
    case Chart::regularized: return {y(0), y(1), y(2)};
    case Chart::collision: return {0.0, y(0), y(1)};
    case Chart::planar: return {y(0), y(1), 0.0};
    case Chart::profile: return {0.0, y(0), t};
  }
  return {0, 0, 0};
}

Eigen::MatrixXd VectorField::jacobian(const State& y, double t) const {
  const int n = chart_dim(chart_);
  Vec<AD> ya(n), da(n);
  for (int i = 0; i < n; ++i) ya(i) = AD(y(i), n, i);
  if (!base_field<AD>(chart_, model_, C_, h_, t, ya, da))
    throw InvalidInput("jacobian requested outside the field's domain");
  Eigen::MatrixXd J(n, n);
  for (int i = 0; i < n; ++i) {
    if (da(i).derivatives().size() == n)
      J.row(i) = da(i).derivatives().transpose();
    else
      J.row(i).setZero();
  }
  return J;
}

}  // namespace schwarziso
