#include "schwarziso/model.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <limits>

namespace schwarziso {

namespace {
using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, 1, 1>>;

bool good(double x) { return std::isfinite(x) && x > 0.0; }

double mass_ratio(const ModelParams& p) { return (2.0 * p.M + p.m) / p.m; }
}  // namespace

void validate(const ModelParams& p) {
  if (!good(p.M) || !good(p.m) || !good(p.A) || !good(p.A1) || !good(p.B) || !good(p.B1))
    throw InvalidInput("model parameters M, m, A, A1, B, B1 must be finite and > 0");
}

std::optional<double> critical_angle_w(const ModelParams& p) {
  validate(p);
  const double mu = mass_ratio(p);
  const double gamma = 16.0 * p.B1 / p.B;
  if (!(mu > 1.0 + p.B / (16.0 * p.B1))) return std::nullopt;
  const double c2 = mu / ((mu - 1.0) + std::pow(mu - 1.0, 0.4) * std::pow(gamma, 0.4));
  return std::acos(std::sqrt(c2));
}

std::optional<double> critical_angle_v(const ModelParams& p) {
  validate(p);
  const double mu = mass_ratio(p);
  const double ratio = 4.0 * p.A1 / p.A;
  if (!(mu > 1.0 + p.A / (4.0 * p.A1))) return std::nullopt;
  const double c2 = mu / ((mu - 1.0) + std::pow(mu - 1.0, 2.0 / 3.0) * std::pow(ratio, 2.0 / 3.0));
  return std::acos(std::sqrt(c2));
}

RegimeReport regime(const ModelParams& p, double mu_threshold, double generic_rtol) {
  validate(p);
  RegimeReport r;
  const double mu = mass_ratio(p);
  r.mu_threshold = mu_threshold;
  r.mu_large = mu > mu_threshold;
  r.cond_A = mu > 1.0 + p.A / (4.0 * p.A1);
  r.cond_B = mu > 1.0 + p.B / (16.0 * p.B1);
  const double lhs = std::pow(mu - 1.0, 4.0 / 15.0) * std::pow(4.0 * p.A1 / p.A, 2.0 / 3.0);
  const double rhs = std::pow(16.0 * p.B1 / p.B, 0.4);
  r.generic = std::abs(lhs - rhs) > generic_rtol * std::max(std::abs(lhs), std::abs(rhs));
  return r;
}

double DerivedConstants::require_theta_v() const {
  if (!theta_v) throw RegimeError("V has no interior critical angle: mu <= 1 + A/(4 A1)");
  return *theta_v;
}

double DerivedConstants::require_theta_w() const {
  if (!theta_w) throw RegimeError("W has no interior critical angle: mu <= 1 + B/(16 B1)");
  return *theta_w;
}

DerivedConstants derive(const ModelParams& p, double mu_threshold) {
  validate(p);
  DerivedConstants d;
  d.mu = mass_ratio(p);
  d.alpha = p.M * (p.A + 4.0 * p.A1);
  d.beta = p.M * (p.B + 16.0 * p.B1);
  d.C0 = std::pow(3.0 * d.alpha * d.beta, 0.25);
  const double half = p.M / 2.0;
  d.V0 = std::sqrt(half) * (p.A + 4.0 * p.A1);
  d.W0 = half * std::sqrt(half) * (p.B + 16.0 * p.B1);
  d.gamma = 16.0 * p.B1 / p.B;
  d.theta_v = critical_angle_v(p);
  d.theta_w = critical_angle_w(p);
  d.regime = regime(p, mu_threshold);
  return d;
}

Model::Model(const ModelParams& p, double mu_threshold)
    : p_(p), d_(derive(p, mu_threshold)) {
  kV_ = std::sqrt(p.M / 2.0);
  kW_ = kV_ * kV_ * kV_;
}

double Model::d2W(double th) const {
  AD x(th, Eigen::Matrix<double, 1, 1>::Constant(1.0));
  return dW(x).derivatives()(0);
}

double Model::d2V(double th) const {
  AD x(th, Eigen::Matrix<double, 1, 1>::Constant(1.0));
  return dV(x).derivatives()(0);
}

AngularPotentials eval_angular(const ModelParams& p, double theta) {
  const Model mdl(p);
  if (!(std::abs(theta) <= kHalfPi)) throw InvalidInput("theta must lie in [-pi/2, pi/2]");
  AngularPotentials a{};
  a.U = mdl.U(theta);
  a.dU = mdl.dU(theta);
  if (std::abs(theta) == kHalfPi) {
    const double inf = std::numeric_limits<double>::infinity();
    a.V = inf;
    a.W = inf;
    a.dV = std::copysign(inf, theta);
    a.dW = std::copysign(inf, theta);
    a.dU = 0.0;  // sin cos^2 vanishes; cos(pi/2) in floating point is ~6e-17
    return a;
  }
  a.V = mdl.V(theta);
  a.W = mdl.W(theta);
  a.dV = mdl.dV(theta);
  a.dW = mdl.dW(theta);
  return a;
}

EffectivePotential eval_effective(const ModelParams& p, double C, double R, double z) {
  validate(p);
  if (!(R > 0.0) || !std::isfinite(R) || !std::isfinite(z))
    throw InvalidInput("effective potential needs R > 0");
  const double M = p.M;
  const double a1 = 4.0 * p.A1, b1 = 16.0 * p.B1;
  const double R2 = R * R, R3 = R2 * R, R4 = R2 * R2, R5 = R4 * R;
  // rho = |(R, 2z)|
  const double rho2 = R2 + 4.0 * z * z;
  const double rho = std::sqrt(rho2);
  const double rho3 = rho2 * rho, rho5 = rho3 * rho2;

  EffectivePotential e{};
  e.value = C * C / (M * R2) - p.A / R - p.B / R3 - a1 / rho - b1 / rho3;

  const double dR_rad = -2.0 * C * C / (M * R3) + p.A / R2 + 3.0 * p.B / R4;
  const double dRR_rad = 6.0 * C * C / (M * R4) - 2.0 * p.A / R3 - 12.0 * p.B / R5;
  // g(rho) = -a1/rho - b1/rho^3
  const double g1 = a1 / rho2 + 3.0 * b1 / (rho2 * rho2);
  const double g2 = -2.0 * a1 / rho3 - 12.0 * b1 / rho5;
  const double rR = R / rho, rz = 4.0 * z / rho;
  const double rRR = 1.0 / rho - R2 / rho3;
  const double rzz = 4.0 / rho - 16.0 * z * z / rho3;
  const double rRz = -4.0 * R * z / rho3;

  e.grad = {dR_rad + g1 * rR, g1 * rz};
  e.hess[0][0] = dRR_rad + g2 * rR * rR + g1 * rRR;
  e.hess[1][1] = g2 * rz * rz + g1 * rzz;
  e.hess[0][1] = e.hess[1][0] = g2 * rR * rz + g1 * rRz;
  return e;
}

double equilibrium_energy(const ModelParams& p, double C, double R, EnergyConvention conv) {
  const DerivedConstants d = derive(p);
  if (!(R > 0.0)) throw InvalidInput("equilibrium radius must be > 0");
  const double notation = C * C / (R * R) - d.alpha / R - d.beta / (R * R * R);
  return conv == EnergyConvention::paper_notation ? notation : notation / p.M;
}

std::string to_string(EnergyConvention c) {
  return c == EnergyConvention::physical ? "physical" : "paper_notation";
}

EnergyConvention energy_convention_from_string(const std::string& s) {
  if (s == "physical") return EnergyConvention::physical;
  if (s == "paper_notation") return EnergyConvention::paper_notation;
  throw InvalidInput("unknown energy convention '" + s + "'");
}

}  // namespace schwarziso
