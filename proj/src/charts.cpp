#include "schwarziso/charts.hpp"

#include <cmath>

namespace schwarziso {

double kz_factor(const ModelParams& p) { return (2.0 * p.M + p.m) / (2.0 * p.M * p.m); }

McGeheeState cyl_to_mcgehee(const ModelParams& p, const CylState& s) {
  validate(p);
  if (!(s.R > 0.0) || !std::isfinite(s.R)) throw InvalidInput("cyl state needs R > 0");
  const double kz = kz_factor(p);
  // y = sqrt(T) x
  const double y1 = std::sqrt(p.M / 2.0) * s.R;
  const double y2 = s.z / std::sqrt(kz);
  const double r = std::hypot(y1, y2);
  const double c = y1 / r, sn = y2 / r;
  // sqrt(T^-1) p
  const double q1 = std::sqrt(2.0 / p.M) * s.P_R;
  const double q2 = std::sqrt(kz) * s.P_z;
  const double r32 = r * std::sqrt(r);
  McGeheeState out;
  out.r = r;
  out.theta = std::atan2(y2, y1);
  out.v = r32 * (c * q1 + sn * q2);
  out.u = r32 * (-sn * q1 + c * q2);
  return out;
}

CylState mcgehee_to_cyl(const ModelParams& p, const McGeheeState& s) {
  validate(p);
  if (!(s.r > 0.0)) throw InvalidInput("mcgehee -> cyl needs r > 0");
  if (!(std::abs(s.theta) < kHalfPi)) throw InvalidInput("mcgehee -> cyl needs |theta| < pi/2");
  const double kz = kz_factor(p);
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const double rm32 = 1.0 / (s.r * std::sqrt(s.r));
  const double q1 = rm32 * (s.v * c - s.u * sn);
  const double q2 = rm32 * (s.v * sn + s.u * c);
  CylState out;
  out.R = std::sqrt(2.0 / p.M) * s.r * c;
  out.z = std::sqrt(kz) * s.r * sn;
  out.P_R = std::sqrt(p.M / 2.0) * q1;
  out.P_z = q2 / std::sqrt(kz);
  return out;
}

RegState mcgehee_to_reg(const ModelParams& p, const McGeheeState& s) {
  const Model mdl(p);
  if (!(std::abs(s.theta) <= kHalfPi)) throw InvalidInput("theta outside [-pi/2, pi/2]");
  const double c = std::cos(s.theta);
  return {s.r, s.v, s.theta, c * c * c * s.u / std::sqrt(mdl.U(s.theta))};
}

McGeheeState reg_to_mcgehee(const ModelParams& p, const RegState& s) {
  const Model mdl(p);
  if (!(std::abs(s.theta) < kHalfPi))
    throw InvalidInput("reg -> mcgehee undefined at |theta| = pi/2 (double collision)");
  const double c = std::cos(s.theta);
  return {s.r, s.v, s.theta, s.w * std::sqrt(mdl.U(s.theta)) / (c * c * c)};
}

bool mcgehee_chart_valid(double theta, double margin) {
  return std::abs(theta) < kHalfPi - margin;
}

double reduced_hamiltonian(const ModelParams& p, double C, const CylState& s) {
  const EffectivePotential e = eval_effective(p, C, s.R, s.z);
  return s.P_R * s.P_R / p.M + 0.5 * kz_factor(p) * s.P_z * s.P_z + e.value;
}

double energy_residual(const ModelParams& p, double C, double h, const CylState& s) {
  return reduced_hamiltonian(p, C, s) - h;
}

double energy_residual(const ModelParams& p, double C, double h, const McGeheeState& s) {
  const Model mdl(p);
  if (!(std::abs(s.theta) < kHalfPi)) throw InvalidInput("mcgehee residual needs |theta| < pi/2");
  const double c = std::cos(s.theta);
  const double r = s.r;
  return 0.5 * (s.u * s.u + s.v * s.v) + C * C * r / (2.0 * c * c) - r * r * mdl.V(s.theta) -
         mdl.W(s.theta) - h * r * r * r;
}

double energy_residual(const ModelParams& p, double C, double h, const RegState& s) {
  const Model mdl(p);
  const double c = std::cos(s.theta);
  const double c3 = c * c * c, c4 = c3 * c, c6 = c3 * c3;
  const double U = mdl.U(s.theta);
  const double r = s.r;
  return U * s.w * s.w + (s.v * s.v * c3 - 2.0 * U) * c3 + C * C * r * c4 -
         2.0 * r * r * mdl.V_cos_pow(s.theta, 6) - 2.0 * h * r * r * r * c6;
}

double collision_manifold_residual(const ModelParams& p, double v, double theta, double w) {
  const Model mdl(p);
  const double c = std::cos(theta);
  const double c3 = c * c * c;
  return w * w + c3 * c3 * v * v / mdl.U(theta) - 2.0 * c3;
}

double phi_rate(const ModelParams& p, double C, double R) {
  validate(p);
  if (!(R > 0.0)) throw InvalidInput("phi_rate needs R > 0");
  return 2.0 * C / (p.M * R * R);
}

std::array<double, 4> to_array(const CylState& s) { return {s.R, s.z, s.P_R, s.P_z}; }
std::array<double, 4> to_array(const McGeheeState& s) { return {s.r, s.v, s.theta, s.u}; }
std::array<double, 4> to_array(const RegState& s) { return {s.r, s.v, s.theta, s.w}; }

}  // namespace schwarziso
