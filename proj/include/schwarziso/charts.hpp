#pragma once

// The three coordinate charts used for the reduced two-degree-of-freedom
// system and the maps between them.
//
//   cyl      (R, z, P_R, P_z)    physical time t
//   mcgehee  (r, v, theta, u)    blow-up of r = 0, time tau with dt = r^(5/2) dtau
//   reg      (r, v, theta, w)    also regular at theta = +-pi/2

#include "schwarziso/model.hpp"

#include <array>

namespace schwarziso {

struct CylState {
  double R = 1.0;
  double z = 0.0;
  double P_R = 0.0;
  double P_z = 0.0;
};

struct McGeheeState {
  double r = 0.0;
  double v = 0.0;
  double theta = 0.0;
  double u = 0.0;
};

struct RegState {
  double r = 0.0;
  double v = 0.0;
  double theta = 0.0;
  double w = 0.0;
};

/// Kinetic metric entries: kinetic energy is P_R^2/M + (kz/2) P_z^2 with
/// kz = (2M + m)/(2 M m).
double kz_factor(const ModelParams& p);

McGeheeState cyl_to_mcgehee(const ModelParams& p, const CylState& s);
CylState mcgehee_to_cyl(const ModelParams& p, const McGeheeState& s);

/// w = cos^3(theta) u / sqrt(U(theta)).
RegState mcgehee_to_reg(const ModelParams& p, const McGeheeState& s);
/// Rejects |theta| = pi/2 with w != 0; at |theta| = pi/2 with w = 0 it
/// still rejects, since u is not defined there.
McGeheeState reg_to_mcgehee(const ModelParams& p, const RegState& s);

/// True when the McGehee chart may be used at this angle.
bool mcgehee_chart_valid(double theta, double margin = 1e-6);

double reduced_hamiltonian(const ModelParams& p, double C, const CylState& s);

// Energy residuals.  Each is "kinetic + potential - energy term" of the
// chart's own relation:
//   cyl      H_red - h
//   mcgehee  (u^2 + v^2)/2 + C^2 r/(2 cos^2) - r^2 V - W - h r^3     (= r^3 * cyl)
//   reg      U w^2 + (v^2 c^3 - 2U) c^3 + (C^2 - 2 r V c^2) r c^4 - 2 h r^3 c^6
//                                                                     (= 2 c^6 * mcgehee)
double energy_residual(const ModelParams& p, double C, double h, const CylState& s);
double energy_residual(const ModelParams& p, double C, double h, const McGeheeState& s);
double energy_residual(const ModelParams& p, double C, double h, const RegState& s);

/// w^2 + cos^6 v^2 / U - 2 cos^3, zero on the collision manifold.
double collision_manifold_residual(const ModelParams& p, double v, double theta, double w);

/// dphi/dt = 2C/(M R^2).
double phi_rate(const ModelParams& p, double C, double R);

std::array<double, 4> to_array(const CylState& s);
std::array<double, 4> to_array(const McGeheeState& s);
std::array<double, 4> to_array(const RegState& s);

}  // namespace schwarziso
