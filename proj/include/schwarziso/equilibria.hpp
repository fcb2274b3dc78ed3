#pragma once

// Relative equilibria (steady rotations, fixed points of the reduced
// system), their linear stability and the energy-momentum diagram.

#include "schwarziso/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace schwarziso {

enum class EquilibriumKind { degenerate, stable, unstable };
std::string to_string(EquilibriumKind k);

struct EquilibriumInfo {
  double R = 0;
  double z = 0;
  double C = 0;
  double h = 0;
  EquilibriumKind kind = EquilibriumKind::degenerate;
  // numerical eigenvalues of the linearized reduced flow, sorted by (re, im)
  std::array<std::complex<double>, 4> eigenvalues{};
  // +-i sqrt(kz U_zz) and +-(2/M) sqrt((3 beta - C^2 R)/R^5), same ordering
  std::array<std::complex<double>, 4> closed_form_eigenvalues{};
  double f_value = 0;             // -2 alpha R^2 + 6 C^2 R - 12 beta
  bool hessian_positive_definite = false;
  double gradient_norm = 0;       // |grad U_eff| at (R, 0)
};

/// Empty for C < C0, one degenerate entry at C = C0 (relative tolerance
/// 1e-12 on C^4 - C0^4), otherwise the outer (stable) and inner (unstable)
/// equilibria in that order.
std::vector<EquilibriumInfo> relative_equilibria(
    const ModelParams& p, double C, EnergyConvention conv = EnergyConvention::physical);

/// Linearization of the reduced flow at (R, 0, 0, 0), assembled from the
/// analytic Hessian of U_eff.
Eigen::Matrix4d linearization(const ModelParams& p, double C, double R);

/// Same matrix, obtained by differentiating the reduced vector field.
Eigen::Matrix4d linearization_from_field(const ModelParams& p, double C, double R);

/// Eigenvalues sorted by real part then imaginary part.
std::array<std::complex<double>, 4> sorted_eigenvalues(const Eigen::Matrix4d& L);

enum class EMBranch { stable, unstable, degenerate };
std::string to_string(EMBranch b);

struct EMPoint {
  double R = 0;
  double C = 0;
  double h = 0;
  EMBranch branch = EMBranch::degenerate;
};

/// Parametric sweep over log-spaced R in [R_lo, R_hi], sorted by C then R.
std::vector<EMPoint> em_diagram(const ModelParams& p, double R_lo, double R_hi, std::size_t n,
                                EnergyConvention conv = EnergyConvention::physical);

struct SelfIntersectionReport {
  std::size_t close_pairs = 0;  // pairs with |dC| < tol_C and |dh| < tol_h
  std::size_t violations = 0;   // ... of which |dR| >= tol_R
  double min_separation = 0;    // smallest |dh| among pairs with |dC| < tol_C and |dR| >= tol_R
};

SelfIntersectionReport em_self_intersections(const std::vector<EMPoint>& pts, double tol_C = 1e-9,
                                             double tol_h = 1e-9, double tol_R = 1e-6);

}  // namespace schwarziso
