#pragma once

// Physical parameters, derived constants and the potential functions of the
// isosceles three-body problem with Schwarzschild-type (-A/r - B/r^3)
// pairwise interaction.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace schwarziso {

/// Rejected input: non-positive parameters, states outside a chart, malformed files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity that does not exist for the given parameter regime
/// (e.g. the interior critical angle of W when mu <= 1 + B/(16 B1)).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Two equal masses M, third mass m, inverse-distance strengths A (M-M pair)
/// and A1 (M-m pairs), inverse-cube strengths B and B1.
struct ModelParams {
  double M = 1.0;
  double m = 0.01;
  double A = 1.0;
  double A1 = 1.0;
  double B = 0.2;
  double B1 = 0.2;
};

/// Throws InvalidInput unless all six fields are finite and strictly positive.
void validate(const ModelParams& p);

/// How the energy of a relative equilibrium is written.  `physical` is the
/// value of the reduced Hamiltonian, (C^2/R^2 - alpha/R - beta/R^3)/M.
/// `paper_notation` drops the overall 1/M.  Both coincide at M = 1.
enum class EnergyConvention { physical, paper_notation };

struct RegimeReport {
  double mu_threshold = 100.0;
  bool mu_large = false;  // mu > mu_threshold
  bool cond_A = false;    // mu > 1 + A/(4 A1): V has interior critical points
  bool cond_B = false;    // mu > 1 + B/(16 B1): W has interior critical points
  bool generic = false;   // the two critical angles differ
  [[nodiscard]] bool all() const { return mu_large && cond_A && cond_B && generic; }
};

RegimeReport regime(const ModelParams& p, double mu_threshold = 100.0,
                    double generic_rtol = 1e-9);

struct DerivedConstants {
  double mu = 0;      // (2M + m)/m
  double alpha = 0;   // M (A + 4 A1)
  double beta = 0;    // M (B + 16 B1)
  double C0 = 0;      // (3 alpha beta)^(1/4)
  double V0 = 0;      // V(0)
  double W0 = 0;      // W(0)
  double gamma = 0;   // 16 B1 / B
  std::optional<double> theta_v;  // interior minimum of V on (0, pi/2)
  std::optional<double> theta_w;  // interior minimum of W on (0, pi/2)
  RegimeReport regime;

  [[nodiscard]] double require_theta_v() const;
  [[nodiscard]] double require_theta_w() const;
};

DerivedConstants derive(const ModelParams& p, double mu_threshold = 100.0);

/// Closed forms for the interior critical angles; nullopt when the
/// corresponding inequality on mu fails.
std::optional<double> critical_angle_v(const ModelParams& p);
std::optional<double> critical_angle_w(const ModelParams& p);

struct AngularPotentials {
  double V, W, U, dV, dW, dU;
};

/// V, W, U = W cos^3 and their theta-derivatives.  At |theta| = pi/2 the
/// V, W, dV, dW entries are +-infinity; U and dU stay finite.
AngularPotentials eval_angular(const ModelParams& p, double theta);

struct EffectivePotential {
  double value;
  std::array<double, 2> grad;                 // (d/dR, d/dz)
  std::array<std::array<double, 2>, 2> hess;  // symmetric
};

/// U_eff(R, z; C) = C^2/(M R^2) + U(R, z) with analytic gradient and Hessian.
EffectivePotential eval_effective(const ModelParams& p, double C, double R, double z);

/// Parameters plus the handful of constants every vector field needs.
/// Potential kernels are templates so that automatic differentiation can
/// run through them.
class Model {
 public:
  explicit Model(const ModelParams& p, double mu_threshold = 100.0);

  [[nodiscard]] const ModelParams& params() const { return p_; }
  [[nodiscard]] const DerivedConstants& derived() const { return d_; }
  [[nodiscard]] double mu() const { return d_.mu; }
  [[nodiscard]] double kV() const { return kV_; }
  [[nodiscard]] double kW() const { return kW_; }

  // q = cos^2 + mu sin^2 = 1 + (mu - 1) sin^2
  template <class T>
  T q(const T& th) const {
    using std::sin;
    const T s = sin(th);
    return 1.0 + (d_.mu - 1.0) * s * s;
  }

  template <class T>
  T V(const T& th) const {
    using std::cos;
    using std::sqrt;
    return kV_ * (p_.A / cos(th) + 4.0 * p_.A1 / sqrt(q(th)));
  }

  template <class T>
  T dV(const T& th) const {
    using std::cos;
    using std::pow;
    using std::sin;
    const T c = cos(th), s = sin(th);
    return kV_ * (p_.A * s / (c * c) - 4.0 * p_.A1 * (d_.mu - 1.0) * s * c * pow(q(th), -1.5));
  }

  template <class T>
  T W(const T& th) const {
    using std::cos;
    using std::pow;
    const T c = cos(th);
    return kW_ * (p_.B / (c * c * c) + 16.0 * p_.B1 * pow(q(th), -1.5));
  }

  template <class T>
  T dW(const T& th) const {
    using std::cos;
    using std::pow;
    using std::sin;
    const T c = cos(th), s = sin(th);
    const T c2 = c * c;
    return kW_ * (3.0 * p_.B * s / (c2 * c2) -
                  48.0 * p_.B1 * (d_.mu - 1.0) * s * c * pow(q(th), -2.5));
  }

  // U = W cos^3, analytic on the closed interval.
  template <class T>
  T U(const T& th) const {
    using std::cos;
    using std::pow;
    const T c = cos(th);
    return kW_ * (p_.B + 16.0 * p_.B1 * c * c * c * pow(q(th), -1.5));
  }

  // dU/dtheta = -48 kW B1 mu sin cos^2 q^(-5/2)
  template <class T>
  T dU(const T& th) const {
    using std::cos;
    using std::pow;
    using std::sin;
    const T c = cos(th), s = sin(th);
    return -48.0 * kW_ * p_.B1 * d_.mu * s * c * c * pow(q(th), -2.5);
  }

  // V cos^k for k >= 1, written without division by cos.
  template <class T>
  T V_cos_pow(const T& th, int k) const {
    using std::cos;
    using std::pow;
    const T c = cos(th);
    T ck1 = T(1.0);
    for (int i = 1; i < k; ++i) ck1 *= c;
    return kV_ * (p_.A * ck1 + 4.0 * p_.A1 * ck1 * c * pow(q(th), -0.5));
  }

  // V' cos^6, written without division by cos.
  template <class T>
  T dV_cos6(const T& th) const {
    using std::cos;
    using std::pow;
    using std::sin;
    const T c = cos(th), s = sin(th);
    const T c2 = c * c;
    return kV_ * (p_.A * s * c2 * c2 -
                  4.0 * p_.A1 * (d_.mu - 1.0) * s * c2 * c2 * c2 * c * pow(q(th), -1.5));
  }

  /// Second derivative of W, exact (forward-mode AD through dW).
  [[nodiscard]] double d2W(double th) const;
  [[nodiscard]] double d2V(double th) const;

 private:
  ModelParams p_;
  DerivedConstants d_;
  double kV_;  // (M/2)^(1/2)
  double kW_;  // (M/2)^(3/2)
};

/// Energy of the relative equilibrium at radius R for angular momentum C.
double equilibrium_energy(const ModelParams& p, double C, double R,
                          EnergyConvention conv = EnergyConvention::physical);

std::string to_string(EnergyConvention c);
EnergyConvention energy_convention_from_string(const std::string& s);

}  // namespace schwarziso
