#pragma once

// Test-side reference computations.  Nothing here calls into the library:
// potentials are re-typed from their definitions and the numerics are the
// plainest possible versions.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

struct P {
  double M = 1, m = 0.01, A = 1, A1 = 1, B = 0.2, B1 = 0.2;
};

inline double mu(const P& p) { return (2 * p.M + p.m) / p.m; }

// V and W written out from the pairwise distances of the isosceles
// configuration, not from the library's factored form.
inline double V(const P& p, double th) {
  const double q = std::cos(th) * std::cos(th) + mu(p) * std::sin(th) * std::sin(th);
  return std::sqrt(p.M / 2) * (p.A / std::cos(th) + 4 * p.A1 / std::sqrt(q));
}
inline double W(const P& p, double th) {
  const double q = std::cos(th) * std::cos(th) + mu(p) * std::sin(th) * std::sin(th);
  return std::pow(p.M / 2, 1.5) * (p.B / std::pow(std::cos(th), 3) + 16 * p.B1 / std::pow(q, 1.5));
}

inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > tol * std::max(1.0, std::abs(a)); ++i) {
    const double c = 0.5 * (a + b), fc = f(c);
    if ((fc < 0) == (fa < 0)) { a = c; fa = fc; } else { b = c; }
  }
  return 0.5 * (a + b);
}

// five-point central difference
inline double diff(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline std::mt19937_64 rng(std::uint64_t seed = 12345) { return std::mt19937_64(seed); }
inline double uni(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

}  // namespace oracle
