#include "schwarziso/equilibria.hpp"

#include "schwarziso/charts.hpp"
#include "schwarziso/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace schwarziso {

std::string to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::degenerate: return "degenerate";
    case EquilibriumKind::stable: return "stable";
    case EquilibriumKind::unstable: return "unstable";
  }
  return "?";
}

std::string to_string(EMBranch b) {
  switch (b) {
    case EMBranch::stable: return "stable";
    case EMBranch::unstable: return "unstable";
    case EMBranch::degenerate: return "degenerate";
  }
  return "?";
}

Eigen::Matrix4d linearization(const ModelParams& p, double C, double R) {
  const EffectivePotential e = eval_effective(p, C, R, 0.0);
  Eigen::Matrix4d L = Eigen::Matrix4d::Zero();
  L(0, 2) = 2.0 / p.M;
  L(1, 3) = kz_factor(p);
  L(2, 0) = -e.hess[0][0];
  L(2, 1) = -e.hess[0][1];
  L(3, 0) = -e.hess[1][0];
  L(3, 1) = -e.hess[1][1];
  return L;
}

Eigen::Matrix4d linearization_from_field(const ModelParams& p, double C, double R) {
  const VectorField f(Chart::reduced, p, C, 0.0);
  State y(4);
  y << R, 0.0, 0.0, 0.0;
  return f.jacobian(y);
}

std::array<std::complex<double>, 4> sorted_eigenvalues(const Eigen::Matrix4d& L) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(L, false);
  std::array<std::complex<double>, 4> ev{};
  for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

namespace {

EquilibriumInfo make_info(const ModelParams& p, const DerivedConstants& d, double C, double R,
                          bool degenerate, EnergyConvention conv) {
  EquilibriumInfo info;
  info.R = R;
  info.C = C;
  info.h = equilibrium_energy(p, C, R, conv);
  info.f_value = -2.0 * d.alpha * R * R + 6.0 * C * C * R - 12.0 * d.beta;
  const EffectivePotential e = eval_effective(p, C, R, 0.0);
  info.gradient_norm = std::hypot(e.grad[0], e.grad[1]);
  info.hessian_positive_definite =
      e.hess[0][0] > 0.0 && e.hess[0][0] * e.hess[1][1] - e.hess[0][1] * e.hess[1][0] > 0.0;

  info.eigenvalues = sorted_eigenvalues(linearization_from_field(p, C, R));

  const double kz = kz_factor(p);
  const double Uzz = 16.0 * p.A1 / (R * R * R) + 192.0 * p.B1 / std::pow(R, 5);
  const std::complex<double> lam_z = std::sqrt(std::complex<double>(-kz * Uzz));
  const std::complex<double> lam_R =
      (2.0 / p.M) * std::sqrt(std::complex<double>((3.0 * d.beta - C * C * R) / std::pow(R, 5)));
  info.closed_form_eigenvalues = {lam_z, -lam_z, lam_R, -lam_R};
  std::sort(info.closed_form_eigenvalues.begin(), info.closed_form_eigenvalues.end(),
            [](auto a, auto b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });

  if (degenerate) {
    info.kind = EquilibriumKind::degenerate;
  } else {
    double scale = 0.0;
    for (auto& l : info.eigenvalues) scale = std::max(scale, std::abs(l));
    bool hyperbolic = false;
    for (auto& l : info.eigenvalues)
      if (std::abs(l.real()) > 1e-8 * std::max(scale, 1.0)) hyperbolic = true;
    info.kind = hyperbolic ? EquilibriumKind::unstable : EquilibriumKind::stable;
  }
  return info;
}

}  // namespace

std::vector<EquilibriumInfo> relative_equilibria(const ModelParams& p, double C,
                                                 EnergyConvention conv) {
  const DerivedConstants d = derive(p);
  if (!(C >= 0.0) || !std::isfinite(C)) throw InvalidInput("angular momentum must be >= 0");
  const double C4 = C * C * C * C;
  const double C04 = d.C0 * d.C0 * d.C0 * d.C0;
  const double disc = C4 - C04;
  std::vector<EquilibriumInfo> out;
  if (std::abs(disc) <= 1e-12 * C04) {
    out.push_back(make_info(p, d, C, C * C / d.alpha, true, conv));
    return out;
  }
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  out.push_back(make_info(p, d, C, (C * C + sq) / d.alpha, false, conv));
  // C^2 - sqrt(C^4 - C0^4) loses digits for large C; use the product of roots
  const double R2 = 3.0 * d.beta / (C * C + sq);
  out.push_back(make_info(p, d, C, R2, false, conv));
  return out;
}

std::vector<EMPoint> em_diagram(const ModelParams& p, double R_lo, double R_hi, std::size_t n,
                                EnergyConvention conv) {
  const DerivedConstants d = derive(p);
  if (!(R_lo > 0.0) || !(R_hi > R_lo) || !std::isfinite(R_hi))
    throw InvalidInput("em_diagram needs 0 < R_lo < R_hi");
  if (n < 2) throw InvalidInput("em_diagram needs n >= 2");
  std::vector<EMPoint> pts(n);
  const double llo = std::log(R_lo), lhi = std::log(R_hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double R = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
    const double C2 = (d.alpha * R * R + 3.0 * d.beta) / (2.0 * R);
    EMPoint& e = pts[i];
    e.R = R;
    e.C = std::sqrt(C2);
    e.h = equilibrium_energy(p, e.C, R, conv);
    const double R0 = C2 / d.alpha;
    if (std::abs(R - R0) <= 1e-12 * R0)
      e.branch = EMBranch::degenerate;
    else
      e.branch = R > R0 ? EMBranch::stable : EMBranch::unstable;
  }
  std::sort(pts.begin(), pts.end(), [](const EMPoint& a, const EMPoint& b) {
    return a.C != b.C ? a.C < b.C : a.R < b.R;
  });
  return pts;
}

SelfIntersectionReport em_self_intersections(const std::vector<EMPoint>& pts, double tol_C,
                                             double tol_h, double tol_R) {
  SelfIntersectionReport rep;
  rep.min_separation = std::numeric_limits<double>::infinity();
  std::vector<EMPoint> s = pts;
  std::sort(s.begin(), s.end(), [](const EMPoint& a, const EMPoint& b) { return a.C < b.C; });
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size() && s[j].C - s[i].C < tol_C; ++j) {
      const double dh = std::abs(s[i].h - s[j].h);
      const double dR = std::abs(s[i].R - s[j].R);
      if (dR >= tol_R) rep.min_separation = std::min(rep.min_separation, dh);
      if (dh < tol_h) {
        ++rep.close_pairs;
        if (dR >= tol_R) ++rep.violations;
      }
    }
  }
  return rep;
}

}  // namespace schwarziso
