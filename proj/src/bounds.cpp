#include "latgas/bounds.hpp"

#include <cmath>

#include "latgas/errors.hpp"

namespace latgas::bounds {

double log_norm_bound(const hamiltonian::BoundParams& p, double t) {
  p.validate();
  // Computed as N times a per-particle rate so the log bound is exactly
  // linear in N: IEEE negation is exact, hence N * rate negated equals
  // N times the negated rate bit for bit.
  const double rate = p.a * ((p.beta - p.alpha) * p.d_xy - p.v * std::abs(t));
  return -(static_cast<double>(p.N) * rate);
}

BoundEvaluation massmat_bound(const hamiltonian::BoundParams& p, double t) {
  BoundEvaluation e;
  e.exponent = log_norm_bound(p, t);
  e.raw_norm_bound = std::exp(e.exponent);
  e.raw_probability_bound = std::exp(2.0 * e.exponent);
  e.norm_bound = e.exponent >= 0.0 ? 1.0 : e.raw_norm_bound;
  e.probability_bound = e.exponent >= 0.0 ? 1.0 : e.raw_probability_bound;
  return e;
}

PhysicalBound physical_units_bound(int N, double J_over_hbar, double r0, int D,
                                   double beta_minus_alpha, double ell,
                                   double t, UnitsMode mode) {
  if (N < 0 || !(J_over_hbar > 0.0) || !(r0 > 0.0) || D < 1 ||
      !(beta_minus_alpha > 0.0 && beta_minus_alpha <= 1.0) || !(ell > 0.0) ||
      t < 0.0)
    fail(ErrorKind::InvalidModel, "physical-units inputs must be positive");
  // a = 1/r0 makes the distance term (beta-alpha) ell exactly; the time term
  // carries 2 D sinh(1) J/hbar, which the rounded mode weakens to 3 D J/hbar.
  const double coeff =
      mode == UnitsMode::Replica ? 3.0 : 2.0 * std::sinh(1.0);
  PhysicalBound out;
  out.exponent = -static_cast<double>(N) *
                 (beta_minus_alpha * ell - coeff * D * J_over_hbar * t);
  out.probability = out.exponent >= 0.0 ? 1.0 : std::exp(out.exponent);
  return out;
}

std::vector<VelocityRow> velocity_comparison(
    const hamiltonian::HoppingMatrix& J, const Eigen::MatrixXd& coords,
    const std::vector<double>& a_grid, double beta_minus_alpha) {
  if (!(beta_minus_alpha > 0.0))
    fail(ErrorKind::InvalidModel, "velocity comparison needs beta > alpha");
  const double k = hamiltonian::kappa(J, coords);
  std::vector<VelocityRow> rows;
  rows.reserve(a_grid.size());
  for (double a : a_grid) {
    VelocityRow r;
    r.a = a;
    r.v = hamiltonian::velocity_v(J, coords, a);
    r.kappa = k;
    r.slope_ratio = r.v / beta_minus_alpha;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace latgas::bounds
