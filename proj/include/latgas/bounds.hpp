#pragma once

#include <vector>

#include <Eigen/Dense>

#include "latgas/hamiltonian.hpp"

namespace latgas::bounds {

// Log of the transport-norm bound, -a N ((beta-alpha) d_XY - v |t|).  Every
// reported bound in the toolkit funnels through this one expression so CSV
// columns agree bit for bit.
double log_norm_bound(const hamiltonian::BoundParams& p, double t);

struct BoundEvaluation {
  double exponent = 0.0;           // log_norm_bound value
  double norm_bound = 1.0;         // min(1, e^exponent)
  double probability_bound = 1.0;  // min(1, e^{2 exponent})
  double raw_norm_bound = 1.0;     // e^exponent, vacuous (> 1) inside the cone
  double raw_probability_bound = 1.0;
};

BoundEvaluation massmat_bound(const hamiltonian::BoundParams& p, double t);

// Physical-units transport bound for nearest-neighbor hopping at lattice
// spacing r0, separation ell sites, with a = 1/r0.  Replica mode keeps the
// rounded time coefficient 3 D (J/hbar); Exact mode uses 2 D sinh(1) (J/hbar).
enum class UnitsMode { Replica, Exact };

struct PhysicalBound {
  double exponent = 0.0;     // -N ((beta-alpha) ell - coeff D (J/hbar) t)
  double probability = 1.0;  // min(1, e^exponent)
};

PhysicalBound physical_units_bound(int N, double J_over_hbar, double r0, int D,
                                   double beta_minus_alpha, double ell,
                                   double t, UnitsMode mode);

// Cone-slope comparison between the first-moment velocity kappa and the
// tilted velocities v(a): the macroscopic cone in the (distance, time) plane
// has slope v(a)/(beta-alpha).
struct VelocityRow {
  double a = 0.0;
  double v = 0.0;
  double kappa = 0.0;
  double slope_ratio = 0.0;  // v / (beta - alpha)
};

std::vector<VelocityRow> velocity_comparison(
    const hamiltonian::HoppingMatrix& J, const Eigen::MatrixXd& coords,
    const std::vector<double>& a_grid, double beta_minus_alpha);

}  // namespace latgas::bounds
