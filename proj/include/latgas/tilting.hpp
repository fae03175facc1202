#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "latgas/evolution.hpp"
#include "latgas/fock.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"
#include "latgas/sparse.hpp"

namespace latgas::tilting {

// Geometric tilting weights q(x) = exp(mu f(s(x)/d)) with mu = a d / 2.
// Everything downstream composes the logs; exponentials are taken only at
// output boundaries.
struct TiltingWeights {
  double mu = 0.0;
  Eigen::VectorXd log_weights;  // mu * f(s(x)/d) per site

  Eigen::VectorXd weights() const { return log_weights.array().exp(); }
};

TiltingWeights make_tilting(const geometry::SeparationProfile& profile,
                            double a);

// Diagonal of T = exp(sum_x mu f(s(x)/d) n_x) over the sector, stored as
// logs; values()/inverse_values() refuse to exponentiate past |log| = 700.
struct TiltingDiagonal {
  Eigen::VectorXd log_values;

  Eigen::VectorXd values() const;
  Eigen::VectorXd inverse_values() const;
};

TiltingDiagonal tilting_diagonal(const fock::FockBasis& basis,
                                 const TiltingWeights& weights);

// Imaginary part of the tilted hopping, J~_xy = -i J_xy sinh(l(x) - l(y))
// with l = log q.  Hermitian whenever J is.  schur_bound is the row-sum
// certificate max_x sum_y |J_xy| sinh(a min(d, |x-y|)); it never exceeds
// a v(a), which is reported alongside.
struct DeformedHopping {
  Eigen::MatrixXcd Jt;
  double schur_bound = 0.0;
  double av = 0.0;
};

DeformedHopping deformed_hopping(const hamiltonian::HoppingMatrix& J,
                                 const Eigen::MatrixXd& coords,
                                 const TiltingWeights& weights, double a);

// Exact diagonal norms ||P_{N_X/N>=beta} T^-1|| and ||T P_{N_Y/N>=1-alpha}||
// against their analytic certificates, all in log domain.  An empty
// projector range reports -inf for the measured side.
struct ProjectorTiltBounds {
  double log_lhs_X = 0.0;  // log ||P_X T^-1||
  double log_rhs_X = 0.0;  // mu (1 - 2 beta) N
  double log_lhs_Y = 0.0;  // log ||T P_Y||
  double log_rhs_Y = 0.0;  // mu (2 alpha - 1) N
};

ProjectorTiltBounds projector_tilt_bounds(const fock::FockBasis& basis,
                                          const TiltingWeights& weights,
                                          const std::vector<int>& X,
                                          const std::vector<int>& Y,
                                          double alpha, double beta);

// ||T e^{-itH} T^-1|| against e^{a N v |t|} over a time grid.  Dense path
// forms D U D^-1 from the spectral propagator; past dense_cap a power
// iteration applies the similarity through Krylov evolution.
struct DeformedNormPoint {
  double t = 0.0;
  double measured = 0.0;
  double log_bound = 0.0;  // a N v |t|
  bool ok = true;          // measured <= bound within 1e-8 relative
};

struct DeformedNormOptions {
  fock::index_t dense_cap = 400;
  double tol = 1e-10;
  int max_iter = 200;
  std::uint64_t seed = 0x6a09e667f3bcc909ULL;
  evolution::KrylovOptions krylov;
};

std::vector<DeformedNormPoint> verify_deformed_propagator(
    const CsrMatrix& H, const fock::FockBasis& basis,
    const TiltingWeights& weights, double a, double v,
    const std::vector<double>& t_grid, const DeformedNormOptions& opt = {});

}  // namespace latgas::tilting
