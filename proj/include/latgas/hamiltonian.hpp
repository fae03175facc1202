#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "latgas/fock.hpp"
#include "latgas/geometry.hpp"
#include "latgas/sparse.hpp"

namespace latgas::hamiltonian {

enum class HoppingFamily { NearestNeighbor, ExponentialDecay, Custom };

// One-body hopping matrix J_xy.  The family tag records how it was built so
// closed-form velocity expressions stay available.
struct HoppingMatrix {
  HoppingFamily family = HoppingFamily::Custom;
  Eigen::MatrixXcd J;
  double amplitude = 0.0;  // J for the nn and exp families
  double gamma = 0.0;      // decay rate of the exp family

  int L() const { return static_cast<int>(J.rows()); }
  // Hermiticity check; throws invalid-model on violation.
  void validate() const;
};

// J on distance-1 pairs (lattice edges when present, else a pairwise scan).
HoppingMatrix nn_hopping(const geometry::LatticeGraph& lattice, double J);
// J exp(-gamma |x-y|) on all off-diagonal pairs.
HoppingMatrix expdecay_hopping(const geometry::LatticeGraph& lattice, double J,
                               double gamma);
HoppingMatrix custom_hopping(Eigen::MatrixXcd J);

// v = max_x sum_y |J_xy| sinh(a|x-y|)/a over the finite lattice.  The exp
// family requires a < gamma, matching the regime where v stays bounded as
// the lattice grows.
double velocity_v(const HoppingMatrix& J, const Eigen::MatrixXd& coords,
                  double a);

// First moment kappa = max_x sum_y |J_xy| |x-y|; the a -> 0 limit of v.
double kappa(const HoppingMatrix& J, const Eigen::MatrixXd& coords);

// Density-density potential V({n_x}).
struct Potential {
  enum class Kind { Zero, BoseHubbard, Custom };
  Kind kind = Kind::Zero;
  double U = 0.0;
  double mu = 0.0;
  std::function<double(const std::uint8_t* occ, int L)> custom;

  double eval(const std::uint8_t* occ, int L) const;

  static Potential zero() { return {}; }
  static Potential bose_hubbard(double U, double mu);
  static Potential custom_fn(std::function<double(const std::uint8_t*, int)>);
};

enum class Assembly { Auto, Serial, Parallel };

// Sparse H = sum_xy J_xy a_x^dag a_y + V({n_x}) in the basis sector.  Row r
// collects J_xy * amp over reversed hops a_y^dag a_x applied to |r>, which
// makes the result Hermitian entry by entry with no floating-point drift.
// Serial and parallel paths accumulate in the same per-row order and give
// bit-identical matrices.
CsrMatrix assemble(const fock::FockBasis& basis, const HoppingMatrix& J,
                   const Potential& V, Assembly mode = Assembly::Auto);

// Piecewise-constant time dependence; each piece must satisfy the model
// assumptions on its own.
struct SchedulePiece {
  double duration = 0.0;
  HoppingMatrix J;
  Potential V;
};
struct Schedule {
  std::vector<SchedulePiece> pieces;
  double total_duration() const;
  void validate() const;
};

// Everything a bound evaluation needs.
struct BoundParams {
  double a = 0.0;
  double v = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  double d_xy = 0.0;
  int N = 0;

  void validate() const;  // 0 <= alpha < beta <= 1, a > 0, d > 0, kappa <= v
};

BoundParams make_bound_params(const HoppingMatrix& J,
                              const Eigen::MatrixXd& coords, double a,
                              double alpha, double beta, double d_xy, int N);

// Optimal decay rate for nearest-neighbor hopping in D dimensions:
// a* = arccosh((beta-alpha) d / (2 D J |t|)), the exact minimizer of
// -a((beta-alpha)d - v(a)|t|).  Requires the separation to be supersonic,
// (beta-alpha) d > 2 D J |t|.
struct OptimalTilt {
  double a_star = 0.0;
  double exponent = 0.0;  // N a*((beta-alpha)d - v(a*)|t|); bound = e^{-exponent}
  double asymptotic_log_bound = 0.0;  // log of (|t|/((beta-alpha)d))^{N(beta-alpha)d}
};
OptimalTilt optimal_a(double J, int D, double beta_minus_alpha, double d,
                      double t, int N);

}  // namespace latgas::hamiltonian
