#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "latgas/fock.hpp"
#include "latgas/sparse.hpp"

namespace latgas::free_oracle {

// Non-interacting bosonic chain: one-body Laplacian-type matrix with unit
// lattice spacing, off-diagonal hopping `amplitude`, optional on-site fields.
struct OneBodyChain {
  int L = 0;
  double amplitude = 1.0;
  Eigen::VectorXd on_site;  // empty means zero field

  Eigen::MatrixXd matrix() const;  // tridiagonal Hermitian one-body operator
  void validate() const;
};

// e^{-it h} f through dense eigendecomposition (sites are 0-based).
Eigen::VectorXcd evolve_one_body(const OneBodyChain& chain,
                                 const Eigen::VectorXcd& f, double t);

// Wavefunction value (e^{-it h} f)_x.
cplx one_body_amplitude(const OneBodyChain& chain, const Eigen::VectorXcd& f,
                        int x, double t);

// p(r, t) = sum_{x >= r} |(e^{-it h} f)_x|^2, the one-body weight beyond r.
double tail_weight(const OneBodyChain& chain, const Eigen::VectorXcd& f, int r,
                   double t);

// Smallest cluster size that counts as macroscopic transport, ceil(theta N)
// with a float guard so exact integer products stay put.
int cluster_count(double theta, int N);

// For N independent particles each beyond r with probability p: chance that
// at least ceil(theta N) of them are, the exact binomial tail.
double binomial_tail(double p, double theta, int N);

// Crude union-style cap 2^N p^{ceil(theta N)} that the tail never exceeds.
double crude_tail_cap(double p, double theta, int N);

// Probability that at least theta N of N non-interacting particles prepared
// in the one-body state f sit at sites >= r after time t.
double cluster_probability(const OneBodyChain& chain, const Eigen::VectorXcd& f,
                           int r, double theta, int N, double t);

// Fock vector of the N-particle product state with every particle in f
// (normalized); lets the interacting engine at U=0 cross-check the oracle.
Eigen::VectorXcd cluster_state(const fock::FockBasis& basis,
                               const Eigen::VectorXcd& f);

// Exhibit constants (C, v') with probability <= e^{ceil(theta N) C (v' t - r)}
// over an (r, t) grid in the regime r >= 1, t >= 1: bilinear least-squares
// fit of the log-probability fixes v', then C shrinks until every
// outside-cone point is dominated.
struct FreeConePoint {
  int r = 0;
  double t = 0.0;
  int N = 0;
  double theta = 0.0;
  double probability = 0.0;
  double exhibited_bound = 0.0;
};

struct FreeConeReport {
  double v_prime = 0.0;
  double C = 0.0;
  bool dominated = false;
  std::vector<FreeConePoint> points;
};

FreeConeReport free_massmat_check(const OneBodyChain& chain,
                                  const Eigen::VectorXcd& f, double theta,
                                  int N, const std::vector<int>& r_grid,
                                  const std::vector<double>& t_grid);

// CSV rows: r, t, N, theta, probability, exhibited_bound.
void write_oracle_csv(std::ostream& out, const FreeConeReport& report);

}  // namespace latgas::free_oracle
