#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "latgas/fock.hpp"
#include "latgas/sparse.hpp"

namespace latgas::evolution {

struct KrylovOptions {
  int max_dim = 30;        // Lanczos subspace size per substep
  double tol = 1e-10;      // total propagation error budget
  int max_substeps = 4096; // gives up past this -> propagation failure
};

// psi_t = e^{-itH} psi0 by Lanczos propagation with full reorthogonalization
// and adaptive substepping; the per-substep residual estimate is held below
// tol scaled by the substep's share of |t|.  psi0 must be normalized within
// 1e-12 and H Hermitian (callers' contract; assembled operators are
// Hermitian by construction).
Eigen::VectorXcd evolve(const CsrMatrix& H, const Eigen::VectorXcd& psi0,
                        double t, const KrylovOptions& opt = {});

// Spectral propagator for dense cross-checks: H = Q diag(lambda) Q^dag.
class DenseEig {
 public:
  explicit DenseEig(const CsrMatrix& H);
  fock::index_t dim() const { return Q_.rows(); }
  Eigen::VectorXcd apply(double t, const Eigen::VectorXcd& psi) const;
  Eigen::MatrixXcd matrix(double t) const;  // Q e^{-it lambda} Q^dag
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }

 private:
  Eigen::MatrixXcd Q_;
  Eigen::VectorXd lambda_;
};

// A unitary the cone-norm iteration can apply in both directions.
class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual fock::index_t dim() const = 0;
  virtual Eigen::VectorXcd forward(const Eigen::VectorXcd& psi) const = 0;
  virtual Eigen::VectorXcd adjoint(const Eigen::VectorXcd& psi) const = 0;
  virtual Eigen::MatrixXcd dense_matrix() const = 0;
};

// e^{-itH}: Krylov applications, spectral dense form on demand.
class HamiltonianPropagator final : public Propagator {
 public:
  HamiltonianPropagator(const CsrMatrix& H, double t, KrylovOptions opt = {});
  fock::index_t dim() const override { return H_->rows; }
  Eigen::VectorXcd forward(const Eigen::VectorXcd& psi) const override;
  Eigen::VectorXcd adjoint(const Eigen::VectorXcd& psi) const override;
  Eigen::MatrixXcd dense_matrix() const override;

 private:
  const CsrMatrix* H_;
  double t_;
  KrylovOptions opt_;
  mutable std::unique_ptr<DenseEig> eig_;
};

// Time-ordered product over piecewise-constant pieces, first piece applied
// first; the adjoint runs the pieces backwards with negated durations.
class SchedulePropagator final : public Propagator {
 public:
  SchedulePropagator(std::vector<const CsrMatrix*> pieces,
                     std::vector<double> durations, KrylovOptions opt = {});
  fock::index_t dim() const override;
  Eigen::VectorXcd forward(const Eigen::VectorXcd& psi) const override;
  Eigen::VectorXcd adjoint(const Eigen::VectorXcd& psi) const override;
  Eigen::MatrixXcd dense_matrix() const override;

 private:
  std::vector<const CsrMatrix*> pieces_;
  std::vector<double> durations_;
  KrylovOptions opt_;
  mutable std::vector<std::unique_ptr<DenseEig>> eig_;
  const DenseEig& eig(size_t k) const;
};

enum class ConeNormMethod { Auto, Dense, Iterative };

struct ConeNormOptions {
  ConeNormMethod method = ConeNormMethod::Auto;
  fock::index_t dense_cap = 400;  // Auto uses the dense SVD up to this dim
  double tol = 1e-10;             // relative successive-change convergence
  int max_iter = 200;
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;  // start-vector stream
  KrylovOptions krylov;
};

struct ConeNormResult {
  double value = 0.0;
  double error_bar = 0.0;
  bool converged = true;
  int iterations = 0;
  bool dense = false;
};

// Largest singular value of P_out U P_in, the transport amplitude between
// the projector ranges.  P_out / P_in are 0/1 masks over the sector.  Dense
// path: SVD of the submatrix of U on the masked rows and columns.  Iterative
// path: power iteration on the composition with its adjoint, seeded
// deterministically inside range(P_in); stagnation widens the error bar
// instead of failing.
ConeNormResult masked_norm(const Propagator& U, const Eigen::VectorXd& p_out,
                           const Eigen::VectorXd& p_in,
                           const ConeNormOptions& opt = {});

// ||P_{N_X/N >= beta} e^{-itH} P_{N_Y/N >= 1-alpha}|| on the basis sector.
ConeNormResult cone_norm(const CsrMatrix& H, const fock::FockBasis& basis,
                         const std::vector<int>& X, const std::vector<int>& Y,
                         double alpha, double beta, double t,
                         const ConeNormOptions& opt = {});

// Initial ensemble: a pure state when psi is nonempty, otherwise a convex
// mixture of basis states (weights summing to 1).
struct InitialState {
  Eigen::VectorXcd psi;
  std::vector<std::pair<fock::index_t, double>> mixture;
};

// Tr(P_{N_X/N >= beta} rho_t) for rho_0 supported inside
// range(P_{N_Y/N >= 1-alpha}); throws invalid-state otherwise.
double transport_probability(const CsrMatrix& H, const fock::FockBasis& basis,
                             const InitialState& rho0,
                             const std::vector<int>& X,
                             const std::vector<int>& Y, double alpha,
                             double beta, double t,
                             const KrylovOptions& opt = {});

// Sweep output consumed by the harness and the results CSV.
struct PropagationResult {
  std::vector<double> times;
  std::vector<double> amplitudes;
  std::vector<double> norm_drift;
};

}  // namespace latgas::evolution
