#include "latgas/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "latgas/errors.hpp"

namespace latgas::evolution {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// One Lanczos expm-multiply step of size h.  Returns the a-posteriori
// residual estimate; happy breakdown (invariant subspace) reports zero.
double lanczos_step(const CsrMatrix& H, VectorXcd& psi, double h,
                    int max_dim) {
  const fock::index_t n = psi.size();
  const int m = static_cast<int>(std::min<fock::index_t>(max_dim, n));
  std::vector<VectorXcd> V;
  V.reserve(m + 1);
  V.push_back(psi);  // caller keeps psi normalized
  std::vector<double> alpha, beta;
  bool breakdown = false;

  for (int j = 0; j < m; ++j) {
    VectorXcd w = latgas::apply(H, V[j]);
    alpha.push_back(std::real(V[j].dot(w)));
    w -= alpha[j] * V[j];
    if (j > 0) w -= beta[j - 1] * V[j - 1];
    for (const auto& vi : V) w -= vi.dot(w) * vi;  // full reorthogonalization
    const double b = w.norm();
    if (b < 1e-14) {
      breakdown = true;
      break;
    }
    beta.push_back(b);
    if (j + 1 < m) V.push_back(w / b);
  }

  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < k) T(j, j + 1) = T(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const Eigen::MatrixXd& Q = es.eigenvectors();
  VectorXcd coef(k);
  for (int j = 0; j < k; ++j)
    coef[j] = std::polar(1.0, -h * es.eigenvalues()[j]) * Q(0, j);
  const VectorXcd y = Q.cast<cplx>() * coef;

  psi = VectorXcd::Zero(n);
  for (int j = 0; j < k; ++j) psi += y[j] * V[j];
  if (breakdown || k >= n) return 0.0;  // exact within the subspace
  return beta.size() >= static_cast<size_t>(k) ? beta[k - 1] * std::abs(h) * std::abs(y[k - 1])
                                               : 0.0;
}

}  // namespace

Eigen::VectorXcd evolve(const CsrMatrix& H, const Eigen::VectorXcd& psi0,
                        double t, const KrylovOptions& opt) {
  if (psi0.size() != H.rows)
    fail(ErrorKind::InvalidState, "state length does not match the operator");
  if (std::abs(psi0.norm() - 1.0) > 1e-12)
    fail(ErrorKind::InvalidState, "initial state is not normalized");
  if (t == 0.0) return psi0;

  VectorXcd psi = psi0;
  double done = 0.0;
  double h = t;
  int steps = 0;
  while (std::abs(done) < std::abs(t)) {
    if (++steps > opt.max_substeps)
      fail(ErrorKind::PropagationFailure,
           "Krylov propagation exceeded the substep budget");
    if (std::abs(h) > std::abs(t - done)) h = t - done;
    VectorXcd trial = psi;
    const double nrm = trial.norm();
    trial /= nrm;  // guard drift accumulated across substeps
    const double err = lanczos_step(H, trial, h, opt.max_dim);
    const double allowance = opt.tol * std::abs(h) / std::abs(t);
    if (err > allowance) {
      h *= 0.5;
      if (std::abs(h) < 1e-12 * std::abs(t))
        fail(ErrorKind::PropagationFailure,
             "Krylov substep underflow without meeting the tolerance");
      continue;
    }
    psi = trial * nrm;
    done += h;
    h *= 2.0;
  }
  return psi;
}

DenseEig::DenseEig(const CsrMatrix& H) {
  if (H.hermiticity_defect() > 1e-10)
    fail(ErrorKind::InvalidModel, "dense propagator needs a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H.dense());
  Q_ = es.eigenvectors();
  lambda_ = es.eigenvalues();
}

Eigen::VectorXcd DenseEig::apply(double t, const Eigen::VectorXcd& psi) const {
  VectorXcd c = Q_.adjoint() * psi;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    c[j] *= std::polar(1.0, -t * lambda_[j]);
  return Q_ * c;
}

Eigen::MatrixXcd DenseEig::matrix(double t) const {
  VectorXcd phase(lambda_.size());
  for (Eigen::Index j = 0; j < lambda_.size(); ++j)
    phase[j] = std::polar(1.0, -t * lambda_[j]);
  return Q_ * phase.asDiagonal() * Q_.adjoint();
}

HamiltonianPropagator::HamiltonianPropagator(const CsrMatrix& H, double t,
                                             KrylovOptions opt)
    : H_(&H), t_(t), opt_(opt) {}

namespace {

// Linearity-safe wrapper: evolve() insists on unit input, so scale around it.
VectorXcd evolve_scaled(const CsrMatrix& H, const VectorXcd& psi, double t,
                        const KrylovOptions& opt) {
  const double nrm = psi.norm();
  if (nrm == 0.0) return psi;
  return evolve(H, psi / nrm, t, opt) * nrm;
}

}  // namespace

Eigen::VectorXcd HamiltonianPropagator::forward(
    const Eigen::VectorXcd& psi) const {
  return evolve_scaled(*H_, psi, t_, opt_);
}

Eigen::VectorXcd HamiltonianPropagator::adjoint(
    const Eigen::VectorXcd& psi) const {
  return evolve_scaled(*H_, psi, -t_, opt_);
}

Eigen::MatrixXcd HamiltonianPropagator::dense_matrix() const {
  if (!eig_) eig_ = std::make_unique<DenseEig>(*H_);
  return eig_->matrix(t_);
}

SchedulePropagator::SchedulePropagator(std::vector<const CsrMatrix*> pieces,
                                       std::vector<double> durations,
                                       KrylovOptions opt)
    : pieces_(std::move(pieces)), durations_(std::move(durations)), opt_(opt) {
  if (pieces_.empty() || pieces_.size() != durations_.size())
    fail(ErrorKind::InvalidModel, "schedule propagator needs matched pieces");
  for (size_t k = 1; k < pieces_.size(); ++k)
    if (pieces_[k]->rows != pieces_[0]->rows)
      fail(ErrorKind::InvalidModel, "schedule pieces act on different sectors");
  eig_.resize(pieces_.size());
}

fock::index_t SchedulePropagator::dim() const { return pieces_[0]->rows; }

const DenseEig& SchedulePropagator::eig(size_t k) const {
  if (!eig_[k]) eig_[k] = std::make_unique<DenseEig>(*pieces_[k]);
  return *eig_[k];
}

Eigen::VectorXcd SchedulePropagator::forward(
    const Eigen::VectorXcd& psi) const {
  VectorXcd out = psi;
  for (size_t k = 0; k < pieces_.size(); ++k)
    if (durations_[k] != 0.0)
      out = evolve_scaled(*pieces_[k], out, durations_[k], opt_);
  return out;
}

Eigen::VectorXcd SchedulePropagator::adjoint(
    const Eigen::VectorXcd& psi) const {
  VectorXcd out = psi;
  for (size_t k = pieces_.size(); k-- > 0;)
    if (durations_[k] != 0.0)
      out = evolve_scaled(*pieces_[k], out, -durations_[k], opt_);
  return out;
}

Eigen::MatrixXcd SchedulePropagator::dense_matrix() const {
  MatrixXcd U = eig(0).matrix(durations_[0]);
  for (size_t k = 1; k < pieces_.size(); ++k) U = eig(k).matrix(durations_[k]) * U;
  return U;
}

namespace {

std::vector<fock::index_t> mask_indices(const VectorXd& p) {
  std::vector<fock::index_t> idx;
  for (Eigen::Index d = 0; d < p.size(); ++d)
    if (p[d] != 0.0) idx.push_back(d);
  return idx;
}

double u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

ConeNormResult masked_norm(const Propagator& U, const Eigen::VectorXd& p_out,
                           const Eigen::VectorXd& p_in,
                           const ConeNormOptions& opt) {
  if (p_out.size() != U.dim() || p_in.size() != U.dim())
    fail(ErrorKind::InvalidState, "projector masks do not match the sector");
  ConeNormResult res;
  const auto rows = mask_indices(p_out);
  const auto cols = mask_indices(p_in);
  if (rows.empty() || cols.empty()) return res;  // one range is trivial

  const bool dense = opt.method == ConeNormMethod::Dense ||
                     (opt.method == ConeNormMethod::Auto &&
                      U.dim() <= opt.dense_cap);
  if (dense) {
    const MatrixXcd full = U.dense_matrix();
    MatrixXcd M(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < cols.size(); ++c) M(r, c) = full(rows[r], cols[c]);
    Eigen::JacobiSVD<MatrixXcd> svd(M);
    res.value = svd.singularValues()(0);
    res.error_bar = 1e-12 * std::max(1.0, res.value);
    res.dense = true;
    return res;
  }

  // Power iteration on (P_out U P_in)^dag (P_out U P_in); the Rayleigh
  // estimates rise monotonically toward the top singular value.
  std::mt19937_64 gen(opt.seed);
  VectorXcd v = VectorXcd::Zero(U.dim());
  for (fock::index_t d : cols)
    v[d] = cplx(2.0 * u01(gen) - 1.0, 2.0 * u01(gen) - 1.0);
  const double vn = v.norm();
  if (vn == 0.0) return res;
  v /= vn;

  double sigma = 0.0, prev = -1.0;
  std::vector<double> history;
  for (int it = 0; it < opt.max_iter; ++it) {
    VectorXcd u = U.forward(v);
    for (Eigen::Index d = 0; d < u.size(); ++d)
      if (p_out[d] == 0.0) u[d] = cplx(0.0, 0.0);
    sigma = u.norm();
    res.iterations = it + 1;
    history.push_back(sigma);
    if (sigma == 0.0) {
      res.value = 0.0;
      res.error_bar = 0.0;
      return res;
    }
    if (prev >= 0.0 && std::abs(sigma - prev) <= opt.tol * sigma) {
      res.value = sigma;
      res.error_bar = std::max(std::abs(sigma - prev), 1e-14 * sigma);
      return res;
    }
    prev = sigma;
    VectorXcd z = U.adjoint(u);
    for (Eigen::Index d = 0; d < z.size(); ++d)
      if (p_in[d] == 0.0) z[d] = cplx(0.0, 0.0);
    const double zn = z.norm();
    if (zn == 0.0) break;
    v = z / zn;
  }
  // stagnated: report the last estimate with the recent spread as the bar
  res.value = sigma;
  res.converged = false;
  double spread = 0.0;
  const size_t tail = std::min<size_t>(history.size(), 5);
  for (size_t k = history.size() - tail; k < history.size(); ++k)
    spread = std::max(spread, std::abs(history.back() - history[k]));
  res.error_bar = std::max(spread * 10.0, 1e-10 * std::max(1.0, sigma));
  return res;
}

ConeNormResult cone_norm(const CsrMatrix& H, const fock::FockBasis& basis,
                         const std::vector<int>& X, const std::vector<int>& Y,
                         double alpha, double beta, double t,
                         const ConeNormOptions& opt) {
  if (!(alpha < beta))
    fail(ErrorKind::InvalidModel, "cone norm needs alpha < beta");
  const auto px = fock::threshold_projector(basis, X, beta);
  const auto py = fock::threshold_projector(basis, Y, 1.0 - alpha);
  HamiltonianPropagator U(H, t, opt.krylov);
  return masked_norm(U, px.values, py.values, opt);
}

double transport_probability(const CsrMatrix& H, const fock::FockBasis& basis,
                             const InitialState& rho0,
                             const std::vector<int>& X,
                             const std::vector<int>& Y, double alpha,
                             double beta, double t, const KrylovOptions& opt) {
  const auto px = fock::threshold_projector(basis, X, beta);
  const auto py = fock::threshold_projector(basis, Y, 1.0 - alpha);

  auto pure_term = [&](const Eigen::VectorXcd& psi) {
    double leak = 0.0;
    for (Eigen::Index d = 0; d < psi.size(); ++d)
      if (py.values[d] == 0.0) leak += std::norm(psi[d]);
    if (leak > 1e-12)
      fail(ErrorKind::InvalidState,
           "initial state leaks outside the source projector range");
    const Eigen::VectorXcd psit = evolve(H, psi, t, opt);
    double p = 0.0;
    for (Eigen::Index d = 0; d < psit.size(); ++d)
      if (px.values[d] != 0.0) p += std::norm(psit[d]);
    return p;
  };

  if (rho0.psi.size() > 0) return pure_term(rho0.psi);

  if (rho0.mixture.empty())
    fail(ErrorKind::InvalidState, "empty initial ensemble");
  double total = 0.0, prob = 0.0;
  for (const auto& [d, w] : rho0.mixture) {
    if (d < 0 || d >= basis.dim())
      fail(ErrorKind::InvalidState, "ensemble references a state outside the sector");
    if (w < 0.0)
      fail(ErrorKind::InvalidState, "ensemble weights must be nonnegative");
    total += w;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
    psi[d] = 1.0;
    prob += w * pure_term(psi);
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorKind::InvalidState, "ensemble weights must sum to 1");
  return prob;
}

}  // namespace latgas::evolution
