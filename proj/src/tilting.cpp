#include "latgas/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "latgas/errors.hpp"

namespace latgas::tilting {

namespace {
constexpr double kLogCap = 700.0;  // exp() overflow guard

void check_logs(const Eigen::VectorXd& logs) {
  for (Eigen::Index i = 0; i < logs.size(); ++i)
    if (std::abs(logs[i]) > kLogCap)
      fail(ErrorKind::Overflow,
           "tilting weight exponent exceeds the floating-point range");
}
}  // namespace

TiltingWeights make_tilting(const geometry::SeparationProfile& profile,
                            double a) {
  if (!(a > 0.0)) fail(ErrorKind::InvalidModel, "tilting needs a > 0");
  TiltingWeights w;
  w.mu = 0.5 * a * profile.width;
  w.log_weights = w.mu * profile.ramp;
  return w;
}

Eigen::VectorXd TiltingDiagonal::values() const {
  check_logs(log_values);
  return log_values.array().exp();
}

Eigen::VectorXd TiltingDiagonal::inverse_values() const {
  check_logs(log_values);
  return (-log_values.array()).exp();
}

TiltingDiagonal tilting_diagonal(const fock::FockBasis& basis,
                                 const TiltingWeights& weights) {
  if (weights.log_weights.size() != basis.L())
    fail(ErrorKind::InvalidModel, "tilting weights built for another lattice");
  TiltingDiagonal d;
  d.log_values = fock::diagonal_lift(basis, weights.log_weights).values;
  return d;
}

DeformedHopping deformed_hopping(const hamiltonian::HoppingMatrix& J,
                                 const Eigen::MatrixXd& coords,
                                 const TiltingWeights& weights, double a) {
  if (!(a > 0.0)) fail(ErrorKind::InvalidModel, "deformed hopping needs a > 0");
  const int L = J.L();
  if (coords.rows() != L || weights.log_weights.size() != L)
    fail(ErrorKind::InvalidModel, "deformed hopping inputs disagree on the lattice");
  const double d = 2.0 * weights.mu / a;  // mu = a d / 2

  DeformedHopping out;
  out.Jt = Eigen::MatrixXcd::Zero(L, L);
  const cplx minus_i(0.0, -1.0);
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y)
      if (x != y)
        out.Jt(x, y) = minus_i * J.J(x, y) *
                       std::sinh(weights.log_weights[x] - weights.log_weights[y]);

  double schur = 0.0;
  for (int x = 0; x < L; ++x) {
    double row = 0.0;
    for (int y = 0; y < L; ++y) {
      if (y == x) continue;
      const double r = (coords.row(x) - coords.row(y)).norm();
      row += std::abs(J.J(x, y)) * std::sinh(a * std::min(d, r));
    }
    schur = std::max(schur, row);
  }
  out.schur_bound = schur;
  out.av = a * hamiltonian::velocity_v(J, coords, a);
  return out;
}

ProjectorTiltBounds projector_tilt_bounds(const fock::FockBasis& basis,
                                          const TiltingWeights& weights,
                                          const std::vector<int>& X,
                                          const std::vector<int>& Y,
                                          double alpha, double beta) {
  if (!(alpha < beta))
    fail(ErrorKind::InvalidModel, "projector bounds need alpha < beta");
  const TiltingDiagonal diag = tilting_diagonal(basis, weights);
  const auto px = fock::threshold_projector(basis, X, beta);
  const auto py = fock::threshold_projector(basis, Y, 1.0 - alpha);

  const double ninf = -std::numeric_limits<double>::infinity();
  ProjectorTiltBounds out;
  out.log_lhs_X = ninf;
  out.log_lhs_Y = ninf;
  for (fock::index_t s = 0; s < basis.dim(); ++s) {
    if (px.values[s] != 0.0)
      out.log_lhs_X = std::max(out.log_lhs_X, -diag.log_values[s]);
    if (py.values[s] != 0.0)
      out.log_lhs_Y = std::max(out.log_lhs_Y, diag.log_values[s]);
  }
  const double N = basis.N();
  out.log_rhs_X = weights.mu * (1.0 - 2.0 * beta) * N;
  out.log_rhs_Y = weights.mu * (2.0 * alpha - 1.0) * N;
  return out;
}

namespace {

double u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// sigma_max of M = D e^{-itH} D^-1 by power iteration on M^dag M, with each
// application routed through Krylov evolution.
double iterative_deformed_norm(const CsrMatrix& H,
                               const Eigen::VectorXd& log_diag, double t,
                               const DeformedNormOptions& opt) {
  std::mt19937_64 gen(opt.seed);
  Eigen::VectorXcd v(H.rows);
  for (fock::index_t i = 0; i < H.rows; ++i)
    v[i] = cplx(2.0 * u01(gen) - 1.0, 2.0 * u01(gen) - 1.0);
  v /= v.norm();

  const Eigen::VectorXd dpos = log_diag.array().exp();
  const Eigen::VectorXd dneg = (-log_diag.array()).exp();
  auto apply_m = [&](Eigen::VectorXcd x, double sgn_t,
                     const Eigen::VectorXd& left,
                     const Eigen::VectorXd& right) {
    for (fock::index_t i = 0; i < H.rows; ++i) x[i] *= right[i];
    const double nrm = x.norm();
    if (nrm == 0.0) return Eigen::VectorXcd(Eigen::VectorXcd::Zero(H.rows));
    x = evolution::evolve(H, x / nrm, sgn_t, opt.krylov) * nrm;
    for (fock::index_t i = 0; i < H.rows; ++i) x[i] *= left[i];
    return x;
  };

  double sigma = 0.0, prev = -1.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Eigen::VectorXcd u = apply_m(v, t, dpos, dneg);
    sigma = u.norm();
    if (sigma == 0.0) return 0.0;
    if (prev >= 0.0 && std::abs(sigma - prev) <= opt.tol * sigma) return sigma;
    prev = sigma;
    // adjoint: D^-1 e^{+itH} D
    const Eigen::VectorXcd z = apply_m(u, -t, dneg, dpos);
    const double zn = z.norm();
    if (zn == 0.0) return sigma;
    v = z / zn;
  }
  return sigma;
}

}  // namespace

std::vector<DeformedNormPoint> verify_deformed_propagator(
    const CsrMatrix& H, const fock::FockBasis& basis,
    const TiltingWeights& weights, double a, double v,
    const std::vector<double>& t_grid, const DeformedNormOptions& opt) {
  const TiltingDiagonal diag = tilting_diagonal(basis, weights);
  if (diag.log_values.size() > 0 &&
      diag.log_values.maxCoeff() - diag.log_values.minCoeff() > kLogCap)
    fail(ErrorKind::Overflow,
         "similarity transform spans more than e^700; shrink mu N");
  const double N = basis.N();

  std::vector<DeformedNormPoint> report;
  report.reserve(t_grid.size());

  const bool dense = H.rows <= opt.dense_cap;
  std::unique_ptr<evolution::DenseEig> eig;
  if (dense) eig = std::make_unique<evolution::DenseEig>(H);

  for (const double t : t_grid) {
    DeformedNormPoint pt;
    pt.t = t;
    pt.log_bound = a * N * v * std::abs(t);
    if (dense) {
      Eigen::MatrixXcd M = eig->matrix(t);
      for (fock::index_t r = 0; r < H.rows; ++r)
        for (fock::index_t c = 0; c < H.rows; ++c)
          M(r, c) *= std::exp(diag.log_values[r] - diag.log_values[c]);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
      pt.measured = svd.singularValues()(0);
    } else {
      pt.measured = iterative_deformed_norm(H, diag.log_values, t, opt);
    }
    const double bound = std::exp(pt.log_bound);
    pt.ok = pt.measured <= bound * (1.0 + 1e-8);
    report.push_back(pt);
  }
  return report;
}

}  // namespace latgas::tilting
