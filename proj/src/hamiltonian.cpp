#include "latgas/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "latgas/errors.hpp"

namespace latgas::hamiltonian {

namespace {
constexpr double kHermTol = 1e-12;
}

void HoppingMatrix::validate() const {
  if (J.rows() != J.cols())
    fail(ErrorKind::InvalidModel, "hopping matrix must be square");
  for (int x = 0; x < L(); ++x)
    for (int y = x; y < L(); ++y)
      if (std::abs(J(x, y) - std::conj(J(y, x))) > kHermTol)
        fail(ErrorKind::InvalidModel,
             "hopping matrix is not Hermitian at (" + std::to_string(x) + "," +
                 std::to_string(y) + ")");
}

HoppingMatrix nn_hopping(const geometry::LatticeGraph& lattice, double J) {
  const int L = lattice.size();
  HoppingMatrix out;
  out.family = HoppingFamily::NearestNeighbor;
  out.amplitude = J;
  out.J = Eigen::MatrixXcd::Zero(L, L);
  if (!lattice.edges.empty()) {
    for (const auto& [u, v] : lattice.edges) {
      out.J(u, v) = J;
      out.J(v, u) = J;
    }
  } else {
    for (int x = 0; x < L; ++x)
      for (int y = x + 1; y < L; ++y)
        if (std::abs((lattice.sites.row(x) - lattice.sites.row(y)).norm() -
                     1.0) <= 1e-9) {
          out.J(x, y) = J;
          out.J(y, x) = J;
        }
  }
  return out;
}

HoppingMatrix expdecay_hopping(const geometry::LatticeGraph& lattice, double J,
                               double gamma) {
  if (!(gamma > 0.0))
    fail(ErrorKind::InvalidModel, "exponential hopping needs gamma > 0");
  const int L = lattice.size();
  HoppingMatrix out;
  out.family = HoppingFamily::ExponentialDecay;
  out.amplitude = J;
  out.gamma = gamma;
  out.J = Eigen::MatrixXcd::Zero(L, L);
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y)
      if (x != y)
        out.J(x, y) =
            J * std::exp(-gamma *
                         (lattice.sites.row(x) - lattice.sites.row(y)).norm());
  return out;
}

HoppingMatrix custom_hopping(Eigen::MatrixXcd J) {
  HoppingMatrix out;
  out.family = HoppingFamily::Custom;
  out.J = std::move(J);
  out.validate();
  return out;
}

double velocity_v(const HoppingMatrix& J, const Eigen::MatrixXd& coords,
                  double a) {
  if (!(a > 0.0)) fail(ErrorKind::InvalidModel, "velocity needs a > 0");
  if (coords.rows() != J.L())
    fail(ErrorKind::InvalidModel, "coordinate count does not match hopping");
  if (J.family == HoppingFamily::ExponentialDecay && !(a < J.gamma))
    fail(ErrorKind::InvalidModel,
         "exponential hopping requires a < gamma for a finite velocity");
  double vmax = 0.0;
  for (int x = 0; x < J.L(); ++x) {
    double row = 0.0;
    for (int y = 0; y < J.L(); ++y) {
      if (y == x) continue;
      const double r = (coords.row(x) - coords.row(y)).norm();
      row += std::abs(J.J(x, y)) * std::sinh(a * r) / a;
    }
    vmax = std::max(vmax, row);
  }
  return vmax;
}

double kappa(const HoppingMatrix& J, const Eigen::MatrixXd& coords) {
  if (coords.rows() != J.L())
    fail(ErrorKind::InvalidModel, "coordinate count does not match hopping");
  double kmax = 0.0;
  for (int x = 0; x < J.L(); ++x) {
    double row = 0.0;
    for (int y = 0; y < J.L(); ++y) {
      if (y == x) continue;
      row += std::abs(J.J(x, y)) * (coords.row(x) - coords.row(y)).norm();
    }
    kmax = std::max(kmax, row);
  }
  return kmax;
}

double Potential::eval(const std::uint8_t* occ, int L) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::BoseHubbard: {
      double v = 0.0;
      for (int x = 0; x < L; ++x) {
        const double n = occ[x];
        v += U * n * (n - 1.0) - mu * n;
      }
      return v;
    }
    case Kind::Custom:
      return custom(occ, L);
  }
  return 0.0;
}

Potential Potential::bose_hubbard(double U, double mu) {
  Potential p;
  p.kind = Kind::BoseHubbard;
  p.U = U;
  p.mu = mu;
  return p;
}

Potential Potential::custom_fn(
    std::function<double(const std::uint8_t*, int)> fn) {
  Potential p;
  p.kind = Kind::Custom;
  p.custom = std::move(fn);
  return p;
}

namespace {

// Row r of H: diagonal V + sum J_xx n_x, then J_xy * (a_y^dag a_x amplitude
// on |r>) for each nonzero J_xy.  The reversed hop realizes <r|a_x^dag a_y|c>
// with a real amplitude, so rows r and c receive exactly conjugate values.
SparseRow build_row(const fock::FockBasis& basis, const HoppingMatrix& J,
                    const Potential& V,
                    const std::vector<std::pair<int, int>>& pairs,
                    fock::index_t r) {
  SparseRow row;
  const std::uint8_t* occ = basis.state(r);
  double diag = V.eval(occ, basis.L());
  for (int x = 0; x < basis.L(); ++x)
    diag += J.J(x, x).real() * occ[x];
  if (diag != 0.0) row.emplace_back(r, cplx(diag, 0.0));
  for (const auto& [x, y] : pairs) {
    const fock::HopResult h = fock::apply_hop(basis, r, y, x);
    if (h.target >= 0) row.emplace_back(h.target, J.J(x, y) * h.amp);
  }
  return row;
}

}  // namespace

CsrMatrix assemble(const fock::FockBasis& basis, const HoppingMatrix& J,
                   const Potential& V, Assembly mode) {
  if (J.L() != basis.L())
    fail(ErrorKind::InvalidModel, "hopping matrix size does not match lattice");
  J.validate();

  std::vector<std::pair<int, int>> pairs;  // ordered (x, y), x != y, J_xy != 0
  for (int x = 0; x < basis.L(); ++x)
    for (int y = 0; y < basis.L(); ++y)
      if (x != y && J.J(x, y) != cplx(0.0, 0.0)) pairs.emplace_back(x, y);

  const fock::index_t dim = basis.dim();
  std::vector<SparseRow> rows(dim);
  const bool parallel = mode == Assembly::Parallel ||
                        (mode == Assembly::Auto && dim >= 256);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (fock::index_t r = 0; r < dim; ++r)
      rows[r] = build_row(basis, J, V, pairs, r);
  } else {
    for (fock::index_t r = 0; r < dim; ++r)
      rows[r] = build_row(basis, J, V, pairs, r);
  }
  return csr_from_rows(dim, dim, std::move(rows));
}

double Schedule::total_duration() const {
  double t = 0.0;
  for (const auto& p : pieces) t += p.duration;
  return t;
}

void Schedule::validate() const {
  if (pieces.empty())
    fail(ErrorKind::InvalidModel, "schedule has no pieces");
  for (const auto& p : pieces) {
    if (!(p.duration > 0.0))
      fail(ErrorKind::InvalidModel, "schedule piece durations must be positive");
    p.J.validate();
  }
}

void BoundParams::validate() const {
  if (!(alpha >= 0.0 && alpha < beta && beta <= 1.0))
    fail(ErrorKind::InvalidModel,
         "thresholds must satisfy 0 <= alpha < beta <= 1");
  if (!(a > 0.0)) fail(ErrorKind::InvalidModel, "decay rate a must be positive");
  if (!(d_xy > 0.0))
    fail(ErrorKind::InvalidModel, "region distance must be positive");
  if (N < 0) fail(ErrorKind::InvalidModel, "particle number must be nonnegative");
  if (kappa > v + 1e-12)
    fail(ErrorKind::InvalidModel, "first moment exceeds the velocity");
}

BoundParams make_bound_params(const HoppingMatrix& J,
                              const Eigen::MatrixXd& coords, double a,
                              double alpha, double beta, double d_xy, int N) {
  BoundParams p;
  p.a = a;
  p.v = velocity_v(J, coords, a);
  p.kappa = kappa(J, coords);
  p.alpha = alpha;
  p.beta = beta;
  p.d_xy = d_xy;
  p.N = N;
  p.validate();
  return p;
}

OptimalTilt optimal_a(double J, int D, double beta_minus_alpha, double d,
                      double t, int N) {
  if (!(J > 0.0) || D < 1)
    fail(ErrorKind::InvalidModel, "optimal_a needs J > 0 and D >= 1");
  if (!(beta_minus_alpha > 0.0) || !(d > 0.0))
    fail(ErrorKind::InvalidModel, "optimal_a needs beta > alpha and d > 0");
  if (t == 0.0)
    fail(ErrorKind::InvalidModel, "optimal_a is undefined at t = 0");
  const double bd = beta_minus_alpha * d;
  const double arg = bd / (2.0 * D * J * std::abs(t));
  if (!(arg > 1.0))
    fail(ErrorKind::NoSupersonicSeparation,
         "inside the light cone: (beta-alpha) d <= 2 D J |t|");
  OptimalTilt out;
  out.a_star = std::acosh(arg);
  // a v(a) = 2 D J sinh(a), so the minimized exponent rate is
  // a* bd - 2 D J sinh(a*) |t|.
  out.exponent =
      N * (out.a_star * bd - 2.0 * D * J * std::sinh(out.a_star) * std::abs(t));
  out.asymptotic_log_bound = N * bd * std::log(std::abs(t) / bd);
  return out;
}

}  // namespace latgas::hamiltonian
