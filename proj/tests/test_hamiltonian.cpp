#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "latgas/errors.hpp"
#include "latgas/fock.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"
#include "latgas/sparse.hpp"

using namespace latgas;
using namespace latgas::hamiltonian;

namespace {

Eigen::VectorXd sorted_eigs(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("nearest-neighbor hopping follows the lattice edges") {
  const auto chain = geometry::make_chain(4);
  const auto J = nn_hopping(chain, 0.8);
  CHECK(J.family == HoppingFamily::NearestNeighbor);
  CHECK(J.amplitude == 0.8);
  CHECK(J.J(0, 1) == cplx(0.8, 0.0));
  CHECK(J.J(1, 0) == cplx(0.8, 0.0));
  CHECK(J.J(0, 2) == cplx(0.0, 0.0));
  CHECK(J.J(0, 0) == cplx(0.0, 0.0));
  J.validate();
}

TEST_CASE("exponential hopping decays with the pair distance") {
  const auto chain = geometry::make_chain(5);
  const auto J = expdecay_hopping(chain, 1.2, 0.9);
  CHECK(std::abs(J.J(0, 1)) ==
        doctest::Approx(1.2 * std::exp(-0.9)).epsilon(1e-14));
  CHECK(std::abs(J.J(0, 4)) ==
        doctest::Approx(1.2 * std::exp(-0.9 * 4.0)).epsilon(1e-14));
  J.validate();
}

TEST_CASE("velocity takes its closed form on chains and grids") {
  const auto chain = geometry::make_chain(6);
  const auto Jc = nn_hopping(chain, 1.0);
  for (double a : {0.3, 1.0, 1.7}) {
    const double v = velocity_v(Jc, chain.sites, a);
    CHECK(v == doctest::Approx(2.0 * std::sinh(a) / a).epsilon(1e-13));
  }
  CHECK(kappa(Jc, chain.sites) == doctest::Approx(2.0).epsilon(1e-14));

  const auto grid = geometry::make_grid(4, 4);
  const auto Jg = nn_hopping(grid, 0.7);
  const double vg = velocity_v(Jg, grid.sites, 0.9);
  CHECK(vg == doctest::Approx(4.0 * 0.7 * std::sinh(0.9) / 0.9).epsilon(1e-13));
  CHECK(kappa(Jg, grid.sites) == doctest::Approx(4.0 * 0.7).epsilon(1e-14));
}

TEST_CASE("velocity approaches the first moment as the rate vanishes") {
  const auto chain = geometry::make_chain(7);
  const auto J = expdecay_hopping(chain, 0.9, 1.8);
  const double k = kappa(J, chain.sites);
  CHECK(k > 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double a : {0.8, 0.4, 0.2, 0.1, 0.05}) {
    const double v = velocity_v(J, chain.sites, a);
    CHECK(v > k);
    CHECK(v < prev);  // monotone in a
    prev = v;
  }
  CHECK(std::abs(velocity_v(J, chain.sites, 1e-4) - k) <= 1e-6 * k);
}

TEST_CASE("exponential-decay velocity requires a rate inside the tail") {
  const auto chain = geometry::make_chain(6);
  const auto J = expdecay_hopping(chain, 1.0, 1.5);
  CHECK(velocity_v(J, chain.sites, 1.0) > 0.0);
  CHECK_THROWS_AS(velocity_v(J, chain.sites, 1.5), Error);
  CHECK_THROWS_AS(velocity_v(J, chain.sites, 2.0), Error);
}

TEST_CASE("bose-hubbard potential evaluates pair energies minus chemical "
          "terms") {
  const auto V = Potential::bose_hubbard(0.7, 0.3);
  const std::uint8_t occ[3] = {3, 1, 0};
  // U sum n(n-1) - mu sum n = 0.7*6 - 0.3*4
  CHECK(V.eval(occ, 3) == doctest::Approx(0.7 * 6.0 - 0.3 * 4.0).epsilon(1e-14));
  const auto Z = Potential::zero();
  CHECK(Z.eval(occ, 3) == 0.0);
}

TEST_CASE("assembled operators are exactly hermitian") {
  const auto chain = geometry::make_chain(5);
  const auto J = nn_hopping(chain, 1.0);
  for (int N : {2, 3}) {
    const fock::FockBasis basis(fock::Statistics::Boson, 5, N);
    const CsrMatrix H =
        assemble(basis, J, Potential::bose_hubbard(1.3, 0.4));
    CHECK(H.hermiticity_defect() == 0.0);
  }
  const fock::FockBasis fbasis(fock::Statistics::Fermion, 5, 2);
  const CsrMatrix Hf = assemble(fbasis, J, Potential::zero());
  CHECK(Hf.hermiticity_defect() == 0.0);
}

TEST_CASE("serial and parallel assembly give bit-identical matrices") {
  const auto chain = geometry::make_chain(6);
  const auto J = expdecay_hopping(chain, 1.1, 1.3);
  const fock::FockBasis basis(fock::Statistics::Boson, 6, 3);
  const auto V = Potential::bose_hubbard(0.8, 0.1);
  const CsrMatrix Hs = assemble(basis, J, V, Assembly::Serial);
  const CsrMatrix Hp = assemble(basis, J, V, Assembly::Parallel);
  REQUIRE(Hs.nnz() == Hp.nnz());
  CHECK(Hs.row_ptr == Hp.row_ptr);
  CHECK(Hs.col == Hp.col);
  CHECK(std::memcmp(Hs.val.data(), Hp.val.data(),
                    sizeof(cplx) * Hs.val.size()) == 0);
}

TEST_CASE("known six-state sector reproduces its hopping matrix") {
  const auto chain = geometry::make_chain(3);
  const auto J = nn_hopping(chain, 1.0);
  const fock::FockBasis basis(fock::Statistics::Boson, 3, 2);
  const Eigen::MatrixXcd H = assemble(basis, J, Potential::zero()).dense();
  const double rt2 = std::sqrt(2.0);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(6, 6);
  expect(0, 1) = expect(1, 2) = expect(2, 4) = expect(4, 5) = rt2;
  expect(1, 3) = expect(3, 4) = 1.0;
  expect += expect.transpose().eval();
  CHECK((H - expect.cast<cplx>()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("free fermions carry the one-body spectrum into subset sums") {
  const int L = 4;
  const auto chain = geometry::make_chain(L);
  const auto J = nn_hopping(chain, 1.0);
  const Eigen::VectorXd one =
      sorted_eigs(J.J.cast<cplx>());

  const fock::FockBasis basis(fock::Statistics::Fermion, L, 2);
  const Eigen::VectorXd many =
      sorted_eigs(assemble(basis, J, Potential::zero()).dense());

  std::vector<double> sums;
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) sums.push_back(one(i) + one(j));
  std::sort(sums.begin(), sums.end());
  REQUIRE(many.size() == static_cast<Eigen::Index>(sums.size()));
  for (Eigen::Index k = 0; k < many.size(); ++k)
    CHECK(many(k) == doctest::Approx(sums[k]).epsilon(1e-10));
}

TEST_CASE("free bosons carry the one-body spectrum into multiset sums") {
  const int L = 3;
  const auto chain = geometry::make_chain(L);
  const auto J = nn_hopping(chain, 1.0);
  const Eigen::VectorXd one = sorted_eigs(J.J.cast<cplx>());

  const fock::FockBasis basis(fock::Statistics::Boson, L, 2);
  const Eigen::VectorXd many =
      sorted_eigs(assemble(basis, J, Potential::zero()).dense());

  std::vector<double> sums;
  for (int i = 0; i < L; ++i)
    for (int j = i; j < L; ++j) sums.push_back(one(i) + one(j));
  std::sort(sums.begin(), sums.end());
  REQUIRE(many.size() == static_cast<Eigen::Index>(sums.size()));
  for (Eigen::Index k = 0; k < many.size(); ++k)
    CHECK(many(k) == doctest::Approx(sums[k]).epsilon(1e-10));
}

TEST_CASE("schedules demand positive durations and valid pieces") {
  const auto chain = geometry::make_chain(3);
  Schedule sched;
  sched.pieces.push_back({0.5, nn_hopping(chain, 1.0), Potential::zero()});
  sched.pieces.push_back({0.25, nn_hopping(chain, 0.5), Potential::zero()});
  sched.validate();
  CHECK(sched.total_duration() == doctest::Approx(0.75).epsilon(1e-15));

  Schedule bad;
  bad.pieces.push_back({0.0, nn_hopping(chain, 1.0), Potential::zero()});
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("bound parameters validate their ranges") {
  BoundParams p;
  p.a = 1.0;
  p.v = 2.35;
  p.kappa = 2.0;
  p.alpha = 0.25;
  p.beta = 0.75;
  p.d_xy = 3.0;
  p.N = 2;
  p.validate();

  auto bad = p;
  bad.alpha = 0.8;  // alpha >= beta
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.a = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.d_xy = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("bound parameter builder fills the lattice velocities") {
  const auto chain = geometry::make_chain(6);
  const auto J = nn_hopping(chain, 1.0);
  const auto p = make_bound_params(J, chain.sites, 1.0, 0.25, 0.75, 5.0, 3);
  CHECK(p.v == doctest::Approx(2.0 * std::sinh(1.0)).epsilon(1e-13));
  CHECK(p.kappa == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.N == 3);
}

TEST_CASE("optimal rate solves the supersonic stationarity condition") {
  // (beta-alpha) d / (2 D J t) = 2 pins a* = arccosh(2).
  const auto opt = optimal_a(1.0, 1, 0.5, 8.0, 1.0, 3);
  CHECK(opt.a_star == doctest::Approx(1.3169578969248166).epsilon(1e-15));
  // N (a* (beta-alpha) d - 2 D J sinh(a*) t) with a v(a) = 2 D J sinh(a)
  CHECK(opt.exponent ==
        doctest::Approx(3.0 * (opt.a_star * 4.0 - 2.0 * std::sinh(opt.a_star)))
            .epsilon(1e-12));

  // Stationarity: cosh(a*) equals the supersonic argument.
  CHECK(std::cosh(opt.a_star) == doctest::Approx(2.0).epsilon(1e-14));

  bool sonic = false;
  try {
    optimal_a(1.0, 1, 0.5, 8.0, 4.0, 3);  // argument 1/2 < 1
  } catch (const Error& e) {
    sonic = e.kind() == ErrorKind::NoSupersonicSeparation;
  }
  CHECK(sonic);
  CHECK_THROWS_AS(optimal_a(1.0, 1, 0.5, 8.0, 0.0, 3), Error);
}
