#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "latgas/errors.hpp"
#include "latgas/fock.hpp"
#include "latgas/free_oracle.hpp"

using namespace latgas;
using namespace latgas::free_oracle;

namespace {

OneBodyChain make_chain(int L, double amplitude = 1.0) {
  OneBodyChain c;
  c.L = L;
  c.amplitude = amplitude;
  return c;
}

Eigen::VectorXcd delta(int L, int site) {
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(L);
  f(site) = 1.0;
  return f;
}

}  // namespace

TEST_CASE("one-body chain builds a tridiagonal operator") {
  const auto c = make_chain(4, 0.7);
  const Eigen::MatrixXd h = c.matrix();
  CHECK(h.rows() == 4);
  CHECK(h(0, 1) == 0.7);
  CHECK(h(2, 1) == 0.7);
  CHECK(h(0, 2) == 0.0);
  CHECK(h(0, 0) == 0.0);

  OneBodyChain with_field = c;
  with_field.on_site = Eigen::VectorXd::LinSpaced(4, 0.1, 0.4);
  CHECK(with_field.matrix()(2, 2) == doctest::Approx(0.3).epsilon(1e-12));

  OneBodyChain bad;
  bad.L = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  OneBodyChain bad_field = c;
  bad_field.on_site = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(bad_field.validate(), Error);
}

TEST_CASE("two-site hopping rotates the amplitude by minus i sine") {
  const auto c = make_chain(2);
  const Eigen::VectorXcd f = delta(2, 0);
  for (double t : {0.3, 1.0, 2.2}) {
    const cplx a1 = one_body_amplitude(c, f, 1, t);
    CHECK(std::abs(a1 - cplx(0.0, -std::sin(t))) <= 1e-12);
    const cplx a0 = one_body_amplitude(c, f, 0, t);
    CHECK(std::abs(a0 - cplx(std::cos(t), 0.0)) <= 1e-12);
  }
}

TEST_CASE("one-body evolution is unitary") {
  const auto c = make_chain(7, 1.3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd f(7);
  for (int i = 0; i < 7; ++i) f(i) = cplx(gauss(rng), gauss(rng));
  f.normalize();
  for (double t : {0.5, 1.9, 3.3}) {
    CHECK(std::abs(evolve_one_body(c, f, t).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("uniform fields shift only a global phase") {
  const auto plain = make_chain(5);
  OneBodyChain shifted = plain;
  shifted.on_site = Eigen::VectorXd::Constant(5, 0.8);
  const Eigen::VectorXcd f = delta(5, 0);
  for (int r : {2, 3}) {
    CHECK(tail_weight(plain, f, r, 1.7) ==
          doctest::Approx(tail_weight(shifted, f, r, 1.7)).epsilon(1e-12));
  }
}

TEST_CASE("tail weight accumulates the far-side amplitudes") {
  const auto c = make_chain(2);
  const Eigen::VectorXcd f = delta(2, 0);
  for (double t : {0.4, 1.1}) {
    CHECK(tail_weight(c, f, 1, t) ==
          doctest::Approx(std::sin(t) * std::sin(t)).epsilon(1e-12));
    CHECK(tail_weight(c, f, 0, t) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cluster counts take exact ceilings with a float guard") {
  CHECK(cluster_count(0.5, 2) == 1);
  CHECK(cluster_count(0.5, 3) == 2);
  CHECK(cluster_count(2.0 / 3.0, 3) == 2);  // exact product stays put
  CHECK(cluster_count(0.34, 3) == 2);
  CHECK(cluster_count(1e-6, 5) == 1);
  CHECK_THROWS_AS(cluster_count(1.0, 4), Error);
  CHECK_THROWS_AS(cluster_count(0.0, 4), Error);
}

TEST_CASE("binomial tails evaluate exactly on small cases") {
  CHECK(binomial_tail(0.3, 0.5, 2) ==
        doctest::Approx(1.0 - 0.7 * 0.7).epsilon(1e-14));
  CHECK(binomial_tail(0.3, 0.5, 3) ==
        doctest::Approx(3.0 * 0.09 * 0.7 + 0.027).epsilon(1e-14));
  CHECK(binomial_tail(0.0, 0.5, 4) == 0.0);
  CHECK(binomial_tail(1.0, 0.5, 4) == 1.0);
}

TEST_CASE("vanishing thresholds recover the union probability") {
  for (double p : {0.05, 0.4, 0.9}) {
    for (int N : {1, 3, 6}) {
      CHECK(binomial_tail(p, 1e-6, N) ==
            doctest::Approx(1.0 - std::pow(1.0 - p, N)).epsilon(1e-12));
    }
  }
}

TEST_CASE("crude cap dominates the exact binomial tail") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 200; ++draw) {
    const double p = unit(rng);
    const double theta = 0.05 + 0.9 * unit(rng);
    const int N = 1 + int(unit(rng) * 8);
    const int m = cluster_count(theta, N);
    const double cap = crude_tail_cap(p, theta, N);
    CHECK(cap == doctest::Approx(std::pow(2.0, N) * std::pow(p, m))
                     .epsilon(1e-12));
    CHECK(binomial_tail(p, theta, N) <= cap * (1.0 + 1e-12));
  }
}

TEST_CASE("cluster probability composes the tail weight with the binomial") {
  const auto c = make_chain(6);
  const Eigen::VectorXcd f = delta(6, 0);
  for (double t : {0.8, 2.1}) {
    for (int r : {3, 4}) {
      const double p = tail_weight(c, f, r, t);
      CHECK(cluster_probability(c, f, r, 0.5, 3, t) ==
            doctest::Approx(binomial_tail(p, 0.5, 3)).epsilon(1e-14));
    }
  }
}

TEST_CASE("cluster states carry multinomial square roots") {
  const fock::FockBasis basis(fock::Statistics::Boson, 2, 2);
  Eigen::VectorXcd f(2);
  f << std::sqrt(0.5), std::sqrt(0.5);
  const Eigen::VectorXcd psi = cluster_state(basis, f);
  // occupations (2,0),(1,1),(0,2)
  CHECK(std::abs(psi(0) - cplx(0.5, 0.0)) <= 1e-14);
  CHECK(std::abs(psi(1) - cplx(std::sqrt(0.5), 0.0)) <= 1e-14);
  CHECK(std::abs(psi(2) - cplx(0.5, 0.0)) <= 1e-14);
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-14);
}

TEST_CASE("cone report exhibits constants dominating every grid point") {
  const auto c = make_chain(6);
  const Eigen::VectorXcd f = delta(6, 0);
  const std::vector<int> r_grid = {2, 3, 4};
  const std::vector<double> t_grid = {1.0, 1.5, 2.0};
  const auto rep = free_massmat_check(c, f, 0.5, 2, r_grid, t_grid);
  CHECK(rep.dominated);
  CHECK(rep.C > 0.0);
  CHECK(rep.points.size() == r_grid.size() * t_grid.size());
  for (const auto& pt : rep.points) {
    CHECK(pt.probability >= 0.0);
    CHECK(pt.probability <= 1.0 + 1e-12);
    CHECK(pt.probability <= pt.exhibited_bound * (1.0 + 1e-9));
  }
}

TEST_CASE("oracle csv writes one row per grid point") {
  const auto c = make_chain(5);
  const Eigen::VectorXcd f = delta(5, 0);
  const auto rep = free_massmat_check(c, f, 0.5, 2, {2, 3}, {1.0, 2.0});
  std::ostringstream out;
  write_oracle_csv(out, rep);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,t,N,theta,probability,exhibited_bound");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}
