#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "latgas/bounds.hpp"
#include "latgas/errors.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"

using namespace latgas;
using namespace latgas::bounds;

namespace {

hamiltonian::BoundParams params(int N, double a, double v) {
  hamiltonian::BoundParams p;
  p.a = a;
  p.v = v;
  p.kappa = 2.0;
  p.alpha = 0.25;
  p.beta = 0.75;
  p.d_xy = 7.0;
  p.N = N;
  return p;
}

}  // namespace

TEST_CASE("log bound evaluates its closed form and is even in time") {
  const auto p = params(3, 1.0, 2.35);
  const double t = 0.8;
  const double expect = -3.0 * (1.0 * (0.5 * 7.0 - 2.35 * 0.8));
  CHECK(log_norm_bound(p, t) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(log_norm_bound(p, -t) == log_norm_bound(p, t));
  CHECK(log_norm_bound(p, 0.0) == doctest::Approx(-10.5).epsilon(1e-15));
}

TEST_CASE("log bound is exactly linear in the particle number") {
  for (double a : {0.5, 1.0}) {
    for (double t : {0.0, 0.3, 1.7, 2.9}) {
      auto p1 = params(1, a, 2.35);
      const double lb1 = log_norm_bound(p1, t);
      for (int N = 2; N <= 64; ++N) {
        auto pN = params(N, a, 2.35);
        CHECK(log_norm_bound(pN, t) == double(N) * lb1);
      }
    }
  }
}

TEST_CASE("bound evaluation clamps inside the cone and squares outside") {
  const auto p = params(2, 1.0, 2.0);
  // Supersonic: exponent < 0, probability is the squared bound.
  const auto far = massmat_bound(p, 0.5);
  CHECK(far.exponent < 0.0);
  CHECK(far.norm_bound == doctest::Approx(std::exp(far.exponent)).epsilon(1e-15));
  CHECK(far.probability_bound ==
        doctest::Approx(std::exp(2.0 * far.exponent)).epsilon(1e-15));
  CHECK(far.raw_norm_bound == far.norm_bound);

  // Inside the cone the reported bounds clamp to one; raw stays vacuous.
  const auto in = massmat_bound(p, 5.0);
  CHECK(in.exponent > 0.0);
  CHECK(in.norm_bound == 1.0);
  CHECK(in.probability_bound == 1.0);
  CHECK(in.raw_norm_bound > 1.0);
}

TEST_CASE("bound parameters are validated before evaluation") {
  auto p = params(2, 1.0, 2.35);
  p.beta = 0.2;  // beta <= alpha
  CHECK_THROWS_AS(log_norm_bound(p, 1.0), Error);
  auto q = params(2, -1.0, 2.35);
  CHECK_THROWS_AS(log_norm_bound(q, 1.0), Error);
}

TEST_CASE("cold-atom replica point lands on its published magnitudes") {
  const double third = 0.3333333333333333;
  const double t = 0.0006666666666666666;
  const auto pb =
      physical_units_bound(18, 500.0, 5e-7, 1, third, 6.0, t,
                           UnitsMode::Replica);
  CHECK(pb.exponent == -18.0);  // ties-to-even rounding lands exactly
  CHECK(pb.probability == 1.5229979744712629e-08);

  const auto single =
      physical_units_bound(1, 500.0, 5e-7, 1, third, 6.0, t,
                           UnitsMode::Replica);
  CHECK(single.exponent == -1.0);
  CHECK(single.probability == 0.36787944117144233);
}

TEST_CASE("exact mode tightens the replica time coefficient") {
  const double third = 0.3333333333333333;
  const double t = 0.0006666666666666666;
  const auto replica =
      physical_units_bound(18, 500.0, 5e-7, 1, third, 6.0, t,
                           UnitsMode::Replica);
  const auto exact =
      physical_units_bound(18, 500.0, 5e-7, 1, third, 6.0, t,
                           UnitsMode::Exact);
  // 2 sinh(1) < 3: the exact coefficient keeps more of the distance term.
  CHECK(exact.exponent < replica.exponent);
  const double expect =
      -18.0 * (third * 6.0 - 2.0 * std::sinh(1.0) * 500.0 * t);
  CHECK(exact.exponent == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("physical bound is independent of the lattice spacing value") {
  for (double r0 : {1e-9, 5e-7, 1.0}) {
    const auto pb = physical_units_bound(18, 500.0, r0, 1,
                                         0.3333333333333333, 6.0,
                                         0.0006666666666666666,
                                         UnitsMode::Replica);
    CHECK(pb.exponent == -18.0);
  }
}

TEST_CASE("physical bound clamps once the cone catches up") {
  const auto pb = physical_units_bound(18, 500.0, 5e-7, 1, 0.5, 4.0, 1.0,
                                       UnitsMode::Replica);
  CHECK(pb.exponent > 0.0);
  CHECK(pb.probability == 1.0);
  CHECK_THROWS_AS(physical_units_bound(18, -1.0, 5e-7, 1, 0.5, 4.0, 1.0,
                                       UnitsMode::Replica),
                  Error);
}

TEST_CASE("velocity comparison tabulates slopes against the first moment") {
  const auto chain = geometry::make_chain(6);
  const auto J = hamiltonian::nn_hopping(chain, 1.0);
  const std::vector<double> a_grid = {0.5, 1.0, 1.5};
  const auto rows = velocity_comparison(J, chain.sites, a_grid, 0.5);
  REQUIRE(rows.size() == 3);
  double prev = 0.0;
  for (size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].a == a_grid[k]);
    CHECK(rows[k].kappa == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rows[k].v ==
          doctest::Approx(2.0 * std::sinh(a_grid[k]) / a_grid[k])
              .epsilon(1e-13));
    CHECK(rows[k].slope_ratio ==
          doctest::Approx(rows[k].v / 0.5).epsilon(1e-13));
    CHECK(rows[k].v > rows[k].kappa);
    CHECK(rows[k].v > prev);
    prev = rows[k].v;
  }
  CHECK_THROWS_AS(velocity_comparison(J, chain.sites, a_grid, 0.0), Error);
}
