#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "latgas/errors.hpp"
#include "latgas/geometry.hpp"

using namespace latgas;
using namespace latgas::geometry;

namespace {

// Random disjoint site sets; retries until both are nonempty.
struct RegionDraw {
  std::vector<int> X, Y;
};

RegionDraw draw_regions(std::mt19937_64& rng, int L, int max_size) {
  std::vector<int> sites(L);
  for (int i = 0; i < L; ++i) sites[i] = i;
  std::shuffle(sites.begin(), sites.end(), rng);
  std::uniform_int_distribution<int> size(1, max_size);
  int nx = size(rng), ny = size(rng);
  nx = std::min(nx, L - 1);
  ny = std::min(ny, L - nx);
  RegionDraw d;
  d.X.assign(sites.begin(), sites.begin() + nx);
  d.Y.assign(sites.begin() + nx, sites.begin() + nx + ny);
  return d;
}

double brute_distance(const LatticeGraph& g, const std::vector<int>& X,
                      const std::vector<int>& Y) {
  double best = std::numeric_limits<double>::infinity();
  for (int x : X)
    for (int y : Y) best = std::min(best, (g.site(x) - g.site(y)).norm());
  return best;
}

double min_pair_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      best = std::min(best, (A.row(i) - B.row(j)).norm());
  return best;
}

}  // namespace

TEST_CASE("chain and grid constructors produce unit-edge lattices") {
  const auto chain = make_chain(5);
  CHECK(chain.D == 1);
  CHECK(chain.size() == 5);
  CHECK(chain.edges.size() == 4);
  chain.validate();

  const auto grid = make_grid(3, 4);
  CHECK(grid.D == 2);
  CHECK(grid.size() == 12);
  CHECK(grid.edges.size() == 3 * 4 - 4 + 3 * 3);  // 2WH - W - H
  grid.validate();
  CHECK(grid.site(5)(0) == 2.0);  // row-major: site 5 = (2, 1)
  CHECK(grid.site(5)(1) == 1.0);
}

TEST_CASE("lattice validation rejects duplicates and stretched edges") {
  LatticeGraph g;
  g.D = 1;
  g.sites.resize(2, 1);
  g.sites << 0.0, 0.0;
  CHECK_THROWS_AS(g.validate(), Error);

  LatticeGraph h;
  h.D = 1;
  h.sites.resize(2, 1);
  h.sites << 0.0, 1.5;
  h.edges = {{0, 1}};
  CHECK_THROWS_AS(h.validate(), Error);
}

TEST_CASE("region distance is the exhaustive pair minimum") {
  std::mt19937_64 rng(2024);
  for (int draw = 0; draw < 40; ++draw) {
    const bool use_grid = draw % 2 == 0;
    const LatticeGraph g =
        use_grid ? make_grid(3 + int(rng() % 4), 3 + int(rng() % 4))
                 : make_chain(4 + int(rng() % 12));
    const auto d = draw_regions(rng, g.size(), 3);
    CHECK(region_distance(g, d.X, d.Y) ==
          doctest::Approx(brute_distance(g, d.X, d.Y)).epsilon(1e-14));
  }
}

TEST_CASE("region pairs deduplicate sites and refuse overlap") {
  const auto g = make_chain(6);
  const auto rp = make_region_pair(g, {5, 4, 5}, {0, 1, 1});
  CHECK(rp.X == std::vector<int>({4, 5}));
  CHECK(rp.Y == std::vector<int>({0, 1}));
  CHECK(rp.d_xy == 3.0);
  CHECK_THROWS_AS(make_region_pair(g, {2, 3}, {3, 4}), Error);
}

TEST_CASE("truncated ramp saturates outside the half-open window") {
  CHECK(ramp(0.5) == 1.0);
  CHECK(ramp(-0.5) == -1.0);
  CHECK(ramp(0.75) == 1.0);
  CHECK(ramp(-2.0) == -1.0);
  CHECK(ramp(0.2) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(ramp(0.0) == 0.0);
}

TEST_CASE("decomposition snaps float dust at the thresholds") {
  Eigen::VectorXd s(4);
  s << 1.0 - 1e-10, 1.0 - 1e-8, -1.0 + 1e-10, 0.0;
  const auto labels = decompose(s, 2.0);  // thresholds at +-1
  CHECK(labels[0] == RegionLabel::XInf);
  CHECK(labels[1] == RegionLabel::W0);
  CHECK(labels[2] == RegionLabel::YInf);
  CHECK(labels[3] == RegionLabel::W0);
  CHECK_THROWS_AS(decompose(s, 0.0), Error);
}

TEST_CASE("hull closest points solve small known instances") {
  Eigen::MatrixXd A(1, 2), B(1, 2);
  A << 0.0, 0.0;
  B << 3.0, 4.0;
  auto pair = closest_hull_points(A, B);
  CHECK(pair.distance == doctest::Approx(5.0).epsilon(1e-13));

  // Point against a segment: the witness sits inside the segment.
  Eigen::MatrixXd seg(2, 2), pt(1, 2);
  seg << 0.0, 0.0, 2.0, 0.0;
  pt << 1.0, 2.0;
  pair = closest_hull_points(seg, pt);
  CHECK(pair.distance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pair.point_a(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pair.point_a(1) == doctest::Approx(0.0).epsilon(1e-10));

  // A point inside the other hull gives distance zero.
  Eigen::MatrixXd inside(1, 2);
  inside << 1.0, 0.0;
  pair = closest_hull_points(seg, inside);
  CHECK(pair.distance <= 1e-9);
}

TEST_CASE("hull closest points satisfy the supporting-plane certificate") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int draw = 0; draw < 50; ++draw) {
    const int na = 1 + int(rng() % 6), nb = 1 + int(rng() % 6);
    Eigen::MatrixXd A(na, 2), B(nb, 2);
    for (int i = 0; i < na; ++i) A.row(i) << coord(rng), coord(rng);
    for (int j = 0; j < nb; ++j) B.row(j) << coord(rng), coord(rng);
    const auto pair = closest_hull_points(A, B);
    const Eigen::VectorXd x = pair.point_a - pair.point_b;

    // Min-norm point of the difference hull: x.d >= x.x for every
    // pairwise difference d, up to solver tolerance.
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) {
        const Eigen::VectorXd diff = (A.row(i) - B.row(j)).transpose();
        worst = std::min(worst, x.dot(diff));
      }
    CHECK(worst >= x.squaredNorm() - 1e-8);
    CHECK(pair.distance <= min_pair_distance(A, B) + 1e-12);
  }
}

TEST_CASE("half-gap separation on a chain takes its exact closed form") {
  const auto g = make_chain(7);
  const std::vector<int> X = {5, 6}, Y = {0, 1};
  const auto prof = separation(g, X, Y, SeparationStrategy::HalfGap);
  CHECK(prof.width == 4.0);
  // s = (dist to Y - dist to X) / 2 site by site
  const double expect[] = {-2.5, -2.0, -1.0, 0.0, 1.0, 2.0, 2.5};
  for (int i = 0; i < 7; ++i)
    CHECK(prof.s(i) == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(prof.ramp(2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(prof.ramp(5) == 1.0);
  CHECK(prof.ramp(1) == -1.0);
  CHECK(prof.labels[6] == RegionLabel::XInf);
  CHECK(prof.labels[3] == RegionLabel::W0);
  CHECK(prof.labels[0] == RegionLabel::YInf);
}

TEST_CASE("convex separation is linear and certifies terminal regions") {
  const auto g = make_chain(5);
  const auto prof =
      separation(g, {4}, {0}, SeparationStrategy::ConvexHull);
  CHECK(prof.width == 4.0);
  for (int i = 0; i < 5; ++i)
    CHECK(prof.s(i) == doctest::Approx(i - 2.0).epsilon(1e-12));
  CHECK(prof.ramp(4) == 1.0);
  CHECK(prof.ramp(0) == -1.0);
}

TEST_CASE("convex separation refuses a hull gap below the region distance") {
  // Two staggered parallel pairs: the closest site pair is farther apart
  // than the hull gap, so no linear profile can certify both.
  LatticeGraph g;
  g.D = 2;
  g.sites.resize(4, 2);
  g.sites << 0.0, 0.0, 2.0, 0.0, 1.0, 1.5, 3.0, 1.5;
  bool threw = false;
  try {
    separation(g, {0, 1}, {2, 3}, SeparationStrategy::ConvexHull);
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::GeometryDegenerate;
  }
  CHECK(threw);

  // Touching hulls have no separating direction at all.
  LatticeGraph h;
  h.D = 2;
  h.sites.resize(3, 2);
  h.sites << 0.0, 0.0, 2.0, 0.0, 1.0, 0.0;
  bool threw_touch = false;
  try {
    separation(h, {0, 1}, {2}, SeparationStrategy::ConvexHull);
  } catch (const Error& e) {
    threw_touch = e.kind() == ErrorKind::GeometryDegenerate;
  }
  CHECK(threw_touch);
}

TEST_CASE("exact strategies are 1-Lipschitz and saturate on both regions") {
  std::mt19937_64 rng(4242);
  int convex_hits = 0;
  for (int draw = 0; draw < 60; ++draw) {
    const bool use_grid = draw % 2 == 0;
    const LatticeGraph g = use_grid
                               ? make_grid(3 + int(rng() % 4), 3 + int(rng() % 4))
                               : make_chain(5 + int(rng() % 14));
    const auto regions = draw_regions(rng, g.size(), 3);
    std::vector<SeparationProfile> profs;
    profs.push_back(
        separation(g, regions.X, regions.Y, SeparationStrategy::HalfGap));
    try {
      profs.push_back(separation(g, regions.X, regions.Y,
                                 SeparationStrategy::ConvexHull));
      ++convex_hits;
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::GeometryDegenerate);
    }
    for (const auto& prof : profs) {
      const double half = 0.5 * prof.width;
      for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j)
          CHECK(std::abs(prof.s(i) - prof.s(j)) <=
                (g.site(i) - g.site(j)).norm() + 1e-12);
      for (int x : regions.X) {
        CHECK(prof.s(x) >= half - 1e-12);
        CHECK(prof.ramp(x) == 1.0);
      }
      for (int y : regions.Y) {
        CHECK(prof.s(y) <= -half + 1e-12);
        CHECK(prof.ramp(y) == -1.0);
      }
    }
  }
  CHECK(convex_hits > 0);
}

TEST_CASE("sampled level-set strategy holds at the sampling pitch") {
  std::mt19937_64 rng(515);
  for (int draw = 0; draw < 8; ++draw) {
    const bool use_grid = draw % 2 == 0;
    const LatticeGraph g = use_grid ? make_grid(4, 4) : make_chain(9);
    const auto regions = draw_regions(rng, g.size(), 2);
    const auto prof = separation(g, regions.X, regions.Y,
                                 SeparationStrategy::SignedDistanceToS);
    const double half = 0.5 * prof.width;
    const double pitch = prof.width / 32.0;  // sampler resolution slack
    for (int i = 0; i < g.size(); ++i)
      for (int j = i + 1; j < g.size(); ++j)
        CHECK(std::abs(prof.s(i) - prof.s(j)) <=
              (g.site(i) - g.site(j)).norm() + pitch);
    for (int x : regions.X) {
      CHECK(prof.s(x) >= half - 1e-9);
      CHECK(prof.ramp(x) == 1.0);
    }
    for (int y : regions.Y) {
      CHECK(prof.s(y) <= -half + 1e-9);
      CHECK(prof.ramp(y) == -1.0);
    }
  }
}

TEST_CASE("profile csv lists one labeled row per site") {
  const auto g = make_chain(4);
  const auto prof = separation(g, {3}, {0}, SeparationStrategy::HalfGap);
  std::ostringstream out;
  write_profile_csv(out, g, prof);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "site_index,x_0,s,ramp,label");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  CHECK(out.str().find("Xinf") != std::string::npos);
  CHECK(out.str().find("Yinf") != std::string::npos);
}
