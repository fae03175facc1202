#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace latgas::geometry {

// Embedded lattice: sites are points in R^D, edges (optional) join sites at
// Euclidean distance 1 and are only used to generate nearest-neighbor
// hopping.
struct LatticeGraph {
  int D = 1;
  Eigen::MatrixXd sites;  // L x D, one row per site
  std::vector<std::pair<int, int>> edges;

  int size() const { return static_cast<int>(sites.rows()); }
  Eigen::RowVectorXd site(int i) const { return sites.row(i); }

  // Distinct coordinates, edge length exactly 1.  Throws on violation.
  void validate() const;
};

LatticeGraph make_chain(int L);       // 1D sites at 0,1,...,L-1
LatticeGraph make_grid(int W, int H); // 2D integer grid, row-major site order

using SiteSet = std::vector<int>;

struct RegionPair {
  SiteSet X;
  SiteSet Y;
  double d_xy = 0.0;  // Euclidean distance between the site sets
};

// min_{x in X, y in Y} |x - y|; X, Y must be nonempty and disjoint
double region_distance(const LatticeGraph& lattice, const SiteSet& X,
                       const SiteSet& Y);

RegionPair make_region_pair(const LatticeGraph& lattice, SiteSet X, SiteSet Y);

enum class SeparationStrategy {
  ConvexHull,        // linear s from the closest pair of the convex hulls
  HalfGap,           // s = (dist_Y - dist_X)/2, exact and 1-Lipschitz
  SignedDistanceToS, // sampled signed distance to the equidistant surface
};

enum class RegionLabel : std::uint8_t { YInf, W0, XInf };

// Per-site separation data.  `width` is the region distance d_XY; every
// strategy certifies s >= width/2 on X and s <= -width/2 on Y (the convex
// strategy verifies this after the fact and refuses geometries whose hull
// gap is narrower than the region distance).
struct SeparationProfile {
  SeparationStrategy strategy;
  double width = 0.0;
  Eigen::VectorXd s;     // separation value per site
  Eigen::VectorXd ramp;  // f(s/width) per site, in [-1, 1]
  std::vector<RegionLabel> labels;
};

// Truncated ramp: -1 for u <= -1/2, +1 for u >= 1/2, 2u in between.
double ramp(double u);

// Threshold labeling of s against +-width/2; the outer sets are closed.
std::vector<RegionLabel> decompose(const Eigen::VectorXd& s, double width);

// Closest points of the convex hulls of two point sets (rows of A and B).
// Exhaustive min-norm-point search over the pairwise difference set for
// small inputs, support-point iteration otherwise.
struct HullClosestPair {
  Eigen::VectorXd point_a;
  Eigen::VectorXd point_b;
  double distance = 0.0;
};
HullClosestPair closest_hull_points(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B);

// s(x) = b.(x - w0) from the closest pair of the region hulls.  Throws
// GeometryDegenerate when the hulls touch or the linear profile cannot
// certify the full region distance; callers should fall back to a general
// strategy.
SeparationProfile separation_convex(const LatticeGraph& lattice,
                                    const SiteSet& X, const SiteSet& Y);

SeparationProfile separation_general(const LatticeGraph& lattice,
                                     const SiteSet& X, const SiteSet& Y,
                                     SeparationStrategy strategy);

// Dispatch helper used by the harness.
SeparationProfile separation(const LatticeGraph& lattice, const SiteSet& X,
                             const SiteSet& Y, SeparationStrategy strategy);

const char* label_name(RegionLabel label);
const char* strategy_name(SeparationStrategy strategy);

// CSV rows: site_index, x_0..x_{D-1}, s, ramp, label
void write_profile_csv(std::ostream& out, const LatticeGraph& lattice,
                       const SeparationProfile& profile);

}  // namespace latgas::geometry
