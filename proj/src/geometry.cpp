#include "latgas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <utility>

#include "latgas/errors.hpp"
#include "latgas/util.hpp"

namespace latgas::geometry {

namespace {

constexpr double kEdgeTol = 1e-9;    // |edge length - 1| allowed
constexpr double kLabelSnap = 1e-9;  // float snap at the +-d/2 thresholds

void check_sites(const LatticeGraph& lattice, const SiteSet& S,
                 const char* name) {
  if (S.empty()) fail(ErrorKind::InvalidRegion, std::string(name) + " is empty");
  for (int i : S) {
    if (i < 0 || i >= lattice.size())
      fail(ErrorKind::InvalidRegion,
           std::string(name) + " has out-of-range site index " +
               std::to_string(i));
  }
}

void check_disjoint(const SiteSet& X, const SiteSet& Y) {
  std::set<int> sx(X.begin(), X.end());
  for (int i : Y)
    if (sx.count(i))
      fail(ErrorKind::InvalidRegion,
           "regions overlap at site " + std::to_string(i));
}

Eigen::MatrixXd gather(const LatticeGraph& lattice, const SiteSet& S) {
  Eigen::MatrixXd M(S.size(), lattice.D);
  for (size_t r = 0; r < S.size(); ++r) M.row(r) = lattice.sites.row(S[r]);
  return M;
}

}  // namespace

void LatticeGraph::validate() const {
  const int L = size();
  if (D < 1) fail(ErrorKind::InvalidLattice, "dimension must be positive");
  if (L < 1) fail(ErrorKind::InvalidLattice, "lattice has no sites");
  if (sites.cols() != D)
    fail(ErrorKind::InvalidLattice, "coordinate width does not match dimension");
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      if ((sites.row(i) - sites.row(j)).norm() < 1e-12)
        fail(ErrorKind::InvalidLattice,
             "sites " + std::to_string(i) + " and " + std::to_string(j) +
                 " coincide");
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= L || v < 0 || v >= L || u == v)
      fail(ErrorKind::InvalidLattice, "edge endpoints out of range");
    const double len = (sites.row(u) - sites.row(v)).norm();
    if (std::abs(len - 1.0) > kEdgeTol)
      fail(ErrorKind::InvalidLattice,
           "edge (" + std::to_string(u) + "," + std::to_string(v) +
               ") has length " + fmt_g(len) + ", expected 1");
  }
}

LatticeGraph make_chain(int L) {
  if (L < 1) fail(ErrorKind::InvalidLattice, "chain length must be positive");
  LatticeGraph g;
  g.D = 1;
  g.sites.resize(L, 1);
  for (int i = 0; i < L; ++i) g.sites(i, 0) = i;
  for (int i = 0; i + 1 < L; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

LatticeGraph make_grid(int W, int H) {
  if (W < 1 || H < 1)
    fail(ErrorKind::InvalidLattice, "grid extents must be positive");
  LatticeGraph g;
  g.D = 2;
  g.sites.resize(W * H, 2);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const int i = y * W + x;
      g.sites(i, 0) = x;
      g.sites(i, 1) = y;
      if (x + 1 < W) g.edges.emplace_back(i, i + 1);
      if (y + 1 < H) g.edges.emplace_back(i, i + W);
    }
  return g;
}

double region_distance(const LatticeGraph& lattice, const SiteSet& X,
                       const SiteSet& Y) {
  check_sites(lattice, X, "region X");
  check_sites(lattice, Y, "region Y");
  check_disjoint(X, Y);
  double best = std::numeric_limits<double>::infinity();
  for (int x : X)
    for (int y : Y)
      best = std::min(best, (lattice.sites.row(x) - lattice.sites.row(y)).norm());
  return best;
}

RegionPair make_region_pair(const LatticeGraph& lattice, SiteSet X, SiteSet Y) {
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  std::sort(Y.begin(), Y.end());
  Y.erase(std::unique(Y.begin(), Y.end()), Y.end());
  RegionPair rp;
  rp.d_xy = region_distance(lattice, X, Y);
  if (rp.d_xy <= 0.0)
    fail(ErrorKind::InvalidRegion, "regions are at zero distance");
  rp.X = std::move(X);
  rp.Y = std::move(Y);
  return rp;
}

double ramp(double u) {
  if (u >= 0.5) return 1.0;
  if (u <= -0.5) return -1.0;
  return 2.0 * u;
}

std::vector<RegionLabel> decompose(const Eigen::VectorXd& s, double width) {
  if (!(width > 0.0))
    fail(ErrorKind::InvalidRegion, "decomposition width must be positive");
  const double thr = 0.5 * width - kLabelSnap;
  std::vector<RegionLabel> labels(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] >= thr)
      labels[i] = RegionLabel::XInf;
    else if (s[i] <= -thr)
      labels[i] = RegionLabel::YInf;
    else
      labels[i] = RegionLabel::W0;
  }
  return labels;
}

namespace {

// Ramp evaluated through the labels so saturation on the outer sets is exact
// even when s carries rounding at the +-width/2 thresholds.
Eigen::VectorXd ramp_from_labels(const Eigen::VectorXd& s, double width,
                                 const std::vector<RegionLabel>& labels) {
  Eigen::VectorXd r(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    switch (labels[i]) {
      case RegionLabel::XInf: r[i] = 1.0; break;
      case RegionLabel::YInf: r[i] = -1.0; break;
      case RegionLabel::W0: r[i] = ramp(s[i] / width); break;
    }
  }
  return r;
}

SeparationProfile finish_profile(SeparationStrategy strategy, double width,
                                 Eigen::VectorXd s) {
  SeparationProfile p;
  p.strategy = strategy;
  p.width = width;
  p.labels = decompose(s, width);
  p.ramp = ramp_from_labels(s, width, p.labels);
  p.s = std::move(s);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Closest points of two convex hulls: min-norm point of the pairwise
// difference set by Wolfe's corral algorithm.  The linear-minimization step
// scans the materialized difference set when both inputs are small and uses
// per-factor support points otherwise; ties always resolve to the smallest
// (i, j), so runs are reproducible.
// ---------------------------------------------------------------------------

HullClosestPair closest_hull_points(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B) {
  const int na = static_cast<int>(A.rows());
  const int nb = static_cast<int>(B.rows());
  const int D = static_cast<int>(A.cols());
  if (na == 0 || nb == 0)
    fail(ErrorKind::InvalidRegion, "hull distance of an empty point set");
  if (B.cols() != D)
    fail(ErrorKind::InvalidRegion, "point sets live in different dimensions");

  const bool exhaustive = na <= 64 && nb <= 64;

  auto diff = [&](int i, int j) -> Eigen::VectorXd {
    return (A.row(i) - B.row(j)).transpose();
  };

  // Pair minimizing (a_i - b_j).dir; strict comparisons keep the first
  // (lexicographically smallest) minimizer.
  auto linmin = [&](const Eigen::VectorXd& dir) -> std::pair<int, int> {
    if (exhaustive) {
      int bi = 0, bj = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
          const double v = diff(i, j).dot(dir);
          if (v < best) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      return {bi, bj};
    }
    // min over the difference set splits into per-factor support points
    int bi = 0, bj = 0;
    double amin = A.row(0) * dir, bmax = B.row(0) * dir;
    for (int i = 1; i < na; ++i) {
      const double v = A.row(i) * dir;
      if (v < amin) {
        amin = v;
        bi = i;
      }
    }
    for (int j = 1; j < nb; ++j) {
      const double v = B.row(j) * dir;
      if (v > bmax) {
        bmax = v;
        bj = j;
      }
    }
    return {bi, bj};
  };

  double scale = 1.0;
  for (int i = 0; i < na; ++i) scale = std::max(scale, A.row(i).squaredNorm());
  for (int j = 0; j < nb; ++j) scale = std::max(scale, B.row(j).squaredNorm());
  const double opt_tol = 1e-12 * 4.0 * scale;
  constexpr double w_tol = 1e-11;

  std::vector<std::pair<int, int>> idx{{0, 0}};
  std::vector<Eigen::VectorXd> S{diff(0, 0)};
  std::vector<double> w{1.0};
  Eigen::VectorXd x = S[0];

  bool stalled = false;
  for (int iter = 0; iter < 1000 && !stalled; ++iter) {
    const auto [pi, pj] = linmin(x);
    const Eigen::VectorXd p = diff(pi, pj);
    if (x.dot(x) <= x.dot(p) + opt_tol) break;  // x already optimal
    if (std::find(idx.begin(), idx.end(), std::make_pair(pi, pj)) != idx.end())
      break;  // no new vertex can improve: numerical floor reached
    idx.emplace_back(pi, pj);
    S.push_back(p);
    w.push_back(0.0);

    for (int minor = 0; minor < 100; ++minor) {
      const int k = static_cast<int>(S.size());
      // affine minimizer of |sum alpha_m S_m|^2 with sum alpha = 1
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (int r = 0; r < k; ++r) {
        M(0, r + 1) = M(r + 1, 0) = 1.0;
        for (int c = 0; c < k; ++c) M(r + 1, c + 1) = S[r].dot(S[c]);
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[0] = 1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (!lu.isInvertible()) {  // affinely dependent corral: give up cleanly
        idx.pop_back();
        S.pop_back();
        w.pop_back();
        stalled = true;
        break;
      }
      const Eigen::VectorXd alpha = lu.solve(rhs).tail(k);

      if ((alpha.array() > w_tol).all()) {
        for (int m = 0; m < k; ++m) w[m] = alpha[m];
        x.setZero();
        for (int m = 0; m < k; ++m) x += w[m] * S[m];
        break;
      }
      // step from w toward alpha until the first weight vanishes
      double theta = 1.0;
      for (int m = 0; m < k; ++m)
        if (alpha[m] <= w_tol && w[m] > alpha[m])
          theta = std::min(theta, w[m] / (w[m] - alpha[m]));
      for (int m = 0; m < k; ++m) w[m] += theta * (alpha[m] - w[m]);
      for (int m = k - 1; m >= 0; --m)
        if (w[m] <= w_tol) {
          idx.erase(idx.begin() + m);
          S.erase(S.begin() + m);
          w.erase(w.begin() + m);
        }
      double total = 0.0;
      for (double wm : w) total += wm;
      for (double& wm : w) wm /= total;
      x.setZero();
      for (size_t m = 0; m < S.size(); ++m) x += w[m] * S[m];
    }
  }

  HullClosestPair out;
  out.point_a = Eigen::VectorXd::Zero(D);
  out.point_b = Eigen::VectorXd::Zero(D);
  for (size_t m = 0; m < idx.size(); ++m) {
    out.point_a += w[m] * A.row(idx[m].first).transpose();
    out.point_b += w[m] * B.row(idx[m].second).transpose();
  }
  out.distance = (out.point_a - out.point_b).norm();
  return out;
}

SeparationProfile separation_convex(const LatticeGraph& lattice,
                                    const SiteSet& X, const SiteSet& Y) {
  const double d = region_distance(lattice, X, Y);
  const HullClosestPair hull = closest_hull_points(gather(lattice, X),
                                                   gather(lattice, Y));
  if (hull.distance <= 1e-9)
    fail(ErrorKind::GeometryDegenerate, "convex hulls of X and Y touch");

  const Eigen::VectorXd b = (hull.point_a - hull.point_b) / hull.distance;
  const Eigen::VectorXd w0 = 0.5 * (hull.point_a + hull.point_b);
  Eigen::VectorXd s(lattice.size());
  for (int i = 0; i < lattice.size(); ++i)
    s[i] = b.dot(lattice.sites.row(i).transpose() - w0);

  // The linear profile certifies the hull gap; it must also cover the full
  // region distance, otherwise the caller needs a general strategy.
  for (int i : X)
    if (s[i] < 0.5 * d - kLabelSnap)
      fail(ErrorKind::GeometryDegenerate,
           "hull gap narrower than the region distance at X site " +
               std::to_string(i) + "; use a general separation strategy");
  for (int i : Y)
    if (s[i] > -0.5 * d + kLabelSnap)
      fail(ErrorKind::GeometryDegenerate,
           "hull gap narrower than the region distance at Y site " +
               std::to_string(i) + "; use a general separation strategy");

  return finish_profile(SeparationStrategy::ConvexHull, d, std::move(s));
}

namespace {

double dist_to_set(const LatticeGraph& lattice, const SiteSet& S,
                   const Eigen::VectorXd& p) {
  double best = std::numeric_limits<double>::infinity();
  for (int i : S)
    best = std::min(best, (lattice.sites.row(i).transpose() - p).norm());
  return best;
}

// dist_Y - dist_X: positive on X territory, negative on Y territory.
double gap_fn(const LatticeGraph& lattice, const SiteSet& X, const SiteSet& Y,
              const Eigen::VectorXd& p) {
  return dist_to_set(lattice, Y, p) - dist_to_set(lattice, X, p);
}

// Zero crossing of g along [u, v] given opposite signs at the endpoints:
// one subdivision pass picks the sign-changing half, bisection then pins the
// crossing to machine resolution.
Eigen::VectorXd locate_crossing(const LatticeGraph& lattice, const SiteSet& X,
                                const SiteSet& Y, Eigen::VectorXd u, double gu,
                                Eigen::VectorXd v, double gv) {
  {
    const Eigen::VectorXd m = 0.5 * (u + v);
    const double gm = gap_fn(lattice, X, Y, m);
    if (gm == 0.0) return m;
    if ((gu < 0.0) == (gm < 0.0)) {
      u = m;
      gu = gm;
    } else {
      v = m;
      gv = gm;
    }
  }
  for (int it = 0; it < 80 && (u - v).norm() > 1e-13; ++it) {
    const Eigen::VectorXd m = 0.5 * (u + v);
    const double gm = gap_fn(lattice, X, Y, m);
    if (gm == 0.0) return m;
    if ((gu < 0.0) == (gm < 0.0)) {
      u = m;
      gu = gm;
    } else {
      v = m;
      gv = gm;
    }
  }
  return 0.5 * (u + v);
}

// Sample the implicit surface {dist_Y = dist_X}: evaluate g on a padded
// grid, collect one point per sign-changing grid edge.
std::vector<Eigen::VectorXd> sample_surface(const LatticeGraph& lattice,
                                            const SiteSet& X, const SiteSet& Y,
                                            double d) {
  const int D = lattice.D;
  const Eigen::VectorXd lo =
      lattice.sites.colwise().minCoeff().transpose().array() - d;
  const Eigen::VectorXd hi =
      lattice.sites.colwise().maxCoeff().transpose().array() + d;
  const double pitch = d / 64.0;

  std::vector<int> steps(D);
  for (int k = 0; k < D; ++k)
    steps[k] = std::max(1, static_cast<int>(std::ceil((hi[k] - lo[k]) / pitch)));

  auto grid_point = [&](int i0, int i1) {
    Eigen::VectorXd p(D);
    p[0] = lo[0] + (hi[0] - lo[0]) * i0 / steps[0];
    if (D == 2) p[1] = lo[1] + (hi[1] - lo[1]) * i1 / steps[1];
    return p;
  };

  const int n0 = steps[0] + 1;
  const int n1 = (D == 2) ? steps[1] + 1 : 1;
  Eigen::MatrixXd gval(n0, n1);
#pragma omp parallel for collapse(2) schedule(static)
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      gval(i0, i1) = gap_fn(lattice, X, Y, grid_point(i0, i1));

  std::vector<Eigen::VectorXd> pts;
  auto visit_edge = [&](int a0, int a1, int b0, int b1) {
    const double ga = gval(a0, a1), gb = gval(b0, b1);
    if (ga == 0.0) {
      pts.push_back(grid_point(a0, a1));
      return;
    }
    if ((ga < 0.0) != (gb < 0.0))
      pts.push_back(locate_crossing(lattice, X, Y, grid_point(a0, a1), ga,
                                    grid_point(b0, b1), gb));
  };
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i0 = 0; i0 + 1 < n0; ++i0) visit_edge(i0, i1, i0 + 1, i1);
  if (D == 2)
    for (int i0 = 0; i0 < n0; ++i0)
      for (int i1 = 0; i1 + 1 < n1; ++i1) visit_edge(i0, i1, i0, i1 + 1);
  return pts;
}

}  // namespace

SeparationProfile separation_general(const LatticeGraph& lattice,
                                     const SiteSet& X, const SiteSet& Y,
                                     SeparationStrategy strategy) {
  const double d = region_distance(lattice, X, Y);
  const int L = lattice.size();
  Eigen::VectorXd s(L);

  if (strategy == SeparationStrategy::HalfGap) {
    for (int i = 0; i < L; ++i)
      s[i] = 0.5 * gap_fn(lattice, X, Y, lattice.sites.row(i).transpose());
    return finish_profile(strategy, d, std::move(s));
  }
  if (strategy != SeparationStrategy::SignedDistanceToS)
    fail(ErrorKind::Unsupported, "separation_general handles the half-gap and "
                                 "signed-distance strategies only");
  if (lattice.D > 2)
    fail(ErrorKind::Unsupported,
         "signed-distance sampling is limited to D <= 2");

  const std::vector<Eigen::VectorXd> surf = sample_surface(lattice, X, Y, d);
  if (surf.empty())
    fail(ErrorKind::GeometryDegenerate,
         "level-set sampler found no zero crossing");
  for (int i = 0; i < L; ++i) {
    const Eigen::VectorXd p = lattice.sites.row(i).transpose();
    const double g = gap_fn(lattice, X, Y, p);
    if (g == 0.0) {
      s[i] = 0.0;
      continue;
    }
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& q : surf) dist = std::min(dist, (p - q).norm());
    s[i] = (g > 0.0 ? dist : -dist);
  }
  return finish_profile(strategy, d, std::move(s));
}

SeparationProfile separation(const LatticeGraph& lattice, const SiteSet& X,
                             const SiteSet& Y, SeparationStrategy strategy) {
  if (strategy == SeparationStrategy::ConvexHull)
    return separation_convex(lattice, X, Y);
  return separation_general(lattice, X, Y, strategy);
}

const char* label_name(RegionLabel label) {
  switch (label) {
    case RegionLabel::YInf: return "Yinf";
    case RegionLabel::W0: return "W0";
    case RegionLabel::XInf: return "Xinf";
  }
  return "?";
}

const char* strategy_name(SeparationStrategy strategy) {
  switch (strategy) {
    case SeparationStrategy::ConvexHull: return "convex-hull";
    case SeparationStrategy::HalfGap: return "half-gap-surrogate";
    case SeparationStrategy::SignedDistanceToS: return "signed-distance-to-S";
  }
  return "?";
}

void write_profile_csv(std::ostream& out, const LatticeGraph& lattice,
                       const SeparationProfile& profile) {
  out << "site_index";
  for (int k = 0; k < lattice.D; ++k) out << ",x_" << k;
  out << ",s,ramp,label\n";
  for (int i = 0; i < lattice.size(); ++i) {
    out << i;
    for (int k = 0; k < lattice.D; ++k) out << ',' << fmt_g(lattice.sites(i, k));
    out << ',' << fmt_g(profile.s[i]) << ',' << fmt_g(profile.ramp[i]) << ','
        << label_name(profile.labels[i]) << '\n';
  }
}

}  // namespace latgas::geometry
