#include "latgas/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <set>

#include "latgas/errors.hpp"

namespace latgas::fock {

namespace {

std::string key_of(const std::uint8_t* occ, int L) {
  return std::string(reinterpret_cast<const char*>(occ), L);
}

std::int64_t checked_binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::int64_t>::max())
      fail(ErrorKind::Overflow, "sector dimension exceeds 2^63");
  }
  return static_cast<std::int64_t>(r);
}

void check_sector(Statistics statistics, int L, int N) {
  if (L < 1) fail(ErrorKind::InvalidSector, "site count must be positive");
  if (N < 0) fail(ErrorKind::InvalidSector, "particle number must be nonnegative");
  if (N > 255) fail(ErrorKind::InvalidSector, "occupations are stored as bytes; N <= 255");
  if (statistics == Statistics::Fermion && N > L)
    fail(ErrorKind::InvalidSector,
         "fermion sector overfilled: N = " + std::to_string(N) + " on " +
             std::to_string(L) + " sites");
}

}  // namespace

const char* statistics_name(Statistics s) {
  return s == Statistics::Boson ? "boson" : "fermion";
}

index_t sector_dimension(Statistics statistics, int L, int N) {
  check_sector(statistics, L, N);
  return statistics == Statistics::Boson ? checked_binom(N + L - 1, N)
                                         : checked_binom(L, N);
}

FockBasis::FockBasis(Statistics statistics, int L, int N)
    : statistics_(statistics), L_(L), N_(N) {
  dim_ = sector_dimension(statistics, L, N);
  states_.reserve(static_cast<size_t>(dim_) * L_);

  // Colex order: enumerate the last site's occupation outermost, ascending.
  std::vector<std::uint8_t> occ(L_, 0);
  const int cap = statistics == Statistics::Fermion ? 1 : N;
  std::function<void(int, int)> emit = [&](int sites, int left) {
    if (sites == 1) {
      if (left <= cap) {
        occ[0] = static_cast<std::uint8_t>(left);
        states_.insert(states_.end(), occ.begin(), occ.end());
      }
      return;
    }
    for (int n = 0; n <= std::min(left, cap); ++n) {
      occ[sites - 1] = static_cast<std::uint8_t>(n);
      emit(sites - 1, left - n);
    }
  };
  emit(L_, N_);

  index_.reserve(dim_);
  for (index_t d = 0; d < dim_; ++d) index_.emplace(key_of(state(d), L_), d);
}

index_t FockBasis::index_of(const std::uint8_t* occ) const {
  const auto it = index_.find(key_of(occ, L_));
  return it == index_.end() ? -1 : it->second;
}

namespace {

std::vector<int> checked_region(const FockBasis& basis,
                                const std::vector<int>& S) {
  std::vector<int> out(S.begin(), S.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (int i : out)
    if (i < 0 || i >= basis.L())
      fail(ErrorKind::InvalidRegion,
           "site index " + std::to_string(i) + " outside the lattice");
  return out;
}

}  // namespace

DiagonalObservable number_observable(const FockBasis& basis,
                                     const std::vector<int>& S) {
  const std::vector<int> sites = checked_region(basis, S);
  DiagonalObservable obs;
  obs.values.resize(basis.dim());
  for (index_t d = 0; d < basis.dim(); ++d) {
    int n = 0;
    for (int i : sites) n += basis.occupation(d, i);
    obs.values[d] = n;
  }
  return obs;
}

DiagonalObservable diagonal_lift(const FockBasis& basis,
                                 const Eigen::VectorXd& per_site) {
  if (per_site.size() != basis.L())
    fail(ErrorKind::InvalidState, "per-site function has wrong length");
  DiagonalObservable obs;
  obs.values.resize(basis.dim());
  for (index_t d = 0; d < basis.dim(); ++d) {
    double v = 0.0;
    for (int x = 0; x < basis.L(); ++x)
      v += per_site[x] * basis.occupation(d, x);
    obs.values[d] = v;
  }
  return obs;
}

DiagonalObservable threshold_projector(const FockBasis& basis,
                                       const std::vector<int>& S, double c) {
  if (!(c >= 0.0 && c <= 1.0))
    fail(ErrorKind::InvalidSector, "projector threshold must lie in [0,1]");
  const std::vector<int> sites = checked_region(basis, S);
  const double cut = c * basis.N() - 1e-9;  // N_S >= cN on integer counts
  DiagonalObservable obs;
  obs.values.resize(basis.dim());
  for (index_t d = 0; d < basis.dim(); ++d) {
    int n = 0;
    for (int i : sites) n += basis.occupation(d, i);
    obs.values[d] = (n >= cut) ? 1.0 : 0.0;
  }
  return obs;
}

HopResult apply_hop(const FockBasis& basis, index_t d, int x, int y) {
  if (x == y) fail(ErrorKind::InvalidState, "hop needs distinct sites");
  if (x < 0 || x >= basis.L() || y < 0 || y >= basis.L())
    fail(ErrorKind::InvalidState, "hop site outside the lattice");
  const std::uint8_t* in = basis.state(d);
  HopResult out;
  if (in[y] == 0) return out;
  if (basis.statistics() == Statistics::Fermion && in[x] == 1) return out;

  std::vector<std::uint8_t> occ(in, in + basis.L());
  occ[y] -= 1;
  occ[x] += 1;
  out.target = basis.index_of(occ.data());
  if (out.target < 0)
    fail(ErrorKind::InvalidState, "hop left the particle-number sector");

  if (basis.statistics() == Statistics::Boson) {
    out.amp = std::sqrt(static_cast<double>(in[y]) * (in[x] + 1.0));
  } else {
    int between = 0;
    for (int k = std::min(x, y) + 1; k < std::max(x, y); ++k) between += in[k];
    out.amp = (between % 2 == 0) ? 1.0 : -1.0;
  }
  return out;
}

std::vector<Triplet> hopping_matrix_elements(const FockBasis& basis, int x,
                                             int y) {
  std::vector<Triplet> out;
  for (index_t d = 0; d < basis.dim(); ++d) {
    const HopResult h = apply_hop(basis, d, x, y);
    if (h.target >= 0) out.push_back({h.target, d, h.amp});
  }
  return out;
}

}  // namespace latgas::fock
