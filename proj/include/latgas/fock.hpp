#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace latgas::fock {

using index_t = std::int64_t;

enum class Statistics { Boson, Fermion };

const char* statistics_name(Statistics s);

// Fixed-N occupation basis on L sites, states in colexicographic order
// (last site varies slowest).  Occupations are stored densely, one byte per
// site, so N <= 255.
class FockBasis {
 public:
  FockBasis(Statistics statistics, int L, int N);

  Statistics statistics() const { return statistics_; }
  int L() const { return L_; }
  int N() const { return N_; }
  index_t dim() const { return dim_; }

  const std::uint8_t* state(index_t d) const { return states_.data() + d * L_; }
  std::uint8_t occupation(index_t d, int site) const {
    return states_[d * L_ + site];
  }
  // Ordinal of an occupation vector; -1 when it is not in the sector.
  index_t index_of(const std::uint8_t* occ) const;

 private:
  Statistics statistics_;
  int L_;
  int N_;
  index_t dim_;
  std::vector<std::uint8_t> states_;
  std::unordered_map<std::string, index_t> index_;
};

index_t sector_dimension(Statistics statistics, int L, int N);

// Per-basis-state value of a diagonal operator.
struct DiagonalObservable {
  Eigen::VectorXd values;
};

// N_S = sum of occupations over S.
DiagonalObservable number_observable(const FockBasis& basis,
                                     const std::vector<int>& S);

// Second-quantized lift of a per-site function: sum_x F(x) n_x.
DiagonalObservable diagonal_lift(const FockBasis& basis,
                                 const Eigen::VectorXd& per_site);

// Indicator of N_S >= c N per state, i.e. the spectral projector of the
// density N_S/N at threshold c.  Integer comparison with a small float
// guard so c N lands exactly on attainable occupation counts.
DiagonalObservable threshold_projector(const FockBasis& basis,
                                       const std::vector<int>& S, double c);

// a_x^dag a_y applied to one basis state: target ordinal and real amplitude.
// amp = 0 (target -1) when the state is annihilated (n_y = 0, or the target
// site is Pauli blocked for fermions).  Boson amplitude sqrt(n_y (n_x+1));
// fermion amplitude +-1 with the sign counting occupied sites strictly
// between x and y in site order.
struct HopResult {
  index_t target = -1;
  double amp = 0.0;
};
HopResult apply_hop(const FockBasis& basis, index_t d, int x, int y);

// Full matrix of a_x^dag a_y in the sector as (row, col, amplitude) triplets,
// row = output ordinal, col = input ordinal.
struct Triplet {
  index_t row;
  index_t col;
  double value;
};
std::vector<Triplet> hopping_matrix_elements(const FockBasis& basis, int x,
                                             int y);

}  // namespace latgas::fock
