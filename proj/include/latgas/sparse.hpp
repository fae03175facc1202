#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace latgas {

using cplx = std::complex<double>;

// Compressed sparse row matrix over a Fock sector.  Rows are built
// independently, so assembly and matvec parallelize over rows without
// any shared mutable state.
struct CsrMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> row_ptr;  // size rows+1
  std::vector<std::int64_t> col;
  std::vector<cplx> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }

  Eigen::MatrixXcd dense() const;

  // max_{ij} |A_ij - conj(A_ji)|
  double hermiticity_defect() const;
};

// One row of entries, sorted by column, duplicates merged.
using SparseRow = std::vector<std::pair<std::int64_t, cplx>>;

CsrMatrix csr_from_rows(std::int64_t rows, std::int64_t cols,
                        std::vector<SparseRow>&& row_entries);

// y = A x.  The serial kernel is the reference implementation; the omp
// kernel distributes rows across threads.  Per-row accumulation order is
// identical in both, so results are bit-identical for any thread count.
void spmv_serial(const CsrMatrix& A, const cplx* x, cplx* y);
void spmv_omp(const CsrMatrix& A, const cplx* x, cplx* y);

// Dispatch: omp kernel for large matrices, serial otherwise.
void spmv(const CsrMatrix& A, const cplx* x, cplx* y);

inline Eigen::VectorXcd apply(const CsrMatrix& A, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y(A.rows);
  spmv(A, x.data(), y.data());
  return y;
}

}  // namespace latgas
