#include "latgas/sparse.hpp"

#include <algorithm>
#include <map>

namespace latgas {

Eigen::MatrixXcd CsrMatrix::dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i)
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      out(i, col[k]) += val[k];
  return out;
}

double CsrMatrix::hermiticity_defect() const {
  std::map<std::pair<std::int64_t, std::int64_t>, cplx> entries;
  for (std::int64_t i = 0; i < rows; ++i)
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      entries[{i, col[k]}] += val[k];
  double defect = 0.0;
  for (const auto& [ij, v] : entries) {
    auto it = entries.find({ij.second, ij.first});
    const cplx other = (it == entries.end()) ? cplx(0.0) : it->second;
    defect = std::max(defect, std::abs(v - std::conj(other)));
  }
  return defect;
}

CsrMatrix csr_from_rows(std::int64_t rows, std::int64_t cols,
                        std::vector<SparseRow>&& row_entries) {
  CsrMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.row_ptr.assign(rows + 1, 0);

  std::int64_t nnz = 0;
  for (auto& row : row_entries) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicate columns in place
    std::size_t w = 0;
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (w > 0 && row[w - 1].first == row[r].first) {
        row[w - 1].second += row[r].second;
      } else {
        row[w++] = row[r];
      }
    }
    row.resize(w);
    nnz += static_cast<std::int64_t>(w);
  }

  A.col.reserve(nnz);
  A.val.reserve(nnz);
  for (std::int64_t i = 0; i < rows; ++i) {
    A.row_ptr[i] = static_cast<std::int64_t>(A.col.size());
    for (const auto& [c, v] : row_entries[i]) {
      A.col.push_back(c);
      A.val.push_back(v);
    }
  }
  A.row_ptr[rows] = static_cast<std::int64_t>(A.col.size());
  return A;
}

void spmv_serial(const CsrMatrix& A, const cplx* x, cplx* y) {
  for (std::int64_t i = 0; i < A.rows; ++i) {
    cplx acc(0.0);
    for (std::int64_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      acc += A.val[k] * x[A.col[k]];
    y[i] = acc;
  }
}

void spmv_omp(const CsrMatrix& A, const cplx* x, cplx* y) {
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < A.rows; ++i) {
    cplx acc(0.0);
    for (std::int64_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      acc += A.val[k] * x[A.col[k]];
    y[i] = acc;
  }
}

void spmv(const CsrMatrix& A, const cplx* x, cplx* y) {
  if (A.rows >= 256) {
    spmv_omp(A, x, y);
  } else {
    spmv_serial(A, x, y);
  }
}

}  // namespace latgas
