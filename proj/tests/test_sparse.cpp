#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <complex>
#include <cstring>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "latgas/sparse.hpp"

using latgas::cplx;
using latgas::CsrMatrix;
using latgas::SparseRow;

namespace {

CsrMatrix random_csr(int rows, int cols, double fill, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<SparseRow> entries(rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (unit(rng) < fill)
        entries[r].push_back({c, cplx(gauss(rng), gauss(rng))});
  return latgas::csr_from_rows(rows, cols, std::move(entries));
}

}  // namespace

TEST_CASE("csr stores rows sorted with duplicates merged") {
  std::vector<SparseRow> entries(2);
  entries[0] = {{2, cplx(1.0, 0.0)}, {0, cplx(2.0, 1.0)}, {2, cplx(0.5, 0.0)}};
  entries[1] = {};
  const CsrMatrix A = latgas::csr_from_rows(2, 3, std::move(entries));
  CHECK(A.rows == 2);
  CHECK(A.cols == 3);
  CHECK(A.nnz() == 2);
  CHECK(A.row_ptr == std::vector<std::int64_t>({0, 2, 2}));
  CHECK(A.col == std::vector<std::int64_t>({0, 2}));
  CHECK(A.val[0] == cplx(2.0, 1.0));
  CHECK(A.val[1] == cplx(1.5, 0.0));

  const Eigen::MatrixXcd D = A.dense();
  CHECK(D.rows() == 2);
  CHECK(D.cols() == 3);
  CHECK(D(0, 0) == cplx(2.0, 1.0));
  CHECK(D(0, 2) == cplx(1.5, 0.0));
  CHECK(D(1, 1) == cplx(0.0, 0.0));
}

TEST_CASE("spmv matches a dense product") {
  const CsrMatrix A = random_csr(37, 23, 0.2, 7);
  const Eigen::MatrixXcd D = A.dense();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd x(23);
  for (int i = 0; i < 23; ++i) x(i) = cplx(gauss(rng), gauss(rng));

  Eigen::VectorXcd y(37);
  latgas::spmv_serial(A, x.data(), y.data());
  CHECK((y - D * x).norm() <= 1e-13 * x.norm() * D.norm());

  const Eigen::VectorXcd via_apply = latgas::apply(A, x);
  CHECK((via_apply - y).norm() == 0.0);
}

TEST_CASE("serial and omp kernels are bit identical") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const CsrMatrix A = random_csr(211, 211, 0.07, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> x(211);
    for (auto& v : x) v = cplx(gauss(rng), gauss(rng));
    std::vector<cplx> ys(211), yp(211);
    latgas::spmv_serial(A, x.data(), ys.data());
    latgas::spmv_omp(A, x.data(), yp.data());
    CHECK(std::memcmp(ys.data(), yp.data(), sizeof(cplx) * ys.size()) == 0);
  }
}

TEST_CASE("hermiticity defect measures the worst conjugate mismatch") {
  std::vector<SparseRow> entries(2);
  entries[0] = {{1, cplx(1.0, 2.0)}};
  entries[1] = {{0, cplx(1.0, -2.0)}};
  const CsrMatrix H = latgas::csr_from_rows(2, 2, std::move(entries));
  CHECK(H.hermiticity_defect() == 0.0);

  std::vector<SparseRow> skew(2);
  skew[0] = {{1, cplx(1.0, 2.0)}};
  skew[1] = {{0, cplx(1.0, -2.5)}};
  const CsrMatrix S = latgas::csr_from_rows(2, 2, std::move(skew));
  CHECK(S.hermiticity_defect() == doctest::Approx(0.5).epsilon(1e-12));
}
