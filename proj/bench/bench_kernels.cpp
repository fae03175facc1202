// Timings for the OpenMP kernels against their serial references: sector
// assembly and repeated sparse matvec on a Bose-Hubbard chain.  Also checks
// that both paths produce bit-identical results, which is what lets the
// test suite use either interchangeably.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "latgas/fock.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"
#include "latgas/sparse.hpp"

using namespace latgas;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool identical(const CsrMatrix& A, const CsrMatrix& B) {
  return A.rows == B.rows && A.row_ptr == B.row_ptr && A.col == B.col &&
         std::memcmp(A.val.data(), B.val.data(),
                     A.val.size() * sizeof(cplx)) == 0;
}

}  // namespace

int main() {
  const int L = 13;
  const int N = 6;
  const geometry::LatticeGraph lattice = geometry::make_chain(L);
  const hamiltonian::HoppingMatrix J = hamiltonian::nn_hopping(lattice, 1.0);
  const hamiltonian::Potential V = hamiltonian::Potential::bose_hubbard(2.0, 0.5);
  const fock::FockBasis basis(fock::Statistics::Boson, L, N);
  std::printf("sector: L=%d N=%d dim=%lld\n", L, N,
              static_cast<long long>(basis.dim()));

  Clock::time_point t0 = Clock::now();
  const CsrMatrix Hs =
      hamiltonian::assemble(basis, J, V, hamiltonian::Assembly::Serial);
  const double t_serial_asm = seconds_since(t0);

  t0 = Clock::now();
  const CsrMatrix Hp =
      hamiltonian::assemble(basis, J, V, hamiltonian::Assembly::Parallel);
  const double t_parallel_asm = seconds_since(t0);

  std::printf("assembly: serial %.3fs, parallel %.3fs, speedup %.2fx, %s\n",
              t_serial_asm, t_parallel_asm, t_serial_asm / t_parallel_asm,
              identical(Hs, Hp) ? "bit-identical" : "MISMATCH");

  const int reps = 50;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(Hs.rows);
  for (std::int64_t i = 0; i < Hs.rows; ++i)
    x[i] = cplx(std::cos(0.37 * i), std::sin(0.11 * i));
  x /= x.norm();
  Eigen::VectorXcd ys(Hs.rows), yp(Hs.rows);

  t0 = Clock::now();
  for (int k = 0; k < reps; ++k) spmv_serial(Hs, x.data(), ys.data());
  const double t_serial = seconds_since(t0) / reps;

  t0 = Clock::now();
  for (int k = 0; k < reps; ++k) spmv_omp(Hs, x.data(), yp.data());
  const double t_parallel = seconds_since(t0) / reps;

  const bool same =
      std::memcmp(ys.data(), yp.data(), ys.size() * sizeof(cplx)) == 0;
  std::printf("spmv (%lld nnz): serial %.6fs, omp %.6fs, speedup %.2fx, %s\n",
              static_cast<long long>(Hs.nnz()), t_serial, t_parallel,
              t_serial / t_parallel, same ? "bit-identical" : "MISMATCH");
  return identical(Hs, Hp) && same ? 0 : 1;
}
