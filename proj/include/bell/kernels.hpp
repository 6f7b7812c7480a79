#pragma once

#include <complex>
#include <cstddef>

namespace bell::kernels {

using cplx = std::complex<double>;

/// Serial reference kernels: plain loops, kept as the ground truth the OpenMP
/// kernels are tested and benchmarked against.
void matmul_serial(const cplx* a, const cplx* b, cplx* c, std::size_t n);
void kron_serial(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* out);

/// OpenMP kernels. Every output element is produced by exactly one thread with
/// a thread-count-independent accumulation order, so results are bitwise
/// reproducible for any number of threads.
///
/// matmul splits the operands into real/imaginary planes and runs four real
/// GEMM passes (row-major, 4-row register blocking); c must not alias a or b.
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);
void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* out);

/// y = m * x for a row-major n x n matrix, parallel over rows.
void matvec(const cplx* m, const cplx* x, cplx* y, std::size_t n);

}  // namespace bell::kernels
