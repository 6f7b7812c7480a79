#include "bell/kernels.hpp"

#include <vector>

namespace bell::kernels {

void matmul_serial(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      c[i * n + j] = acc;
    }
  }
}

void kron_serial(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* out) {
  const std::size_t n = na * nb;
  for (std::size_t ra = 0; ra < na; ++ra)
    for (std::size_t rb = 0; rb < nb; ++rb)
      for (std::size_t ca = 0; ca < na; ++ca)
        for (std::size_t cb = 0; cb < nb; ++cb)
          out[(ra * nb + rb) * n + ca * nb + cb] = a[ra * na + ca] * b[rb * nb + cb];
}

namespace {

// c (+)= sign * a*b on row-major n x n real blocks. Rows are register-blocked
// by four so each row of b is reused four times per pass; the k-loop order is
// fixed, which keeps every output element's rounding independent of the
// thread count.
void gemm_acc(const double* a, const double* b, double* c, std::size_t n,
              double sign, bool accumulate) {
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i0 = 0; i0 < nn; i0 += 4) {
    const std::size_t rows = static_cast<std::size_t>(i0 + 4 <= nn ? 4 : nn - i0);
    double* crow[4];
    for (std::size_t r = 0; r < rows; ++r) {
      crow[r] = c + (static_cast<std::size_t>(i0) + r) * n;
      if (!accumulate)
        for (std::size_t j = 0; j < n; ++j) crow[r][j] = 0.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double* brow = b + k * n;
      double av[4];
      for (std::size_t r = 0; r < rows; ++r)
        av[r] = sign * a[(static_cast<std::size_t>(i0) + r) * n + k];
      if (rows == 4) {
        const double a0 = av[0], a1 = av[1], a2 = av[2], a3 = av[3];
        double *c0 = crow[0], *c1 = crow[1], *c2 = crow[2], *c3 = crow[3];
        for (std::size_t j = 0; j < n; ++j) {
          const double bj = brow[j];
          c0[j] += a0 * bj;
          c1[j] += a1 * bj;
          c2[j] += a2 * bj;
          c3[j] += a3 * bj;
        }
      } else {
        for (std::size_t r = 0; r < rows; ++r) {
          const double ar = av[r];
          double* cr = crow[r];
          for (std::size_t j = 0; j < n; ++j) cr[j] += ar * brow[j];
        }
      }
    }
  }
}

void split_planes(const cplx* m, std::size_t n2, double* re, double* im) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n2); ++i) {
    re[i] = m[i].real();
    im[i] = m[i].imag();
  }
}

}  // namespace

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  const std::size_t n2 = n * n;
  std::vector<double> buf(6 * n2);
  double* ar = buf.data();
  double* ai = ar + n2;
  double* br = ai + n2;
  double* bi = br + n2;
  double* cr = bi + n2;
  double* ci = cr + n2;
  split_planes(a, n2, ar, ai);
  split_planes(b, n2, br, bi);
  gemm_acc(ar, br, cr, n, 1.0, false);
  gemm_acc(ai, bi, cr, n, -1.0, true);
  gemm_acc(ar, bi, ci, n, 1.0, false);
  gemm_acc(ai, br, ci, n, 1.0, true);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n2); ++i)
    c[i] = cplx(cr[i], ci[i]);
}

void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* out) {
  const std::size_t n = na * nb;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t row = 0; row < static_cast<std::ptrdiff_t>(n); ++row) {
    const std::size_t ra = static_cast<std::size_t>(row) / nb;
    const std::size_t rb = static_cast<std::size_t>(row) % nb;
    const cplx* arow = a + ra * na;
    const cplx* brow = b + rb * nb;
    cplx* orow = out + static_cast<std::size_t>(row) * n;
    for (std::size_t ca = 0; ca < na; ++ca) {
      const cplx av = arow[ca];
      cplx* oblk = orow + ca * nb;
      for (std::size_t cb = 0; cb < nb; ++cb) oblk[cb] = av * brow[cb];
    }
  }
}

void matvec(const cplx* m, const cplx* x, cplx* y, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const cplx* row = m + static_cast<std::size_t>(i) * n;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

}  // namespace bell::kernels
