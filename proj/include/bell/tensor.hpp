#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bell/errors.hpp"

namespace bell {

using cplx = std::complex<double>;

/// Hard cap on the number of qubits of any constructed operator or state.
/// Defaults to 12 (4096 x 4096 matrices); the BELL_MAX_QUBITS environment
/// variable overrides it.
int max_qubits();

/// Dense square complex matrix, row-major. All n-qubit operators and states
/// live in this representation.
struct ComplexMatrix {
  std::size_t dim = 0;
  std::vector<cplx> a;

  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t d) : dim(d), a(d * d, cplx(0.0)) {}

  cplx& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

  static ComplexMatrix identity(std::size_t d) {
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix scale(const ComplexMatrix& x, cplx s);

/// Dense product via the OpenMP kernel; dimensions must match.
ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y);

cplx trace(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y);

/// max |m[r][c] - conj(m[c][r])| over all entries.
double hermiticity_defect(const ComplexMatrix& m);

/// Unit 3-vector parameterizing a dichotomic observable or a pure qubit state.
struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm_sq() const { return x * x + y * y + z * z; }
};

/// A = v.x*X + v.y*Y + v.z*Z for unit v: Hermitian, traceless, squares to I.
ComplexMatrix observable_from_bloch(const BlochVector& v);

/// Standard Kronecker block layout; result dim = dim(a)*dim(b).
/// Throws capacity_error if the result would exceed 2^max_qubits().
ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

struct DensityMatrix {
  ComplexMatrix matrix;

  std::size_t dim() const { return matrix.dim; }

  /// Validates trace 1, Hermiticity and real nonnegative diagonal (1e-12).
  static DensityMatrix from_matrix(ComplexMatrix m);
};

/// (I + v.sigma)/2 for unit v: the pure qubit state along v.
DensityMatrix pure_from_bloch(const BlochVector& v);

DensityMatrix maximally_mixed(std::size_t dim);

/// (|0...0> + |1...1>)/sqrt(2) as a rank-1 density matrix; 1 <= n <= max_qubits().
DensityMatrix ghz_state(int n);

/// Convex mixture of n-fold products of single-qubit density matrices.
struct SeparableState {
  struct Term {
    double p = 0.0;
    std::vector<DensityMatrix> factors;  // one 2x2 factor per party
  };
  int n_parties = 0;
  std::vector<Term> terms;

  /// Checks weights >= 0 summing to 1 (1e-12) and 2x2 factors per party.
  void validate() const;
};

/// Sum_j p_j (factor_j^1 x ... x factor_j^n) as a full 2^n density matrix.
DensityMatrix densify(const SeparableState& s);

/// Random mixture of m pure product states: weights are normalized uniform
/// draws, each factor a pure state along a uniformly random Bloch direction.
SeparableState random_separable(int n, int m_terms, std::uint64_t seed);

/// Re Tr[rho * op]; asserts |Im Tr| <= 1e-10 and op Hermitian.
double expectation(const DensityMatrix& rho, const ComplexMatrix& op);

}  // namespace bell
