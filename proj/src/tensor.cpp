#include "bell/tensor.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "bell/kernels.hpp"
#include "bell/rng.hpp"

namespace bell {

int max_qubits() {
  if (const char* env = std::getenv("BELL_MAX_QUBITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 24) return static_cast<int>(v);
  }
  return 12;
}

ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.dim != y.dim) throw invalid_input_error("matrix add: dimension mismatch");
  ComplexMatrix r(x.dim);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.dim != y.dim) throw invalid_input_error("matrix sub: dimension mismatch");
  ComplexMatrix r(x.dim);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

ComplexMatrix scale(const ComplexMatrix& x, cplx s) {
  ComplexMatrix r(x.dim);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = s * x.a[i];
  return r;
}

ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.dim != y.dim) throw invalid_input_error("matmul: dimension mismatch");
  ComplexMatrix r(x.dim);
  kernels::matmul(x.a.data(), y.a.data(), r.a.data(), x.dim);
  return r;
}

cplx trace(const ComplexMatrix& m) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < m.dim; ++i) t += m.at(i, i);
  return t;
}

double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const cplx& v : m.a) mx = std::max(mx, std::abs(v));
  return mx;
}

double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.dim != y.dim) throw invalid_input_error("max_abs_diff: dimension mismatch");
  double mx = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) mx = std::max(mx, std::abs(x.a[i] - y.a[i]));
  return mx;
}

double hermiticity_defect(const ComplexMatrix& m) {
  double mx = 0.0;
  for (std::size_t r = 0; r < m.dim; ++r)
    for (std::size_t c = r; c < m.dim; ++c)
      mx = std::max(mx, std::abs(m.at(r, c) - std::conj(m.at(c, r))));
  return mx;
}

ComplexMatrix observable_from_bloch(const BlochVector& v) {
  if (std::abs(v.norm_sq() - 1.0) > 1e-12)
    throw invalid_input_error("observable_from_bloch: Bloch vector is not unit norm");
  ComplexMatrix m(2);
  m.at(0, 0) = cplx(v.z, 0.0);
  m.at(0, 1) = cplx(v.x, -v.y);
  m.at(1, 0) = cplx(v.x, v.y);
  m.at(1, 1) = cplx(-v.z, 0.0);
  return m;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  const std::size_t cap = std::size_t{1} << max_qubits();
  if (x.dim == 0 || y.dim == 0) throw invalid_input_error("kron: empty operand");
  if (x.dim > cap / y.dim)
    throw capacity_error("kron: result dimension exceeds 2^" + std::to_string(max_qubits()));
  ComplexMatrix r(x.dim * y.dim);
  kernels::kron(x.a.data(), x.dim, y.a.data(), y.dim, r.a.data());
  return r;
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  if (m.dim == 0) throw invalid_input_error("density matrix: empty");
  cplx t = trace(m);
  if (std::abs(t - cplx(1.0)) > 1e-12)
    throw invalid_input_error("density matrix: trace differs from 1");
  if (hermiticity_defect(m) > 1e-12)
    throw invalid_input_error("density matrix: not Hermitian");
  for (std::size_t i = 0; i < m.dim; ++i) {
    cplx d = m.at(i, i);
    if (std::abs(d.imag()) > 1e-12 || d.real() < -1e-12)
      throw invalid_input_error("density matrix: invalid diagonal entry");
  }
  DensityMatrix rho;
  rho.matrix = std::move(m);
  return rho;
}

DensityMatrix pure_from_bloch(const BlochVector& v) {
  if (std::abs(v.norm_sq() - 1.0) > 1e-12)
    throw invalid_input_error("pure_from_bloch: Bloch vector is not unit norm");
  ComplexMatrix m(2);
  m.at(0, 0) = cplx(0.5 * (1.0 + v.z), 0.0);
  m.at(0, 1) = cplx(0.5 * v.x, -0.5 * v.y);
  m.at(1, 0) = cplx(0.5 * v.x, 0.5 * v.y);
  m.at(1, 1) = cplx(0.5 * (1.0 - v.z), 0.0);
  return DensityMatrix::from_matrix(std::move(m));
}

DensityMatrix maximally_mixed(std::size_t dim) {
  return DensityMatrix::from_matrix(scale(ComplexMatrix::identity(dim), 1.0 / static_cast<double>(dim)));
}

DensityMatrix ghz_state(int n) {
  if (n < 1 || n > max_qubits())
    throw capacity_error("ghz_state: n out of range [1, " + std::to_string(max_qubits()) + "]");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix m(dim);
  const std::size_t last = dim - 1;
  m.at(0, 0) = 0.5;
  m.at(0, last) = 0.5;
  m.at(last, 0) = 0.5;
  m.at(last, last) = 0.5;
  return DensityMatrix::from_matrix(std::move(m));
}

void SeparableState::validate() const {
  if (n_parties < 1) throw invalid_input_error("separable state: n_parties < 1");
  if (terms.empty()) throw invalid_input_error("separable state: no terms");
  double sum = 0.0;
  for (const Term& t : terms) {
    if (t.p < 0.0) throw invalid_input_error("separable state: negative weight");
    sum += t.p;
    if (static_cast<int>(t.factors.size()) != n_parties)
      throw invalid_input_error("separable state: factor count differs from n_parties");
    for (const DensityMatrix& f : t.factors)
      if (f.dim() != 2) throw invalid_input_error("separable state: factor is not 2x2");
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw invalid_input_error("separable state: weights do not sum to 1");
}

DensityMatrix densify(const SeparableState& s) {
  s.validate();
  if (s.n_parties > max_qubits())
    throw capacity_error("densify: n exceeds max qubits");
  const std::size_t dim = std::size_t{1} << s.n_parties;
  ComplexMatrix acc(dim);
  for (const SeparableState::Term& t : s.terms) {
    ComplexMatrix prod = t.factors[0].matrix;
    for (int i = 1; i < s.n_parties; ++i) prod = kron(prod, t.factors[i].matrix);
    for (std::size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += t.p * prod.a[i];
  }
  return DensityMatrix::from_matrix(std::move(acc));
}

namespace {

BlochVector random_bloch(Rng& rng) {
  for (;;) {
    double x = rng.gaussian(), y = rng.gaussian(), z = rng.gaussian();
    double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-12) return BlochVector{x / n, y / n, z / n};
  }
}

}  // namespace

SeparableState random_separable(int n, int m_terms, std::uint64_t seed) {
  if (n < 1 || m_terms < 1)
    throw invalid_input_error("random_separable: n and m_terms must be >= 1");
  if (n > max_qubits()) throw capacity_error("random_separable: n exceeds max qubits");
  Rng rng(seed);
  SeparableState s;
  s.n_parties = n;
  std::vector<double> w(m_terms);
  double sum = 0.0;
  while (sum <= 0.0) {
    sum = 0.0;
    for (double& v : w) {
      do { v = rng.uniform(); } while (v == 0.0);
      sum += v;
    }
  }
  for (int j = 0; j < m_terms; ++j) {
    SeparableState::Term t;
    t.p = w[j] / sum;
    for (int i = 0; i < n; ++i) t.factors.push_back(pure_from_bloch(random_bloch(rng)));
    s.terms.push_back(std::move(t));
  }
  return s;
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& op) {
  if (rho.dim() != op.dim) throw invalid_input_error("expectation: dimension mismatch");
  if (hermiticity_defect(op) > 1e-9 * std::max(1.0, max_abs(op)))
    throw invalid_input_error("expectation: operator is not Hermitian");
  cplx t = 0.0;
  const std::size_t d = op.dim;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) t += rho.matrix.at(r, c) * op.at(c, r);
  if (std::abs(t.imag()) > 1e-10)
    throw identity_violation_error("expectation: trace has a nonreal part");
  return t.real();
}

}  // namespace bell
