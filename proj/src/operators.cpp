#include "bell/operators.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace bell {

void MeasurementSettings::validate() const {
  if (parties.empty()) throw invalid_input_error("settings: no parties");
  for (std::size_t i = 0; i < parties.size(); ++i) {
    const Pair& p = parties[i];
    if (std::abs(p.a.norm_sq() - 1.0) > 1e-12 || std::abs(p.a_prime.norm_sq() - 1.0) > 1e-12)
      throw invalid_input_error("settings: party " + std::to_string(i) + " vector not unit norm");
    double dot = p.a.x * p.a_prime.x + p.a.y * p.a_prime.y + p.a.z * p.a_prime.z;
    if (std::abs(dot) > 1e-12)
      throw invalid_input_error("settings: party " + std::to_string(i) + " vectors not orthogonal");
    ComplexMatrix a = observable_from_bloch(p.a);
    ComplexMatrix ap = observable_from_bloch(p.a_prime);
    ComplexMatrix anti = matmul(a, ap) + matmul(ap, a);
    if (max_abs(anti) > 1e-12)
      throw invalid_input_error("settings: party " + std::to_string(i) + " observables do not anticommute");
  }
}

ComplexMatrix MeasurementSettings::observable(int party, int setting) const {
  const Pair& p = parties.at(party);
  return observable_from_bloch(setting == 0 ? p.a : p.a_prime);
}

ComplexMatrix MeasurementSettings::commutator_observable(int party) const {
  ComplexMatrix a = observable(party, 0);
  ComplexMatrix ap = observable(party, 1);
  ComplexMatrix comm = matmul(a, ap) - matmul(ap, a);
  return scale(comm, cplx(0.0, -0.5));  // divide by 2i
}

MKCoefficients mk_coefficients(int n) {
  if (n < 1) throw invalid_input_error("mk_coefficients: n must be >= 1");
  std::vector<Rational> c = {Rational(1), Rational(0)};  // M_1: unprimed only
  for (int m = 2; m <= n; ++m) {
    const std::size_t sz = c.size();
    const std::uint32_t mask = static_cast<std::uint32_t>(sz - 1);
    std::vector<Rational> next(sz * 2);
    const Rational half(1, 2);
    for (std::uint32_t t = 0; t < sz; ++t) {
      const Rational& plain = c[t];
      const Rational& swapped = c[~t & mask];
      next[t * 2 + 0] = half * (plain + swapped);
      next[t * 2 + 1] = half * (plain - swapped);
    }
    c = std::move(next);
  }
  MKCoefficients out;
  out.n_parties = n;
  out.coeff = std::move(c);
  return out;
}

ComplexMatrix mk_operator(const MeasurementSettings& settings) {
  settings.validate();
  const int n = settings.n();
  ComplexMatrix m = settings.observable(0, 0);
  ComplexMatrix mt = settings.observable(0, 1);
  for (int i = 1; i < n; ++i) {
    ComplexMatrix p = settings.observable(i, 0) + settings.observable(i, 1);
    ComplexMatrix q = settings.observable(i, 0) - settings.observable(i, 1);
    ComplexMatrix mp = kron(m, p);
    ComplexMatrix mq = kron(m, q);
    ComplexMatrix mtp = kron(mt, p);
    ComplexMatrix mtq = kron(mt, q);
    m = scale(mp + mtq, 0.5);
    mt = scale(mtp - mq, 0.5);
  }
  return m;
}

ComplexMatrix chen_operator(const MeasurementSettings& settings) {
  ComplexMatrix m = mk_operator(settings);
  return m + matmul(m, m);
}

double variance(const DensityMatrix& rho, const ComplexMatrix& op) {
  double mean = expectation(rho, op);
  double second = expectation(rho, matmul(op, op));
  double var = second - mean * mean;
  if (var < -1e-10)
    throw identity_violation_error("variance: negative beyond tolerance");
  return var;
}

VnDecomposition vn_decomposition_check(const DensityMatrix& rho,
                                       const MeasurementSettings& settings) {
  ComplexMatrix m = mk_operator(settings);
  if (rho.dim() != m.dim)
    throw invalid_input_error("vn_decomposition_check: dimension mismatch");
  VnDecomposition r;
  r.v_value = expectation(rho, m + matmul(m, m));
  r.mk_mean = expectation(rho, m);
  r.mk_mean_sq = r.mk_mean * r.mk_mean;
  // Delta computed from the shifted square, not as <M^2> - <M>^2, so the
  // identity below is a real floating-point consistency check.
  ComplexMatrix shifted = m - scale(ComplexMatrix::identity(m.dim), r.mk_mean);
  r.variance = expectation(rho, matmul(shifted, shifted));
  r.residual = std::abs(r.v_value - (r.mk_mean + r.mk_mean_sq + r.variance));
  if (r.residual > 1e-12)
    throw identity_violation_error("vn_decomposition_check: identity residual " +
                                   std::to_string(r.residual));
  return r;
}

SpectrumIdentityReport check_spectrum_identity(const MeasurementSettings& settings) {
  SpectrumIdentityReport rep;
  rep.n = settings.n();
  const double bound = std::ldexp(1.0, rep.n - 1);  // 2^(n-1)
  ComplexMatrix m = mk_operator(settings);
  ComplexMatrix m2 = matmul(m, m);
  ComplexMatrix m3 = matmul(m2, m);
  rep.cubic_residual = max_abs_diff(m3, scale(m, bound));
  ComplexMatrix m4 = matmul(m2, m2);
  rep.quartic_residual = max_abs_diff(m4, scale(m2, bound));
  rep.holds = rep.cubic_residual <= rep.tolerance && rep.quartic_residual <= rep.tolerance;
  return rep;
}

}  // namespace bell
