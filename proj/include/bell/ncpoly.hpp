#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bell/operators.hpp"
#include "bell/rational.hpp"

namespace bell {

/// Exact complex-rational coefficient a + b*i.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  GaussianRational operator-() const { return {-re, -im}; }
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  /// Multiply by i^quadrant, quadrant in {0,1,2,3}.
  GaussianRational rotated(int quadrant) const {
    switch (quadrant & 3) {
      case 1: return {-im, re};
      case 2: return {-re, -im};
      case 3: return {im, -re};
      default: return *this;
    }
  }

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

/// Per-site generator symbols: G0 = unprimed A, G1 = primed A', G2 = A''.
enum : std::uint8_t { kG0 = 0, kG1 = 1, kG2 = 2 };

/// One product term: a coefficient times an ordered word of generators at each
/// site. Words at distinct sites always commute (tensor structure), so they
/// are stored separately per site.
struct NCTerm {
  GaussianRational coeff;
  std::vector<std::vector<std::uint8_t>> word;  // word[site] = generator sequence

  friend bool operator==(const NCTerm& a, const NCTerm& b) {
    return a.coeff == b.coeff && a.word == b.word;
  }
};

struct NCPolynomial {
  int n_parties = 0;
  std::vector<NCTerm> terms;  // canonical: sorted by word, merged, no zeros

  static NCPolynomial zero(int n) { return NCPolynomial{n, {}}; }
  static NCPolynomial constant(int n, GaussianRational c);

  friend bool operator==(const NCPolynomial& a, const NCPolynomial& b) {
    return a.n_parties == b.n_parties && a.terms == b.terms;
  }
};

enum class RewriteMode { Classical, Quantum };

/// Classical: same-site symbols commute and squares cancel (multilinear per
/// site). Quantum: same-site words reduce through the anticommuting involutive
/// triple G0*G1 = i*G2 (cyclically), phases folding into the coefficient.
/// Either way, like terms merge exactly and the output ordering is unique.
NCPolynomial canonicalize(const NCPolynomial& p, RewriteMode mode);

/// Distributes term products (site words concatenate), then canonicalizes.
NCPolynomial multiply(const NCPolynomial& p, const NCPolynomial& q, RewriteMode mode);

/// Symbolic Mermin-Klyshko polynomial matching mk_coefficients(n) term for term.
NCPolynomial mk_polynomial(int n);

/// Exact maximum over +-1 assignments to every distinct generator appearing in
/// the polynomial. Requires a canonical multilinear form with per-site word
/// length <= 1 and real coefficients. The enumeration cap is 15 distinct
/// generators (<= 2^15 assignments).
Rational classical_max(const NCPolynomial& p);

/// Reinterpret a canonical quantum polynomial as a classical one over fresh
/// independent +-1 generators, returning it with its classical maximum.
/// Imaginary coefficients mean the input was not Hermitian and are rejected.
std::pair<NCPolynomial, Rational> lhv_counterpart(const NCPolynomial& p_quantum);

/// Substitute G0 -> A_i(k_i), G1 -> A_i(k_i'), G2 -> [A, A']/2i and evaluate.
ComplexMatrix to_matrix(const NCPolynomial& p, const MeasurementSettings& settings);

/// Grammar: poly := term (('+'|'-') term)*;
///          term := coeff ('*')? factor+ | coeff | factor+;
///          factor := site letter A..Z (A = site 0) plus 0-2 prime marks;
///          coeff := rational like 1/2, 3, i, -i/4, 3i/4.
/// Whitespace is insignificant. The result is the raw parse, not rewritten.
/// If n_parties < 0 the party count is inferred from the highest site used.
NCPolynomial parse_polynomial(const std::string& text, int n_parties = -1);

/// Unique textual form of a canonical polynomial; parse of the output followed
/// by canonicalize reproduces the input exactly.
std::string serialize(const NCPolynomial& p);

}  // namespace bell
