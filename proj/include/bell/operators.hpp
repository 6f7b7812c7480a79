#pragma once

#include <cstdint>
#include <vector>

#include "bell/rational.hpp"
#include "bell/tensor.hpp"

namespace bell {

/// Two orthogonal Bloch directions per party; the induced 2x2 observables
/// anticommute, which is what makes the Mermin-Klyshko algebra close.
struct MeasurementSettings {
  struct Pair {
    BlochVector a;        // setting k = 0 (unprimed)
    BlochVector a_prime;  // setting k = 1 (primed)
  };
  std::vector<Pair> parties;

  int n() const { return static_cast<int>(parties.size()); }

  /// Throws invalid_input_error unless every pair is unit-norm, orthogonal to
  /// 1e-12, and the induced operators anticommute to 1e-12.
  void validate() const;

  /// Observable for party i, setting k in {0, 1}.
  ComplexMatrix observable(int party, int setting) const;

  /// A'' = [A, A']/2i for party i (Hermitian involution for orthogonal pairs).
  ComplexMatrix commutator_observable(int party) const;
};

/// Coefficient table c(k_1,...,k_n) of the Mermin-Klyshko Bell expression,
/// normalized so the deterministic local-realistic maximum is exactly 1.
struct MKCoefficients {
  int n_parties = 0;
  std::vector<Rational> coeff;  // indexed by k-bitmask, party 0 at the MSB

  /// Setting of `party` encoded in bitmask `k` (party 0 = most significant).
  static int setting_of(std::uint32_t k, int party, int n) {
    return static_cast<int>((k >> (n - 1 - party)) & 1u);
  }

  const Rational& at(std::uint32_t k) const { return coeff[k]; }
};

/// Coefficients from the recursion M_1 = A_1(0),
/// M_n = (M_{n-1}(A_n + A_n') + ~M_{n-1}(A_n - A_n'))/2, where ~M swaps every
/// party's settings. All values are dyadic rationals over 2^(n-1).
MKCoefficients mk_coefficients(int n);

/// M_n = sum_k c(k) A_1(k_1) x ... x A_n(k_n) as a Hermitian 2^n matrix,
/// built by the same pair recursion the coefficients come from.
ComplexMatrix mk_operator(const MeasurementSettings& settings);

/// V_n = M_n + M_n^2.
ComplexMatrix chen_operator(const MeasurementSettings& settings);

/// <op^2> - <op>^2; throws identity_violation_error if below -1e-10.
double variance(const DensityMatrix& rho, const ComplexMatrix& op);

struct VnDecomposition {
  double v_value = 0.0;       // <V_n>
  double mk_mean = 0.0;       // <M_n>
  double mk_mean_sq = 0.0;    // <M_n>^2
  double variance = 0.0;      // <(M_n - <M_n>)^2>
  double residual = 0.0;      // |v - (mean + mean^2 + variance)|
};

/// Checks <V_n> = <M_n> + <M_n>^2 + Delta with independently computed pieces;
/// throws identity_violation_error if the residual exceeds 1e-12.
VnDecomposition vn_decomposition_check(const DensityMatrix& rho,
                                       const MeasurementSettings& settings);

struct SpectrumIdentityReport {
  int n = 0;
  double cubic_residual = 0.0;    // max |M^3 - 2^(n-1) M|
  double quartic_residual = 0.0;  // max |(M^2)^2 - 2^(n-1) M^2|
  double tolerance = 1e-9;
  bool holds = false;
};

/// Verifies the three-point spectrum {+-2^((n-1)/2), 0} of M_n in minimal
/// polynomial form. A failed check is reported, not thrown: it is a science
/// result, not a programming error.
SpectrumIdentityReport check_spectrum_identity(const MeasurementSettings& settings);

}  // namespace bell
