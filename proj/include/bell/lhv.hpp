#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bell/operators.hpp"
#include "bell/rational.hpp"
#include "bell/tensor.hpp"

namespace bell {

/// One definite outcome (+1/-1) per (party, setting).
struct DeterministicStrategy {
  std::vector<std::array<int, 2>> outcomes;  // outcomes[party][setting]
  int n() const { return static_cast<int>(outcomes.size()); }
};

/// Finite local-hidden-variable model: weighted hidden states, each assigning
/// every (party, setting) a response expectation in [-1, 1].
struct LHVModel {
  std::vector<double> probs;
  std::vector<std::vector<std::array<double, 2>>> responses;  // [lambda][party][setting]

  int n_lambdas() const { return static_cast<int>(probs.size()); }
  int n_parties() const { return probs.empty() ? 0 : static_cast<int>(responses[0].size()); }

  void validate() const;

  static LHVModel from_strategy(const DeterministicStrategy& s);
};

/// Outcome distribution over a fixed spectrum whose mean matches a target.
struct SpectrumLHV {
  std::vector<double> outcomes;
  std::vector<double> probs;
};

/// Exact deterministic-strategy maximum of sum_k c(k) prod_i o(i, k_i) over
/// all 2^(2n) strategies, in integer arithmetic over the common denominator.
/// Throws capacity_error for n above `cap` (default 8).
Rational lhv_max(const MKCoefficients& coeffs, int cap = 8);

/// Serial reference for lhv_max, kept for tests and the benchmark.
Rational lhv_max_serial(const MKCoefficients& coeffs, int cap = 8);

/// E(k) = sum_lambda p(lambda) prod_i response(lambda, i, k_i).
double lhv_correlation(const LHVModel& model, const std::vector<int>& k);

/// The explicit LHV model reproducing all correlations of a separable state:
/// lambda ranges over the mixture index, responses are single-qubit traces.
LHVModel synthesize_lhv(const SeparableState& s, const MeasurementSettings& settings);

/// sum_k c(k) E(k) for the model; |result| <= 1 for every valid model.
double mk_value_lhv(const LHVModel& model, const MKCoefficients& coeffs);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_est = 0.0;
};

/// Outcome-level simulation of E(k): draw lambda from p, then an independent
/// +-1 per party with P(+1) = (1 + response)/2; deterministic per seed.
MonteCarloEstimate monte_carlo_correlation(const LHVModel& model, const std::vector<int>& k,
                                           std::uint64_t trials, std::uint64_t seed);

/// m + m^2 + (1 - m^2): the claimed (and invalid) LHV bound chain evaluated at m.
double chen_claimed_value(double m);

/// max over m in [-1,1] of the above, i.e. 2. The premise <M^2>_LHV <= 1 that
/// produces it treats the squared Bell polynomial as a bona fide observable,
/// which no local realistic model is committed to.
double chen_claimed_bound();

/// Two-point distribution on the extreme spectrum values whose mean equals
/// the target; other spectrum entries carry zero weight. Throws
/// infeasible_error when the target lies outside the spectral range.
SpectrumLHV spectrum_matching_lhv(double target_mean, const std::vector<double>& spectrum);

}  // namespace bell
