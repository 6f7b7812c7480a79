#include "bell/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bell/rng.hpp"

namespace bell {

void LHVModel::validate() const {
  if (probs.empty()) throw invalid_input_error("lhv model: empty");
  if (responses.size() != probs.size())
    throw invalid_input_error("lhv model: probs/responses size mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw invalid_input_error("lhv model: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw invalid_input_error("lhv model: probabilities do not sum to 1");
  const std::size_t parties = responses[0].size();
  for (const auto& per_lambda : responses) {
    if (per_lambda.size() != parties)
      throw invalid_input_error("lhv model: ragged response table");
    for (const auto& pair : per_lambda)
      for (double r : pair)
        if (r < -1.0 || r > 1.0)
          throw invalid_input_error("lhv model: response outside [-1, 1]");
  }
}

LHVModel LHVModel::from_strategy(const DeterministicStrategy& s) {
  LHVModel m;
  m.probs = {1.0};
  m.responses.emplace_back();
  for (const auto& o : s.outcomes) {
    if ((o[0] != 1 && o[0] != -1) || (o[1] != 1 && o[1] != -1))
      throw invalid_input_error("strategy: outcomes must be +-1");
    m.responses[0].push_back({static_cast<double>(o[0]), static_cast<double>(o[1])});
  }
  m.validate();
  return m;
}

namespace {

// Common-denominator integer form of a coefficient table: value * L per entry.
std::pair<std::vector<std::int64_t>, std::int64_t> to_common_denominator(
    const std::vector<Rational>& coeff) {
  std::int64_t lcm = 1;
  for (const Rational& c : coeff) {
    std::int64_t d = c.den();
    std::int64_t g = std::gcd(lcm, d);
    __int128 l = static_cast<__int128>(lcm / g) * d;
    if (l > INT64_MAX) throw std::overflow_error("coefficient denominators overflow");
    lcm = static_cast<std::int64_t>(l);
  }
  std::vector<std::int64_t> nums(coeff.size());
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    __int128 v = static_cast<__int128>(coeff[i].num()) * (lcm / coeff[i].den());
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("coefficient numerators overflow");
    nums[i] = static_cast<std::int64_t>(v);
  }
  return {std::move(nums), lcm};
}

std::int64_t strategy_value_num(const std::vector<std::int64_t>& nums, int n,
                                std::uint64_t strategy) {
  const std::uint32_t terms = 1u << n;
  std::int64_t acc = 0;
  for (std::uint32_t k = 0; k < terms; ++k) {
    if (nums[k] == 0) continue;
    int sign = 1;
    for (int i = 0; i < n; ++i) {
      const int ki = MKCoefficients::setting_of(k, i, n);
      if ((strategy >> (2 * i + ki)) & 1u) sign = -sign;
    }
    acc += sign * nums[k];
  }
  return acc;
}

void check_enum_cap(const MKCoefficients& coeffs, int cap) {
  if (coeffs.n_parties < 1) throw invalid_input_error("lhv_max: empty coefficient table");
  if (coeffs.coeff.size() != (std::size_t{1} << coeffs.n_parties))
    throw invalid_input_error("lhv_max: table size does not match n_parties");
  if (coeffs.n_parties > cap)
    throw capacity_error("lhv_max: n exceeds enumeration cap " + std::to_string(cap));
}

}  // namespace

Rational lhv_max(const MKCoefficients& coeffs, int cap) {
  check_enum_cap(coeffs, cap);
  const int n = coeffs.n_parties;
  auto [nums, lcm] = to_common_denominator(coeffs.coeff);
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  std::int64_t best = INT64_MIN;
  // Partitions combine by exact integer max, so the result is independent of
  // the schedule and thread count.
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(total); ++s)
    best = std::max(best, strategy_value_num(nums, n, static_cast<std::uint64_t>(s)));
  return Rational(best, lcm);
}

Rational lhv_max_serial(const MKCoefficients& coeffs, int cap) {
  check_enum_cap(coeffs, cap);
  const int n = coeffs.n_parties;
  auto [nums, lcm] = to_common_denominator(coeffs.coeff);
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  std::int64_t best = INT64_MIN;
  for (std::uint64_t s = 0; s < total; ++s)
    best = std::max(best, strategy_value_num(nums, n, s));
  return Rational(best, lcm);
}

double lhv_correlation(const LHVModel& model, const std::vector<int>& k) {
  const int n = model.n_parties();
  if (static_cast<int>(k.size()) != n)
    throw invalid_input_error("lhv_correlation: setting tuple size mismatch");
  double acc = 0.0;
  for (int l = 0; l < model.n_lambdas(); ++l) {
    double prod = model.probs[l];
    for (int i = 0; i < n; ++i) {
      const int ki = k[i];
      if (ki != 0 && ki != 1) throw invalid_input_error("lhv_correlation: setting not in {0,1}");
      prod *= model.responses[l][i][ki];
    }
    acc += prod;
  }
  return acc;
}

LHVModel synthesize_lhv(const SeparableState& s, const MeasurementSettings& settings) {
  s.validate();
  settings.validate();
  if (settings.n() != s.n_parties)
    throw invalid_input_error("synthesize_lhv: party count mismatch");
  LHVModel model;
  for (const SeparableState::Term& t : s.terms) {
    model.probs.push_back(t.p);
    std::vector<std::array<double, 2>> per_party;
    for (int i = 0; i < s.n_parties; ++i) {
      std::array<double, 2> resp{};
      for (int k = 0; k < 2; ++k) {
        ComplexMatrix obs = settings.observable(i, k);
        cplx tr = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t c = 0; c < 2; ++c) tr += t.factors[i].matrix.at(r, c) * obs.at(c, r);
        double v = tr.real();
        if (std::abs(v) > 1.0 + 1e-9)
          throw identity_violation_error("synthesize_lhv: response outside [-1,1]");
        resp[k] = std::clamp(v, -1.0, 1.0);
      }
      per_party.push_back(resp);
    }
    model.responses.push_back(std::move(per_party));
  }
  model.validate();
  return model;
}

double mk_value_lhv(const LHVModel& model, const MKCoefficients& coeffs) {
  const int n = coeffs.n_parties;
  if (model.n_parties() != n)
    throw invalid_input_error("mk_value_lhv: party count mismatch");
  double acc = 0.0;
  std::vector<int> k(n);
  for (std::uint32_t t = 0; t < (1u << n); ++t) {
    if (coeffs.coeff[t].is_zero()) continue;
    for (int i = 0; i < n; ++i) k[i] = MKCoefficients::setting_of(t, i, n);
    acc += coeffs.coeff[t].to_double() * lhv_correlation(model, k);
  }
  return acc;
}

MonteCarloEstimate monte_carlo_correlation(const LHVModel& model, const std::vector<int>& k,
                                           std::uint64_t trials, std::uint64_t seed) {
  model.validate();
  const int n = model.n_parties();
  if (static_cast<int>(k.size()) != n)
    throw invalid_input_error("monte_carlo_correlation: setting tuple size mismatch");
  if (trials < 1) throw invalid_input_error("monte_carlo_correlation: trials must be >= 1");
  std::vector<double> cdf(model.probs.size());
  double run = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    run += model.probs[i];
    cdf[i] = run;
  }
  Rng rng(seed);
  std::int64_t sum = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double u = rng.uniform();
    const std::size_t l = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const auto& resp = model.responses[std::min(l, cdf.size() - 1)];
    int prod = 1;
    for (int i = 0; i < n; ++i) {
      const double p_plus = 0.5 * (1.0 + resp[i][k[i]]);
      if (rng.uniform() >= p_plus) prod = -prod;
    }
    sum += prod;
  }
  MonteCarloEstimate est;
  const double tn = static_cast<double>(trials);
  est.estimate = static_cast<double>(sum) / tn;
  if (trials > 1) {
    // Products are +-1, so the sample variance is T(1 - mean^2)/(T-1).
    double var = std::max(0.0, tn * (1.0 - est.estimate * est.estimate) / (tn - 1.0));
    est.stderr_est = std::sqrt(var / tn);
  }
  return est;
}

double chen_claimed_value(double m) { return m + m * m + (1.0 - m * m); }

double chen_claimed_bound() { return chen_claimed_value(1.0); }

SpectrumLHV spectrum_matching_lhv(double target_mean, const std::vector<double>& spectrum) {
  if (spectrum.empty()) throw invalid_input_error("spectrum_matching_lhv: empty spectrum");
  const auto [lo_it, hi_it] = std::minmax_element(spectrum.begin(), spectrum.end());
  const double lo = *lo_it, hi = *hi_it;
  if (target_mean < lo || target_mean > hi)
    throw infeasible_error("spectrum_matching_lhv: target mean outside spectral range");
  SpectrumLHV out;
  out.outcomes = spectrum;
  out.probs.assign(spectrum.size(), 0.0);
  if (hi == lo) {
    out.probs[static_cast<std::size_t>(hi_it - spectrum.begin())] = 1.0;
    return out;
  }
  const double p_hi = (target_mean - lo) / (hi - lo);
  out.probs[static_cast<std::size_t>(hi_it - spectrum.begin())] = p_hi;
  out.probs[static_cast<std::size_t>(lo_it - spectrum.begin())] = 1.0 - p_hi;
  return out;
}

}  // namespace bell
