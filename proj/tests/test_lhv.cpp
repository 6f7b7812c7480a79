#include <doctest.h>

#include <cmath>

#include "bell/json_io.hpp"
#include "bell/lhv.hpp"
#include "bell/rng.hpp"
#include "test_util.hpp"

using namespace bell;
using testutil::planar;

namespace {

// Independent brute-force enumerator for small n: doubles, nested loops.
double brute_lhv_max(const MKCoefficients& coeffs) {
  const int n = coeffs.n_parties;
  double best = -1e300;
  for (std::uint32_t s = 0; s < (1u << (2 * n)); ++s) {
    double v = 0.0;
    for (std::uint32_t k = 0; k < (1u << n); ++k) {
      double prod = coeffs.coeff[k].to_double();
      for (int i = 0; i < n; ++i) {
        const int ki = MKCoefficients::setting_of(k, i, n);
        prod *= ((s >> (2 * i + ki)) & 1u) ? -1.0 : 1.0;
      }
      v += prod;
    }
    best = std::max(best, v);
  }
  return best;
}

LHVModel random_model(int n_lambdas, int n_parties, Rng& rng) {
  LHVModel m;
  double sum = 0.0;
  for (int l = 0; l < n_lambdas; ++l) {
    m.probs.push_back(rng.uniform() + 1e-9);
    sum += m.probs.back();
    std::vector<std::array<double, 2>> parties;
    for (int i = 0; i < n_parties; ++i)
      parties.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    m.responses.push_back(std::move(parties));
  }
  for (double& p : m.probs) p /= sum;
  return m;
}

}  // namespace

TEST_CASE("lhv_max on the MK family is exactly 1") {
  CHECK(lhv_max(mk_coefficients(2)) == Rational(1));
  CHECK(lhv_max(mk_coefficients(4)) == Rational(1));
}

TEST_CASE("lhv_max of the zero form is 0") {
  MKCoefficients zero;
  zero.n_parties = 2;
  zero.coeff.assign(4, Rational(0));
  CHECK(lhv_max(zero) == Rational(0));
}

TEST_CASE("lhv_max respects the enumeration cap") {
  CHECK_THROWS_AS(lhv_max(mk_coefficients(9)), capacity_error);
  CHECK_NOTHROW(lhv_max(mk_coefficients(9), 9));
}

TEST_CASE("lhv_max agrees with an independent brute-force oracle") {
  Rng rng(55);
  for (int rep = 0; rep < 10; ++rep) {
    MKCoefficients c;
    c.n_parties = 2;
    for (int k = 0; k < 4; ++k)
      c.coeff.push_back(Rational(static_cast<int>(rng.below(9)) - 4,
                                 1 << rng.below(3)));
    CHECK(lhv_max(c).to_double() == doctest::Approx(brute_lhv_max(c)).epsilon(1e-12));
    CHECK(lhv_max(c) == lhv_max_serial(c));
  }
}

TEST_CASE("lhv_correlation simple models") {
  DeterministicStrategy all_plus{{{1, 1}, {1, 1}}};
  LHVModel m = LHVModel::from_strategy(all_plus);
  CHECK(lhv_correlation(m, {0, 0}) == 1.0);
  CHECK(lhv_correlation(m, {1, 1}) == 1.0);

  DeterministicStrategy anti{{{1, 1}, {-1, -1}}};
  CHECK(lhv_correlation(LHVModel::from_strategy(anti), {0, 0}) == -1.0);
}

TEST_CASE("synthesize_lhv on |00> with planar settings gives zero responses") {
  SeparableState zz{2, {{1.0, {pure_from_bloch({0, 0, 1}), pure_from_bloch({0, 0, 1})}}}};
  LHVModel m = synthesize_lhv(zz, planar({0.0, 0.0}));
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) CHECK(std::abs(m.responses[0][i][k]) <= 1e-15);
  CHECK(lhv_correlation(m, {0, 1}) == 0.0);
}

TEST_CASE("synthesize_lhv eigenstate response is +1 when Z is a setting") {
  SeparableState zz{1, {{1.0, {pure_from_bloch({0, 0, 1})}}}};
  MeasurementSettings s;
  s.parties.push_back({BlochVector{0, 0, 1}, BlochVector{1, 0, 0}});
  LHVModel m = synthesize_lhv(zz, s);
  CHECK(m.responses[0][0][0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("synthesized models reproduce every quantum correlation") {
  Rng rng(777);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(3));
    SeparableState s = random_separable(n, 1 + static_cast<int>(rng.below(8)), 600 + rep);
    MeasurementSettings settings = testutil::random_orthogonal_settings(n, rng);
    LHVModel model = synthesize_lhv(s, settings);
    DensityMatrix rho = densify(s);
    std::vector<int> k(n);
    for (std::uint32_t t = 0; t < (1u << n); ++t) {
      ComplexMatrix obs = settings.observable(0, MKCoefficients::setting_of(t, 0, n));
      for (int i = 1; i < n; ++i)
        obs = testutil::naive_kron(obs, settings.observable(i, MKCoefficients::setting_of(t, i, n)));
      for (int i = 0; i < n; ++i) k[i] = MKCoefficients::setting_of(t, i, n);
      CHECK(std::abs(expectation(rho, obs) - lhv_correlation(model, k)) <= 1e-12);
    }
    CHECK(std::abs(mk_value_lhv(model, mk_coefficients(n))) <= 1.0 + 1e-12);
  }
}

TEST_CASE("mk_value_lhv reaches 1 on a CHSH-optimal strategy") {
  DeterministicStrategy s{{{1, 1}, {1, 1}}};  // (AB + AB' + A'B - A'B')/2 = 1
  CHECK(mk_value_lhv(LHVModel::from_strategy(s), mk_coefficients(2)) ==
        doctest::Approx(1.0).epsilon(1e-15));

  LHVModel zeros;
  zeros.probs = {1.0};
  zeros.responses = {{{0.0, 0.0}, {0.0, 0.0}}};
  CHECK(mk_value_lhv(zeros, mk_coefficients(2)) == 0.0);
}

TEST_CASE("stochastic models never beat the deterministic enumeration") {
  Rng rng(31);
  for (int rep = 0; rep < 15; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(3));
    MKCoefficients c;
    c.n_parties = n;
    for (std::uint32_t k = 0; k < (1u << n); ++k)
      c.coeff.push_back(Rational(static_cast<int>(rng.below(7)) - 3, 1 << rng.below(2)));
    const double cap = lhv_max(c).to_double();
    LHVModel m = random_model(1 + static_cast<int>(rng.below(5)), n, rng);
    CHECK(std::abs(mk_value_lhv(m, c)) <= cap + 1e-12);
  }
}

TEST_CASE("monte carlo on a deterministic model is exact with zero stderr") {
  DeterministicStrategy s{{{1, 1}, {-1, 1}}};
  LHVModel m = LHVModel::from_strategy(s);
  MonteCarloEstimate est = monte_carlo_correlation(m, {0, 0}, 1000, 9);
  CHECK(est.estimate == -1.0);
  CHECK(est.stderr_est == 0.0);
}

TEST_CASE("monte carlo with a dead site stays within five sigma of zero") {
  LHVModel m;
  m.probs = {1.0};
  m.responses = {{{0.0, 0.5}, {1.0, 1.0}}};
  MonteCarloEstimate est = monte_carlo_correlation(m, {0, 0}, 100000, 12345);
  CHECK(std::abs(est.estimate) <= 5.0 * est.stderr_est);
}

TEST_CASE("monte carlo tracks synthesized-model correlations") {
  SeparableState s = random_separable(3, 4, 21);
  Rng rng(22);
  MeasurementSettings settings = testutil::random_orthogonal_settings(3, rng);
  LHVModel model = synthesize_lhv(s, settings);
  const std::vector<int> k = {0, 1, 0};
  const double exact = lhv_correlation(model, k);
  MonteCarloEstimate est = monte_carlo_correlation(model, k, 1000000, 4);
  CHECK(std::abs(est.estimate - exact) <= 5.0 * est.stderr_est);

  MonteCarloEstimate again = monte_carlo_correlation(model, k, 1000000, 4);
  CHECK(again.estimate == est.estimate);  // bitwise deterministic per seed
}

TEST_CASE("chen claimed bound and its fixed-m values") {
  CHECK(chen_claimed_bound() == 2.0);
  CHECK(chen_claimed_value(-1.0) == 0.0);
  CHECK(chen_claimed_value(0.0) == 1.0);
}

TEST_CASE("the claimed bound is constant while the separable maximum grows") {
  for (int n = 2; n <= 6; ++n) {
    const double sep = std::ldexp(1.0, n - 1);
    CHECK(sep / chen_claimed_bound() == std::ldexp(1.0, n - 2));
  }
}

TEST_CASE("spectrum_matching_lhv reference points") {
  const double s2 = std::sqrt(2.0);
  SpectrumLHV a = spectrum_matching_lhv(s2, {2.0 * s2, -2.0 * s2, 0.0});
  CHECK(a.probs[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(a.probs[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.probs[2] == 0.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < 3; ++i) mean += a.outcomes[i] * a.probs[i];
  CHECK(mean == doctest::Approx(s2).epsilon(1e-13));

  SpectrumLHV b = spectrum_matching_lhv(0.0, {1.0, -1.0});
  CHECK(b.probs[0] == 0.5);
  CHECK(b.probs[1] == 0.5);

  const double top = 2.0;  // 2^{(3-1)/2}
  SpectrumLHV c = spectrum_matching_lhv(top, {top, -top, 0.0});
  CHECK(c.probs[0] == 1.0);
  CHECK(c.probs[1] == 0.0);

  CHECK_THROWS_AS(spectrum_matching_lhv(3.0, {1.0, -1.0}), infeasible_error);
}

TEST_CASE("lhv model JSON round-trip") {
  SeparableState s = random_separable(2, 3, 8);
  LHVModel m = synthesize_lhv(s, planar({0.2, 1.4}));
  LHVModel back = lhv_model_from_json(lhv_model_to_json(m));
  CHECK(back.probs == m.probs);
  for (int l = 0; l < m.n_lambdas(); ++l)
    for (int i = 0; i < m.n_parties(); ++i) {
      CHECK(back.responses[l][i][0] == m.responses[l][i][0]);
      CHECK(back.responses[l][i][1] == m.responses[l][i][1]);
    }
}

TEST_CASE("model validation rejects bad tables") {
  LHVModel bad;
  bad.probs = {0.7, 0.7};
  bad.responses = {{{0.0, 0.0}}, {{0.0, 0.0}}};
  CHECK_THROWS_AS(bad.validate(), invalid_input_error);

  LHVModel out_of_range;
  out_of_range.probs = {1.0};
  out_of_range.responses = {{{1.5, 0.0}}};
  CHECK_THROWS_AS(out_of_range.validate(), invalid_input_error);
}
