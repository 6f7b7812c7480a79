#include <doctest.h>

#include <cmath>

#include "bell/optimize.hpp"
#include "bell/rng.hpp"
#include "test_util.hpp"

using namespace bell;
using testutil::planar;

TEST_CASE("operator_norm on the identity and the zero matrix") {
  CHECK(operator_norm(ComplexMatrix::identity(8)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(ComplexMatrix(4)) == 0.0);
}

TEST_CASE("operator_norm rejects non-Hermitian input") {
  ComplexMatrix m(2);
  m.at(0, 1) = 1.0;
  CHECK_THROWS_AS(operator_norm(m), invalid_input_error);
}

TEST_CASE("operator_norm reproduces the quantum bound") {
  for (int n = 2; n <= 6; ++n) {
    PlanarSettings ps;
    ps.angles.assign(n, 0.25 * n);
    const double norm = operator_norm(mk_operator(ps.to_settings()));
    CHECK(std::abs(norm - std::ldexp(1.0, (n - 1)) / std::sqrt(std::ldexp(1.0, n - 1))) <= 1e-9);
  }
}

TEST_CASE("operator_norm converges and reports iterations") {
  PowerIterationResult info = operator_norm_info(mk_operator(planar({0.0, 0.0})));
  CHECK(info.converged);
  CHECK(info.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(info.iterations >= 1);
}

TEST_CASE("planar fast evaluator matches the full operator route") {
  Rng rng(2718);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(4));
    DensityMatrix rho = testutil::random_density(std::size_t{1} << n, rng);
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.uniform(0.0, 6.283185307179586);
    const double fast = planar_mk_expectation(rho, angles);
    const double full = expectation(rho, mk_operator(testutil::planar(angles)));
    CHECK(fast == doctest::Approx(full).epsilon(1e-12));
  }
}

TEST_CASE("optimize_mk saturates GHZ states") {
  OptimizationResult r2 = optimize_mk(ghz_state(2), 2, 8, 11);
  CHECK(r2.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  CHECK(r2.converged);

  OptimizationResult r3 = optimize_mk(ghz_state(3), 3, 8, 11);
  CHECK(r3.value >= 2.0 - 1e-6);
  CHECK(r3.value <= 2.0 + 1e-9);
}

TEST_CASE("optimize_mk on the maximally mixed state stays at zero") {
  OptimizationResult r = optimize_mk(maximally_mixed(4), 2, 4, 5);
  CHECK(std::abs(r.value) <= 1e-10);
}

TEST_CASE("optimize_mk never lifts separable states above 1") {
  for (int rep = 0; rep < 10; ++rep) {
    SeparableState s = random_separable(3, 4, 300 + rep);
    OptimizationResult r = optimize_mk(densify(s), 3, 4, 17);
    CHECK(r.value <= 1.0 + 1e-9);
  }
}

TEST_CASE("optimize_mk is deterministic per seed") {
  OptimizationResult a = optimize_mk(ghz_state(3), 3, 4, 99);
  OptimizationResult b = optimize_mk(ghz_state(3), 3, 4, 99);
  CHECK(a.value == b.value);
  const auto& pa = std::get<PlanarSettings>(a.argument);
  const auto& pb = std::get<PlanarSettings>(b.argument);
  CHECK(pa.angles == pb.angles);
}

TEST_CASE("optimize_mk value is the re-evaluated objective, not a cache") {
  OptimizationResult r = optimize_mk(ghz_state(2), 2, 3, 23);
  const auto& ps = std::get<PlanarSettings>(r.argument);
  const double direct = expectation(ghz_state(2), mk_operator(ps.to_settings()));
  CHECK(std::abs(r.value - direct) <= 1e-14);
}

TEST_CASE("oracle dominance: ascent never beats the operator norm") {
  Rng rng(3131);
  for (int rep = 0; rep < 5; ++rep) {
    DensityMatrix rho = testutil::random_density(8, rng);
    OptimizationResult r = optimize_mk(rho, 3, 4, 500 + rep);
    const auto& ps = std::get<PlanarSettings>(r.argument);
    CHECK(r.value <= operator_norm(mk_operator(ps.to_settings())) + 1e-9);
  }
  OptimizationResult ghz = optimize_mk(ghz_state(3), 3, 8, 2);
  const auto& ps = std::get<PlanarSettings>(ghz.argument);
  CHECK(std::abs(ghz.value - operator_norm(mk_operator(ps.to_settings()))) <= 1e-6);
}

TEST_CASE("bound hierarchy: separable <= 1 <= GHZ <= quantum bound") {
  for (int n : {2, 3, 4}) {
    SeparableState s = random_separable(n, 5, 40 + n);
    const double sep = optimize_mk(densify(s), n, 4, 7).value;
    const double ghz = optimize_mk(ghz_state(n), n, 4, 7).value;
    const double bound = std::sqrt(std::ldexp(1.0, n - 1));
    CHECK(sep <= 1.0 + 1e-9);
    CHECK(1.0 <= ghz + 1e-9);
    CHECK(ghz <= bound + 1e-9);
  }
}

TEST_CASE("optimize_separable_v reaches 2^(n-1)") {
  OptimizationResult r2 = optimize_separable_v(planar({0.0, 0.0}), 8, 31);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-6));

  for (int n : {3, 4}) {
    PlanarSettings ps;
    ps.angles.assign(n, 0.0);
    OptimizationResult r = optimize_separable_v(ps.to_settings(), 8, 31);
    const double target = std::ldexp(1.0, n - 1);
    CHECK(r.value >= (1.0 - 1e-6) * target);
    CHECK(r.value <= target + 1e-9);
  }
}

TEST_CASE("optimize_separable_v works at general orthogonal settings") {
  Rng rng(4444);
  MeasurementSettings s = testutil::random_orthogonal_settings(3, rng);
  OptimizationResult r = optimize_separable_v(s, 8, 5);
  CHECK(r.value >= (1.0 - 1e-6) * 4.0);
  CHECK(r.value <= 4.0 + 1e-9);
}

TEST_CASE("gap reproduction: separable maximum over claimed bound is 2^(n-2)") {
  for (int n = 2; n <= 4; ++n) {
    PlanarSettings ps;
    ps.angles.assign(n, 0.0);
    const double sep = optimize_separable_v(ps.to_settings(), 8, 61).value;
    const double ratio = sep / 2.0;
    CHECK(std::abs(ratio - std::ldexp(1.0, n - 2)) <= 1e-5 * std::ldexp(1.0, n - 2));
  }
}

TEST_CASE("optimize_separable_v re-evaluates its reported value") {
  OptimizationResult r = optimize_separable_v(planar({0.3, 0.9}), 4, 13);
  const auto& blochs = std::get<std::vector<BlochVector>>(r.argument);
  SeparableState product{2, {{1.0, {pure_from_bloch(blochs[0]), pure_from_bloch(blochs[1])}}}};
  const double direct = expectation(densify(product), chen_operator(planar({0.3, 0.9})));
  CHECK(std::abs(r.value - direct) <= 1e-14);
}
