#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "bell/operators.hpp"
#include "bell/tensor.hpp"

namespace bell {

/// One equatorial angle per party: a(phi) = (cos phi, sin phi, 0) and
/// a'(phi) = (-sin phi, cos phi, 0), orthogonal by construction.
struct PlanarSettings {
  std::vector<double> angles;

  MeasurementSettings to_settings() const;
};

struct OptimizationResult {
  double value = 0.0;
  std::variant<PlanarSettings, std::vector<BlochVector>> argument;
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest |eigenvalue| of a Hermitian operator: power iteration on op^2
/// (applied as two matvecs, never formed), deterministic seeded start vector.
PowerIterationResult operator_norm_info(const ComplexMatrix& op, double tol = 1e-12,
                                        int max_iter = 10000);
double operator_norm(const ComplexMatrix& op, double tol = 1e-12, int max_iter = 10000);

/// <M_n> at planar angles through the per-state {X, Y} correlation table; the
/// cheap evaluation route the ascent below uses. Matches
/// expectation(rho, mk_operator(planar)) to floating-point accuracy.
double planar_mk_expectation(const DensityMatrix& rho, const std::vector<double>& angles);

/// Maximizes <M_n> over planar settings for a fixed state by cyclic coordinate
/// ascent; each angle subproblem is scanned on a 64-point grid and refined by
/// golden section to 1e-10. The reported value is re-evaluated through the
/// full operator path at the returned angles.
OptimizationResult optimize_mk(const DensityMatrix& rho, int n, int restarts = 8,
                               std::uint64_t seed = 1);

/// Maximizes <V_n> over pure product states for fixed settings by per-site
/// ascent: the single-site restriction is a 2x2 effective operator whose top
/// eigenstate is closed-form.
OptimizationResult optimize_separable_v(const MeasurementSettings& settings, int restarts = 8,
                                        std::uint64_t seed = 1);

}  // namespace bell
