#include "bell/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bell/kernels.hpp"
#include "bell/rng.hpp"

namespace bell {

MeasurementSettings PlanarSettings::to_settings() const {
  MeasurementSettings s;
  for (double phi : angles) {
    const double c = std::cos(phi), sn = std::sin(phi);
    s.parties.push_back({BlochVector{c, sn, 0.0}, BlochVector{-sn, c, 0.0}});
  }
  return s;
}

PowerIterationResult operator_norm_info(const ComplexMatrix& op, double tol, int max_iter) {
  if (hermiticity_defect(op) > 1e-9 * std::max(1.0, max_abs(op)))
    throw invalid_input_error("operator_norm: operator is not Hermitian");
  const std::size_t d = op.dim;
  PowerIterationResult res;
  if (max_abs(op) == 0.0) {
    res.converged = true;
    return res;
  }
  Rng rng(mix_seed(0x6f70u, d));
  std::vector<cplx> v(d), w(d), u(d);
  double norm = 0.0;
  for (cplx& x : v) {
    x = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    norm += std::norm(x);
  }
  norm = std::sqrt(norm);
  for (cplx& x : v) x /= norm;

  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    kernels::matvec(op.a.data(), v.data(), u.data(), d);
    kernels::matvec(op.a.data(), u.data(), w.data(), d);
    // Rayleigh quotient of op^2 at unit v.
    cplx ray = 0.0;
    double wn = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      ray += std::conj(v[i]) * w[i];
      wn += std::norm(w[i]);
    }
    const double next = ray.real();
    wn = std::sqrt(wn);
    res.iterations = it;
    if (wn == 0.0) {  // v in the kernel of op^2; the dominant eigenvalue is 0
      res.value = 0.0;
      res.converged = true;
      return res;
    }
    const bool settled = it > 1 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
    lambda = next;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / wn;
    if (settled) {
      res.converged = true;
      break;
    }
  }
  res.value = std::sqrt(std::max(0.0, lambda));
  return res;
}

double operator_norm(const ComplexMatrix& op, double tol, int max_iter) {
  return operator_norm_info(op, tol, max_iter).value;
}

namespace {

// Correlation table T[w] = Tr[rho * (w_1 x ... x w_n)] over all words with
// w_i in {X, Y} (party 0 in the most significant index bit). Built once per
// state by contracting the leading site with X and Y and recursing; every
// planar objective evaluation afterwards is O(2^n).
void build_xy_table(const std::vector<cplx>& rho, std::size_t dim,
                    std::vector<double>& out, std::size_t base) {
  if (dim == 1) {
    out[base] = rho[0].real();
    return;
  }
  const std::size_t half = dim / 2;
  std::vector<cplx> rx(half * half), ry(half * half);
  for (std::size_t r = 0; r < half; ++r) {
    for (std::size_t c = 0; c < half; ++c) {
      const cplx upper = rho[r * dim + half + c];   // block (0, 1)
      const cplx lower = rho[(half + r) * dim + c]; // block (1, 0)
      rx[r * half + c] = upper + lower;
      ry[r * half + c] = cplx(0.0, 1.0) * (upper - lower);
    }
  }
  build_xy_table(rx, half, out, base * 2 + 0);
  build_xy_table(ry, half, out, base * 2 + 1);
}

// <M_n> over planar angles via the same pair recursion as the operator, but
// carried on 2^n-long coefficient vectors over {X, Y} words instead of
// matrices: evaluating one angle assignment costs O(2^n).
double planar_mk_value(const std::vector<double>& table, const std::vector<double>& angles) {
  const int n = static_cast<int>(angles.size());
  std::vector<double> m = {std::cos(angles[0]), std::sin(angles[0])};
  std::vector<double> mt = {-std::sin(angles[0]), std::cos(angles[0])};
  for (int i = 1; i < n; ++i) {
    const double c = std::cos(angles[i]), s = std::sin(angles[i]);
    const double p[2] = {c - s, s + c};  // a + a' over (X, Y)
    const double q[2] = {c + s, s - c};  // a - a'
    const std::size_t sz = m.size();
    std::vector<double> m2(sz * 2), mt2(sz * 2);
    for (std::size_t w = 0; w < sz; ++w) {
      for (int ax = 0; ax < 2; ++ax) {
        m2[w * 2 + ax] = 0.5 * (m[w] * p[ax] + mt[w] * q[ax]);
        mt2[w * 2 + ax] = 0.5 * (mt[w] * p[ax] - m[w] * q[ax]);
      }
    }
    m = std::move(m2);
    mt = std::move(mt2);
  }
  double acc = 0.0;
  for (std::size_t w = 0; w < m.size(); ++w) acc += table[w] * m[w];
  return acc;
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  constexpr double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr int kGridPoints = 64;
constexpr int kMaxSweeps = 500;

struct AscentOutcome {
  double value = 0.0;
  int sweeps = 0;
  bool converged = false;
};

}  // namespace

double planar_mk_expectation(const DensityMatrix& rho, const std::vector<double>& angles) {
  const int n = static_cast<int>(angles.size());
  if (n < 1 || rho.dim() != (std::size_t{1} << n))
    throw invalid_input_error("planar_mk_expectation: state dimension is not 2^n");
  std::vector<double> table(std::size_t{1} << n);
  build_xy_table(rho.matrix.a, rho.dim(), table, 0);
  return planar_mk_value(table, angles);
}

OptimizationResult optimize_mk(const DensityMatrix& rho, int n, int restarts,
                               std::uint64_t seed) {
  if (n < 1 || rho.dim() != (std::size_t{1} << n))
    throw invalid_input_error("optimize_mk: state dimension is not 2^n");
  if (restarts < 1) throw invalid_input_error("optimize_mk: restarts must be >= 1");

  std::vector<double> table(std::size_t{1} << n);
  build_xy_table(rho.matrix.a, rho.dim(), table, 0);

  std::vector<std::vector<double>> all_angles(restarts);
  std::vector<AscentOutcome> outcomes(restarts);

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.uniform(0.0, kTwoPi);
    double current = planar_mk_value(table, angles);
    AscentOutcome out;
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
      const double before = current;
      for (int i = 0; i < n; ++i) {
        auto restricted = [&](double phi) {
          std::vector<double> probe = angles;
          probe[i] = phi;
          return planar_mk_value(table, probe);
        };
        double best_phi = angles[i];
        double best_val = current;
        for (int g = 0; g < kGridPoints; ++g) {
          const double phi = kTwoPi * g / kGridPoints;
          const double v = restricted(phi);
          if (v > best_val) {
            best_val = v;
            best_phi = phi;
          }
        }
        const double span = kTwoPi / kGridPoints;
        const double refined =
            golden_section_max(restricted, best_phi - span, best_phi + span, 1e-10);
        const double refined_val = restricted(refined);
        if (refined_val > best_val) {
          best_val = refined_val;
          best_phi = refined;
        }
        if (best_val > current) {
          angles[i] = best_phi;
          current = best_val;
        }
      }
      out.sweeps = sweep;
      if (current < before - 1e-12)
        throw identity_violation_error("optimize_mk: ascent decreased the objective");
      if (current - before < 1e-12) {
        out.converged = true;
        break;
      }
    }
    out.value = current;
    outcomes[r] = out;
    all_angles[r] = std::move(angles);
  }

  // Deterministic merge: strictly better value wins, ties keep the lowest index.
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;

  OptimizationResult res;
  PlanarSettings ps{all_angles[best]};
  res.value = expectation(rho, mk_operator(ps.to_settings()));
  res.argument = std::move(ps);
  res.iterations = outcomes[best].sweeps;
  res.converged = outcomes[best].converged;
  return res;
}

namespace {

struct Qubit2x2 {
  cplx m[2][2];
};

double product_expectation(const ComplexMatrix& v, const std::vector<Qubit2x2>& sites) {
  const int n = static_cast<int>(sites.size());
  const std::size_t dim = v.dim;
  cplx acc = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      cplx prod = v.at(c, r);
      if (prod == cplx(0.0)) continue;
      for (int j = 0; j < n; ++j) {
        const int rj = static_cast<int>((r >> (n - 1 - j)) & 1);
        const int cj = static_cast<int>((c >> (n - 1 - j)) & 1);
        prod *= sites[j].m[rj][cj];
      }
      acc += prod;
    }
  }
  return acc.real();
}

// Effective 2x2 operator for site i: <V> = Tr[rho_i H_i] with all other sites
// held fixed.
Qubit2x2 effective_site_operator(const ComplexMatrix& v, const std::vector<Qubit2x2>& sites,
                                 int i) {
  const int n = static_cast<int>(sites.size());
  const std::size_t dim = v.dim;
  cplx k[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      cplx prod = v.at(c, r);
      if (prod == cplx(0.0)) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const int rj = static_cast<int>((r >> (n - 1 - j)) & 1);
        const int cj = static_cast<int>((c >> (n - 1 - j)) & 1);
        prod *= sites[j].m[rj][cj];
      }
      const int ri = static_cast<int>((r >> (n - 1 - i)) & 1);
      const int ci = static_cast<int>((c >> (n - 1 - i)) & 1);
      k[ri][ci] += prod;
    }
  }
  // <V> = sum_{a,b} rho_i[a][b] k[a][b] = Tr[rho_i k^T]; symmetrize the
  // transpose against roundoff.
  Qubit2x2 h;
  h.m[0][0] = cplx(k[0][0].real(), 0.0);
  h.m[1][1] = cplx(k[1][1].real(), 0.0);
  const cplx off = 0.5 * (k[0][1] + std::conj(k[1][0]));
  h.m[1][0] = off;
  h.m[0][1] = std::conj(off);
  return h;
}

// Top eigenvector of a 2x2 Hermitian matrix, returned as a Bloch vector and
// the corresponding pure-state density matrix.
std::pair<BlochVector, Qubit2x2> top_eigenstate(const Qubit2x2& h) {
  const double h00 = h.m[0][0].real(), h11 = h.m[1][1].real();
  const cplx h01 = h.m[0][1];
  const double t = 0.5 * (h00 - h11);
  const double d = std::abs(h01);
  const double lam = 0.5 * (h00 + h11) + std::sqrt(t * t + d * d);
  cplx v0, v1;
  if (d < 1e-300) {
    v0 = t >= 0.0 ? 1.0 : 0.0;
    v1 = t >= 0.0 ? 0.0 : 1.0;
  } else {
    v0 = h01;
    v1 = cplx(lam - h00, 0.0);
    const double nn = std::sqrt(std::norm(v0) + std::norm(v1));
    v0 /= nn;
    v1 /= nn;
  }
  BlochVector b;
  const cplx cross = std::conj(v0) * v1;
  b.x = 2.0 * cross.real();
  b.y = 2.0 * cross.imag();
  b.z = std::norm(v0) - std::norm(v1);
  const double bn = std::sqrt(b.norm_sq());
  b.x /= bn;
  b.y /= bn;
  b.z /= bn;
  Qubit2x2 rho;
  rho.m[0][0] = std::norm(v0);
  rho.m[0][1] = v0 * std::conj(v1);
  rho.m[1][0] = v1 * std::conj(v0);
  rho.m[1][1] = std::norm(v1);
  return {b, rho};
}

}  // namespace

OptimizationResult optimize_separable_v(const MeasurementSettings& settings, int restarts,
                                        std::uint64_t seed) {
  settings.validate();
  if (restarts < 1) throw invalid_input_error("optimize_separable_v: restarts must be >= 1");
  const int n = settings.n();
  const ComplexMatrix v = chen_operator(settings);

  std::vector<std::vector<BlochVector>> all_blochs(restarts);
  std::vector<AscentOutcome> outcomes(restarts);

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, 0x5eb0000ull + static_cast<std::uint64_t>(r)));
    std::vector<BlochVector> blochs(n);
    std::vector<Qubit2x2> sites(n);
    for (int i = 0; i < n; ++i) {
      BlochVector b;
      double norm = 0.0;
      while (norm < 1e-12) {
        b = BlochVector{rng.gaussian(), rng.gaussian(), rng.gaussian()};
        norm = std::sqrt(b.norm_sq());
      }
      b.x /= norm;
      b.y /= norm;
      b.z /= norm;
      blochs[i] = b;
      sites[i].m[0][0] = 0.5 * (1.0 + b.z);
      sites[i].m[0][1] = cplx(0.5 * b.x, -0.5 * b.y);
      sites[i].m[1][0] = cplx(0.5 * b.x, 0.5 * b.y);
      sites[i].m[1][1] = 0.5 * (1.0 - b.z);
    }
    double current = product_expectation(v, sites);
    AscentOutcome out;
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
      const double before = current;
      for (int i = 0; i < n; ++i) {
        Qubit2x2 h = effective_site_operator(v, sites, i);
        auto [b, rho] = top_eigenstate(h);
        const cplx val = rho.m[0][0] * h.m[0][0] + rho.m[0][1] * h.m[1][0] +
                         rho.m[1][0] * h.m[0][1] + rho.m[1][1] * h.m[1][1];
        if (val.real() > current) {
          sites[i] = rho;
          blochs[i] = b;
          current = val.real();
        }
      }
      out.sweeps = sweep;
      if (current < before - 1e-12)
        throw identity_violation_error("optimize_separable_v: ascent decreased the objective");
      if (current - before < 1e-10) {
        out.converged = true;
        break;
      }
    }
    out.value = current;
    outcomes[r] = out;
    all_blochs[r] = std::move(blochs);
  }

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;

  // Re-evaluate through the full tensor path at the returned argument.
  SeparableState product;
  product.n_parties = n;
  SeparableState::Term term;
  term.p = 1.0;
  for (const BlochVector& b : all_blochs[best]) term.factors.push_back(pure_from_bloch(b));
  product.terms.push_back(std::move(term));

  OptimizationResult res;
  res.value = expectation(densify(product), v);
  res.argument = all_blochs[best];
  res.iterations = outcomes[best].sweeps;
  res.converged = outcomes[best].converged;
  return res;
}

}  // namespace bell
