// Benchmark comparing the OpenMP kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <vector>

#include "bell/kernels.hpp"
#include "bell/lhv.hpp"
#include "bell/operators.hpp"
#include "bell/rng.hpp"

using bell::kernels::cplx;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

std::vector<cplx> random_matrix(std::size_t n, std::uint64_t seed) {
  bell::Rng rng(seed);
  std::vector<cplx> m(n * n);
  for (cplx& v : m) v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return m;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double mx = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a[i] - b[i]));
  return mx;
}

}  // namespace

int main() {
  std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
              "max|diff|");

  for (std::size_t n : {128, 256, 512}) {
    const auto a = random_matrix(n, 11);
    const auto b = random_matrix(n, 22);
    std::vector<cplx> c_ref(n * n), c_omp(n * n);
    const int reps = n <= 256 ? 3 : 2;
    const double ts = time_best_of(reps, [&] {
      bell::kernels::matmul_serial(a.data(), b.data(), c_ref.data(), n);
    });
    const double tp = time_best_of(reps, [&] {
      bell::kernels::matmul(a.data(), b.data(), c_omp.data(), n);
    });
    std::printf("matmul %4zux%-4zu            %10.4f %10.4f %7.2fx %10.2e\n", n, n, ts, tp,
                ts / tp, max_diff(c_ref, c_omp));
  }

  for (std::size_t na : {32, 64}) {
    const std::size_t nb = 32;
    const auto a = random_matrix(na, 33);
    const auto b = random_matrix(nb, 44);
    std::vector<cplx> o_ref(na * nb * na * nb), o_omp(o_ref.size());
    const double ts = time_best_of(3, [&] {
      bell::kernels::kron_serial(a.data(), na, b.data(), nb, o_ref.data());
    });
    const double tp = time_best_of(3, [&] {
      bell::kernels::kron(a.data(), na, b.data(), nb, o_omp.data());
    });
    std::printf("kron   %4zu (x) %-4zu         %10.4f %10.4f %7.2fx %10.2e\n", na, nb, ts, tp,
                ts / tp, max_diff(o_ref, o_omp));
  }

  {
    const auto coeffs = bell::mk_coefficients(8);
    bell::Rational r_ref, r_omp;
    const double ts = time_best_of(2, [&] { r_ref = bell::lhv_max_serial(coeffs); });
    const double tp = time_best_of(2, [&] { r_omp = bell::lhv_max(coeffs); });
    std::printf("lhv enumeration n=8          %10.4f %10.4f %7.2fx %10s\n", ts, tp, ts / tp,
                r_ref == r_omp ? "exact" : "MISMATCH");
  }
  return 0;
}
