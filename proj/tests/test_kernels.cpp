#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstring>
#include <vector>

#include "bell/kernels.hpp"
#include "bell/rng.hpp"

using bell::kernels::cplx;

namespace {

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

TEST_CASE("matmul agrees with the serial reference") {
  for (std::size_t n : {1, 2, 5, 17, 64, 130}) {
    auto a = random_matrix(n, 100 + n);
    auto b = random_matrix(n, 200 + n);
    std::vector<cplx> c_ref(n * n), c_omp(n * n);
    bell::kernels::matmul_serial(a.data(), b.data(), c_ref.data(), n);
    bell::kernels::matmul(a.data(), b.data(), c_omp.data(), n);
    CHECK(max_diff(c_ref, c_omp) < 1e-12 * static_cast<double>(n));
  }
}

TEST_CASE("matmul against identity") {
  const std::size_t n = 33;
  auto a = random_matrix(n, 7);
  std::vector<cplx> id(n * n), c(n * n);
  for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1.0;
  bell::kernels::matmul(a.data(), id.data(), c.data(), n);
  CHECK(max_diff(a, c) == 0.0);
}

TEST_CASE("matmul result is independent of the thread count") {
  const std::size_t n = 67;
  auto a = random_matrix(n, 1);
  auto b = random_matrix(n, 2);
  std::vector<cplx> c1(n * n), c2(n * n);
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  bell::kernels::matmul(a.data(), b.data(), c1.data(), n);
  omp_set_num_threads(saved > 1 ? saved : 2);
  bell::kernels::matmul(a.data(), b.data(), c2.data(), n);
  omp_set_num_threads(saved);
#else
  bell::kernels::matmul(a.data(), b.data(), c1.data(), n);
  bell::kernels::matmul(a.data(), b.data(), c2.data(), n);
#endif
  CHECK(std::memcmp(c1.data(), c2.data(), n * n * sizeof(cplx)) == 0);
}

TEST_CASE("kron agrees with the serial reference") {
  for (auto [na, nb] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 8}, {16, 3}}) {
    auto a = random_matrix(na, 31);
    auto b = random_matrix(nb, 41);
    std::vector<cplx> ref(na * nb * na * nb), omp(ref.size());
    bell::kernels::kron_serial(a.data(), na, b.data(), nb, ref.data());
    bell::kernels::kron(a.data(), na, b.data(), nb, omp.data());
    CHECK(max_diff(ref, omp) < 1e-15);
  }
}

TEST_CASE("kron result is independent of the thread count") {
  const std::size_t na = 8, nb = 8;
  auto a = random_matrix(na, 5);
  auto b = random_matrix(nb, 6);
  std::vector<cplx> o1(na * nb * na * nb), o2(o1.size());
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  bell::kernels::kron(a.data(), na, b.data(), nb, o1.data());
  omp_set_num_threads(saved > 1 ? saved : 2);
  bell::kernels::kron(a.data(), na, b.data(), nb, o2.data());
  omp_set_num_threads(saved);
#else
  bell::kernels::kron(a.data(), na, b.data(), nb, o1.data());
  bell::kernels::kron(a.data(), na, b.data(), nb, o2.data());
#endif
  CHECK(std::memcmp(o1.data(), o2.data(), o1.size() * sizeof(cplx)) == 0);
}

TEST_CASE("matvec matches a direct loop") {
  const std::size_t n = 50;
  auto m = random_matrix(n, 9);
  bell::Rng rng(10);
  std::vector<cplx> x(n), y(n), ref(n);
  for (cplx& v : x) v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m[i * n + j] * x[j];
    ref[i] = acc;
  }
  bell::kernels::matvec(m.data(), x.data(), y.data(), n);
  CHECK(max_diff(ref, y) < 1e-13);
}
