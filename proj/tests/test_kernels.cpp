#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "tfnn/kernels.hpp"
#include "tfnn/rng.hpp"

using namespace tfnn;

namespace {
std::vector<double> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> m(rows * cols);
  for (auto& v : m) v = 2.0 * rng.next_double() - 1.0;
  return m;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}
}  // namespace

TEST_CASE("gram parallel matches serial bit for bit") {
  auto d = random_matrix(157, 23, 42);
  std::vector<double> gs(23 * 23), gp(23 * 23);
  kernels::gram_serial(d.data(), 157, 23, gs.data());
  set_execution(Execution::parallel);
  kernels::gram(d.data(), 157, 23, gp.data());
  CHECK(bitwise_equal(gs, gp));
}

TEST_CASE("mat_tvec parallel matches serial bit for bit") {
  auto d = random_matrix(311, 17, 7);
  auto y = random_matrix(311, 1, 8);
  std::vector<double> os(17), op(17);
  kernels::mat_tvec_serial(d.data(), 311, 17, y.data(), os.data());
  set_execution(Execution::parallel);
  kernels::mat_tvec(d.data(), 311, 17, y.data(), op.data());
  CHECK(bitwise_equal(os, op));
}

TEST_CASE("for_rows fills independently and identically") {
  std::size_t n = 999;
  std::vector<double> a(n), b(n);
  auto fn = [](std::size_t i) { return std::sin(0.1 * static_cast<double>(i)); };
  kernels::for_rows_serial(n, [&](std::size_t i) { a[i] = fn(i); });
  set_execution(Execution::parallel);
  kernels::for_rows(n, [&](std::size_t i) { b[i] = fn(i); });
  CHECK(bitwise_equal(a, b));
}

TEST_CASE("sup_row_norm_diff parallel matches serial") {
  auto a = random_matrix(2048, 3, 1);
  auto b = random_matrix(2048, 3, 2);
  double s = kernels::sup_row_norm_diff_serial(a.data(), b.data(), 2048, 3);
  set_execution(Execution::parallel);
  double p = kernels::sup_row_norm_diff(a.data(), b.data(), 2048, 3);
  CHECK(s == p);
}

TEST_CASE("pair_scan finds the lexicographically first violation") {
  auto f = random_matrix(300, 4, 5);
  // plant two duplicate pairs; (40, 220) must win over (150, 260)
  for (int c = 0; c < 4; ++c) {
    f[220 * 4 + static_cast<std::size_t>(c)] = f[40 * 4 + static_cast<std::size_t>(c)];
    f[260 * 4 + static_cast<std::size_t>(c)] = f[150 * 4 + static_cast<std::size_t>(c)];
  }
  auto ser = kernels::pair_scan_serial(f.data(), 300, 4, 1e-12);
  set_execution(Execution::parallel);
  auto par = kernels::pair_scan(f.data(), 300, 4, 1e-12);
  CHECK(ser.violation);
  CHECK(ser.vio_i == 40);
  CHECK(ser.vio_j == 220);
  CHECK(par.violation == ser.violation);
  CHECK(par.vio_i == ser.vio_i);
  CHECK(par.vio_j == ser.vio_j);
  CHECK(par.min_sep == ser.min_sep);
  CHECK(par.min_i == ser.min_i);
  CHECK(par.min_j == ser.min_j);
}

TEST_CASE("pair_scan min separation agrees with brute force") {
  auto f = random_matrix(120, 3, 11);
  double best = 1e300;
  for (std::size_t i = 0; i < 120; ++i)
    for (std::size_t j = i + 1; j < 120; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        double d = f[i * 3 + c] - f[j * 3 + c];
        s += d * d;
      }
      best = std::min(best, std::sqrt(s));
    }
  auto scan = kernels::pair_scan_serial(f.data(), 120, 3, 0.0);
  CHECK(scan.min_sep == doctest::Approx(best).epsilon(1e-15));
  CHECK_FALSE(scan.violation);
}
