#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "tfnn/domain.hpp"
#include "tfnn/io.hpp"
#include "tfnn/rng.hpp"

using namespace tfnn;
using tfnn_test::error_kind;

TEST_CASE("sup_seminorm basics") {
  std::vector<std::vector<double>> zeros(3, {0.0});
  CHECK(sup_seminorm(zeros, zeros) == 0.0);

  std::vector<std::vector<double>> vals{{-1.0}, {0.0}, {1.0}};
  CHECK(sup_seminorm(vals, zeros) == 1.0);

  std::vector<std::vector<double>> a(5, {3.0, 4.0}), b(5, {0.0, 0.0});
  CHECK(sup_seminorm(a, b) == 5.0);

  CHECK(error_kind([&] { sup_seminorm(a, zeros); }) == "LengthMismatch");
}

TEST_CASE("sup_seminorm component bound") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 12, m = 3;
    std::vector<std::vector<double>> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < m; ++c) {
        a[i].push_back(2 * rng.next_double() - 1);
        b[i].push_back(2 * rng.next_double() - 1);
      }
    double sup = sup_seminorm(a, b);
    double comp_sq = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      double cm = 0.0;
      for (std::size_t i = 0; i < n; ++i) cm = std::max(cm, std::abs(a[i][c] - b[i][c]));
      comp_sq += cm * cm;
    }
    CHECK(sup <= std::sqrt(comp_sq) + 1e-15);
  }
}

namespace {
SampledCompactSet unit_line(int n) {
  SampledCompactSet s;
  s.metric = Metric::euclidean;
  for (int i = 0; i < n; ++i) s.points.push_back({static_cast<double>(i) / (n - 1)});
  return s;
}

// brute-force covering radius of the subset over the original points
double cover_radius(const SampledCompactSet& net, const SampledCompactSet& orig) {
  double m = 0.0;
  for (const auto& p : orig.points) {
    double best = 1e300;
    for (const auto& q : net.points) best = std::min(best, point_dist(p, q, orig.metric));
    m = std::max(m, best);
  }
  return m;
}
}  // namespace

TEST_CASE("epsilon_net on 101 uniform points at eps 0.1") {
  SampledCompactSet s = unit_line(101);
  SampledCompactSet net = epsilon_net(s, 0.1);
  CHECK(net.points.size() == 9);  // greedy oracle count
  CHECK(net.points.size() <= 11);
  // greedy order: 0, 1, 0.5, 0.25, 0.75, 0.12, 0.37, 0.62, 0.87
  std::vector<double> expect{0.0, 1.0, 0.5, 0.25, 0.75, 0.12, 0.37, 0.62, 0.87};
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(net.points[i][0] == doctest::Approx(expect[i]).epsilon(1e-12));
  double cover = cover_radius(net, s);
  CHECK(cover <= 0.1);
  CHECK(cover == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(net.mesh == doctest::Approx(cover).epsilon(1e-12));
}

TEST_CASE("epsilon_net degenerate cases") {
  SampledCompactSet s = unit_line(11);
  SampledCompactSet full = epsilon_net(s, 0.0);
  CHECK(full.points.size() == s.points.size());

  SampledCompactSet single;
  single.points = {{0.25}};
  SampledCompactSet net = epsilon_net(single, 0.5);
  CHECK(net.points.size() == 1);
  CHECK(net.points[0][0] == 0.25);
}

TEST_CASE("epsilon_net mesh law on random clouds") {
  SplitMix64 rng(5);
  SampledCompactSet s;
  s.metric = Metric::euclidean;
  for (int i = 0; i < 200; ++i) s.points.push_back({rng.next_double(), rng.next_double()});
  for (double eps : {0.5, 0.25, 0.1}) {
    SampledCompactSet net = epsilon_net(s, eps);
    CHECK(cover_radius(net, s) <= eps);
  }
}

TEST_CASE("product space grids") {
  ProductSpace cube = ProductSpace::cube(2);
  SampledCompactSet g = cube.grid(3);
  CHECK(g.points.size() == 9);
  CHECK(cube.dimension() == 2);
  CHECK(g.metric == Metric::euclidean);

  ProductSpace fin = ProductSpace::parse("finite:2,3");
  SampledCompactSet fg = fin.grid(5);
  CHECK(fg.points.size() == 6);
  CHECK(fin.dimension() == 0);
  CHECK(fg.metric == Metric::discrete);
  CHECK(point_dist(fg.points[0], fg.points[1], fg.metric) == 1.0);

  CHECK(error_kind([] { ProductSpace::parse("blob:3"); }) == "ConfigParse");
}

TEST_CASE("function class members satisfy the declared modulus") {
  FunctionClassV v;
  v.domain_grid = linspace(0.0, 1.0, 33);
  v.family = "sin_scale";
  v.param_lo = 0.0;
  v.param_hi = 2.0;
  v.n_params = 9;
  v.lipschitz_bound = 2.0;  // |d/dt sin(a t)| <= a <= 2
  for (int i = 0; i < v.n_params; ++i) {
    Point u = v.member_values(i);
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
      double dy = std::abs(u[j + 1] - u[j]);
      double dt = v.domain_grid[j + 1] - v.domain_grid[j];
      CHECK(dy <= v.lipschitz_bound * dt + 1e-12);
    }
    for (double val : u) CHECK(std::isfinite(val));
  }
  SampledCompactSet kv = v.as_set();
  CHECK(kv.points.size() == 9);
  CHECK(kv.metric == Metric::sup_over_grid);
}

TEST_CASE("set files round trip") {
  SampledCompactSet s = grid2d(5, 4, -1.0, 1.0, 0.0, 2.0);
  std::string text = set_to_text(s);
  SampledCompactSet back = set_from_text(text);
  REQUIRE(back.points.size() == s.points.size());
  CHECK(back.metric == s.metric);
  CHECK(back.mesh == s.mesh);
  for (std::size_t i = 0; i < s.points.size(); ++i) CHECK(back.points[i] == s.points[i]);

  CHECK(error_kind([] { set_from_text("mesh=1\n0,0\n"); }) == "ParseError");
  CHECK(error_kind([] { set_from_text("metric=euclidean mesh=0\n"); }) == "ParseError");
}
