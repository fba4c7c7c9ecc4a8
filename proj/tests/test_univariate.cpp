#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "tfnn/rng.hpp"
#include "tfnn/univariate.hpp"

using namespace tfnn;

namespace {
std::vector<double> sample_fn(const std::vector<double>& ts, double (*f)(double)) {
  std::vector<double> us(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) us[i] = f(ts[i]);
  return us;
}
}  // namespace

TEST_CASE("a single term represents constants exactly") {
  auto ts = linspace(-1.0, 1.0, 33);
  std::vector<double> us(ts.size(), 1.0);
  RidgeExpansion r = fit_univariate(ts, us, Activation::tanh(), 1);
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms[0].w == 0.0);
  CHECK(r.terms[0].theta == -1.0);
  CHECK(r.terms[0].c == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-9));
  CHECK(r.sup_error <= 1e-12);
}

TEST_CASE("two relu terms reproduce the absolute value") {
  auto ts = linspace(-1.0, 1.0, 401);
  RidgeExpansion r = fit_univariate(ts, sample_fn(ts, +[](double t) { return std::abs(t); }),
                                    Activation::relu(), 2);
  REQUIRE(r.terms.size() == 2);
  CHECK(r.sup_error <= 1e-12);
  CHECK(r.terms[0].c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.terms[1].c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.terms[0].w == 1.0);
  CHECK(r.terms[1].w == -1.0);
  CHECK(r.terms[0].theta == 0.0);
  CHECK(r.terms[1].theta == 0.0);
}

TEST_CASE("sine fit meets the pinned threshold and tightens when doubled") {
  auto ts = linspace(0.0, M_PI, 512);
  auto us = sample_fn(ts, +[](double t) { return std::sin(t); });
  RidgeExpansion r32 = fit_univariate(ts, us, Activation::tanh(), 32);
  CHECK(r32.sup_error <= 1e-3);  // least-squares oracle: 7.99e-4
  CHECK(r32.sup_error <= 0.01);
  RidgeExpansion r64 = fit_univariate(ts, us, Activation::tanh(), 64);
  CHECK(r64.sup_error <= r32.sup_error);
}

TEST_CASE("nested dictionaries are prefixes, so doubling never hurts") {
  struct Case {
    double (*f)(double);
    double a, b;
    Activation act;
  };
  Case cases[] = {
      {+[](double t) { return std::sin(t); }, 0.0, M_PI, Activation::tanh()},
      {+[](double t) { return std::exp(t); }, -1.0, 1.0, Activation::tanh()},
      {+[](double t) { return 1.0 / (1.0 + 25.0 * t * t); }, -1.0, 1.0, Activation::tanh()},
      {+[](double t) { return std::abs(t); }, -1.0, 1.0, Activation::relu()},
  };
  for (const auto& c : cases) {
    auto ts = linspace(c.a, c.b, 512);
    auto us = sample_fn(ts, c.f);
    double prev = -1.0;
    for (int n : {2, 4, 8, 16, 32, 64}) {
      double err = fit_univariate(ts, us, c.act, n).sup_error;
      if (prev >= 0.0) CHECK(err <= prev + 1e-9);
      prev = err;
    }
    // nodes of the smaller dictionary are a prefix of the larger
    auto small = strategy_nodes(NodeStrategy::nested, 8, c.a, c.b, 0);
    auto large = strategy_nodes(NodeStrategy::nested, 16, c.a, c.b, 0);
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == large[i]);
  }
}

TEST_CASE("targets inside the dictionary are recovered exactly") {
  SplitMix64 rng(123);
  auto nodes = strategy_nodes(NodeStrategy::nested, 8, -1.0, 1.0, 0);
  auto ts = linspace(-1.0, 1.0, 257);
  std::vector<double> coeff(nodes.size());
  for (auto& c : coeff) c = 2.0 * rng.next_double() - 1.0;
  std::vector<double> us(ts.size(), 0.0);
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      us[i] += coeff[j] * std::tanh(nodes[j].first * ts[i] - nodes[j].second);
  RidgeExpansion r = fit_univariate(ts, us, Activation::tanh(), 8);
  CHECK(r.sup_error <= 1e-10);
}

TEST_CASE("scale covariance with correspondingly scaled nodes") {
  double s = 2.5;
  auto ts = linspace(0.5, 2.0, 129);
  std::vector<double> scaled_ts(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) scaled_ts[i] = ts[i] / s;
  auto u = sample_fn(ts, +[](double t) { return std::sin(3.0 * t) + t * t; });

  auto nodes = strategy_nodes(NodeStrategy::nested, 16, 0.5, 2.0, 0);
  std::vector<std::pair<double, double>> scaled_nodes;
  for (auto [w, th] : nodes) scaled_nodes.emplace_back(w * s, th);

  RidgeExpansion a = fit_with_nodes(ts, u, Activation::tanh(), nodes);
  RidgeExpansion b = fit_with_nodes(scaled_ts, u, Activation::tanh(), scaled_nodes);
  CHECK(std::abs(a.sup_error - b.sup_error) <= 1e-12);
}

TEST_CASE("stored sup error re-measures identically") {
  auto ts = linspace(-2.0, 2.0, 301);
  auto us = sample_fn(ts, +[](double t) { return std::cos(t); });
  RidgeExpansion r = fit_univariate(ts, us, Activation::tanh(), 12);
  double re = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) re = std::max(re, std::abs(us[i] - r.eval(ts[i])));
  CHECK(std::abs(re - r.sup_error) <= 1e-12);
  CHECK(r.sup_error >= 0.0);
}

TEST_CASE("every strategy carries a constant node and the requested count") {
  for (auto strat : {NodeStrategy::equispaced, NodeStrategy::nested, NodeStrategy::random}) {
    for (int n : {1, 2, 5, 17}) {
      auto nodes = strategy_nodes(strat, n, -1.0, 1.0, 9);
      CHECK(static_cast<int>(nodes.size()) == n);
      if (n == 1 || n >= 3) {
        bool has_const = false;
        for (auto [w, th] : nodes) has_const = has_const || (w == 0.0 && th == -1.0);
        CHECK(has_const);
      }
    }
  }
  // seeded draws are reproducible
  auto r1 = strategy_nodes(NodeStrategy::random, 9, 0.0, 1.0, 1234);
  auto r2 = strategy_nodes(NodeStrategy::random, 9, 0.0, 1.0, 1234);
  CHECK(r1 == r2);
}

TEST_CASE("degenerate single-point targets become constants") {
  RidgeExpansion r = fit_univariate({0.5}, {3.0}, Activation::tanh(), 4);
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms[0].w == 0.0);
  CHECK(r.sup_error <= 1e-12);
}
