#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "test_util.hpp"
#include "tfnn/activation.hpp"

using namespace tfnn;
using tfnn_test::error_kind;

TEST_CASE("built-in evaluation rules") {
  CHECK(eval_activation(Activation::tanh(), 0.0) == 0.0);
  CHECK(eval_activation(Activation::relu(), -1.0) == 0.0);
  CHECK(eval_activation(Activation::softplus(), 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(eval_activation(Activation::sigmoid(), 0.0) == doctest::Approx(0.5));
  CHECK(eval_activation(Activation::sine(), M_PI / 2) == doctest::Approx(1.0));
  CHECK(eval_activation(Activation::identity(), 3.25) == 3.25);
  CHECK(eval_activation(Activation::leaky(0.1), -2.0) == doctest::Approx(-0.2));
  CHECK(eval_activation(Activation::poly({1.0, 0.0, 2.0}), 3.0) == doctest::Approx(19.0));
}

TEST_CASE("evaluation is deterministic and finite on large inputs") {
  for (const auto& a : {Activation::relu(), Activation::leaky(0.01), Activation::tanh(),
                        Activation::sigmoid(), Activation::softplus(), Activation::sine(),
                        Activation::identity()}) {
    for (double t : {-1e6, -31.7, 0.0, 31.7, 1e6}) {
      double v1 = eval_activation(a, t);
      double v2 = eval_activation(a, t);
      CHECK(std::isfinite(v1));
      CHECK(std::memcmp(&v1, &v2, sizeof v1) == 0);
    }
  }
}

TEST_CASE("activation ids round trip") {
  for (const auto& a : {Activation::relu(), Activation::leaky(0.1), Activation::tanh(),
                        Activation::softplus(), Activation::poly({0.5, -1.0, 2.0})}) {
    Activation b = Activation::parse(a.id());
    CHECK(b.id() == a.id());
    CHECK(eval_activation(b, 0.37) == eval_activation(a, 0.37));
  }
  CHECK_THROWS_AS(Activation::parse("bogus"), Error);
}

TEST_CASE("find_kl_point prefers the origin on a symmetric grid") {
  KLPoint kl = find_kl_point(Activation::tanh(), default_kl_grid(), 1e-4);
  CHECK(kl.t0 == 0.0);
  CHECK(kl.derivative == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(kl.radius > 0.0);
}

TEST_CASE("find_kl_point derivative matches the analytic value") {
  struct Probe {
    Activation a;
    double analytic;  // derivative at the first stable grid point (t0 = 0)
  };
  for (const auto& p : {Probe{Activation::sigmoid(), 0.25}, Probe{Activation::softplus(), 0.5},
                        Probe{Activation::sine(), 1.0}}) {
    KLPoint kl = find_kl_point(p.a, default_kl_grid(), 1e-4);
    CHECK(kl.t0 == 0.0);
    CHECK(kl.derivative == doctest::Approx(p.analytic).epsilon(1e-5));
  }
}

TEST_CASE("find_kl_point on relu away from the kink") {
  KLPoint kl = find_kl_point(Activation::relu(), {1.0, 2.0}, 1e-4);
  CHECK(kl.t0 == 1.0);
  CHECK(kl.derivative == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("find_kl_point rejects a constant activation") {
  CHECK(error_kind([] { find_kl_point(Activation::poly({1.0}), default_kl_grid(), 1e-4); }) ==
        "NoKLPoint");
}

TEST_CASE("polynomial detection by divided differences") {
  Activation cubic = Activation::poly({0.0, -1.0, 0.0, 2.0});  // 2t^3 - t
  CHECK(is_polynomial_on_interval(cubic, -1.0, 1.0, 4, 1e-9));
  CHECK(is_polynomial_on_interval(cubic, -1.0, 1.0, 3, 1e-9));
  CHECK_FALSE(is_polynomial_on_interval(cubic, -1.0, 1.0, 2, 1e-9));

  Activation affine = Activation::poly({1.0, 3.0});  // 3t + 1
  CHECK(is_polynomial_on_interval(affine, -1.0, 1.0, 1, 1e-9));
  CHECK_FALSE(is_polynomial_on_interval(affine, -1.0, 1.0, 0, 1e-9));

  Activation square = Activation::poly({0.0, 0.0, 1.0});
  CHECK(is_polynomial_on_interval(square, -1.0, 1.0, 2, 1e-9));
  CHECK_FALSE(is_polynomial_on_interval(square, -1.0, 1.0, 1, 1e-9));

  CHECK_FALSE(is_polynomial_on_interval(Activation::tanh(), -1.0, 1.0, 6, 1e-9));
  CHECK_FALSE(is_polynomial_on_interval(Activation::tanh(), -1.0, 1.0, 3, 1e-9));
}

TEST_CASE("tanh seventh difference is far above the polynomial tolerance") {
  // independent stencil check: one consecutive 8-point stencil at the center
  // of the 64-point grid; tanh^(7)(0) = -272, so the divided difference sits
  // around 272/7! ~ 0.05, nine orders above 1e-9
  const int npts = 64;
  std::vector<double> xs(npts), fs(npts);
  for (int i = 0; i < npts; ++i) {
    xs[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (npts - 1);
    fs[static_cast<std::size_t>(i)] = std::tanh(xs[static_cast<std::size_t>(i)]);
  }
  int s = 28;
  std::vector<double> dd(fs.begin() + s, fs.begin() + s + 8);
  for (int lvl = 1; lvl < 8; ++lvl)
    for (int i = 0; i + lvl < 8; ++i)
      dd[static_cast<std::size_t>(i)] =
          (dd[static_cast<std::size_t>(i + 1)] - dd[static_cast<std::size_t>(i)]) /
          (xs[static_cast<std::size_t>(s + i + lvl)] - xs[static_cast<std::size_t>(s + i)]);
  CHECK(std::abs(dd[0]) > 1e-3);
}
