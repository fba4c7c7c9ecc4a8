#include "tfnn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tfnn {

double eval_activation(const Activation& a, double t) {
  switch (a.kind) {
    case Activation::Kind::relu:
      return t > 0.0 ? t : 0.0;
    case Activation::Kind::leaky_relu:
      return t > 0.0 ? t : a.alpha * t;
    case Activation::Kind::tanh_fn:
      return std::tanh(t);
    case Activation::Kind::sigmoid: {
      if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
      double e = std::exp(t);
      return e / (1.0 + e);
    }
    case Activation::Kind::softplus:
      if (t > 30.0) return t + std::log1p(std::exp(-t));
      return std::log1p(std::exp(t));
    case Activation::Kind::sine:
      return std::sin(t);
    case Activation::Kind::identity:
      return t;
    case Activation::Kind::poly: {
      double v = 0.0;
      for (std::size_t i = a.coeffs.size(); i-- > 0;) v = v * t + a.coeffs[i];
      return v;
    }
  }
  return 0.0;
}

std::string Activation::id() const {
  switch (kind) {
    case Kind::relu:
      return "relu";
    case Kind::leaky_relu: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "leaky_relu:%.17g", alpha);
      return buf;
    }
    case Kind::tanh_fn:
      return "tanh";
    case Kind::sigmoid:
      return "sigmoid";
    case Kind::softplus:
      return "softplus";
    case Kind::sine:
      return "sin";
    case Kind::identity:
      return "identity";
    case Kind::poly: {
      std::string s = "poly:";
      char buf[64];
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", coeffs[i]);
        if (i) s += ",";
        s += buf;
      }
      return s;
    }
  }
  return "relu";
}

Activation Activation::parse(const std::string& id) {
  auto colon = id.find(':');
  std::string name = id.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : id.substr(colon + 1);
  if (name == "relu") return relu();
  if (name == "tanh") return tanh();
  if (name == "sigmoid") return sigmoid();
  if (name == "softplus") return softplus();
  if (name == "sin") return sine();
  if (name == "identity") return identity();
  if (name == "leaky_relu") {
    double a = args.empty() ? 0.01 : std::stod(args);
    return leaky(a);
  }
  if (name == "poly") {
    std::vector<double> c;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
    if (c.empty()) fail("ConfigParse", "poly activation needs coefficients: " + id);
    return poly(std::move(c));
  }
  fail("ConfigParse", "unknown activation id: " + id);
}

std::vector<double> default_kl_grid() {
  std::vector<double> g;
  for (int i = -8; i <= 8; ++i) g.push_back(i * 0.25);
  return g;
}

KLPoint find_kl_point(const Activation& a, std::vector<double> grid, double fd_step) {
  if (grid.empty()) fail("NoKLPoint", "empty probe grid");
  if (!(fd_step > 0.0)) fail("NoKLPoint", "fd_step must be positive");
  std::stable_sort(grid.begin(), grid.end(), [](double x, double y) {
    double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    return x < y;
  });
  for (double t0 : grid) {
    double h = fd_step;
    double d1 = (eval_activation(a, t0 + h) - eval_activation(a, t0 - h)) / (2.0 * h);
    double d2 = (eval_activation(a, t0 + h / 2) - eval_activation(a, t0 - h / 2)) / h;
    double scale = std::max(std::abs(d1), std::abs(d2));
    if (std::abs(d1 - d2) <= 1e-3 * scale && std::abs(d2) > 1e-6) {
      // expand the stability radius while offset estimates stay within 1%
      double r = fd_step;
      while (r < 0.5) {
        double rr = 2.0 * r;
        auto est = [&](double t) {
          return (eval_activation(a, t + h / 2) - eval_activation(a, t - h / 2)) / h;
        };
        double dp = est(t0 + rr), dm = est(t0 - rr);
        bool stable = std::abs(dp - d2) <= 1e-2 * std::abs(d2) &&
                      std::abs(dm - d2) <= 1e-2 * std::abs(d2) && std::abs(dp) > 1e-6 &&
                      std::abs(dm) > 1e-6;
        if (!stable) break;
        r = rr;
      }
      return KLPoint{t0, d2, r};
    }
  }
  fail("NoKLPoint", "no grid point with a stable nonzero derivative for " + a.id());
}

bool is_polynomial_on_interval(const Activation& a, double lo, double hi, int max_degree,
                               double tol) {
  if (!(lo < hi)) fail("ConfigParse", "is_polynomial_on_interval needs lo < hi");
  if (max_degree < 0 || !(tol > 0.0)) fail("ConfigParse", "bad degree or tolerance");
  const int npts = 64;
  std::vector<double> xs = linspace(lo, hi, npts);
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = eval_activation(a, xs[i]);

  const int pts = max_degree + 2;  // stencil size for order max_degree+1
  std::vector<double> dd(static_cast<std::size_t>(pts));
  for (int stride = 1; (pts - 1) * stride <= npts - 1; ++stride) {
    for (int s = 0; s + (pts - 1) * stride < npts; ++s) {
      for (int k = 0; k < pts; ++k) dd[static_cast<std::size_t>(k)] = fs[static_cast<std::size_t>(s + k * stride)];
      for (int lvl = 1; lvl < pts; ++lvl) {
        for (int i = 0; i < pts - lvl; ++i) {
          double x_hi = xs[static_cast<std::size_t>(s + (i + lvl) * stride)];
          double x_lo = xs[static_cast<std::size_t>(s + i * stride)];
          dd[static_cast<std::size_t>(i)] =
              (dd[static_cast<std::size_t>(i + 1)] - dd[static_cast<std::size_t>(i)]) / (x_hi - x_lo);
        }
      }
      if (std::abs(dd[0]) >= tol) return false;
    }
  }
  return true;
}

}  // namespace tfnn
