#pragma once

#include <string>
#include <vector>

#include "tfnn/common.hpp"

namespace tfnn {

// A named scalar nonlinearity with a deterministic, total evaluation rule.
struct Activation {
  enum class Kind { relu, leaky_relu, tanh_fn, sigmoid, softplus, sine, identity, poly };

  Kind kind = Kind::relu;
  double alpha = 0.01;          // leaky_relu slope
  std::vector<double> coeffs;   // poly: c0 + c1 t + c2 t^2 + ...

  // Exact shift blocks sigma(t + B) - B reproduce the identity on t >= -B.
  bool relu_family() const {
    return kind == Kind::relu || kind == Kind::leaky_relu || kind == Kind::identity;
  }

  std::string id() const;
  static Activation parse(const std::string& id);

  static Activation relu() { return {Kind::relu, 0.0, {}}; }
  static Activation leaky(double a) { return {Kind::leaky_relu, a, {}}; }
  static Activation tanh() { return {Kind::tanh_fn, 0.0, {}}; }
  static Activation sigmoid() { return {Kind::sigmoid, 0.0, {}}; }
  static Activation softplus() { return {Kind::softplus, 0.0, {}}; }
  static Activation sine() { return {Kind::sine, 0.0, {}}; }
  static Activation identity() { return {Kind::identity, 0.0, {}}; }
  static Activation poly(std::vector<double> c) { return {Kind::poly, 0.0, std::move(c)}; }
};

double eval_activation(const Activation& a, double t);

// A point where sigma has a stable, nonzero numeric derivative.
struct KLPoint {
  double t0 = 0.0;
  double derivative = 0.0;  // finite-difference estimate at the finer step
  double radius = 0.0;      // half-width where the estimate stays stable
};

// Scans the grid ordered by |t| (ties by value) for the first point where the
// two central differences (steps fd_step, fd_step/2) agree to 1e-3 relative
// and the estimate exceeds 1e-6. Throws Error("NoKLPoint") otherwise.
KLPoint find_kl_point(const Activation& a, std::vector<double> grid, double fd_step);

// True iff every (max_degree+1)-th divided difference over every equispaced
// stencil drawn from a 64-point grid on [lo,hi] is below tol in magnitude.
bool is_polynomial_on_interval(const Activation& a, double lo, double hi, int max_degree,
                               double tol);

// Symmetric default probe grid for find_kl_point.
std::vector<double> default_kl_grid();

}  // namespace tfnn
