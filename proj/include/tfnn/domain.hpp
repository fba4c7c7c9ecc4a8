#pragma once

#include <array>
#include <string>
#include <vector>

#include "tfnn/common.hpp"

namespace tfnn {

enum class Metric { euclidean, max, discrete, sup_over_grid };

std::string metric_name(Metric m);
Metric parse_metric(const std::string& name);

double point_dist(const Point& a, const Point& b, Metric m);

// Finite stand-in for a compact set K: sample points, the metric they carry,
// and the declared covering radius of the sample inside the idealized set.
struct SampledCompactSet {
  std::vector<Point> points;
  Metric metric = Metric::euclidean;
  double mesh = 0.0;

  std::size_t size() const { return points.size(); }
  std::size_t arity() const { return points.empty() ? 0 : points.front().size(); }
};

// max over points of the Euclidean norm of (values_i - reference_i).
double sup_seminorm(const std::vector<std::vector<double>>& values,
                    const std::vector<std::vector<double>>& reference);

// Greedy farthest-point subsample: starts from the first point, repeatedly
// adds the farthest remaining point (ties to the smallest index) until the
// covering radius over the original points is <= eps.
SampledCompactSet epsilon_net(const SampledCompactSet& set, double eps);

// One factor of a product space: an interval (dim 1) or a finite label set (dim 0).
struct Factor {
  bool finite = false;
  double lo = 0.0, hi = 1.0;  // interval bounds
  int labels = 0;             // finite label count
  int dim() const { return finite ? 0 : 1; }
};

struct ProductSpace {
  std::vector<Factor> factors;

  int arity() const { return static_cast<int>(factors.size()); }
  int dimension() const {  // M = sum of factor dimensions
    int m = 0;
    for (const auto& f : factors) m += f.dim();
    return m;
  }
  bool all_finite() const {
    for (const auto& f : factors)
      if (!f.finite) return false;
    return !factors.empty();
  }
  // Full product grid: finite factors contribute all labels, interval factors
  // n equispaced samples. Metric: euclidean on cubes, discrete when all finite.
  SampledCompactSet grid(int n) const;

  static ProductSpace cube(int d, double lo = 0.0, double hi = 1.0);
  static ProductSpace finite(const std::vector<int>& label_counts);
  static ProductSpace parse(const std::string& spec);  // "cube:2", "finite:2,2", "square:-1,1"
  std::string spec() const;
};

// A compact family V subset C(Y), represented by member values on a grid of Y.
struct FunctionClassV {
  std::vector<double> domain_grid;  // Y at desk scale: a grid in R
  std::string family;               // "sin_scale" | "affine"
  double param_lo = 0.0, param_hi = 1.0;
  int n_params = 0;
  double lipschitz_bound = 0.0;

  double member_param(int i) const;
  Point member_values(int i) const;          // values on domain_grid
  SampledCompactSet as_set() const;          // points = member value vectors
};

double eval_family_member(const std::string& family, double param, double t);

// Equispaced 2-D grid sample of [x0,x1] x [y0,y1]; mesh = half cell diagonal.
SampledCompactSet grid2d(int nx, int ny, double x0, double x1, double y0, double y1);
SampledCompactSet grid1d(int n, double a, double b);

}  // namespace tfnn
