#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "tfnn/domain.hpp"

namespace tfnn {

// Sum-form inner function psi_pq for one factor of a product space.
struct InnerPsi {
  enum class Kind { finite_table, sprecher, monotone_pl };

  Kind kind = Kind::finite_table;
  std::vector<double> values;  // finite: value per label; monotone_pl: knot values on [0,1]
  int gamma = 10, depth = 4;   // sprecher parameters
  double shift = 0.0;          // sprecher: evaluate at x + shift
  double weight = 1.0;         // multiplier applied inside the sum feature
  std::shared_ptr<const std::vector<double>> table;  // sprecher: dense depth-k table
};

double eval_inner_psi(const InnerPsi& psi, double xp);

enum class FeatureKind { coordinate, quadrature, point_eval, exponential, ostrand_sum, custom };

// One admissible scalar feature map f in A(X), evaluable on sampled points.
struct FeatureMap {
  FeatureKind kind = FeatureKind::coordinate;
  int index = 0;                        // coordinate / point_eval
  std::vector<double> weights;          // quadrature: f(x) = sum_j weights_j x_j
  double scale = 0.0;                   // exponential
  std::shared_ptr<FeatureMap> base;     // exponential
  std::vector<InnerPsi> psis;           // ostrand_sum: one entry per factor
  std::vector<Point> keys;              // custom: sampled points
  std::vector<double> values;           // custom: value per key
  std::optional<double> lip;            // declared Lipschitz bound, if any

  static FeatureMap coordinate(int i) {
    FeatureMap f;
    f.kind = FeatureKind::coordinate;
    f.index = i;
    return f;
  }
  static FeatureMap quadrature(std::vector<double> w) {
    FeatureMap f;
    f.kind = FeatureKind::quadrature;
    f.weights = std::move(w);
    return f;
  }
  static FeatureMap point_eval(int i) {
    FeatureMap f;
    f.kind = FeatureKind::point_eval;
    f.index = i;
    return f;
  }
  static FeatureMap exponential(const FeatureMap& base, double scale) {
    FeatureMap f;
    f.kind = FeatureKind::exponential;
    f.scale = scale;
    f.base = std::make_shared<FeatureMap>(base);
    return f;
  }
};

struct FeatureVectorMap {
  std::vector<FeatureMap> components;
  int arity() const { return static_cast<int>(components.size()); }
};

struct InjectivityReport {
  bool injective = true;
  std::optional<std::pair<Point, Point>> witness;  // first violating pair, lexicographic
  std::size_t witness_i = 0, witness_j = 0;
  double min_separation = 0.0;
};

double eval_feature(const FeatureMap& f, const Point& x);

// Evaluates every component of F over K into an n x |F| row-major matrix.
std::vector<double> eval_features_over(const std::vector<FeatureMap>& fs,
                                       const SampledCompactSet& k);

std::vector<FeatureMap> make_coordinate_family(int d);
std::vector<FeatureMap> make_direction_family(int d, const std::vector<std::vector<double>>& dirs);
// exp(s f) for every base f and nonzero scale, preceded by the constant (scale 0).
std::vector<FeatureMap> make_exponential_dictionary(const std::vector<FeatureMap>& base,
                                                    const std::vector<double>& scales);

InjectivityReport check_injectivity(const FeatureVectorMap& f, const SampledCompactSet& k);

// [min, max] of f over the sample, padded outward by mesh * lip(f) when a
// Lipschitz bound is declared.
std::array<double, 2> image_interval(const FeatureMap& f, const SampledCompactSet& k);

// Sup residual of the best least-squares additive model sum_i u_i(f_i(x))
// with piecewise-linear u_i on basis_size knots; the quadratic toggle adds a
// centered square term per feature.
double d_property_residual(const std::vector<FeatureMap>& family, const SampledCompactSet& k,
                           const std::vector<double>& g, int basis_size,
                           bool quadratic_basis = false);

}  // namespace tfnn
