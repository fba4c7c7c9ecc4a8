#pragma once

#include <vector>

#include "tfnn/features.hpp"

namespace tfnn {

// Piecewise-linear function on equispaced knots; queries clamp to [lo, hi].
// A degenerate table (single knot) is a constant.
struct PwlTable {
  double lo = 0.0, hi = 0.0;
  std::vector<double> values;

  bool degenerate() const { return values.size() < 2 || hi - lo < 1e-15; }
  double eval(double t) const;
  double sup_abs() const;
};

// One fitted term u_i composed with the feature that feeds it.
struct AdditiveTerm {
  FeatureMap feature;
  PwlTable table;
};

struct AdditiveFit {
  std::vector<AdditiveTerm> terms;  // one per input feature, fitting order
  double constant = 0.0;            // global constant channel
  double residual = 0.0;            // sup |g - fit| over the sample
  std::vector<double> fitted;       // model values at the sample points
};

// Least-squares fit of g on K by constant + sum_i u_i(f_i(x)) with each u_i a
// pwl table (knots per feature, anchored to vanish at the interval center so
// the constant channel is identifiable). quadratic adds a centered square
// term per feature to the basis (residual only; tables stay pwl).
AdditiveFit fit_additive(const std::vector<FeatureMap>& family, const SampledCompactSet& k,
                         const std::vector<double>& g, int knots, bool quadratic = false);

}  // namespace tfnn
