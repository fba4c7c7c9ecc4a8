#pragma once

#include <string>
#include <vector>

#include "tfnn/domain.hpp"

namespace tfnn {

// Built-in pointwise targets, selectable by name in configs and on the CLI.
//   abs_sum      |x| + |y|
//   xy           x * y
//   sum          x + y
//   sincos       sin(3x) + cos(2y)
//   const:c1,... constant vector
//   table:<file> value table aligned with the set file (CSV, one row per point)
// Functional targets on sampled members u of a function class:
//   int          trapezoid integral of u
//   int_sq       trapezoid integral of u^2
//   max          max_t u(t)
//   eval:<j>     u(y_j)
//   xor / and / or / table16:<mask>   boolean tables on finite products
struct Target {
  std::string name;
  int m = 1;

  // values per component over a sampled set (component-major)
  std::vector<std::vector<double>> values;
};

Target make_target(const std::string& name, const SampledCompactSet& k,
                   const std::vector<double>& domain_grid = {});

}  // namespace tfnn
