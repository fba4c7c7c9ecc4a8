#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfnn/activation.hpp"

namespace tfnn {

struct RidgeTerm {
  double c = 0.0, w = 0.0, theta = 0.0;
};

// sum_j c_j sigma(w_j t - theta_j) on [a, b], with the sup error it achieved
// on its fit grid.
struct RidgeExpansion {
  Activation activation;
  std::vector<RidgeTerm> terms;
  double a = 0.0, b = 0.0;
  double sup_error = 0.0;

  double eval(double t) const;
};

enum class NodeStrategy { equispaced, nested, random };
NodeStrategy parse_strategy(const std::string& name);
std::string strategy_name(NodeStrategy s);

// The (w, theta) dictionary a strategy lays out for n terms on [a, b].
// n == 1 is the constant node (0, -1); for n >= 2 the nested sequence starts
// with (+-1, mid) so two relu terms reproduce |t - mid| exactly, and the
// constant node enters third. Nested dictionaries are prefixes of one
// sequence, so they are subsets under doubling.
std::vector<std::pair<double, double>> strategy_nodes(NodeStrategy s, int n, double a, double b,
                                                      std::uint64_t seed);

// Least-squares coefficients for an explicit node list.
RidgeExpansion fit_with_nodes(const std::vector<double>& ts, const std::vector<double>& us,
                              const Activation& act,
                              const std::vector<std::pair<double, double>>& nodes);

RidgeExpansion fit_univariate(const std::vector<double>& ts, const std::vector<double>& us,
                              const Activation& act, int n_terms,
                              NodeStrategy strategy = NodeStrategy::nested,
                              std::uint64_t seed = 0);

}  // namespace tfnn
