#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "tfnn/network.hpp"
#include "tfnn/pwl.hpp"
#include "tfnn/univariate.hpp"

namespace tfnn {

// Additive decomposition g ~ sum_i u_i(f_i(x)) with the sup residual on K.
struct Decomposition {
  std::vector<AdditiveTerm> terms;
  double residual = 0.0;
};

struct BuildReport {
  double requested_eps = 0.0;
  double achieved_error = 0.0;
  int width = 0;
  int depth = 0;
  int term_count = 0;
  bool budget_exceeded = false;
  int n = 0, m = 1;
  int M = -1;  // Ostrand dimension when applicable
  std::uint64_t seed = 0;
  std::map<std::string, double> budgets;
};

struct BuildOptions {
  int knots = 16;
  int knots_cap = 512;
  std::vector<int> terms_schedule = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  NodeStrategy strategy = NodeStrategy::nested;
  std::uint64_t seed = 0;
};

// Piecewise-linear additive fit returning the tables. Terms whose table is
// numerically zero are dropped; the fitted constant folds into the first
// surviving term (or becomes a single constant term).
Decomposition decompose(const std::vector<double>& g, const std::vector<FeatureMap>& family,
                        const SampledCompactSet& k, int knots);

// Theorem-style shallow pipeline: per output component, decompose to within
// eps/(2 sqrt(m)), then fit each u_i by ridge terms to eps/(2 sqrt(m) M_k),
// escalating knots and terms up to their caps. Caps hit => budget flag.
std::pair<ShallowTFNN, BuildReport> build_shallow_universal(
    const std::vector<std::vector<double>>& g, const std::vector<FeatureMap>& family,
    const Activation& act, double eps, const SampledCompactSet& k, BuildOptions opts = {});

// Same pipeline over base functionals joined with their exponential
// dictionary (the raw functionals are admissible features themselves).
std::pair<ShallowTFNN, BuildReport> build_lcs_shallow(
    const std::vector<double>& g, const std::vector<FeatureMap>& base,
    const std::vector<double>& scales, const Activation& act, double eps,
    const SampledCompactSet& k, BuildOptions opts = {});

// Functional approximation over a sampled compact family V in C(Y):
// stage 1 builds a shallow net over quadrature/point-evaluation functionals
// to eps/2; stage 2 re-expresses every functional through k_nodes shared
// point evaluations, with the substitution tolerance derived from the
// uniform-continuity budget eps / (2 sum|c| + 1).
struct FunctionalBuild {
  ShallowTFNN net;
  BuildReport report;
  double delta_measured = 0.0;      // worst functional substitution error on V
  double delta_required = 0.0;      // tolerance the budget demanded
  double substitution_change = 0.0; // sup |H_before - H_after| on V
  double substitution_bound = 0.0;  // sum |c_i| Lip_i |w_i| delta_i
};
FunctionalBuild build_functional_net(const std::vector<double>& g, const FunctionClassV& v,
                                     const Activation& act, double eps, int k_nodes,
                                     BuildOptions opts = {});

// Exact tabulated composition g = u o F on the sample; nearest-image-point
// extension elsewhere (ties to the lexicographically smallest image point).
struct TabulatedMap {
  std::vector<Point> keys;                  // F(x_i)
  std::vector<std::vector<double>> values;  // g(x_i)
  std::vector<double> eval(const Point& y) const;
};
TabulatedMap compose_via_embedding(const std::vector<std::vector<double>>& g,
                                   const FeatureVectorMap& f, const SampledCompactSet& k);

// One-layer affine/sigma/affine unit reproducing the identity on width
// channels: exact shift form for the relu family (shift = relu_shift), the
// differentiated form (sigma(t0 + h t) - sigma(t0)) / (h sigma'(t0)) otherwise.
struct IdentityBlock {
  AffineLayer in;   // pre-activation map
  AffineLayer out;  // post-activation decode
};
IdentityBlock make_identity_block(const Activation& act, const KLPoint& kl, double h, int width,
                                  double relu_shift = 1.0);

struct DeepNarrowOptions {
  std::uint64_t seed = 0;
  std::vector<int> theta_schedule = {4, 8, 16, 32, 64, 128};
  std::optional<double> fixed_h;  // override the block-scale halving schedule
  int max_halvings = 40;
};

// Register-model conversion: a width-(n+m+2) deep network evaluating
// psi(F(x)), where psi is a Euclidean shallow net whose features are
// coordinates/directions over R^n. Registers forward F(x), accumulators the
// partial output sums, one channel computes a hidden unit per layer, and one
// carries a constant.
DeepTFNN register_model(const ShallowTFNN& psi, const std::vector<FeatureMap>& f,
                        const SampledCompactSet& k, double block_tol,
                        const DeepNarrowOptions& opts = {});

// Width-bounded builder: tabulate u on F(K), fit a Euclidean shallow net on
// the image to eps/2 (axis directions plus seeded unit directions), then
// convert to the register model. Emitted width <= n + m + 2.
std::pair<DeepTFNN, BuildReport> build_deep_narrow(const std::vector<std::vector<double>>& g,
                                                   const FeatureVectorMap& f,
                                                   const SampledCompactSet& k,
                                                   const Activation& act, double eps,
                                                   DeepNarrowOptions opts = {});

}  // namespace tfnn
