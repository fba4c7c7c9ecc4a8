#pragma once

#include <cstdint>
#include <string>

#include "tfnn/builders.hpp"

namespace tfnn {

// The 2M+1 sum-form features s_q(x) = sum_p psi_pq(x_p) on a product space.
struct OstrandFeatureSet {
  ProductSpace space;
  std::vector<std::vector<InnerPsi>> psis;  // [q][p]
  std::vector<FeatureMap> features;         // one ostrand_sum feature per q

  int feature_count() const { return static_cast<int>(features.size()); }
};

// Exact features for an all-finite product: one sum feature whose per-factor
// values are label_index * stride with mixed-radix strides, so sums are
// injective over the whole product (verified by brute force). A single factor
// is normalized into [0,1].
OstrandFeatureSet ostrand_features_finite(const ProductSpace& space);

// Corrected recursive inner function on the depth-k gamma-adic rationals,
// linearly interpolated in between. psi(0)=0, psi(1)=1, nondecreasing.
double sprecher_psi(double x, int gamma, int depth);
std::shared_ptr<const std::vector<double>> sprecher_table(int gamma, int depth);

struct KstMode {
  enum class Kind { sprecher, monotone_pl } kind = Kind::monotone_pl;
  int gamma = 10, depth = 4;  // sprecher
  std::uint64_t seed = 0;     // monotone_pl

  static KstMode parse(const std::string& spec);  // "sprecher:10,4" | "pl:seed"
  std::string spec() const;
};

// 2d+1 features on the d-cube. sprecher mode uses shifted weighted copies of
// one inner function; monotone_pl draws seeded strictly increasing tables and
// redraws (seed+1, up to 8 times) until the features separate the grid.
OstrandFeatureSet kolmogorov_features(int d, const KstMode& mode, const SampledCompactSet& grid);

// Least-squares outer functions h_q for f ~ sum_q h_q(s_q(x)) on K.
struct OuterFit {
  std::vector<PwlTable> outer;  // h_q per feature
  double residual = 0.0;
};
OuterFit fit_outer_functions(const std::vector<double>& f, const OstrandFeatureSet& features,
                             const SampledCompactSet& k, int knots);

// Deep narrow pipeline over the Ostrand features: n = 2M+1, so the emitted
// width obeys 2M + m + 3.
std::pair<DeepTFNN, BuildReport> build_ostrand_deep_narrow(
    const std::vector<std::vector<double>>& g, const ProductSpace& space,
    const SampledCompactSet& k, const Activation& act, double eps, const KstMode& mode,
    DeepNarrowOptions opts = {});

}  // namespace tfnn
