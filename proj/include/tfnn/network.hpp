#pragma once

#include <vector>

#include "tfnn/activation.hpp"
#include "tfnn/features.hpp"
#include "tfnn/linalg.hpp"

namespace tfnn {

// Affine map y = A x - b (the minus convention is carried through the file
// format, so serialized weights must be read with it).
struct AffineLayer {
  Matrix a;
  std::vector<double> b;

  std::size_t rows() const { return a.rows; }
  std::size_t cols() const { return a.cols; }
  std::vector<double> apply(const std::vector<double>& x) const;
};

// Single-hidden-layer network: x -> A sigma(w_i f_i(x) - theta_i) - b.
struct ShallowTFNN {
  std::vector<FeatureMap> features;
  std::vector<double> in_weights;
  std::vector<double> in_biases;
  AffineLayer out;
  Activation activation;

  std::size_t hidden() const { return features.size(); }
  std::size_t outputs() const { return out.rows(); }
};

// Depth-l network T_{l+1} o sigma o T_l o ... o sigma o T_0 with a feature
// first layer; sigma never follows the output map.
struct DeepTFNN {
  std::vector<FeatureMap> features;   // T_0 reads one feature per unit
  std::vector<double> in_weights;
  std::vector<double> in_biases;
  std::vector<AffineLayer> hidden;    // T_1 .. T_l
  AffineLayer output;                 // T_{l+1}
  Activation activation;

  std::size_t outputs() const { return output.rows(); }
};

std::vector<double> eval_shallow(const ShallowTFNN& h, const Point& x);
std::vector<double> eval_deep(const DeepTFNN& h, const Point& x);

// Batch evaluation over a sample (parallel over points).
std::vector<std::vector<double>> eval_shallow_over(const ShallowTFNN& h,
                                                   const SampledCompactSet& k);
std::vector<std::vector<double>> eval_deep_over(const DeepTFNN& h, const SampledCompactSet& k);

// width = max hidden-layer width k_0..k_l; depth = number of hidden affine
// maps strictly between T_0 and the output.
int width_of(const DeepTFNN& h);
int depth_of(const DeepTFNN& h);

DeepTFNN shallow_as_deep(const ShallowTFNN& h);  // the l = 0 degenerate view

// Depth-l network agreeing with the shallow one wherever the inserted
// identity blocks operate inside [-bound, bound]: exact for the relu family,
// within block tolerance for differentiable activations (block scale h).
DeepTFNN embed_shallow_as_deep(const ShallowTFNN& h, int l, double bound, double block_h = 1e-3);

}  // namespace tfnn
