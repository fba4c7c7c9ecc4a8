#include "tfnn/network.hpp"

#include <algorithm>
#include <cmath>

#include "tfnn/kernels.hpp"

namespace tfnn {

std::vector<double> AffineLayer::apply(const std::vector<double>& x) const {
  if (x.size() != a.cols) fail("ShapeMismatch", "affine layer input arity mismatch");
  std::vector<double> y(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a.at(i, j) * x[j];
    y[i] = s - b[i];
  }
  return y;
}

std::vector<double> eval_shallow(const ShallowTFNN& h, const Point& x) {
  std::size_t r = h.hidden();
  std::vector<double> z(r);
  for (std::size_t i = 0; i < r; ++i)
    z[i] = eval_activation(h.activation,
                           h.in_weights[i] * eval_feature(h.features[i], x) - h.in_biases[i]);
  return h.out.apply(z);
}

std::vector<double> eval_deep(const DeepTFNN& h, const Point& x) {
  std::size_t k0 = h.features.size();
  std::vector<double> z(k0);
  for (std::size_t i = 0; i < k0; ++i)
    z[i] = eval_activation(h.activation,
                           h.in_weights[i] * eval_feature(h.features[i], x) - h.in_biases[i]);
  for (const auto& layer : h.hidden) {
    z = layer.apply(z);
    for (auto& v : z) v = eval_activation(h.activation, v);
  }
  return h.output.apply(z);
}

std::vector<std::vector<double>> eval_shallow_over(const ShallowTFNN& h,
                                                   const SampledCompactSet& k) {
  std::vector<std::vector<double>> out(k.points.size());
  kernels::for_rows(k.points.size(), [&](std::size_t i) { out[i] = eval_shallow(h, k.points[i]); });
  return out;
}

std::vector<std::vector<double>> eval_deep_over(const DeepTFNN& h, const SampledCompactSet& k) {
  std::vector<std::vector<double>> out(k.points.size());
  kernels::for_rows(k.points.size(), [&](std::size_t i) { out[i] = eval_deep(h, k.points[i]); });
  return out;
}

int width_of(const DeepTFNN& h) {
  std::size_t w = h.features.size();
  for (const auto& layer : h.hidden) w = std::max(w, layer.rows());
  return static_cast<int>(w);
}

int depth_of(const DeepTFNN& h) { return static_cast<int>(h.hidden.size()); }

DeepTFNN shallow_as_deep(const ShallowTFNN& h) {
  DeepTFNN d;
  d.features = h.features;
  d.in_weights = h.in_weights;
  d.in_biases = h.in_biases;
  d.output = h.out;
  d.activation = h.activation;
  return d;
}

DeepTFNN embed_shallow_as_deep(const ShallowTFNN& h, int l, double bound, double block_h) {
  if (l < 1) fail("ConfigParse", "embed_shallow_as_deep needs l >= 1");
  std::size_t m = h.outputs();
  DeepTFNN d = shallow_as_deep(h);

  double t0 = 0.0, s0 = 0.0, deriv = 1.0, hh = 1.0;
  bool exact = h.activation.relu_family();
  double shift = std::max(1.0, std::abs(bound));
  if (!exact) {
    KLPoint kl = find_kl_point(h.activation, default_kl_grid(), 1e-4);
    t0 = kl.t0;
    deriv = kl.derivative;
    hh = block_h;
    s0 = eval_activation(h.activation, t0);
  }

  auto diag = [&](double scale, double bias) {
    AffineLayer layer;
    layer.a = Matrix(m, m);
    for (std::size_t i = 0; i < m; ++i) layer.a.at(i, i) = scale;
    layer.b.assign(m, bias);
    return layer;
  };

  // T_1 = block-in composed with the shallow output map
  AffineLayer t1;
  t1.a = Matrix(m, h.out.cols());
  t1.b.resize(m);
  double in_scale = exact ? 1.0 : hh;
  double in_bias = exact ? -shift : -t0;  // pre-activation shift (A y - b form)
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < h.out.cols(); ++j) t1.a.at(i, j) = in_scale * h.out.a.at(i, j);
    t1.b[i] = in_scale * h.out.b[i] + in_bias;
  }
  d.hidden.clear();
  d.hidden.push_back(std::move(t1));

  // middle layers: undo one block, enter the next
  for (int j = 2; j <= l; ++j) {
    if (exact)
      d.hidden.push_back(diag(1.0, 0.0));
    else
      d.hidden.push_back(diag(1.0 / deriv, s0 / deriv - t0));
  }

  // output: undo the last block
  if (exact)
    d.output = diag(1.0, shift);
  else
    d.output = diag(1.0 / (hh * deriv), s0 / (hh * deriv));
  return d;
}

}  // namespace tfnn
