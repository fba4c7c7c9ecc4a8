#include "tfnn/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfnn/kernels.hpp"
#include "tfnn/pwl.hpp"

namespace tfnn {

double eval_inner_psi(const InnerPsi& psi, double xp) {
  switch (psi.kind) {
    case InnerPsi::Kind::finite_table: {
      auto idx = static_cast<std::size_t>(xp + 0.5);
      if (idx >= psi.values.size()) fail("IncompatiblePoint", "label index out of range");
      return psi.weight * psi.values[idx];
    }
    case InnerPsi::Kind::monotone_pl: {
      const auto& v = psi.values;
      std::size_t n = v.size();
      double t = std::clamp(xp, 0.0, 1.0) * static_cast<double>(n - 1);
      auto j = std::min(static_cast<std::size_t>(t), n - 2);
      double fr = t - static_cast<double>(j);
      return psi.weight * (v[j] * (1.0 - fr) + v[j + 1] * fr);
    }
    case InnerPsi::Kind::sprecher: {
      double x = xp + psi.shift;
      const auto& tab = *psi.table;
      std::size_t n = tab.size();
      double core;
      if (x > 1.0) {
        core = 1.0 + (x - 1.0);  // increasing linear extension beyond the cube
      } else {
        double t = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
        auto j = std::min(static_cast<std::size_t>(t), n - 2);
        double fr = t - static_cast<double>(j);
        core = tab[j] * (1.0 - fr) + tab[j + 1] * fr;
      }
      return psi.weight * core;
    }
  }
  return 0.0;
}

double eval_feature(const FeatureMap& f, const Point& x) {
  switch (f.kind) {
    case FeatureKind::coordinate:
      if (f.index < 0 || static_cast<std::size_t>(f.index) >= x.size())
        fail("IncompatiblePoint", "coordinate index out of range");
      return x[static_cast<std::size_t>(f.index)];
    case FeatureKind::quadrature: {
      if (f.weights.size() != x.size())
        fail("IncompatiblePoint", "quadrature arity mismatch");
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += f.weights[i] * x[i];
      return s;
    }
    case FeatureKind::point_eval:
      if (f.index < 0 || static_cast<std::size_t>(f.index) >= x.size())
        fail("IncompatiblePoint", "point_eval index out of range");
      return x[static_cast<std::size_t>(f.index)];
    case FeatureKind::exponential:
      return std::exp(f.scale * (f.scale == 0.0 ? 0.0 : eval_feature(*f.base, x)));
    case FeatureKind::ostrand_sum: {
      if (f.psis.size() != x.size()) fail("IncompatiblePoint", "ostrand_sum arity mismatch");
      double s = 0.0;
      for (std::size_t p = 0; p < f.psis.size(); ++p) s += eval_inner_psi(f.psis[p], x[p]);
      return s;
    }
    case FeatureKind::custom: {
      if (f.keys.empty()) fail("IncompatiblePoint", "custom feature has no table");
      std::size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < f.keys.size(); ++i) {
        if (f.keys[i].size() != x.size()) fail("IncompatiblePoint", "custom key arity mismatch");
        double d = point_dist(f.keys[i], x, Metric::euclidean);
        if (d < bd || (d == bd && f.keys[i] < f.keys[best])) {
          bd = d;
          best = i;
        }
      }
      return f.values[best];
    }
  }
  return 0.0;
}

std::vector<double> eval_features_over(const std::vector<FeatureMap>& fs,
                                       const SampledCompactSet& k) {
  std::size_t n = k.points.size(), m = fs.size();
  std::vector<double> out(n * m);
  kernels::for_rows(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] = eval_feature(fs[j], k.points[i]);
  });
  return out;
}

std::vector<FeatureMap> make_coordinate_family(int d) {
  if (d < 1) fail("ConfigParse", "coordinate family needs d >= 1");
  std::vector<FeatureMap> out;
  for (int i = 0; i < d; ++i) out.push_back(FeatureMap::coordinate(i));
  return out;
}

std::vector<FeatureMap> make_direction_family(int d,
                                              const std::vector<std::vector<double>>& dirs) {
  if (dirs.empty()) fail("ZeroDirection", "direction family needs at least one direction");
  std::vector<FeatureMap> out;
  for (const auto& a : dirs) {
    if (static_cast<int>(a.size()) != d) fail("ZeroDirection", "direction arity mismatch");
    double n2 = 0.0;
    for (double v : a) n2 += v * v;
    if (n2 == 0.0) fail("ZeroDirection", "zero direction vector");
    out.push_back(FeatureMap::quadrature(a));
  }
  return out;
}

std::vector<FeatureMap> make_exponential_dictionary(const std::vector<FeatureMap>& base,
                                                    const std::vector<double>& scales) {
  std::vector<FeatureMap> out;
  if (!base.empty()) out.push_back(FeatureMap::exponential(base.front(), 0.0));
  for (const auto& f : base)
    for (double s : scales) {
      if (!std::isfinite(s)) fail("ConfigParse", "exponential scale must be finite");
      if (s == 0.0) continue;  // the constant is already present
      out.push_back(FeatureMap::exponential(f, s));
    }
  return out;
}

InjectivityReport check_injectivity(const FeatureVectorMap& f, const SampledCompactSet& k) {
  std::size_t n = k.points.size();
  auto imgs = eval_features_over(f.components, k);
  auto scan = kernels::pair_scan(imgs.data(), n, f.components.size(), 1e-12);
  InjectivityReport rep;
  rep.min_separation = n >= 2 ? scan.min_sep : 0.0;
  if (scan.violation) {
    rep.injective = false;
    rep.witness = std::make_pair(k.points[scan.vio_i], k.points[scan.vio_j]);
    rep.witness_i = scan.vio_i;
    rep.witness_j = scan.vio_j;
  }
  return rep;
}

std::array<double, 2> image_interval(const FeatureMap& f, const SampledCompactSet& k) {
  if (k.points.empty()) fail("LengthMismatch", "image_interval on empty set");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : k.points) {
    double v = eval_feature(f, p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (f.lip) {
    lo -= k.mesh * *f.lip;
    hi += k.mesh * *f.lip;
  }
  return {lo, hi};
}

double d_property_residual(const std::vector<FeatureMap>& family, const SampledCompactSet& k,
                           const std::vector<double>& g, int basis_size, bool quadratic_basis) {
  if (basis_size < 2) fail("ConfigParse", "d_property_residual needs basis_size >= 2");
  return fit_additive(family, k, g, basis_size, quadratic_basis).residual;
}

}  // namespace tfnn
