#include "tfnn/kst.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tfnn/rng.hpp"

namespace tfnn {

OstrandFeatureSet ostrand_features_finite(const ProductSpace& space) {
  if (!space.all_finite()) fail("ConfigParse", "ostrand_features_finite needs finite factors");
  std::size_t n0 = space.factors.size();

  // mixed-radix place values: first factor stride 1, building leftward
  std::vector<double> strides(n0, 1.0);
  for (std::size_t p = 1; p < n0; ++p)
    strides[p] = strides[p - 1] * static_cast<double>(space.factors[p - 1].labels);

  std::vector<InnerPsi> row(n0);
  for (std::size_t p = 0; p < n0; ++p) {
    InnerPsi psi;
    psi.kind = InnerPsi::Kind::finite_table;
    int labels = space.factors[p].labels;
    psi.values.resize(static_cast<std::size_t>(labels));
    for (int l = 0; l < labels; ++l)
      psi.values[static_cast<std::size_t>(l)] = static_cast<double>(l) * strides[p];
    if (n0 == 1 && labels > 1) {  // single factor: normalize into [0,1]
      double hi = psi.values.back();
      for (auto& v : psi.values) v /= hi;
    }
    row[p] = std::move(psi);
  }

  OstrandFeatureSet out;
  out.space = space;
  out.psis = {row};
  FeatureMap f;
  f.kind = FeatureKind::ostrand_sum;
  f.psis = row;
  out.features = {std::move(f)};

  // brute-force injectivity over the full product
  SampledCompactSet grid = space.grid(1);
  FeatureVectorMap fv{out.features};
  auto rep = check_injectivity(fv, grid);
  if (!rep.injective)
    fail("InjectivityFailure", "mixed-radix sums collide on the finite product");
  return out;
}

std::shared_ptr<const std::vector<double>> sprecher_table(int gamma, int depth) {
  if (gamma < 10) fail("ConfigParse", "sprecher_psi needs gamma >= 10");
  if (depth < 1 || depth > 8) fail("ConfigParse", "sprecher_psi needs 1 <= depth <= 8");
  // beta(r) = 2^r - 1 (base-2 exponent ladder)
  std::vector<double> betapow(static_cast<std::size_t>(depth) + 1, 1.0);
  for (int r = 1; r <= depth; ++r) {
    long long beta = (1LL << r) - 1;
    betapow[static_cast<std::size_t>(r)] = std::pow(static_cast<double>(gamma), -static_cast<double>(beta));
  }
  long long npts = 1;
  for (int r = 0; r < depth; ++r) npts *= gamma;

  auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(npts) + 1, -1.0);
  auto& tab = *table;
  tab[0] = 0.0;
  tab[static_cast<std::size_t>(npts)] = 1.0;

  // value at the rational j * gamma^-k, computed by the corrected recursion:
  // append digit i < gamma-1: add i * gamma^-beta(k); digit gamma-1: average
  // the two depth-k neighbours (the right one rolls over to a shorter rational).
  std::function<double(long long, int)> psi = [&](long long j, int k) -> double {
    if (j == 0) return 0.0;
    long long full = 1;
    for (int r = 0; r < k; ++r) full *= gamma;
    if (j == full) return 1.0;
    long long scale = npts / full;  // position in the depth-`depth` table
    double& slot = tab[static_cast<std::size_t>(j * scale)];
    if (slot >= 0.0) return slot;
    while (k > 0 && j % gamma == 0) {
      j /= gamma;
      --k;
    }
    long long digit = j % gamma;
    double v;
    if (digit < gamma - 1)
      v = psi(j - digit, k) + static_cast<double>(digit) * betapow[static_cast<std::size_t>(k)];
    else
      v = 0.5 * (psi(j - 1, k) + psi(j + 1, k));
    slot = v;
    return v;
  };
  for (long long j = 1; j < npts; ++j) psi(j, depth);
  return table;
}

double sprecher_psi(double x, int gamma, int depth) {
  auto tab = sprecher_table(gamma, depth);
  const auto& t = *tab;
  std::size_t n = t.size();
  double u = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
  auto j = std::min(static_cast<std::size_t>(u), n - 2);
  double fr = u - static_cast<double>(j);
  return t[j] * (1.0 - fr) + t[j + 1] * fr;
}

KstMode KstMode::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  KstMode m;
  if (name == "sprecher") {
    m.kind = Kind::sprecher;
    if (!args.empty()) {
      std::stringstream ss(args);
      std::string a, b;
      std::getline(ss, a, ',');
      m.gamma = std::stoi(a);
      if (std::getline(ss, b, ',')) m.depth = std::stoi(b);
    }
    return m;
  }
  if (name == "pl" || name == "monotone_pl") {
    m.kind = Kind::monotone_pl;
    if (!args.empty()) m.seed = static_cast<std::uint64_t>(std::stoull(args));
    return m;
  }
  fail("ConfigParse", "unknown kst mode: " + spec);
}

std::string KstMode::spec() const {
  if (kind == Kind::sprecher)
    return "sprecher:" + std::to_string(gamma) + "," + std::to_string(depth);
  return "pl:" + std::to_string(seed);
}

namespace {

std::vector<std::vector<InnerPsi>> draw_monotone_pl(int d, std::uint64_t seed, int nknots) {
  SplitMix64 rng(seed);
  int q_count = 2 * d + 1;
  std::vector<std::vector<InnerPsi>> psis(static_cast<std::size_t>(q_count));
  for (int q = 0; q < q_count; ++q) {
    psis[static_cast<std::size_t>(q)].resize(static_cast<std::size_t>(d));
    for (int p = 0; p < d; ++p) {
      std::vector<double> inc(static_cast<std::size_t>(nknots - 1));
      for (auto& e : inc) e = 0.25 + rng.next_double();
      double lo = 0.15 * rng.next_double();
      double hi = 1.0 - 0.15 * rng.next_double();
      std::vector<double> v(static_cast<std::size_t>(nknots), 0.0);
      for (int j = 1; j < nknots; ++j)
        v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + inc[static_cast<std::size_t>(j - 1)];
      double total = v.back();
      for (auto& vv : v) vv = lo + (hi - lo) * vv / total;
      InnerPsi psi;
      psi.kind = InnerPsi::Kind::monotone_pl;
      psi.values = std::move(v);
      psis[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = std::move(psi);
    }
  }
  return psis;
}

OstrandFeatureSet assemble_cube_set(int d, std::vector<std::vector<InnerPsi>> psis) {
  OstrandFeatureSet out;
  out.space = ProductSpace::cube(d);
  out.features.reserve(psis.size());
  for (auto& row : psis) {
    FeatureMap f;
    f.kind = FeatureKind::ostrand_sum;
    f.psis = row;
    out.features.push_back(std::move(f));
  }
  out.psis = std::move(psis);
  return out;
}

}  // namespace

OstrandFeatureSet kolmogorov_features(int d, const KstMode& mode, const SampledCompactSet& grid) {
  if (d < 2) fail("ConfigParse", "kolmogorov_features needs d >= 2");
  int q_count = 2 * d + 1;

  if (mode.kind == KstMode::Kind::sprecher) {
    auto table = sprecher_table(mode.gamma, mode.depth);
    double a = 1.0 / (static_cast<double>(mode.gamma) * (mode.gamma - 1));
    // factor weights: 1 and inverse square roots of successive primes
    const double primes[] = {1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0};
    std::vector<std::vector<InnerPsi>> psis(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
      psis[static_cast<std::size_t>(q)].resize(static_cast<std::size_t>(d));
      for (int p = 0; p < d; ++p) {
        InnerPsi psi;
        psi.kind = InnerPsi::Kind::sprecher;
        psi.gamma = mode.gamma;
        psi.depth = mode.depth;
        psi.shift = q * a;
        psi.weight = 1.0 / std::sqrt(primes[p % 8]);
        psi.table = table;
        psis[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = std::move(psi);
      }
    }
    OstrandFeatureSet out = assemble_cube_set(d, std::move(psis));
    FeatureVectorMap fv{out.features};
    auto rep = check_injectivity(fv, grid);
    if (!rep.injective)
      fail("InjectivityFailure", "sprecher features collide on the working grid");
    return out;
  }

  const int psi_knots = 17;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::uint64_t seed = mode.seed + static_cast<std::uint64_t>(attempt);
    OstrandFeatureSet out = assemble_cube_set(d, draw_monotone_pl(d, seed, psi_knots));
    FeatureVectorMap fv{out.features};
    auto rep = check_injectivity(fv, grid);
    if (rep.injective) return out;
  }
  fail("InjectivityFailure", "monotone_pl features failed to separate the grid after 8 redraws");
}

OuterFit fit_outer_functions(const std::vector<double>& f, const OstrandFeatureSet& features,
                             const SampledCompactSet& k, int knots) {
  AdditiveFit fit = fit_additive(features.features, k, f, knots);
  OuterFit out;
  out.outer.reserve(fit.terms.size());
  for (auto& term : fit.terms) out.outer.push_back(std::move(term.table));
  // fold the constant channel into h_1
  if (!out.outer.empty())
    for (auto& v : out.outer.front().values) v += fit.constant;
  out.residual = fit.residual;
  return out;
}

std::pair<DeepTFNN, BuildReport> build_ostrand_deep_narrow(
    const std::vector<std::vector<double>>& g, const ProductSpace& space,
    const SampledCompactSet& k, const Activation& act, double eps, const KstMode& mode,
    DeepNarrowOptions opts) {
  OstrandFeatureSet fs;
  if (space.all_finite())
    fs = ostrand_features_finite(space);
  else if (space.dimension() == space.arity())  // pure cube
    fs = kolmogorov_features(space.arity(), mode, k);
  else
    fail("ConfigParse", "mixed finite/interval products are not supported");

  FeatureVectorMap fv{fs.features};
  auto [net, rep] = build_deep_narrow(g, fv, k, act, eps, opts);
  rep.M = space.dimension();
  int bound = 2 * rep.M + rep.m + 3;
  if (rep.width > bound) fail("ShapeMismatch", "emitted width exceeds 2M+m+3");
  return {std::move(net), rep};
}

}  // namespace tfnn
