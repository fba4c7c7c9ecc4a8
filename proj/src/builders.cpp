#include "tfnn/builders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfnn/kernels.hpp"
#include "tfnn/rng.hpp"

namespace tfnn {

namespace {

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

FeatureMap constant_feature(const std::vector<FeatureMap>& family) {
  return FeatureMap::exponential(family.empty() ? FeatureMap::coordinate(0) : family.front(),
                                 0.0);
}

}  // namespace

Decomposition decompose(const std::vector<double>& g, const std::vector<FeatureMap>& family,
                        const SampledCompactSet& k, int knots) {
  AdditiveFit fit = fit_additive(family, k, g, knots);
  double gscale = 0.0;
  for (double v : g) gscale = std::max(gscale, std::abs(v));
  double drop_tol = std::max(1e-12, 1e-9 * gscale);

  Decomposition dec;
  for (auto& term : fit.terms) {
    // a term matters only through its values at the sample points; knot noise
    // between samples must not keep it alive
    double sup_at_samples = 0.0;
    for (const auto& p : k.points)
      sup_at_samples =
          std::max(sup_at_samples, std::abs(term.table.eval(eval_feature(term.feature, p))));
    if (sup_at_samples > drop_tol) dec.terms.push_back(std::move(term));
  }

  if (dec.terms.empty()) {
    AdditiveTerm ct;
    ct.feature = constant_feature(family);
    ct.table.lo = ct.table.hi = 1.0;
    ct.table.values = {fit.constant};
    dec.terms.push_back(std::move(ct));
  } else {
    for (auto& v : dec.terms.front().table.values) v += fit.constant;
  }

  // re-measure so the stored residual reflects the kept terms exactly
  std::size_t npts = k.points.size();
  std::vector<double> model(npts, 0.0);
  kernels::for_rows(npts, [&](std::size_t i) {
    double s = 0.0;
    for (const auto& term : dec.terms) s += term.table.eval(eval_feature(term.feature, k.points[i]));
    model[i] = s;
  });
  dec.residual = sup_abs_diff(model, g);
  return dec;
}

namespace {

struct ComponentBuild {
  Decomposition dec;
  std::vector<RidgeExpansion> ridges;  // one per decomposition term
  bool knots_exceeded = false;
  bool terms_exceeded = false;
};

ComponentBuild build_component(const std::vector<double>& gk,
                               const std::vector<FeatureMap>& family,
                               const SampledCompactSet& k, const Activation& act,
                               double decomp_tol, double eps, double sqrt_m,
                               const BuildOptions& opts) {
  ComponentBuild cb;
  // The theorem selects finitely many features; grow a prefix of the family,
  // escalating knots within each prefix, until the tolerance is met. Fewer
  // terms beat finer knots, so the prefix loop is outermost. Knots beyond
  // 4x the sample count cannot refine the fit at the samples any further.
  Decomposition best;
  bool have_best = false, satisfied = false;
  int kn_cap = std::min<long long>(opts.knots_cap,
                                   std::max<long long>(4, 4 * static_cast<long long>(k.points.size())));
  for (std::size_t p = 1; p <= family.size() && !satisfied; ++p) {
    std::vector<FeatureMap> prefix(family.begin(),
                                   family.begin() + static_cast<std::ptrdiff_t>(p));
    for (int kn = std::max(2, opts.knots);; kn *= 2) {
      Decomposition dec = decompose(gk, prefix, k, kn);
      if (!have_best || dec.residual < best.residual) {
        best = std::move(dec);
        have_best = true;
      }
      satisfied = satisfied || best.residual <= decomp_tol;
      // keep refining past the bare tolerance: a near-interpolating table
      // hands the ridge stage a smooth target instead of a kinked one
      if (best.residual <= 0.125 * decomp_tol || kn >= kn_cap) break;
    }
  }
  cb.dec = std::move(best);
  cb.knots_exceeded = !satisfied;

  auto m_k = static_cast<double>(cb.dec.terms.size());
  double ridge_tol = eps / (2.0 * sqrt_m * m_k);
  for (const auto& term : cb.dec.terms) {
    std::vector<double> ts(k.points.size());
    for (std::size_t i = 0; i < k.points.size(); ++i)
      ts[i] = eval_feature(term.feature, k.points[i]);
    std::vector<double> us(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) us[i] = term.table.eval(ts[i]);

    RidgeExpansion best;
    bool have = false;
    for (int n : opts.terms_schedule) {
      RidgeExpansion r = fit_univariate(ts, us, act, n, opts.strategy, opts.seed);
      if (!have || r.sup_error < best.sup_error) {
        best = r;
        have = true;
      }
      if (best.sup_error <= ridge_tol) break;
    }
    if (best.sup_error > ridge_tol) cb.terms_exceeded = true;
    cb.ridges.push_back(std::move(best));
  }
  return cb;
}

}  // namespace

std::pair<ShallowTFNN, BuildReport> build_shallow_universal(
    const std::vector<std::vector<double>>& g, const std::vector<FeatureMap>& family,
    const Activation& act, double eps, const SampledCompactSet& k, BuildOptions opts) {
  if (!(eps > 0.0)) fail("ConfigParse", "build_shallow_universal needs eps > 0");
  if (g.empty()) fail("LengthMismatch", "no target components");
  std::size_t m = g.size();
  double sqrt_m = std::sqrt(static_cast<double>(m));
  double decomp_tol = eps / (2.0 * sqrt_m);

  ShallowTFNN net;
  net.activation = act;
  BuildReport rep;
  rep.requested_eps = eps;
  rep.seed = opts.seed;
  rep.m = static_cast<int>(m);
  rep.n = static_cast<int>(family.size());
  rep.budgets["stage_a"] = decomp_tol;

  std::vector<ComponentBuild> builds;
  for (std::size_t comp = 0; comp < m; ++comp) {
    if (g[comp].size() != k.points.size()) fail("LengthMismatch", "target length != sample size");
    ComponentBuild cb =
        build_component(g[comp], family, k, act, decomp_tol, eps, sqrt_m, opts);
    rep.budget_exceeded = rep.budget_exceeded || cb.knots_exceeded || cb.terms_exceeded;
    rep.budgets["stage_b_comp" + std::to_string(comp)] =
        eps / (2.0 * sqrt_m * static_cast<double>(cb.dec.terms.size()));
    builds.push_back(std::move(cb));
  }

  // assemble: stack every ridge term of every component into one hidden layer
  std::size_t total = 0;
  for (const auto& cb : builds)
    for (const auto& r : cb.ridges) total += r.terms.size();
  net.out.a = Matrix(m, total);
  net.out.b.assign(m, 0.0);
  std::size_t col = 0;
  for (std::size_t comp = 0; comp < m; ++comp) {
    const auto& cb = builds[comp];
    for (std::size_t ti = 0; ti < cb.dec.terms.size(); ++ti) {
      for (const auto& term : cb.ridges[ti].terms) {
        net.features.push_back(cb.dec.terms[ti].feature);
        net.in_weights.push_back(term.w);
        net.in_biases.push_back(term.theta);
        net.out.a.at(comp, col) = term.c;
        ++col;
      }
    }
  }

  std::vector<std::vector<double>> ref(k.points.size());
  for (std::size_t i = 0; i < k.points.size(); ++i) {
    ref[i].resize(m);
    for (std::size_t c = 0; c < m; ++c) ref[i][c] = g[c][i];
  }
  auto vals = eval_shallow_over(net, k);
  rep.achieved_error = sup_seminorm(vals, ref);
  rep.width = static_cast<int>(total);
  rep.depth = 0;
  rep.term_count = static_cast<int>(total);
  return {std::move(net), rep};
}

std::pair<ShallowTFNN, BuildReport> build_lcs_shallow(
    const std::vector<double>& g, const std::vector<FeatureMap>& base,
    const std::vector<double>& scales, const Activation& act, double eps,
    const SampledCompactSet& k, BuildOptions opts) {
  std::vector<FeatureMap> family = base;
  for (auto& f : make_exponential_dictionary(base, scales)) family.push_back(std::move(f));
  return build_shallow_universal({g}, family, act, eps, k, opts);
}

FunctionalBuild build_functional_net(const std::vector<double>& g, const FunctionClassV& v,
                                     const Activation& act, double eps, int k_nodes,
                                     BuildOptions opts) {
  if (v.n_params < 1) fail("ConfigParse", "empty function class");
  if (k_nodes < 2) fail("ConfigParse", "need at least two shared nodes");
  SampledCompactSet kv = v.as_set();
  std::size_t grid_n = v.domain_grid.size();
  if (k_nodes > static_cast<int>(grid_n)) k_nodes = static_cast<int>(grid_n);

  // shared evaluation nodes: equispaced indices of the Y grid
  std::vector<int> node_idx(static_cast<std::size_t>(k_nodes));
  for (int j = 0; j < k_nodes; ++j)
    node_idx[static_cast<std::size_t>(j)] = static_cast<int>(
        std::llround(static_cast<double>(j) * static_cast<double>(grid_n - 1) /
                     static_cast<double>(k_nodes - 1)));

  // stage-1 functional family: trapezoid moments against 1, t, t^2, t^3,
  // plus the point evaluations at the shared nodes themselves
  std::vector<double> trap(grid_n, 0.0);
  for (std::size_t j = 0; j + 1 < grid_n; ++j) {
    double h = v.domain_grid[j + 1] - v.domain_grid[j];
    trap[j] += 0.5 * h;
    trap[j + 1] += 0.5 * h;
  }
  std::vector<FeatureMap> base;
  for (int pw = 0; pw <= 3; ++pw) {
    std::vector<double> w(grid_n);
    for (std::size_t j = 0; j < grid_n; ++j) w[j] = trap[j] * std::pow(v.domain_grid[j], pw);
    base.push_back(FeatureMap::quadrature(std::move(w)));
  }
  for (int idx : node_idx) base.push_back(FeatureMap::point_eval(idx));

  auto [net, rep] = build_shallow_universal({g}, base, act, eps / 2.0, kv, opts);
  rep.requested_eps = eps;
  rep.budgets["stage_1"] = eps / 2.0;

  FunctionalBuild out;
  auto before = eval_shallow_over(net, kv);

  // stage 2: re-express every quadrature functional through the shared nodes
  double sum_c = 0.0;
  for (std::size_t i = 0; i < net.hidden(); ++i) sum_c += std::abs(net.out.a.at(0, i));
  double eta = eps / (2.0 * sum_c + 1.0);

  Matrix dq(kv.points.size(), static_cast<std::size_t>(k_nodes));
  for (std::size_t r = 0; r < kv.points.size(); ++r)
    for (int j = 0; j < k_nodes; ++j)
      dq.at(r, static_cast<std::size_t>(j)) =
          kv.points[r][static_cast<std::size_t>(node_idx[static_cast<std::size_t>(j)])];

  double bound_total = 0.0;
  for (std::size_t i = 0; i < net.hidden(); ++i) {
    FeatureMap& f = net.features[i];
    if (f.kind != FeatureKind::quadrature) continue;
    Matrix y(kv.points.size(), 1);
    for (std::size_t r = 0; r < kv.points.size(); ++r)
      y.at(r, 0) = eval_feature(f, kv.points[r]);
    auto sol = solve_least_squares(dq, y);
    double delta_i = 0.0;
    double op_lo = std::numeric_limits<double>::infinity(), op_hi = -op_lo;
    for (std::size_t r = 0; r < kv.points.size(); ++r) {
      double approx = 0.0;
      for (int j = 0; j < k_nodes; ++j)
        approx += sol.coef.at(static_cast<std::size_t>(j), 0) * dq.at(r, static_cast<std::size_t>(j));
      delta_i = std::max(delta_i, std::abs(approx - y.at(r, 0)));
      double pre = net.in_weights[i] * y.at(r, 0) - net.in_biases[i];
      op_lo = std::min(op_lo, pre);
      op_hi = std::max(op_hi, pre);
    }
    double w_abs = std::abs(net.in_weights[i]);
    op_lo -= w_abs * delta_i;
    op_hi += w_abs * delta_i;
    // numeric modulus of continuity of sigma on the operating interval
    double lip = 0.0;
    double prev = eval_activation(act, op_lo);
    for (double t = op_lo + 1e-4; t <= op_hi + 1e-4; t += 1e-4) {
      double cur = eval_activation(act, t);
      lip = std::max(lip, std::abs(cur - prev) / 1e-4);
      prev = cur;
    }
    lip = std::max(lip, 1e-12);
    double delta_req = eta / (lip * std::max(w_abs, 1e-12));
    out.delta_measured = std::max(out.delta_measured, delta_i);
    out.delta_required = out.delta_required == 0.0 ? delta_req
                                                   : std::min(out.delta_required, delta_req);
    if (delta_i > delta_req) rep.budget_exceeded = true;
    bound_total += std::abs(net.out.a.at(0, i)) * lip * w_abs * delta_i;

    // install the node-supported weights, zero-padded to the full grid
    std::vector<double> padded(grid_n, 0.0);
    for (int j = 0; j < k_nodes; ++j)
      padded[static_cast<std::size_t>(node_idx[static_cast<std::size_t>(j)])] =
          sol.coef.at(static_cast<std::size_t>(j), 0);
    f.weights = std::move(padded);
    f.lip.reset();
  }
  rep.budgets["stage_2_delta"] = out.delta_required;

  auto after = eval_shallow_over(net, kv);
  out.substitution_change = sup_seminorm(after, before);
  out.substitution_bound = bound_total;

  std::vector<std::vector<double>> ref(kv.points.size());
  for (std::size_t i = 0; i < kv.points.size(); ++i) ref[i] = {g[i]};
  rep.achieved_error = sup_seminorm(after, ref);
  out.net = std::move(net);
  out.report = rep;
  return out;
}

TabulatedMap compose_via_embedding(const std::vector<std::vector<double>>& g,
                                   const FeatureVectorMap& f, const SampledCompactSet& k) {
  InjectivityReport rep = check_injectivity(f, k);
  if (!rep.injective) {
    const auto& w = *rep.witness;
    std::string msg = "feature map collapses two sample points: (";
    for (double v : w.first) msg += std::to_string(v) + " ";
    msg += ") and (";
    for (double v : w.second) msg += std::to_string(v) + " ";
    msg += ")";
    fail("InjectivityFailure", msg);
  }
  if (g.size() != k.points.size())
    fail("LengthMismatch", "target rows must match sample points");
  TabulatedMap u;
  u.keys.resize(k.points.size());
  u.values = g;
  auto imgs = eval_features_over(f.components, k);
  std::size_t n = f.components.size();
  for (std::size_t i = 0; i < k.points.size(); ++i)
    u.keys[i].assign(imgs.begin() + static_cast<std::ptrdiff_t>(i * n),
                     imgs.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
  return u;
}

std::vector<double> TabulatedMap::eval(const Point& y) const {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    double d = point_dist(keys[i], y, Metric::euclidean);
    if (d < bd || (d == bd && keys[i] < keys[best])) {
      bd = d;
      best = i;
    }
  }
  return values[best];
}

IdentityBlock make_identity_block(const Activation& act, const KLPoint& kl, double h, int width,
                                  double relu_shift) {
  IdentityBlock blk;
  auto diag = [&](double scale, double bias) {
    AffineLayer l;
    l.a = Matrix(static_cast<std::size_t>(width), static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i)
      l.a.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = scale;
    l.b.assign(static_cast<std::size_t>(width), bias);
    return l;
  };
  if (act.relu_family()) {
    double bshift = std::max(relu_shift, 0.0);
    blk.in = diag(1.0, -bshift);
    blk.out = diag(1.0, bshift);
    return blk;
  }
  if (kl.derivative == 0.0) fail("ZeroDerivative", "identity block needs sigma'(t0) != 0");
  if (!(h > 0.0)) fail("ConfigParse", "identity block needs h > 0");
  double s0 = eval_activation(act, kl.t0);
  blk.in = diag(h, -kl.t0);
  blk.out = diag(1.0 / (h * kl.derivative), s0 / (h * kl.derivative));
  return blk;
}

namespace {

struct RegisterScales {
  bool exact = false;
  double t0 = 0.0, s0 = 0.0, deriv = 1.0, h = 1.0;  // differentiable encode
  double B = 1.0;                                   // relu-family shift
};

// Deep net computing psi(F(x)) with channel layout
// [registers 0..n-1 | accumulators 0..m-1 | compute | carry].
DeepTFNN assemble_register_net(const ShallowTFNN& psi, const std::vector<FeatureMap>& f,
                               const RegisterScales& sc) {
  std::size_t n = f.size(), m = psi.outputs(), nunits = psi.hidden();
  std::size_t width = n + m + 2;
  std::size_t creg = 0, cacc = n, ccomp = n + m, ccarry = n + m + 1;
  const Activation& act = psi.activation;

  // direction vector of hidden unit i over the n Euclidean inputs
  auto unit_dir = [&](std::size_t i) {
    std::vector<double> a(n, 0.0);
    const FeatureMap& ft = psi.features[i];
    if (ft.kind == FeatureKind::coordinate || ft.kind == FeatureKind::point_eval) {
      a[static_cast<std::size_t>(ft.index)] = psi.in_weights[i];
    } else if (ft.kind == FeatureKind::quadrature) {
      if (ft.weights.size() != n) fail("ShapeMismatch", "psi feature arity != n");
      for (std::size_t j = 0; j < n; ++j) a[j] = psi.in_weights[i] * ft.weights[j];
    } else {
      fail("ShapeMismatch", "register model needs coordinate/direction features in psi");
    }
    return a;
  };

  double enc_w, enc_bias0;  // encode(v): pre-activation = enc_w * v - (-enc_bias0)
  double dec_scale, dec_off;
  if (sc.exact) {
    enc_w = 1.0;
    enc_bias0 = sc.B;  // pre = v + B
    dec_scale = 1.0;
    dec_off = -sc.B;  // decode(s) = s - B
  } else {
    enc_w = sc.h;
    enc_bias0 = sc.t0;  // pre = h v + t0
    dec_scale = 1.0 / (sc.h * sc.deriv);
    dec_off = -sc.s0 / (sc.h * sc.deriv);  // decode(s) = (s - s0)/(h deriv)
  }

  DeepTFNN net;
  net.activation = act;

  // T_0: registers encode F_j; accumulators, compute and carry start as constants
  auto push_const = [&](double value) {
    net.features.push_back(f.front());
    net.in_weights.push_back(0.0);
    net.in_biases.push_back(-(enc_w * value + enc_bias0));
  };
  for (std::size_t j = 0; j < n; ++j) {
    net.features.push_back(f[j]);
    net.in_weights.push_back(enc_w);
    net.in_biases.push_back(-enc_bias0);
  }
  for (std::size_t kk = 0; kk < m; ++kk) push_const(0.0);
  push_const(0.0);  // compute channel placeholder
  push_const(1.0);  // carry channel

  // forward rule rows: next_pre = enc_w * decode(post) + enc_bias0
  double fwd_scale = enc_w * dec_scale;
  double fwd_bias = -(enc_w * dec_off + enc_bias0);  // layer computes A z - b

  for (std::size_t layer = 1; layer <= nunits + 1; ++layer) {
    AffineLayer t;
    t.a = Matrix(width, width);
    t.b.assign(width, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      t.a.at(creg + j, creg + j) = fwd_scale;
      t.b[creg + j] = fwd_bias;
    }
    for (std::size_t kk = 0; kk < m; ++kk) {
      t.a.at(cacc + kk, cacc + kk) = fwd_scale;
      t.b[cacc + kk] = fwd_bias;
      if (layer >= 2) {
        // accumulate the unit computed by the previous layer
        double c = psi.out.a.at(kk, layer - 2);
        t.a.at(cacc + kk, ccomp) = enc_w * c;
      }
    }
    if (layer <= nunits) {
      // compute channel emits a_i . y - theta_i decoded from the registers
      auto a = unit_dir(layer - 1);
      for (std::size_t j = 0; j < n; ++j) t.a.at(ccomp, creg + j) = a[j] * dec_scale;
      double bias = psi.in_biases[layer - 1];
      double off = 0.0;
      for (std::size_t j = 0; j < n; ++j) off += a[j] * dec_off;
      t.b[ccomp] = bias - off;
    } else {
      t.b[ccomp] = -(enc_w * 0.0 + enc_bias0);  // park the channel
    }
    t.a.at(ccarry, ccarry) = fwd_scale;
    t.b[ccarry] = fwd_bias;
    net.hidden.push_back(std::move(t));
  }

  // output: decode accumulators, subtract psi's output bias
  AffineLayer outl;
  outl.a = Matrix(m, width);
  outl.b.assign(m, 0.0);
  for (std::size_t kk = 0; kk < m; ++kk) {
    outl.a.at(kk, cacc + kk) = dec_scale;
    outl.b[kk] = -dec_off + psi.out.b[kk];
  }
  net.output = std::move(outl);
  return net;
}

}  // namespace

DeepTFNN register_model(const ShallowTFNN& psi, const std::vector<FeatureMap>& f,
                        const SampledCompactSet& k, double block_tol,
                        const DeepNarrowOptions& opts) {
  std::size_t n = f.size(), m = psi.outputs();
  const Activation& act = psi.activation;

  // operating ranges over the sample: feature values and accumulator partials
  double vmax = 1.0;
  std::vector<std::vector<double>> feat_vals(k.points.size());
  for (std::size_t i = 0; i < k.points.size(); ++i) {
    feat_vals[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      feat_vals[i][j] = eval_feature(f[j], k.points[i]);
      vmax = std::max(vmax, std::abs(feat_vals[i][j]));
    }
  }
  for (std::size_t i = 0; i < k.points.size(); ++i) {
    std::vector<double> acc(m, 0.0);
    for (std::size_t u = 0; u < psi.hidden(); ++u) {
      double pre = -psi.in_biases[u];
      const FeatureMap& ft = psi.features[u];
      if (ft.kind == FeatureKind::quadrature) {
        for (std::size_t j = 0; j < n; ++j) pre += psi.in_weights[u] * ft.weights[j] * feat_vals[i][j];
      } else {
        pre += psi.in_weights[u] * feat_vals[i][static_cast<std::size_t>(ft.index)];
      }
      double su = eval_activation(act, pre);
      for (std::size_t kk = 0; kk < m; ++kk) {
        acc[kk] += psi.out.a.at(kk, u) * su;
        vmax = std::max(vmax, std::abs(acc[kk]));
      }
    }
  }

  RegisterScales sc;
  if (act.relu_family()) {
    sc.exact = true;
    sc.B = 2.0 * vmax + 1.0;
    return assemble_register_net(psi, f, sc);
  }

  KLPoint kl = find_kl_point(act, default_kl_grid(), 1e-4);
  sc.t0 = kl.t0;
  sc.deriv = kl.derivative;
  sc.s0 = eval_activation(act, kl.t0);

  auto reference = [&]() {
    std::vector<std::vector<double>> ref(k.points.size());
    kernels::for_rows(k.points.size(), [&](std::size_t i) { ref[i] = eval_shallow(psi, k.points[i]); });
    return ref;
  }();

  if (opts.fixed_h) {
    sc.h = *opts.fixed_h;
    return assemble_register_net(psi, f, sc);
  }
  double h = 1e-2;
  DeepTFNN best;
  for (int it = 0; it < opts.max_halvings; ++it) {
    sc.h = h;
    DeepTFNN net = assemble_register_net(psi, f, sc);
    auto vals = eval_deep_over(net, k);
    double dev = sup_seminorm(vals, reference);
    best = std::move(net);
    if (dev <= block_tol) break;
    h *= 0.5;
  }
  return best;
}

std::pair<DeepTFNN, BuildReport> build_deep_narrow(const std::vector<std::vector<double>>& g,
                                                   const FeatureVectorMap& f,
                                                   const SampledCompactSet& k,
                                                   const Activation& act, double eps,
                                                   DeepNarrowOptions opts) {
  if (!(eps > 0.0)) fail("ConfigParse", "build_deep_narrow needs eps > 0");
  std::size_t n = static_cast<std::size_t>(f.arity());
  std::size_t npts = k.points.size();
  std::size_t m = g.size();

  // target rows per point
  std::vector<std::vector<double>> grows(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    grows[i].resize(m);
    for (std::size_t c = 0; c < m; ++c) grows[i][c] = g[c][i];
  }

  // stage 1: exact tabulation on the embedded image (checks injectivity)
  TabulatedMap u = compose_via_embedding(grows, f, k);

  SampledCompactSet kf;
  kf.metric = Metric::euclidean;
  kf.points = u.keys;

  // stage 2: Euclidean shallow fit on the image to eps/2
  std::vector<std::vector<double>> dirs;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    dirs.push_back(e);
    e[j] = -1.0;
    dirs.push_back(e);
  }
  SplitMix64 rng(opts.seed);
  while (dirs.size() < 2 * n + 4 * n) {
    std::vector<double> v(n);
    double norm2 = 0.0;
    for (auto& vv : v) {
      vv = 2.0 * rng.next_double() - 1.0;
      norm2 += vv * vv;
    }
    if (norm2 < 1e-6) continue;
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& vv : v) vv *= inv;
    dirs.push_back(std::move(v));
  }

  std::vector<std::vector<double>> proj(dirs.size(), std::vector<double>(npts));
  for (std::size_t di = 0; di < dirs.size(); ++di)
    for (std::size_t i = 0; i < npts; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += dirs[di][j] * kf.points[i][j];
      proj[di][i] = s;
    }

  double stage2_tol = eps / 2.0;
  ShallowTFNN psi;
  psi.activation = act;
  double stage2_err = std::numeric_limits<double>::infinity();
  bool flagged = true;
  for (int ntheta : opts.theta_schedule) {
    std::vector<std::pair<std::size_t, double>> nodes;  // (direction, theta)
    for (std::size_t di = 0; di < dirs.size(); ++di) {
      double lo = *std::min_element(proj[di].begin(), proj[di].end());
      double hi = *std::max_element(proj[di].begin(), proj[di].end());
      for (int j = 0; j < ntheta; ++j)
        nodes.emplace_back(di, lo + (j + 0.5) * (hi - lo) / ntheta);
    }
    std::size_t nn = nodes.size();
    Matrix d(npts, nn + 1);
    kernels::for_rows(npts, [&](std::size_t i) {
      for (std::size_t c = 0; c < nn; ++c)
        d.at(i, c) = eval_activation(act, proj[nodes[c].first][i] - nodes[c].second);
      d.at(i, nn) = 1.0;
    });
    Matrix y(npts, m);
    for (std::size_t i = 0; i < npts; ++i)
      for (std::size_t c = 0; c < m; ++c) y.at(i, c) = u.values[i][c];
    auto sol = solve_least_squares(d, y);

    double err = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
      double s2 = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t col = 0; col <= nn; ++col) s += d.at(i, col) * sol.coef.at(col, c);
        double diff = s - u.values[i][c];
        s2 += diff * diff;
      }
      err = std::max(err, std::sqrt(s2));
    }

    ShallowTFNN cand;
    cand.activation = act;
    for (std::size_t c = 0; c < nn; ++c) {
      cand.features.push_back(FeatureMap::quadrature(dirs[nodes[c].first]));
      cand.in_weights.push_back(1.0);
      cand.in_biases.push_back(nodes[c].second);
    }
    cand.out.a = Matrix(m, nn);
    cand.out.b.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t col = 0; col < nn; ++col) cand.out.a.at(c, col) = sol.coef.at(col, c);
      cand.out.b[c] = -sol.coef.at(nn, c);  // constant column folds into the bias
    }
    if (err < stage2_err) {
      stage2_err = err;
      psi = std::move(cand);
    }
    if (stage2_err <= stage2_tol) {
      flagged = false;
      break;
    }
  }

  // stage 3: register-model conversion at width n + m + 2
  DeepTFNN net = register_model(psi, f.components, k, eps / 4.0, opts);

  BuildReport rep;
  rep.requested_eps = eps;
  rep.seed = opts.seed;
  rep.n = static_cast<int>(n);
  rep.m = static_cast<int>(m);
  rep.budget_exceeded = flagged;
  rep.budgets["stage_1"] = eps / 2.0;
  rep.budgets["stage_2"] = stage2_tol;
  rep.budgets["stage_2_achieved"] = stage2_err;
  rep.budgets["stage_3_blocks"] = eps / 4.0;
  rep.term_count = static_cast<int>(psi.hidden());
  rep.width = width_of(net);
  rep.depth = depth_of(net);

  auto vals = eval_deep_over(net, k);
  rep.achieved_error = sup_seminorm(vals, grows);
  if (rep.width > static_cast<int>(n + m + 2))
    fail("ShapeMismatch", "register model exceeded the n+m+2 width bound");
  return {std::move(net), rep};
}

}  // namespace tfnn
