#include "tfnn/univariate.hpp"

#include <algorithm>
#include <cmath>

#include "tfnn/kernels.hpp"
#include "tfnn/linalg.hpp"
#include "tfnn/rng.hpp"

namespace tfnn {

double RidgeExpansion::eval(double t) const {
  double s = 0.0;
  for (const auto& term : terms) s += term.c * eval_activation(activation, term.w * t - term.theta);
  return s;
}

NodeStrategy parse_strategy(const std::string& name) {
  if (name == "equispaced") return NodeStrategy::equispaced;
  if (name == "nested") return NodeStrategy::nested;
  if (name == "random") return NodeStrategy::random;
  fail("ConfigParse", "unknown node strategy: " + name);
}

std::string strategy_name(NodeStrategy s) {
  switch (s) {
    case NodeStrategy::equispaced: return "equispaced";
    case NodeStrategy::nested: return "nested";
    case NodeStrategy::random: return "random";
  }
  return "nested";
}

namespace {
const double kWeightCycle[6] = {1.0, -1.0, 2.0, -2.0, 4.0, -4.0};

std::vector<std::pair<double, double>> nested_sequence(int n, double a, double b) {
  double mid = 0.5 * (a + b);
  std::vector<std::pair<double, double>> seq = {{1.0, mid},  {-1.0, mid}, {0.0, -1.0},
                                                {2.0, mid},  {-2.0, mid}, {4.0, mid},
                                                {-4.0, mid}};
  if (static_cast<int>(seq.size()) >= n) {
    seq.resize(static_cast<std::size_t>(n));
    return seq;
  }
  std::vector<double> thetas = {a, b};
  long level = 4;
  while (static_cast<int>(thetas.size()) < n) {
    for (long j = 1; j < level; j += 2) thetas.push_back(a + static_cast<double>(j) * (b - a) / static_cast<double>(level));
    level *= 2;
  }
  for (double th : thetas) {
    for (double w : kWeightCycle) {
      seq.emplace_back(w, th);
      if (static_cast<int>(seq.size()) >= n) return seq;
    }
  }
  return seq;
}
}  // namespace

std::vector<std::pair<double, double>> strategy_nodes(NodeStrategy s, int n, double a, double b,
                                                      std::uint64_t seed) {
  if (n < 1) fail("ConfigParse", "need at least one ridge term");
  if (n == 1) return {{0.0, -1.0}};
  switch (s) {
    case NodeStrategy::nested:
      return nested_sequence(n, a, b);
    case NodeStrategy::equispaced: {
      std::vector<std::pair<double, double>> seq = {{0.0, -1.0}};
      int q = n - 1;
      int ntheta = (q + 5) / 6;
      for (int j = 0; j < q; ++j) {
        int ti = j / 6;
        double th = ntheta == 1 ? 0.5 * (a + b) : a + ti * (b - a) / (ntheta - 1);
        seq.emplace_back(kWeightCycle[j % 6], th);
      }
      return seq;
    }
    case NodeStrategy::random: {
      SplitMix64 rng(seed);
      std::vector<std::pair<double, double>> seq = {{0.0, -1.0}};
      while (static_cast<int>(seq.size()) < n) {
        double w = 8.0 * rng.next_double() - 4.0;
        double th = a + (b - a) * rng.next_double();
        if (std::abs(w) < 1e-3) continue;
        seq.emplace_back(w, th);
      }
      return seq;
    }
  }
  fail("ConfigParse", "bad strategy");
}

RidgeExpansion fit_with_nodes(const std::vector<double>& ts, const std::vector<double>& us,
                              const Activation& act,
                              const std::vector<std::pair<double, double>>& nodes) {
  if (ts.empty() || ts.size() != us.size())
    fail("LengthMismatch", "grid and target values must match and be nonempty");
  std::size_t n = ts.size(), r = nodes.size();
  Matrix d(n, r);
  kernels::for_rows(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < r; ++j)
      d.at(i, j) = eval_activation(act, nodes[j].first * ts[i] - nodes[j].second);
  });
  Matrix y(n, 1);
  for (std::size_t i = 0; i < n; ++i) y.at(i, 0) = us[i];
  auto sol = solve_least_squares(d, y);

  RidgeExpansion out;
  out.activation = act;
  auto mm = std::minmax_element(ts.begin(), ts.end());
  out.a = *mm.first;
  out.b = *mm.second;
  out.terms.reserve(r);
  for (std::size_t j = 0; j < r; ++j)
    out.terms.push_back(RidgeTerm{sol.coef.at(j, 0), nodes[j].first, nodes[j].second});
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < r; ++j) s += sol.coef.at(j, 0) * d.at(i, j);
    sup = std::max(sup, std::abs(us[i] - s));
  }
  out.sup_error = sup;
  return out;
}

RidgeExpansion fit_univariate(const std::vector<double>& ts, const std::vector<double>& us,
                              const Activation& act, int n_terms, NodeStrategy strategy,
                              std::uint64_t seed) {
  if (ts.empty() || ts.size() != us.size())
    fail("LengthMismatch", "grid and target values must match and be nonempty");
  auto mm = std::minmax_element(ts.begin(), ts.end());
  double a = *mm.first, b = *mm.second;
  if (b - a < 1e-300) {
    // single-point target: one constant node carries the value
    RidgeExpansion out;
    out.activation = act;
    out.a = a;
    out.b = b;
    double s1 = eval_activation(act, 1.0);
    double c = s1 != 0.0 ? us.front() / s1 : 0.0;
    out.terms = {RidgeTerm{c, 0.0, -1.0}};
    double sup = 0.0;
    for (double u : us) sup = std::max(sup, std::abs(u - c * s1));
    out.sup_error = sup;
    return out;
  }
  auto nodes = strategy_nodes(strategy, n_terms, a, b, seed);
  return fit_with_nodes(ts, us, act, nodes);
}

}  // namespace tfnn
