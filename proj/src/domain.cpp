#include "tfnn/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tfnn {

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::max: return "max";
    case Metric::discrete: return "discrete";
    case Metric::sup_over_grid: return "sup-over-grid";
  }
  return "euclidean";
}

Metric parse_metric(const std::string& name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "max") return Metric::max;
  if (name == "discrete") return Metric::discrete;
  if (name == "sup-over-grid" || name == "sup_over_grid") return Metric::sup_over_grid;
  fail("ParseError", "unknown metric: " + name);
}

double point_dist(const Point& a, const Point& b, Metric m) {
  if (a.size() != b.size()) fail("LengthMismatch", "point arity differs");
  switch (m) {
    case Metric::euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Metric::max:
    case Metric::sup_over_grid: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
      return s;
    }
    case Metric::discrete:
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return 1.0;
      return 0.0;
  }
  return 0.0;
}

double sup_seminorm(const std::vector<std::vector<double>>& values,
                    const std::vector<std::vector<double>>& reference) {
  if (values.size() != reference.size() || values.empty())
    fail("LengthMismatch", "value sequences must have equal nonzero length");
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != reference[i].size())
      fail("LengthMismatch", "tuple arity differs at index " + std::to_string(i));
    double s = 0.0;
    for (std::size_t k = 0; k < values[i].size(); ++k) {
      double d = values[i][k] - reference[i][k];
      s += d * d;
    }
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

SampledCompactSet epsilon_net(const SampledCompactSet& set, double eps) {
  if (eps < 0.0) fail("ConfigParse", "epsilon_net needs eps >= 0");
  if (set.points.empty()) fail("LengthMismatch", "epsilon_net on empty set");
  std::size_t n = set.points.size();
  std::vector<std::size_t> chosen{0};
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i)
    dist[i] = point_dist(set.points[i], set.points[0], set.metric);
  for (;;) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (dist[i] > dist[far]) far = i;  // ties keep the smallest index
    if (dist[far] <= eps) break;
    chosen.push_back(far);
    for (std::size_t i = 0; i < n; ++i)
      dist[i] = std::min(dist[i], point_dist(set.points[i], set.points[far], set.metric));
  }
  SampledCompactSet out;
  out.metric = set.metric;
  double cover = 0.0;
  for (double d : dist) cover = std::max(cover, d);
  out.mesh = cover + set.mesh;
  out.points.reserve(chosen.size());
  for (auto i : chosen) out.points.push_back(set.points[i]);
  return out;
}

SampledCompactSet ProductSpace::grid(int n) const {
  if (factors.empty()) fail("ConfigParse", "product space needs at least one factor");
  std::vector<std::vector<double>> axes;
  double mesh_sq = 0.0;
  for (const auto& f : factors) {
    if (f.finite) {
      if (f.labels < 1) fail("ConfigParse", "finite factor needs at least one label");
      std::vector<double> ax(static_cast<std::size_t>(f.labels));
      for (int i = 0; i < f.labels; ++i) ax[static_cast<std::size_t>(i)] = i;
      axes.push_back(std::move(ax));
    } else {
      axes.push_back(linspace(f.lo, f.hi, n));
      double h = n > 1 ? (f.hi - f.lo) / (n - 1) : 0.0;
      mesh_sq += 0.25 * h * h;
    }
  }
  SampledCompactSet out;
  out.metric = all_finite() ? Metric::discrete : Metric::euclidean;
  out.mesh = std::sqrt(mesh_sq);
  std::vector<std::size_t> idx(axes.size(), 0);
  bool done = false;
  while (!done) {
    Point p(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) p[k] = axes[k][idx[k]];
    out.points.push_back(std::move(p));
    done = true;
    std::size_t k = axes.size();
    while (k-- > 0) {
      if (++idx[k] < axes[k].size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
  }
  return out;
}

ProductSpace ProductSpace::cube(int d, double lo, double hi) {
  ProductSpace s;
  for (int i = 0; i < d; ++i) s.factors.push_back(Factor{false, lo, hi, 0});
  return s;
}

ProductSpace ProductSpace::finite(const std::vector<int>& label_counts) {
  ProductSpace s;
  for (int c : label_counts) s.factors.push_back(Factor{true, 0, 0, c});
  return s;
}

ProductSpace ProductSpace::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "cube") {
    int d = std::stoi(args);
    if (d < 1) fail("ConfigParse", "cube dimension must be >= 1: " + spec);
    return cube(d);
  }
  if (name == "square") {
    std::stringstream ss(args);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    return cube(2, std::stod(a), std::stod(b));
  }
  if (name == "finite") {
    std::vector<int> counts;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) counts.push_back(std::stoi(tok));
    if (counts.empty()) fail("ConfigParse", "finite space needs label counts: " + spec);
    return finite(counts);
  }
  fail("ConfigParse", "unknown space spec: " + spec);
}

std::string ProductSpace::spec() const {
  if (all_finite()) {
    std::string s = "finite:";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(factors[i].labels);
    }
    return s;
  }
  bool unit = true;
  for (const auto& f : factors) unit = unit && !f.finite && f.lo == 0.0 && f.hi == 1.0;
  if (unit) return "cube:" + std::to_string(arity());
  std::ostringstream os;
  os << "square:" << factors[0].lo << "," << factors[0].hi;
  return os.str();
}

double FunctionClassV::member_param(int i) const {
  if (n_params == 1) return param_lo;
  return param_lo + i * (param_hi - param_lo) / (n_params - 1);
}

double eval_family_member(const std::string& family, double param, double t) {
  if (family == "sin_scale") return std::sin(param * t);
  if (family == "affine") return param * t;
  fail("ConfigParse", "unknown function family: " + family);
}

Point FunctionClassV::member_values(int i) const {
  double a = member_param(i);
  Point v(domain_grid.size());
  for (std::size_t j = 0; j < domain_grid.size(); ++j)
    v[j] = eval_family_member(family, a, domain_grid[j]);
  return v;
}

SampledCompactSet FunctionClassV::as_set() const {
  SampledCompactSet s;
  s.metric = Metric::sup_over_grid;
  s.mesh = 0.0;
  for (int i = 0; i < n_params; ++i) s.points.push_back(member_values(i));
  return s;
}

SampledCompactSet grid2d(int nx, int ny, double x0, double x1, double y0, double y1) {
  SampledCompactSet s;
  s.metric = Metric::euclidean;
  double hx = nx > 1 ? (x1 - x0) / (nx - 1) : 0.0;
  double hy = ny > 1 ? (y1 - y0) / (ny - 1) : 0.0;
  s.mesh = 0.5 * std::sqrt(hx * hx + hy * hy);
  auto xs = linspace(x0, x1, nx), ys = linspace(y0, y1, ny);
  for (double x : xs)
    for (double y : ys) s.points.push_back(Point{x, y});
  return s;
}

SampledCompactSet grid1d(int n, double a, double b) {
  SampledCompactSet s;
  s.metric = Metric::euclidean;
  s.mesh = n > 1 ? 0.5 * (b - a) / (n - 1) : 0.0;
  for (double t : linspace(a, b, n)) s.points.push_back(Point{t});
  return s;
}

}  // namespace tfnn
