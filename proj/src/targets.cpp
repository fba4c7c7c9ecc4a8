#include "tfnn/targets.hpp"

#include <cmath>
#include <sstream>

#include "tfnn/io.hpp"

namespace tfnn {

namespace {

double trapezoid(const std::vector<double>& grid, const Point& u, bool square) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    double h = grid[j + 1] - grid[j];
    double a = square ? u[j] * u[j] : u[j];
    double b = square ? u[j + 1] * u[j + 1] : u[j + 1];
    s += 0.5 * h * (a + b);
  }
  return s;
}

}  // namespace

Target make_target(const std::string& name, const SampledCompactSet& k,
                   const std::vector<double>& domain_grid) {
  Target t;
  t.name = name;
  auto colon = name.find(':');
  std::string base = name.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);

  auto scalar = [&](auto&& fn) {
    t.m = 1;
    t.values.assign(1, {});
    t.values[0].reserve(k.points.size());
    for (const auto& p : k.points) t.values[0].push_back(fn(p));
  };

  if (base == "abs_sum") {
    scalar([](const Point& p) { return std::abs(p.at(0)) + std::abs(p.at(1)); });
  } else if (base == "xy") {
    scalar([](const Point& p) { return p.at(0) * p.at(1); });
  } else if (base == "sum") {
    scalar([](const Point& p) { return p.at(0) + p.at(1); });
  } else if (base == "sincos") {
    scalar([](const Point& p) { return std::sin(3.0 * p.at(0)) + std::cos(2.0 * p.at(1)); });
  } else if (base == "const") {
    std::vector<double> c;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
    if (c.empty()) fail("ConfigParse", "const target needs components: " + name);
    t.m = static_cast<int>(c.size());
    t.values.assign(c.size(), std::vector<double>(k.points.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t r = 0; r < k.points.size(); ++r) t.values[i][r] = c[i];
  } else if (base == "int" || base == "int_sq") {
    if (domain_grid.empty()) fail("MissingInput", "functional target needs a domain grid");
    bool sq = base == "int_sq";
    scalar([&](const Point& u) { return trapezoid(domain_grid, u, sq); });
  } else if (base == "max") {
    scalar([](const Point& u) {
      double m = u.at(0);
      for (double v : u) m = std::max(m, v);
      return m;
    });
  } else if (base == "eval") {
    int j = std::stoi(args);
    scalar([&](const Point& u) { return u.at(static_cast<std::size_t>(j)); });
  } else if (base == "xor") {
    scalar([](const Point& p) {
      return static_cast<double>((static_cast<int>(p.at(0)) ^ static_cast<int>(p.at(1))) & 1);
    });
  } else if (base == "and") {
    scalar([](const Point& p) {
      return static_cast<double>(static_cast<int>(p.at(0)) & static_cast<int>(p.at(1)) & 1);
    });
  } else if (base == "or") {
    scalar([](const Point& p) {
      return static_cast<double>((static_cast<int>(p.at(0)) | static_cast<int>(p.at(1))) & 1);
    });
  } else if (base == "table16") {
    // one of the 16 boolean functions on {0,1}^2, selected by the 4-bit mask
    int mask = std::stoi(args);
    scalar([&](const Point& p) {
      int idx = static_cast<int>(p.at(0)) * 2 + static_cast<int>(p.at(1));
      return static_cast<double>((mask >> idx) & 1);
    });
  } else if (base == "table") {
    std::string text = read_file(args);
    std::istringstream is(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> row;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
      if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.size() != k.points.size())
      fail("ShapeMismatch", "value table rows != set points in " + args);
    t.m = static_cast<int>(rows.front().size());
    t.values.assign(static_cast<std::size_t>(t.m), std::vector<double>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(rows[r].size()) != t.m)
        fail("ShapeMismatch", "ragged value table in " + args);
      for (int c = 0; c < t.m; ++c) t.values[static_cast<std::size_t>(c)][r] = rows[r][static_cast<std::size_t>(c)];
    }
  } else {
    fail("ConfigParse", "unknown target: " + name);
  }
  return t;
}

}  // namespace tfnn
