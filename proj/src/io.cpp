#include "tfnn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfnn {

namespace {

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.a}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.a = j.at("data").get<std::vector<double>>();
  if (m.a.size() != m.rows * m.cols) fail("ParseError", "matrix data size mismatch");
  return m;
}

json affine_to_json(const AffineLayer& l) {
  return json{{"A", matrix_to_json(l.a)}, {"b", l.b}};
}

AffineLayer affine_from_json(const json& j) {
  AffineLayer l;
  l.a = matrix_from_json(j.at("A"));
  l.b = j.at("b").get<std::vector<double>>();
  if (l.b.size() != l.a.rows) fail("ParseError", "affine bias arity mismatch");
  return l;
}

json psi_to_json(const InnerPsi& p) {
  json j;
  switch (p.kind) {
    case InnerPsi::Kind::finite_table:
      j["kind"] = "finite_table";
      j["values"] = p.values;
      break;
    case InnerPsi::Kind::monotone_pl:
      j["kind"] = "monotone_pl";
      j["values"] = p.values;
      break;
    case InnerPsi::Kind::sprecher:
      j["kind"] = "sprecher";
      j["gamma"] = p.gamma;
      j["depth"] = p.depth;
      j["shift"] = p.shift;
      break;
  }
  j["weight"] = p.weight;
  return j;
}

InnerPsi psi_from_json(const json& j) {
  InnerPsi p;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite_table") {
    p.kind = InnerPsi::Kind::finite_table;
    p.values = j.at("values").get<std::vector<double>>();
  } else if (kind == "monotone_pl") {
    p.kind = InnerPsi::Kind::monotone_pl;
    p.values = j.at("values").get<std::vector<double>>();
  } else if (kind == "sprecher") {
    p.kind = InnerPsi::Kind::sprecher;
    p.gamma = j.at("gamma").get<int>();
    p.depth = j.at("depth").get<int>();
    p.shift = j.at("shift").get<double>();
    p.table = sprecher_table(p.gamma, p.depth);
  } else {
    fail("ParseError", "unknown inner psi kind: " + kind);
  }
  p.weight = j.value("weight", 1.0);
  return p;
}

}  // namespace

json feature_to_json(const FeatureMap& f) {
  json j;
  switch (f.kind) {
    case FeatureKind::coordinate:
      j["kind"] = "coordinate";
      j["index"] = f.index;
      break;
    case FeatureKind::quadrature:
      j["kind"] = "quadrature";
      j["weights"] = f.weights;
      break;
    case FeatureKind::point_eval:
      j["kind"] = "point_eval";
      j["index"] = f.index;
      break;
    case FeatureKind::exponential:
      j["kind"] = "exponential";
      j["scale"] = f.scale;
      j["base"] = feature_to_json(*f.base);
      break;
    case FeatureKind::ostrand_sum: {
      j["kind"] = "ostrand_sum";
      json arr = json::array();
      for (const auto& p : f.psis) arr.push_back(psi_to_json(p));
      j["psis"] = arr;
      break;
    }
    case FeatureKind::custom:
      j["kind"] = "custom";
      j["keys"] = f.keys;
      j["values"] = f.values;
      break;
  }
  if (f.lip) j["lip"] = *f.lip;
  return j;
}

FeatureMap feature_from_json(const json& j) {
  FeatureMap f;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "coordinate") {
    f.kind = FeatureKind::coordinate;
    f.index = j.at("index").get<int>();
  } else if (kind == "quadrature") {
    f.kind = FeatureKind::quadrature;
    f.weights = j.at("weights").get<std::vector<double>>();
  } else if (kind == "point_eval") {
    f.kind = FeatureKind::point_eval;
    f.index = j.at("index").get<int>();
  } else if (kind == "exponential") {
    f.kind = FeatureKind::exponential;
    f.scale = j.at("scale").get<double>();
    f.base = std::make_shared<FeatureMap>(feature_from_json(j.at("base")));
  } else if (kind == "ostrand_sum") {
    f.kind = FeatureKind::ostrand_sum;
    for (const auto& pj : j.at("psis")) f.psis.push_back(psi_from_json(pj));
  } else if (kind == "custom") {
    f.kind = FeatureKind::custom;
    f.keys = j.at("keys").get<std::vector<Point>>();
    f.values = j.at("values").get<std::vector<double>>();
  } else {
    fail("ParseError", "unknown feature kind: " + kind);
  }
  if (j.contains("lip")) f.lip = j.at("lip").get<double>();
  return f;
}

json net_to_json(const ShallowTFNN& h) {
  json feats = json::array();
  for (const auto& f : h.features) feats.push_back(feature_to_json(f));
  return json{{"kind", "shallow"},
              {"activation", h.activation.id()},
              {"m", h.outputs()},
              {"features", feats},
              {"layers",
               {{"in_weights", h.in_weights},
                {"in_biases", h.in_biases},
                {"out_matrix", matrix_to_json(h.out.a)},
                {"out_bias", h.out.b}}}};
}

json net_to_json(const DeepTFNN& h) {
  json feats = json::array();
  for (const auto& f : h.features) feats.push_back(feature_to_json(f));
  json hidden = json::array();
  for (const auto& l : h.hidden) hidden.push_back(affine_to_json(l));
  return json{{"kind", "deep"},
              {"activation", h.activation.id()},
              {"m", h.outputs()},
              {"features", feats},
              {"layers",
               {{"in_weights", h.in_weights},
                {"in_biases", h.in_biases},
                {"hidden", hidden},
                {"output", affine_to_json(h.output)}}}};
}

AnyNet net_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  std::vector<FeatureMap> feats;
  for (const auto& fj : j.at("features")) feats.push_back(feature_from_json(fj));
  const json& layers = j.at("layers");
  if (kind == "shallow") {
    ShallowTFNN h;
    h.activation = Activation::parse(j.at("activation").get<std::string>());
    h.features = std::move(feats);
    h.in_weights = layers.at("in_weights").get<std::vector<double>>();
    h.in_biases = layers.at("in_biases").get<std::vector<double>>();
    h.out.a = matrix_from_json(layers.at("out_matrix"));
    h.out.b = layers.at("out_bias").get<std::vector<double>>();
    if (h.features.size() != h.in_weights.size() || h.features.size() != h.in_biases.size() ||
        h.features.size() != h.out.a.cols)
      fail("ShapeMismatch", "inconsistent shallow network dimensions");
    return h;
  }
  if (kind == "deep") {
    DeepTFNN h;
    h.activation = Activation::parse(j.at("activation").get<std::string>());
    h.features = std::move(feats);
    h.in_weights = layers.at("in_weights").get<std::vector<double>>();
    h.in_biases = layers.at("in_biases").get<std::vector<double>>();
    for (const auto& lj : layers.at("hidden")) h.hidden.push_back(affine_from_json(lj));
    h.output = affine_from_json(layers.at("output"));
    std::size_t prev = h.features.size();
    for (const auto& l : h.hidden) {
      if (l.a.cols != prev) fail("ShapeMismatch", "deep network layer chain mismatch");
      prev = l.a.rows;
    }
    if (h.output.a.cols != prev) fail("ShapeMismatch", "deep network output arity mismatch");
    return h;
  }
  fail("ParseError", "unknown network kind: " + kind);
}

int net_outputs(const AnyNet& net) {
  return std::visit([](const auto& h) { return static_cast<int>(h.outputs()); }, net);
}

std::vector<double> eval_any(const AnyNet& net, const Point& x) {
  if (std::holds_alternative<ShallowTFNN>(net)) return eval_shallow(std::get<ShallowTFNN>(net), x);
  return eval_deep(std::get<DeepTFNN>(net), x);
}

int any_width(const AnyNet& net) {
  if (std::holds_alternative<ShallowTFNN>(net))
    return static_cast<int>(std::get<ShallowTFNN>(net).hidden());
  return width_of(std::get<DeepTFNN>(net));
}

int any_depth(const AnyNet& net) {
  if (std::holds_alternative<ShallowTFNN>(net)) return 0;
  return depth_of(std::get<DeepTFNN>(net));
}

json ridge_to_json(const RidgeExpansion& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back(json{{"c", t.c}, {"w", t.w}, {"theta", t.theta}});
  return json{{"activation", r.activation.id()},
              {"interval", {r.a, r.b}},
              {"terms", terms},
              {"sup_error", r.sup_error}};
}

RidgeExpansion ridge_from_json(const json& j) {
  RidgeExpansion r;
  r.activation = Activation::parse(j.at("activation").get<std::string>());
  r.a = j.at("interval").at(0).get<double>();
  r.b = j.at("interval").at(1).get<double>();
  for (const auto& tj : j.at("terms"))
    r.terms.push_back(RidgeTerm{tj.at("c").get<double>(), tj.at("w").get<double>(),
                                tj.at("theta").get<double>()});
  r.sup_error = j.at("sup_error").get<double>();
  return r;
}

json report_to_json(const BuildReport& r) {
  json budgets = json::object();
  for (const auto& [k, v] : r.budgets) budgets[k] = v;
  return json{{"requested_eps", r.requested_eps},
              {"achieved_error", r.achieved_error},
              {"width", r.width},
              {"depth", r.depth},
              {"term_count", r.term_count},
              {"budget_exceeded", r.budget_exceeded},
              {"n", r.n},
              {"m", r.m},
              {"M", r.M},
              {"seed", r.seed},
              {"budgets", budgets}};
}

json feature_set_to_json(const OstrandFeatureSet& fs) {
  json feats = json::array();
  for (const auto& f : fs.features) feats.push_back(feature_to_json(f));
  json factors = json::array();
  for (const auto& fac : fs.space.factors) {
    if (fac.finite)
      factors.push_back(json{{"finite", true}, {"labels", fac.labels}});
    else
      factors.push_back(json{{"finite", false}, {"lo", fac.lo}, {"hi", fac.hi}});
  }
  return json{{"space", fs.space.spec()},
              {"factors", factors},
              {"sum_form", "unweighted"},
              {"features", feats}};
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string set_to_text(const SampledCompactSet& s) {
  std::ostringstream os;
  os << "metric=" << metric_name(s.metric) << " mesh=" << fmt17(s.mesh) << "\n";
  for (const auto& p : s.points) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) os << ",";
      os << fmt17(p[i]);
    }
    os << "\n";
  }
  return os.str();
}

SampledCompactSet set_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) fail("ParseError", "empty set file");
  SampledCompactSet s;
  {
    std::istringstream hs(line);
    std::string tok;
    bool metric_seen = false;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) fail("ParseError", "bad set header token: " + tok);
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "metric") {
        s.metric = parse_metric(val);
        metric_seen = true;
      } else if (key == "mesh") {
        s.mesh = std::stod(val);
      } else {
        fail("ParseError", "unknown set header key: " + key);
      }
    }
    if (!metric_seen) fail("ParseError", "set header must declare metric");
  }
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    Point p;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) p.push_back(std::stod(cell));
    if (!p.empty()) s.points.push_back(std::move(p));
  }
  if (s.points.empty()) fail("ParseError", "set file has no points");
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail("ParseError", "cannot open for writing: " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail("MissingInput", "cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail("ParseError", path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

}  // namespace tfnn
