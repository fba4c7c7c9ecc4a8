#include "tfnn/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace tfnn {

namespace {

// univariate targets for fit-univariate experiments
double univariate_target(const std::string& name, double t) {
  if (name == "sin") return std::sin(t);
  if (name == "abs") return std::abs(t);
  if (name == "exp") return std::exp(t);
  if (name == "runge") return 1.0 / (1.0 + 25.0 * t * t);
  fail("ConfigParse", "unknown univariate target: " + name);
}

std::vector<FeatureMap> family_from_spec(const std::string& spec, int arity) {
  if (spec == "coordinates" || spec == "identity") return make_coordinate_family(arity);
  auto colon = spec.find(':');
  std::string base = spec.substr(0, colon);
  if (base == "directions") {
    std::vector<std::vector<double>> dirs;
    std::stringstream ss(spec.substr(colon + 1));
    std::string group;
    while (std::getline(ss, group, ';')) {
      std::vector<double> d;
      std::stringstream gs(group);
      std::string cell;
      while (std::getline(gs, cell, ',')) d.push_back(std::stod(cell));
      dirs.push_back(std::move(d));
    }
    return make_direction_family(arity, dirs);
  }
  fail("ConfigParse", "unknown feature family spec: " + spec);
}

FunctionClassV vfamily_from_inputs(const json& in) {
  FunctionClassV v;
  if (!in.contains("vfamily")) fail("MissingInput", "vfamily");
  const json& vf = in.at("vfamily");
  v.family = vf.at("family").get<std::string>();
  v.param_lo = vf.at("param_lo").get<double>();
  v.param_hi = vf.at("param_hi").get<double>();
  v.n_params = vf.at("n_params").get<int>();
  int tn = vf.value("tgrid", 65);
  double t0 = vf.value("t_lo", 0.0), t1 = vf.value("t_hi", 1.0);
  v.domain_grid = linspace(t0, t1, tn);
  v.lipschitz_bound = vf.value("lipschitz", std::max(std::abs(v.param_lo), std::abs(v.param_hi)));
  return v;
}

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    double h = grid[j + 1] - grid[j];
    w[j] += 0.5 * h;
    w[j + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

SampledCompactSet experiment_set(const ExperimentConfig& e, std::vector<double>* domain_grid) {
  if (e.inputs.contains("set_file")) return set_from_text(read_file(e.inputs.at("set_file")));
  if (e.inputs.contains("vfamily")) {
    FunctionClassV v = vfamily_from_inputs(e.inputs);
    if (domain_grid) *domain_grid = v.domain_grid;
    return v.as_set();
  }
  if (e.inputs.contains("space")) {
    ProductSpace space = ProductSpace::parse(e.inputs.at("space").get<std::string>());
    return space.grid(e.grid);
  }
  fail("MissingInput", "space, vfamily, or set_file");
}

std::vector<ExperimentConfig> parse_suite_config(const json& j) {
  if (!j.contains("experiments")) fail("ConfigParse", "experiments");
  std::vector<ExperimentConfig> out;
  for (const auto& ej : j.at("experiments")) {
    ExperimentConfig e;
    if (!ej.contains("name")) fail("ConfigParse", "name");
    if (!ej.contains("command")) fail("ConfigParse", "command");
    e.name = ej.at("name").get<std::string>();
    e.command = ej.at("command").get<std::string>();
    e.eps = ej.value("eps", 0.0);
    e.seed = ej.value("seed", 0ULL);
    e.grid = ej.value("grid", 33);
    e.inputs = ej.value("inputs", json::object());
    if (e.eps < 0.0) fail("ConfigParse", "eps");
    out.push_back(std::move(e));
  }
  return out;
}

json default_suite_config() {
  json experiments = json::array();
  experiments.push_back({{"name", "shallow_abs"},
                         {"command", "build-shallow"},
                         {"eps", 1e-6},
                         {"seed", 1},
                         {"grid", 33},
                         {"inputs",
                          {{"target", "abs_sum"},
                           {"space", "square:-1,1"},
                           {"family", "coordinates"},
                           {"activation", "relu"},
                           {"knots", 64}}}});
  experiments.push_back({{"name", "shallow_xy"},
                         {"command", "build-shallow"},
                         {"eps", 0.05},
                         {"seed", 2},
                         {"grid", 17},
                         {"inputs",
                          {{"target", "xy"},
                           {"space", "square:0,1"},
                           {"family", "directions:1,1;1,-1"},
                           {"activation", "tanh"},
                           {"knots", 64}}}});
  experiments.push_back({{"name", "univ_sin"},
                         {"command", "fit-univariate"},
                         {"eps", 0.01},
                         {"seed", 3},
                         {"grid", 512},
                         {"inputs",
                          {{"target", "sin"},
                           {"interval", {0.0, 3.141592653589793}},
                           {"terms", 32},
                           {"strategy", "nested"},
                           {"activation", "tanh"}}}});
  experiments.push_back({{"name", "lcs_max"},
                         {"command", "build-lcs"},
                         {"eps", 0.05},
                         {"seed", 4},
                         {"inputs",
                          {{"target", "max"},
                           {"vfamily",
                            {{"family", "affine"},
                             {"param_lo", 0.0},
                             {"param_hi", 1.0},
                             {"n_params", 33},
                             {"tgrid", 65}}},
                           {"base", "trapezoid"},
                           {"scales", {1.0, -1.0, 0.5, -0.5}},
                           {"activation", "tanh"},
                           {"knots", 64}}}});
  experiments.push_back({{"name", "functional_intsq"},
                         {"command", "build-functional"},
                         {"eps", 0.05},
                         {"seed", 5},
                         {"inputs",
                          {{"target", "int_sq"},
                           {"vfamily",
                            {{"family", "sin_scale"},
                             {"param_lo", 0.0},
                             {"param_hi", 2.0},
                             {"n_params", 41},
                             {"tgrid", 65}}},
                           {"k_nodes", 9},
                           {"activation", "tanh"},
                           {"knots", 64}}}});
  experiments.push_back({{"name", "deep_sincos"},
                         {"command", "build-deep-narrow"},
                         {"eps", 0.1},
                         {"seed", 6},
                         {"grid", 33},
                         {"inputs",
                          {{"target", "sincos"},
                           {"space", "square:0,1"},
                           {"family", "identity"},
                           {"activation", "relu"}}}});
  experiments.push_back({{"name", "ostrand_finite"},
                         {"command", "build-ostrand"},
                         {"eps", 0.01},
                         {"seed", 7},
                         {"inputs",
                          {{"target", "xor"},
                           {"space", "finite:2,2"},
                           {"mode", "pl:0"},
                           {"activation", "relu"}}}});
  experiments.push_back({{"name", "ostrand_cube"},
                         {"command", "build-ostrand"},
                         {"eps", 0.1},
                         {"seed", 8},
                         {"grid", 33},
                         {"inputs",
                          {{"target", "sincos"},
                           {"space", "cube:2"},
                           {"mode", "pl:0"},
                           {"activation", "relu"}}}});
  experiments.push_back({{"name", "verify_abs"},
                         {"command", "verify"},
                         {"eps", 1e-6},
                         {"seed", 9},
                         {"grid", 33},
                         {"inputs",
                          {{"net_artifact", "shallow_abs"},
                           {"target", "abs_sum"},
                           {"space", "square:-1,1"}}}});
  return json{{"experiments", experiments}};
}

VerifyResult verify_net_loaded(const AnyNet& net, const SampledCompactSet& set,
                               const std::string& target_name,
                               const std::vector<double>& domain_grid) {
  Target t = make_target(target_name, set, domain_grid);
  if (t.m != net_outputs(net))
    fail("ShapeMismatch", "target arity " + std::to_string(t.m) + " != network outputs " +
                              std::to_string(net_outputs(net)));
  std::vector<std::vector<double>> vals(set.points.size()), ref(set.points.size());
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    vals[i] = eval_any(net, set.points[i]);
    ref[i].resize(static_cast<std::size_t>(t.m));
    for (int c = 0; c < t.m; ++c) ref[i][static_cast<std::size_t>(c)] = t.values[static_cast<std::size_t>(c)][i];
  }
  VerifyResult r;
  r.sup_error = sup_seminorm(vals, ref);
  r.width = any_width(net);
  r.depth = any_depth(net);
  return r;
}

VerifyResult verify_net(const std::string& net_file, const std::string& set_file,
                        const std::string& target_name) {
  AnyNet net = net_from_json(read_json(net_file));
  SampledCompactSet set = set_from_text(read_file(set_file));
  return verify_net_loaded(net, set, target_name);
}

namespace {

struct ExperimentOutcome {
  SuiteRow row;
  json net;     // null when the experiment emits no network
  json report;  // null when there is no build report
};

ExperimentOutcome run_experiment(const ExperimentConfig& e, const std::string& out_dir) {
  ExperimentOutcome out;
  out.row.experiment = e.name;
  out.row.eps = e.eps;
  out.row.seed = e.seed;
  const json& in = e.inputs;

  auto need = [&](const char* key) -> const json& {
    if (!in.contains(key)) fail("MissingInput", key);
    return in.at(key);
  };

  BuildOptions bopts;
  bopts.seed = e.seed;
  if (in.contains("knots")) bopts.knots = in.at("knots").get<int>();

  if (e.command == "fit-univariate") {
    double a = need("interval").at(0).get<double>();
    double b = need("interval").at(1).get<double>();
    auto ts = linspace(a, b, e.grid);
    std::vector<double> us(ts.size());
    std::string tname = need("target").get<std::string>();
    for (std::size_t i = 0; i < ts.size(); ++i) us[i] = univariate_target(tname, ts[i]);
    Activation act = Activation::parse(need("activation").get<std::string>());
    NodeStrategy strat = parse_strategy(in.value("strategy", std::string("nested")));
    RidgeExpansion r = fit_univariate(ts, us, act, need("terms").get<int>(), strat, e.seed);
    out.row.n = 1;
    out.row.m = 1;
    out.row.width = static_cast<int>(r.terms.size());
    out.row.depth = 0;
    out.row.term_count = static_cast<int>(r.terms.size());
    out.row.sup_error = r.sup_error;
    out.row.budget_flag = r.sup_error <= e.eps ? 0 : 1;
    out.net = ridge_to_json(r);
    return out;
  }

  if (e.command == "build-shallow") {
    SampledCompactSet k = experiment_set(e, nullptr);
    Target t = make_target(need("target").get<std::string>(), k);
    auto family = family_from_spec(need("family").get<std::string>(),
                                   static_cast<int>(k.arity()));
    Activation act = Activation::parse(need("activation").get<std::string>());
    auto [net, rep] = build_shallow_universal(t.values, family, act, e.eps, k, bopts);
    out.row.n = rep.n;
    out.row.m = rep.m;
    out.row.M = rep.M;
    out.row.width = rep.width;
    out.row.depth = rep.depth;
    out.row.term_count = rep.term_count;
    out.row.sup_error = rep.achieved_error;
    out.row.budget_flag = rep.budget_exceeded ? 1 : 0;
    out.net = net_to_json(net);
    out.report = report_to_json(rep);
    return out;
  }

  if (e.command == "build-lcs") {
    std::vector<double> domain_grid;
    SampledCompactSet k = experiment_set(e, &domain_grid);
    Target t = make_target(need("target").get<std::string>(), k, domain_grid);
    std::string base_spec = in.value("base", std::string("trapezoid"));
    std::vector<FeatureMap> base;
    if (base_spec == "trapezoid") {
      base.push_back(FeatureMap::quadrature(trapezoid_weights(domain_grid)));
    } else {
      fail("ConfigParse", "unknown lcs base: " + base_spec);
    }
    std::vector<double> scales = need("scales").get<std::vector<double>>();
    Activation act = Activation::parse(need("activation").get<std::string>());
    auto [net, rep] = build_lcs_shallow(t.values.at(0), base, scales, act, e.eps, k, bopts);
    out.row.n = rep.n;
    out.row.m = rep.m;
    out.row.width = rep.width;
    out.row.depth = rep.depth;
    out.row.term_count = rep.term_count;
    out.row.sup_error = rep.achieved_error;
    out.row.budget_flag = rep.budget_exceeded ? 1 : 0;
    out.net = net_to_json(net);
    out.report = report_to_json(rep);
    return out;
  }

  if (e.command == "build-functional") {
    FunctionClassV v = vfamily_from_inputs(in);
    SampledCompactSet kv = v.as_set();
    Target t = make_target(need("target").get<std::string>(), kv, v.domain_grid);
    Activation act = Activation::parse(need("activation").get<std::string>());
    FunctionalBuild fb =
        build_functional_net(t.values.at(0), v, act, e.eps, need("k_nodes").get<int>(), bopts);
    out.row.n = fb.report.n;
    out.row.m = fb.report.m;
    out.row.width = fb.report.width;
    out.row.depth = fb.report.depth;
    out.row.term_count = fb.report.term_count;
    out.row.sup_error = fb.report.achieved_error;
    out.row.budget_flag = fb.report.budget_exceeded ? 1 : 0;
    out.net = net_to_json(fb.net);
    json rj = report_to_json(fb.report);
    rj["delta_measured"] = fb.delta_measured;
    rj["delta_required"] = fb.delta_required;
    rj["substitution_change"] = fb.substitution_change;
    rj["substitution_bound"] = fb.substitution_bound;
    out.report = rj;
    return out;
  }

  if (e.command == "build-deep-narrow") {
    SampledCompactSet k = experiment_set(e, nullptr);
    Target t = make_target(need("target").get<std::string>(), k);
    auto family = family_from_spec(in.value("family", std::string("identity")),
                                   static_cast<int>(k.arity()));
    Activation act = Activation::parse(need("activation").get<std::string>());
    DeepNarrowOptions dopts;
    dopts.seed = e.seed;
    FeatureVectorMap fv{family};
    auto [net, rep] = build_deep_narrow(t.values, fv, k, act, e.eps, dopts);
    out.row.n = rep.n;
    out.row.m = rep.m;
    out.row.width = rep.width;
    out.row.depth = rep.depth;
    out.row.term_count = rep.term_count;
    out.row.sup_error = rep.achieved_error;
    out.row.budget_flag = rep.budget_exceeded ? 1 : 0;
    out.net = net_to_json(net);
    out.report = report_to_json(rep);
    return out;
  }

  if (e.command == "build-ostrand") {
    ProductSpace space = ProductSpace::parse(need("space").get<std::string>());
    SampledCompactSet k = space.grid(e.grid);
    Target t = make_target(need("target").get<std::string>(), k);
    Activation act = Activation::parse(need("activation").get<std::string>());
    KstMode mode = KstMode::parse(in.value("mode", std::string("pl:0")));
    DeepNarrowOptions dopts;
    dopts.seed = e.seed;
    auto [net, rep] = build_ostrand_deep_narrow(t.values, space, k, act, e.eps, mode, dopts);
    out.row.n = rep.n;
    out.row.m = rep.m;
    out.row.M = rep.M;
    out.row.width = rep.width;
    out.row.depth = rep.depth;
    out.row.term_count = rep.term_count;
    out.row.sup_error = rep.achieved_error;
    out.row.budget_flag = rep.budget_exceeded ? 1 : 0;
    out.net = net_to_json(net);
    out.report = report_to_json(rep);
    return out;
  }

  if (e.command == "kst-features") {
    ProductSpace space = ProductSpace::parse(need("space").get<std::string>());
    SampledCompactSet k = space.grid(e.grid);
    KstMode mode = KstMode::parse(in.value("mode", std::string("pl:0")));
    OstrandFeatureSet fs = space.all_finite()
                               ? ostrand_features_finite(space)
                               : kolmogorov_features(space.arity(), mode, k);
    out.row.n = fs.feature_count();
    out.row.m = 1;
    out.row.M = space.dimension();
    out.net = feature_set_to_json(fs);
    return out;
  }

  if (e.command == "eval" || e.command == "verify") {
    std::string net_path;
    if (in.contains("net_file"))
      net_path = in.at("net_file").get<std::string>();
    else if (in.contains("net_artifact"))
      net_path = out_dir + "/" + in.at("net_artifact").get<std::string>() + ".net.json";
    else
      fail("MissingInput", "net_file");
    AnyNet net = net_from_json(read_json(net_path));
    std::vector<double> domain_grid;
    SampledCompactSet k = experiment_set(e, &domain_grid);
    VerifyResult vr = verify_net_loaded(net, k, need("target").get<std::string>(), domain_grid);
    out.row.n = std::holds_alternative<ShallowTFNN>(net)
                    ? static_cast<int>(std::get<ShallowTFNN>(net).features.size())
                    : static_cast<int>(std::get<DeepTFNN>(net).features.size());
    out.row.m = net_outputs(net);
    out.row.width = vr.width;
    out.row.depth = vr.depth;
    out.row.term_count = any_width(net);
    out.row.sup_error = vr.sup_error;
    out.row.budget_flag = 0;
    return out;
  }

  fail("UnknownVerb", e.command);
}

}  // namespace

SuiteReport run_suite(const std::vector<ExperimentConfig>& experiments,
                      const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  SuiteReport rep;
  for (const auto& e : experiments) {
    auto start = std::chrono::steady_clock::now();
    ExperimentOutcome oc = run_experiment(e, out_dir);
    auto stop = std::chrono::steady_clock::now();
    oc.row.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
    if (!oc.net.is_null()) write_json(out_dir + "/" + e.name + ".net.json", oc.net);
    if (!oc.report.is_null()) write_json(out_dir + "/" + e.name + ".report.json", oc.report);
    rep.rows.push_back(std::move(oc.row));
  }
  write_file(out_dir + "/suite.csv", rep.csv());
  return rep;
}

std::string SuiteReport::csv() const {
  std::ostringstream os;
  os << "experiment,n,m,M,width,depth,term_count,sup_error,eps,budget_flag,runtime_ms,seed\n";
  for (const auto& r : rows) {
    os << r.experiment << "," << r.n << "," << r.m << "," << r.M << "," << r.width << ","
       << r.depth << "," << r.term_count << "," << fmt17(r.sup_error) << "," << fmt17(r.eps)
       << "," << r.budget_flag << "," << r.runtime_ms << "," << r.seed << "\n";
  }
  return os.str();
}

std::string default_out_dir() {
  const char* env = std::getenv("TFNN_OUT_DIR");
  if (env && *env) return env;
  return "tfnn-out";
}

}  // namespace tfnn
