// tfnn: build, evaluate and verify constructive feature-layer networks.
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfnn/suite.hpp"

namespace {

using namespace tfnn;

json experiment_json(const std::string& name, const std::string& command, double eps,
                     std::uint64_t seed, int grid, json inputs) {
  return json{{"name", name}, {"command", command}, {"eps", eps},
              {"seed", seed}, {"grid", grid},       {"inputs", std::move(inputs)}};
}

// Runs one experiment through the suite machinery and reports the row.
int run_single(const json& exp, const std::string& out_dir) {
  auto experiments = parse_suite_config(json{{"experiments", json::array({exp})}});
  SuiteReport rep = run_suite(experiments, out_dir);
  const SuiteRow& r = rep.rows.front();
  std::printf("%s: sup_error=%s width=%d depth=%d terms=%d%s\n", r.experiment.c_str(),
              fmt17(r.sup_error).c_str(), r.width, r.depth, r.term_count,
              r.budget_flag ? " [budget exceeded]" : "");
  return 0;
}

struct BuildArgs {
  std::string target, space, family = "coordinates", activation = "relu", mode = "pl:0";
  double eps = 0.1;
  int knots = 16, k_nodes = 9, grid = 0;
  std::vector<double> scales{1.0, -1.0, 0.5, -0.5};
  std::string vfamily;  // family:plo,phi,n_params[,tgrid]
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructive feature-layer network builder"};
  app.require_subcommand(1);

  std::string out_dir = tfnn::default_out_dir();
  std::uint64_t seed = 0;
  int samples = 33;
  app.add_option("--out-dir", out_dir, "output directory for artifacts");
  app.add_option("--seed", seed, "default experiment seed");
  app.add_option("--samples", samples, "default grid density");

  auto* fit = app.add_subcommand("fit-univariate", "fit u(t) by ridge terms");
  std::string fit_act = "tanh", fit_target_file, fit_target, fit_strategy = "nested",
              fit_out = "ridge.json";
  std::vector<double> fit_interval{-1.0, 1.0};
  int fit_terms = 16, fit_grid = 512;
  fit->add_option("--activation", fit_act, "activation id");
  fit->add_option("--target-file", fit_target_file, "CSV of t,u(t) rows");
  fit->add_option("--target", fit_target, "built-in univariate target (sin|abs|exp|runge)");
  fit->add_option("--interval", fit_interval, "fit interval a b")->expected(2);
  fit->add_option("--terms", fit_terms, "ridge term count");
  fit->add_option("--strategy", fit_strategy, "equispaced|nested|random");
  fit->add_option("--grid", fit_grid, "fit grid density for built-in targets");
  fit->add_option("--out", fit_out, "ridge file path");

  auto add_build = [&](const char* name, const char* desc) {
    auto* sc = app.add_subcommand(name, desc);
    auto args = std::make_shared<BuildArgs>();
    sc->add_option("--target", args->target, "target name")->required();
    sc->add_option("--space", args->space, "space spec (cube:2, square:a,b, finite:2,2)");
    sc->add_option("--family", args->family, "feature family (coordinates, directions:...)");
    sc->add_option("--activation", args->activation, "activation id");
    sc->add_option("--eps", args->eps, "requested tolerance");
    sc->add_option("--knots", args->knots, "initial pwl knot count");
    sc->add_option("--k-nodes", args->k_nodes, "shared evaluation nodes (functional builds)");
    sc->add_option("--grid", args->grid, "grid density override");
    sc->add_option("--scales", args->scales, "exponential dictionary scales");
    sc->add_option("--mode", args->mode, "kst mode (sprecher:g,d | pl:seed)");
    sc->add_option("--vfamily", args->vfamily, "function class family:plo,phi,n[,tgrid]");
    return std::make_pair(sc, args);
  };
  auto [shallow_cmd, shallow_args] = add_build("build-shallow", "shallow universal pipeline");
  auto [lcs_cmd, lcs_args] = add_build("build-lcs", "locally-convex pipeline over functionals");
  auto [functional_cmd, functional_args] =
      add_build("build-functional", "point-evaluation functional pipeline");
  auto [deep_cmd, deep_args] = add_build("build-deep-narrow", "width-bounded register pipeline");
  auto [ostrand_cmd, ostrand_args] = add_build("build-ostrand", "Ostrand feature pipeline");

  auto* kstf = app.add_subcommand("kst-features", "emit sum-form inner features");
  std::string kst_space = "cube:2", kst_mode = "pl:0", kst_out = "features.json";
  int kst_grid = 33;
  kstf->add_option("--space", kst_space, "space spec");
  kstf->add_option("--mode", kst_mode, "sprecher:g,d | pl:seed");
  kstf->add_option("--grid", kst_grid, "injectivity grid density");
  kstf->add_option("--out", kst_out, "feature file path");

  auto* ev = app.add_subcommand("eval", "evaluate a saved network over a set file");
  std::string ev_net, ev_points, ev_out = "values.csv";
  ev->add_option("--net", ev_net, "network file")->required();
  ev->add_option("--points", ev_points, "set file")->required();
  ev->add_option("--out", ev_out, "output CSV");

  auto* vf = app.add_subcommand("verify", "re-measure a saved network from artifacts");
  std::string vf_net, vf_set, vf_target;
  vf->add_option("--net", vf_net, "network file")->required();
  vf->add_option("--set", vf_set, "set file")->required();
  vf->add_option("--target", vf_target, "target name")->required();

  auto* su = app.add_subcommand("suite", "run an experiment suite");
  std::string su_config;
  bool su_emit_default = false;
  su->add_option("--config", su_config, "suite config JSON (omit for the default suite)");
  su->add_flag("--emit-default", su_emit_default, "print the default suite config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      if (!fit_target_file.empty()) {
        std::string text = read_file(fit_target_file);
        std::vector<double> ts, us;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
          if (line.empty() || line[0] == '#') continue;
          auto comma = line.find(',');
          if (comma == std::string::npos) fail("ParseError", "expected t,u rows");
          ts.push_back(std::stod(line.substr(0, comma)));
          us.push_back(std::stod(line.substr(comma + 1)));
        }
        RidgeExpansion r = fit_univariate(ts, us, Activation::parse(fit_act), fit_terms,
                                          parse_strategy(fit_strategy), seed);
        write_json(fit_out, ridge_to_json(r));
        std::printf("fit-univariate: sup_error=%s terms=%zu -> %s\n",
                    fmt17(r.sup_error).c_str(), r.terms.size(), fit_out.c_str());
        return 0;
      }
      if (fit_target.empty()) fail("MissingInput", "target or target-file");
      json inputs{{"interval", fit_interval},
                  {"terms", fit_terms},
                  {"strategy", fit_strategy},
                  {"activation", fit_act},
                  {"target", fit_target}};
      return run_single(
          experiment_json("fit_univariate", "fit-univariate", 0.0, seed, fit_grid, inputs),
          out_dir);
    }

    auto run_build = [&](const char* command, const BuildArgs& a) {
      json inputs{{"target", a.target},
                  {"family", a.family},
                  {"activation", a.activation},
                  {"knots", a.knots},
                  {"k_nodes", a.k_nodes},
                  {"mode", a.mode},
                  {"scales", a.scales}};
      if (!a.space.empty()) inputs["space"] = a.space;
      if (!a.vfamily.empty()) {
        auto colon = a.vfamily.find(':');
        std::string fam = a.vfamily.substr(0, colon);
        std::vector<double> nums;
        std::stringstream ss(a.vfamily.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) nums.push_back(std::stod(tok));
        if (nums.size() < 3) fail("ConfigParse", "vfamily needs family:plo,phi,n[,tgrid]");
        inputs["vfamily"] = json{{"family", fam},
                                 {"param_lo", nums[0]},
                                 {"param_hi", nums[1]},
                                 {"n_params", static_cast<int>(nums[2])},
                                 {"tgrid", nums.size() > 3 ? static_cast<int>(nums[3]) : 65}};
      }
      int grid = a.grid > 0 ? a.grid : samples;
      return run_single(
          experiment_json(std::string("cli_") + command, command, a.eps, seed, grid, inputs),
          out_dir);
    };
    if (shallow_cmd->parsed()) return run_build("build-shallow", *shallow_args);
    if (lcs_cmd->parsed()) return run_build("build-lcs", *lcs_args);
    if (functional_cmd->parsed()) return run_build("build-functional", *functional_args);
    if (deep_cmd->parsed()) return run_build("build-deep-narrow", *deep_args);
    if (ostrand_cmd->parsed()) return run_build("build-ostrand", *ostrand_args);

    if (kstf->parsed()) {
      ProductSpace space = ProductSpace::parse(kst_space);
      SampledCompactSet grid = space.grid(kst_grid);
      OstrandFeatureSet fs = space.all_finite()
                                 ? ostrand_features_finite(space)
                                 : kolmogorov_features(space.arity(), KstMode::parse(kst_mode),
                                                       grid);
      write_json(kst_out, feature_set_to_json(fs));
      std::printf("kst-features: %d features (M=%d) -> %s\n", fs.feature_count(),
                  space.dimension(), kst_out.c_str());
      return 0;
    }

    if (ev->parsed()) {
      AnyNet net = net_from_json(read_json(ev_net));
      SampledCompactSet set = set_from_text(read_file(ev_points));
      std::ostringstream os;
      for (const auto& p : set.points) {
        auto v = eval_any(net, p);
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) os << ",";
          os << fmt17(v[i]);
        }
        os << "\n";
      }
      write_file(ev_out, os.str());
      std::printf("eval: %zu points -> %s\n", set.points.size(), ev_out.c_str());
      return 0;
    }

    if (vf->parsed()) {
      VerifyResult r = verify_net(vf_net, vf_set, vf_target);
      std::printf("verify: sup_error=%s width=%d depth=%d\n", fmt17(r.sup_error).c_str(),
                  r.width, r.depth);
      return 0;
    }

    if (su->parsed()) {
      if (su_emit_default) {
        std::cout << default_suite_config().dump(2) << "\n";
        return 0;
      }
      json cfg = su_config.empty() ? default_suite_config() : read_json(su_config);
      auto experiments = parse_suite_config(cfg);
      SuiteReport rep = run_suite(experiments, out_dir);
      for (const auto& r : rep.rows)
        std::printf("%-18s sup_error=%-24s width=%-6d depth=%-6d %s\n", r.experiment.c_str(),
                    fmt17(r.sup_error).c_str(), r.width, r.depth,
                    r.budget_flag ? "[budget exceeded]" : "");
      std::printf("suite: %zu rows -> %s/suite.csv\n", rep.rows.size(), out_dir.c_str());
      return 0;
    }
  } catch (const tfnn::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
