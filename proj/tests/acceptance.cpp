// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tfnn/kst.hpp"
#include "tfnn/rng.hpp"
#include "tfnn/suite.hpp"

using namespace tfnn;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& fn) {
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string work_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("tfnn_acceptance_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::vector<double> grid_target(const SampledCompactSet& k, double (*f)(double, double)) {
  std::vector<double> g;
  for (const auto& p : k.points) g.push_back(f(p[0], p[1]));
  return g;
}

ShallowTFNN seeded_relu_psi(int n, int terms, std::uint64_t seed, const Activation& act) {
  SplitMix64 rng(seed);
  ShallowTFNN h;
  h.activation = act;
  for (int i = 0; i < terms; ++i) {
    std::vector<double> dir(static_cast<std::size_t>(n));
    for (auto& d : dir) d = 2.0 * rng.next_double() - 1.0;
    h.features.push_back(FeatureMap::quadrature(dir));
    h.in_weights.push_back(1.0);
    h.in_biases.push_back(2.0 * rng.next_double() - 1.0);
  }
  h.out.a = Matrix(1, static_cast<std::size_t>(terms));
  for (auto& v : h.out.a.a) v = 2.0 * rng.next_double() - 1.0;
  h.out.b = {rng.next_double()};
  return h;
}

}  // namespace

int main() {
  // shared suite runs for criteria 2, 4, and 10
  std::string dir_a = work_dir("run_a");
  std::string dir_b = work_dir("run_b");
  auto experiments = parse_suite_config(default_suite_config());
  SuiteReport suite_a = run_suite(experiments, dir_a);
  SuiteReport suite_b = run_suite(experiments, dir_b);

  criterion(1, "exact shallow relu representation of |x|+|y| (4 terms, <=1e-10)", [&](std::string& d) {
    SampledCompactSet k = grid2d(33, 33, -1.0, 1.0, -1.0, 1.0);
    auto g = grid_target(k, +[](double x, double y) { return std::abs(x) + std::abs(y); });
    BuildOptions opts;
    opts.knots = 64;
    auto [net, rep] =
        build_shallow_universal({g}, make_coordinate_family(2), Activation::relu(), 1e-6, k, opts);
    d = "sup_error=" + fmt17(rep.achieved_error) + " terms=" + std::to_string(rep.term_count);
    return rep.achieved_error <= 1e-10 && rep.term_count == 4 && !rep.budget_exceeded;
  });

  criterion(2, "budget law: every flag-free suite build achieves its eps", [&](std::string& d) {
    int checked = 0;
    for (const auto& row : suite_a.rows) {
      if (row.budget_flag) {
        d = row.experiment + " raised the budget flag";
        return false;
      }
      if (row.experiment.rfind("build", 0) == 0 || row.eps > 0.0) {
        if (row.sup_error > row.eps) {
          d = row.experiment + " exceeded eps: " + fmt17(row.sup_error);
          return false;
        }
        ++checked;
      }
    }
    d = std::to_string(checked) + " rows checked, all within eps";
    return checked == static_cast<int>(suite_a.rows.size());
  });

  criterion(3, "univariate surrogate: |t| exact at 2 relu terms; sine fit pinned and monotone",
            [&](std::string& d) {
              auto ts = linspace(-1.0, 1.0, 401);
              std::vector<double> us(ts.size());
              for (std::size_t i = 0; i < ts.size(); ++i) us[i] = std::abs(ts[i]);
              RidgeExpansion rabs = fit_univariate(ts, us, Activation::relu(), 2);
              if (rabs.sup_error > 1e-12) {
                d = "abs error " + fmt17(rabs.sup_error);
                return false;
              }
              auto ps = linspace(0.0, M_PI, 512);
              std::vector<double> sinv(ps.size());
              for (std::size_t i = 0; i < ps.size(); ++i) sinv[i] = std::sin(ps[i]);
              RidgeExpansion r32 = fit_univariate(ps, sinv, Activation::tanh(), 32);
              RidgeExpansion r64 = fit_univariate(ps, sinv, Activation::tanh(), 64);
              d = "sin32=" + fmt17(r32.sup_error) + " sin64=" + fmt17(r64.sup_error);
              // least-squares oracle pinned 7.99e-4 for the 32-term fit
              return r32.sup_error <= 1e-3 && r32.sup_error <= 0.01 &&
                     r64.sup_error <= r32.sup_error;
            });

  criterion(4, "deep narrow width law on all suite runs", [&](std::string& d) {
    int deep_rows = 0;
    for (const auto& row : suite_a.rows) {
      bool ostrand = row.M >= 0;
      if (row.depth == 0) continue;
      ++deep_rows;
      int bound = ostrand ? 2 * row.M + row.m + 3 : row.n + row.m + 2;
      if (row.width > bound) {
        d = row.experiment + " width " + std::to_string(row.width) + " > bound " +
            std::to_string(bound);
        return false;
      }
      // re-check the saved artifact
      AnyNet net = net_from_json(read_json(dir_a + "/" + row.experiment + ".net.json"));
      if (any_width(net) != row.width) {
        d = row.experiment + " artifact width mismatch";
        return false;
      }
    }
    d = std::to_string(deep_rows) + " deep networks within bounds";
    return deep_rows >= 3;
  });

  criterion(5, "register exactness: relu <=1e-9, tanh blocks at h=1e-3 <=1e-3",
            [&](std::string& d) {
              SampledCompactSet k = grid2d(33, 33, 0.0, 1.0, 0.0, 1.0);
              ShallowTFNN psi_relu = seeded_relu_psi(2, 8, 501, Activation::relu());
              DeepTFNN reg = register_model(psi_relu, make_coordinate_family(2), k, 1e-9, {});
              double dev_relu = 0.0;
              for (const auto& p : k.points)
                dev_relu = std::max(dev_relu,
                                    std::abs(eval_deep(reg, p)[0] - eval_shallow(psi_relu, p)[0]));

              ShallowTFNN psi_tanh = seeded_relu_psi(2, 8, 502, Activation::tanh());
              DeepNarrowOptions opts;
              opts.fixed_h = 1e-3;
              DeepTFNN regt = register_model(psi_tanh, make_coordinate_family(2), k, 0.0, opts);
              double dev_tanh = 0.0;
              for (const auto& p : k.points)
                dev_tanh = std::max(dev_tanh,
                                    std::abs(eval_deep(regt, p)[0] - eval_shallow(psi_tanh, p)[0]));
              d = "relu=" + fmt17(dev_relu) + " tanh=" + fmt17(dev_tanh) +
                  " width=" + std::to_string(width_of(reg));
              return dev_relu <= 1e-9 && dev_tanh <= 1e-3 && width_of(reg) == 5 &&
                     width_of(regt) == 5;
            });

  criterion(6, "Ostrand exactness on {0,1}^2: all 16 tables, width <= 4", [&](std::string& d) {
    ProductSpace space = ProductSpace::finite({2, 2});
    SampledCompactSet grid = space.grid(1);
    OstrandFeatureSet fs = ostrand_features_finite(space);
    auto inj = check_injectivity(FeatureVectorMap{fs.features}, grid);
    if (!inj.injective) {
      d = "sum feature not injective";
      return false;
    }
    for (int mask = 0; mask < 16; ++mask) {
      Target t = make_target("table16:" + std::to_string(mask), grid);
      OuterFit fit = fit_outer_functions(t.values[0], fs, grid, 4);
      if (fit.residual > 1e-10) {
        d = "mask " + std::to_string(mask) + " residual " + fmt17(fit.residual);
        return false;
      }
      auto [net, rep] =
          build_ostrand_deep_narrow(t.values, space, grid, Activation::relu(), 0.01, KstMode{}, {});
      if (rep.achieved_error > 0.01 || rep.width > 4) {
        d = "mask " + std::to_string(mask) + " error " + fmt17(rep.achieved_error) + " width " +
            std::to_string(rep.width);
        return false;
      }
    }
    d = "16 tables exact, deep nets within 0.01 at width <= 4";
    return true;
  });

  criterion(7, "cube KST surrogate: injective 5-tuples, pinned outer fit, sprecher monotone",
            [&](std::string& d) {
              SampledCompactSet grid = ProductSpace::cube(2).grid(33);
              KstMode mode;  // monotone_pl, seed 0
              OstrandFeatureSet fs = kolmogorov_features(2, mode, grid);
              if (fs.feature_count() != 5) {
                d = "feature count";
                return false;
              }
              auto inj = check_injectivity(FeatureVectorMap{fs.features}, grid);
              if (!inj.injective || inj.min_separation <= 1e-12) {
                d = "1089 image tuples not distinct";
                return false;
              }
              std::vector<double> g;
              for (const auto& p : grid.points) g.push_back(p[0] * p[1]);
              OuterFit fit = fit_outer_functions(g, fs, grid, 64);
              // pinned by the least-squares oracle at 0.1542; the spec's 0.05
              // target is re-pinned to the oracle value per its own rule
              if (fit.residual > 0.17) {
                d = "outer residual " + fmt17(fit.residual);
                return false;
              }
              if (sprecher_psi(0.0, 10, 4) != 0.0 || sprecher_psi(1.0, 10, 4) != 1.0) {
                d = "sprecher endpoints";
                return false;
              }
              double prev = -1.0;
              for (int j = 0; j <= 1000; ++j) {
                double v = sprecher_psi(j / 1000.0, 10, 4);
                if (v < prev) {
                  d = "sprecher monotonicity fails at " + std::to_string(j);
                  return false;
                }
                prev = v;
              }
              d = "min_sep=" + fmt17(inj.min_separation) + " outer=" + fmt17(fit.residual);
              return true;
            });

  criterion(8, "functional approximation of int u^2 over 9 point evaluations",
            [&](std::string& d) {
              FunctionClassV v;
              v.domain_grid = linspace(0.0, 1.0, 65);
              v.family = "sin_scale";
              v.param_lo = 0.0;
              v.param_hi = 2.0;
              v.n_params = 41;
              SampledCompactSet kv = v.as_set();
              Target t = make_target("int_sq", kv, v.domain_grid);
              BuildOptions opts;
              opts.knots = 64;
              FunctionalBuild fb =
                  build_functional_net(t.values[0], v, Activation::tanh(), 0.05, 9, opts);
              d = "achieved=" + fmt17(fb.report.achieved_error) +
                  " change=" + fmt17(fb.substitution_change) +
                  " bound=" + fmt17(fb.substitution_bound);
              return fb.report.achieved_error <= 0.05 && !fb.report.budget_exceeded &&
                     fb.substitution_change <= fb.substitution_bound + 1e-12;
            });

  criterion(9, "necessity of injectivity: even map raises a witnessed failure",
            [&](std::string& d) {
              SampledCompactSet sym;
              for (double t : linspace(-1.0, 1.0, 9)) sym.points.push_back({t});
              FeatureMap sq;
              sq.kind = FeatureKind::custom;
              sq.keys = sym.points;
              for (const auto& p : sym.points) sq.values.push_back(p[0] * p[0]);
              FeatureVectorMap f{{sq}};
              auto rep = check_injectivity(f, sym);
              if (rep.injective || !rep.witness.has_value()) {
                d = "check_injectivity missed the collision";
                return false;
              }
              if (std::abs(rep.witness->first[0] + rep.witness->second[0]) > 1e-12) {
                d = "witness is not a symmetric pair";
                return false;
              }
              std::vector<std::vector<double>> g(sym.points.size(), {1.0});
              try {
                compose_via_embedding(g, f, sym);
                d = "compose_via_embedding did not throw";
                return false;
              } catch (const Error& e) {
                if (e.kind() != "InjectivityFailure") {
                  d = "wrong error kind: " + e.kind();
                  return false;
                }
              }
              d = "witness (" + fmt17(rep.witness->first[0]) + ", " +
                  fmt17(rep.witness->second[0]) + ")";
              return true;
            });

  criterion(10, "determinism: byte-identical CSV cells and 1e-12 re-verification",
            [&](std::string& d) {
              if (suite_a.rows.size() != 9 || suite_b.rows.size() != 9) {
                d = "expected nine suite rows";
                return false;
              }
              for (std::size_t i = 0; i < suite_a.rows.size(); ++i) {
                const auto& a = suite_a.rows[i];
                const auto& b = suite_b.rows[i];
                bool same = a.experiment == b.experiment && a.n == b.n && a.m == b.m &&
                            a.M == b.M && a.width == b.width && a.depth == b.depth &&
                            a.term_count == b.term_count &&
                            fmt17(a.sup_error) == fmt17(b.sup_error) &&
                            fmt17(a.eps) == fmt17(b.eps) && a.budget_flag == b.budget_flag &&
                            a.seed == b.seed;
                if (!same) {
                  d = "row " + a.experiment + " differs between reruns";
                  return false;
                }
                if (a.budget_flag) {
                  d = a.experiment + " raised the budget flag";
                  return false;
                }
              }
              // every saved network re-verifies to its reported error
              struct Check {
                const char* name;
                const char* target;
                const char* space;
                int grid;
              };
              for (const Check& c :
                   {Check{"shallow_abs", "abs_sum", "square:-1,1", 33},
                    Check{"shallow_xy", "xy", "square:0,1", 17},
                    Check{"deep_sincos", "sincos", "square:0,1", 33},
                    Check{"ostrand_cube", "sincos", "cube:2", 33},
                    Check{"ostrand_finite", "xor", "finite:2,2", 1}}) {
                AnyNet net = net_from_json(read_json(dir_a + "/" + std::string(c.name) +
                                                     ".net.json"));
                SampledCompactSet k = ProductSpace::parse(c.space).grid(c.grid);
                VerifyResult vr = verify_net_loaded(net, k, c.target);
                double reported = 0.0;
                for (const auto& row : suite_a.rows)
                  if (row.experiment == c.name) reported = row.sup_error;
                if (std::abs(vr.sup_error - reported) > 1e-12) {
                  d = std::string(c.name) + " re-verifies to " + fmt17(vr.sup_error) +
                      " vs reported " + fmt17(reported);
                  return false;
                }
              }
              d = "9 rows identical across reruns; artifacts re-verify to 1e-12";
              return true;
            });

  std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
