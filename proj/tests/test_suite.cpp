#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "test_util.hpp"
#include "tfnn/suite.hpp"

using namespace tfnn;
using tfnn_test::error_kind;

namespace {
std::string temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("tfnn_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}
}  // namespace

TEST_CASE("config parsing names the offending field") {
  CHECK(error_kind([] { parse_suite_config(json{{"foo", 1}}); }) == "ConfigParse");
  CHECK(error_kind([] {
          parse_suite_config(json{{"experiments", json::array({json{{"name", "x"}}})}});
        }) == "ConfigParse");
  auto experiments = parse_suite_config(
      json{{"experiments",
            json::array({json{{"name", "x"}, {"command", "paint"}, {"inputs", json::object()}}})}});
  CHECK(error_kind([&] { run_suite(experiments, temp_dir("verb")); }) == "UnknownVerb");

  auto missing = parse_suite_config(json{
      {"experiments", json::array({json{{"name", "x"},
                                        {"command", "build-shallow"},
                                        {"eps", 0.1},
                                        {"inputs", json{{"space", "square:0,1"}}}}})}});
  CHECK(error_kind([&] { run_suite(missing, temp_dir("missing")); }) == "MissingInput");
}

TEST_CASE("an empty experiment list emits only the header row") {
  SuiteReport rep = run_suite({}, temp_dir("empty"));
  CHECK(rep.csv() ==
        "experiment,n,m,M,width,depth,term_count,sup_error,eps,budget_flag,runtime_ms,seed\n");
}

TEST_CASE("the shipped default suite parses into nine experiments") {
  auto experiments = parse_suite_config(default_suite_config());
  CHECK(experiments.size() == 9);
  std::set<std::string> names;
  for (const auto& e : experiments) names.insert(e.name);
  CHECK(names.size() == 9);
}

TEST_CASE("eval-only rows agree with a direct evaluation") {
  std::string dir = temp_dir("verify");
  json cfg{{"experiments",
            json::array(
                {json{{"name", "build"},
                      {"command", "build-shallow"},
                      {"eps", 1e-6},
                      {"seed", 1},
                      {"grid", 9},
                      {"inputs",
                       {{"target", "abs_sum"},
                        {"space", "square:-1,1"},
                        {"family", "coordinates"},
                        {"activation", "relu"},
                        {"knots", 32}}}},
                 json{{"name", "check"},
                      {"command", "verify"},
                      {"eps", 1e-6},
                      {"seed", 2},
                      {"grid", 9},
                      {"inputs",
                       {{"net_artifact", "build"},
                        {"target", "abs_sum"},
                        {"space", "square:-1,1"}}}}})}};
  SuiteReport rep = run_suite(parse_suite_config(cfg), dir);
  REQUIRE(rep.rows.size() == 2);
  CHECK(std::abs(rep.rows[1].sup_error - rep.rows[0].sup_error) <= 1e-12);
  CHECK(rep.rows[1].width == rep.rows[0].width);

  // re-verify from artifacts alone
  AnyNet net = net_from_json(read_json(dir + "/build.net.json"));
  SampledCompactSet k = ProductSpace::parse("square:-1,1").grid(9);
  VerifyResult vr = verify_net_loaded(net, k, "abs_sum");
  CHECK(std::abs(vr.sup_error - rep.rows[0].sup_error) <= 1e-12);
}

TEST_CASE("verify rejects arity mismatches") {
  std::string dir = temp_dir("shape");
  json cfg{{"experiments", json::array({json{{"name", "build"},
                                             {"command", "build-shallow"},
                                             {"eps", 1e-6},
                                             {"grid", 5},
                                             {"inputs",
                                              {{"target", "abs_sum"},
                                               {"space", "square:-1,1"},
                                               {"family", "coordinates"},
                                               {"activation", "relu"},
                                               {"knots", 16}}}}})}};
  run_suite(parse_suite_config(cfg), dir);
  AnyNet net = net_from_json(read_json(dir + "/build.net.json"));
  SampledCompactSet k = ProductSpace::parse("square:-1,1").grid(5);
  CHECK(error_kind([&] { verify_net_loaded(net, k, "const:1,2"); }) == "ShapeMismatch");
}

TEST_CASE("reruns with identical seeds reproduce the numeric cells") {
  json cfg{{"experiments",
            json::array({json{{"name", "xy"},
                              {"command", "build-shallow"},
                              {"eps", 0.05},
                              {"seed", 2},
                              {"grid", 9},
                              {"inputs",
                               {{"target", "xy"},
                                {"space", "square:0,1"},
                                {"family", "directions:1,1;1,-1"},
                                {"activation", "tanh"},
                                {"knots", 32}}}}})}};
  SuiteReport r1 = run_suite(parse_suite_config(cfg), temp_dir("rerun_a"));
  SuiteReport r2 = run_suite(parse_suite_config(cfg), temp_dir("rerun_b"));
  REQUIRE(r1.rows.size() == r2.rows.size());
  CHECK(fmt17(r1.rows[0].sup_error) == fmt17(r2.rows[0].sup_error));
  CHECK(r1.rows[0].term_count == r2.rows[0].term_count);
}

TEST_CASE("seventeen significant digits survive a parse round trip") {
  double v = 1.0 / 3.0;
  CHECK(fmt17(v) == "0.33333333333333331");
  CHECK(std::stod(fmt17(v)) == v);
  double w = 0.1 + 0.2;
  CHECK(std::stod(fmt17(w)) == w);
}
