#include "support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace coarse;
using nlohmann::json;

namespace {
auto run(const std::string &text) -> Report { return run_experiment(json::parse(text)); }

auto body_without_timing(const Report &r) -> std::string { return r.body.dump(); }

struct CliResult {
  int code = -1;
  std::string out;
};

auto cli(const std::string &args, const std::string &env = "") -> CliResult {
  auto out_path = std::filesystem::temp_directory_path() / ("coarse_cli_" + std::to_string(::getpid()) + ".txt");
  std::string cmd = env + " " + std::string(COARSE_CLI) + " " + args + " > " + out_path.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::filesystem::remove(out_path);
  return r;
}

auto data(const std::string &name) -> std::string { return std::string(COARSE_DATA_DIR) + "/" + name; }

/// Writes `text` to a temp config file and returns its path.
auto temp_config(const std::string &tag, const std::string &text) -> std::filesystem::path {
  auto p = std::filesystem::temp_directory_path() / ("coarse_cfg_" + tag + std::to_string(::getpid()) + ".json");
  std::ofstream(p) << text;
  return p;
}
} // namespace

TEST(Run, HomologyFiniteExample) {
  auto r = run(R"({"experiment": "homology-finite", "group": "Z2", "coeffs": "trivial-Z", "degrees": 3})");
  EXPECT_TRUE(r.passed());
  const auto &h = r.body["results"]["homology"];
  ASSERT_EQ(h.size(), 4U);
  EXPECT_EQ(h[1]["torsion"].dump(), "[2]");
  EXPECT_EQ(h[1]["betti"], 0);
  EXPECT_EQ(h[3]["group"], "Z/2");
}

TEST(Run, CoarseCheckExample) {
  auto r = run(R"({"experiment": "coarse-check", "map": "z-abs", "radius": 10})");
  EXPECT_EQ(r.body["results"]["classification"], "falsified-embedding");
  EXPECT_EQ(r.body["witnesses"]["embedding"]["s"], 10);
  EXPECT_EQ(r.body["witnesses"]["embedding"]["t"], -10);
  EXPECT_FALSE(r.passed());
  auto expected = run(R"({"experiment": "coarse-check", "map": "z-abs", "radius": 10, "expect": "falsified-embedding"})");
  EXPECT_TRUE(expected.passed());
}

TEST(Run, DynamicsExample) {
  auto r = run(R"({"experiment": "dynamics-roundtrip", "scenario": "product-coupling"})");
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.body["results"]["verdict"], "iso-confirmed");
}

TEST(Run, EveryDefaultConfigPasses) {
  for (const auto &cfg : default_configs()) {
    auto r = run_experiment(cfg);
    EXPECT_TRUE(r.passed()) << cfg.dump() << "\n" << r.body["verdicts"].dump();
  }
}

TEST(Run, ReportShape) {
  auto r = run(R"({"experiment": "omega-build"})");
  auto j = r.to_json();
  std::vector<std::string> keys;
  for (const auto &[k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"experiment", "version", "seed", "config", "verdicts", "witnesses",
                                            "results", "passed", "timing"}));
  EXPECT_EQ(j["version"], kVersion);
  // the echo reruns to the same body
  auto again = run_experiment(json(j["config"]));
  EXPECT_EQ(body_without_timing(again), body_without_timing(r));
}

TEST(Run, DeterministicUnderSeed) {
  for (const auto &text : {R"({"experiment": "chain-suite", "seed": 42, "samples": 30})",
                           R"({"experiment": "homotopy-suite", "seed": 42, "samples": 10})"}) {
    EXPECT_EQ(body_without_timing(run(text)), body_without_timing(run(text)));
  }
}

TEST(Run, ConfigErrors) {
  EXPECT_THROW(run(R"({"experiment": "no-such-thing"})"), ConfigError);
  EXPECT_THROW(run(R"({"experiment": "omega-build", "bogus": 1})"), ConfigError);
  EXPECT_THROW(run(R"({"experiment": "homology-finite", "group": "Z"})"), ConfigError);
  EXPECT_THROW(run(R"({"experiment": "omega-build", "max_radius": 0})"), ConfigError);
  EXPECT_THROW(run(R"({"experiment": "chain-suite", "samples": 0})"), ConfigError);
}

TEST(Run, ResourceCaps) {
  EXPECT_THROW(run(R"({"experiment": "coarse-check", "radius": 50, "max_radius": 20})"), ResourceLimit);
  EXPECT_THROW(run(R"({"experiment": "chain-suite", "degrees": 6, "max_degree": 4})"), ResourceLimit);
}

TEST(List, Catalog) {
  auto groups = list_catalog("groups")["groups"];
  std::set<std::string> names;
  for (const auto &g : groups) names.insert(g["name"].get<std::string>());
  for (const auto &n : {"Z", "Z2", "F2", "Dinf", "Z/2", "Z/4"}) EXPECT_TRUE(names.count(n)) << n;
  names.clear();
  auto maps = list_catalog("maps");
  for (const auto &m : maps["maps"]) names.insert(m["name"].get<std::string>());
  EXPECT_TRUE(names.count("z-double") && names.count("z-abs"));
  std::vector<std::string> exps;
  auto experiments = list_catalog("experiments");
  for (const auto &e : experiments["experiments"]) exps.push_back(e["name"].get<std::string>());
  EXPECT_EQ(exps, (std::vector<std::string>{"coarse-check", "omega-build", "chain-suite", "homotopy-suite",
                                            "homology-finite", "window-boundary", "dynamics-roundtrip",
                                            "morita-check"}));
  EXPECT_EQ(list_catalog().dump(), list_catalog().dump());
  EXPECT_THROW(list_catalog("planets"), ConfigError);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(cli("--config " + data("homology_z2_trivial.json")).code, 0);
  EXPECT_EQ(cli("--config " + data("coarse_check_z_abs.json")).code, 0);
  EXPECT_EQ(cli("--experiment coarse-check --config " + data("dynamics_product.json")).code, 2); // stray field
  EXPECT_EQ(cli("--experiment dynamics-roundtrip").code, 0);
  EXPECT_EQ(cli("--experiment no-such-thing").code, 2);
  EXPECT_EQ(cli("--bogus-flag").code, 2);
  EXPECT_EQ(cli("--experiment coarse-check --max-radius 5 --config " + data("homology_z2_trivial.json")).code, 2);
  auto big = temp_config("big", R"({"experiment": "coarse-check", "radius": 50})");
  EXPECT_EQ(cli("--max-radius 20 --config " + big.string()).code, 3);
  std::filesystem::remove(big);
  EXPECT_EQ(cli("--config " + data("homology_z2_trivial.json"), "COARSE_MEMORY_CAP=4").code, 3);
}

TEST(Binary, FalsificationExitsOne) {
  auto cfg = temp_config("abs", R"({"experiment": "coarse-check", "map": "z-abs", "radius": 10})");
  auto r = cli("--config " + cfg.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["results"]["classification"], "falsified-embedding");
  std::filesystem::remove(cfg);
}

TEST(Binary, ListAndSeedOverride) {
  auto r = cli("list experiments");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["experiments"].size(), 8U);
  auto a = cli("--experiment chain-suite --seed 5");
  auto j = json::parse(a.out);
  EXPECT_EQ(j["seed"], 5);
  j.erase("timing");
  auto b = json::parse(cli("--experiment chain-suite --seed 5").out);
  b.erase("timing");
  EXPECT_EQ(j, b);
}
