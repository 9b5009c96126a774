#include "coarse/coarse.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode { kPass = 0, kFailure = 1, kConfig = 2, kResource = 3 };

auto read_config(const std::string &path) -> nlohmann::json {
  std::ifstream in(path);
  if (!in) throw coarse::ConfigError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw coarse::ConfigError(path + ": " + e.what());
  }
}

void emit(const nlohmann::ordered_json &j, const std::string &out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw coarse::ConfigError("cannot write " + out);
  f << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Coarse group homology and orbit-equivalence experiments"};
  app.require_subcommand(0, 1);
  std::string config_path, experiment, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_radius;
  std::optional<int> max_degree;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "experiment name (overrides the config)");
  app.add_option("--out", out, "write the report here instead of stdout");
  app.add_option("--seed", seed, "seed for random chains");
  app.add_option("--max-radius", max_radius, "cap on every radius parameter");
  app.add_option("--max-degree", max_degree, "cap on every degree parameter");
  std::string section = "all";
  auto *list = app.add_subcommand("list", "catalog of groups, maps, scenarios and experiments");
  list->add_option("section", section, "groups | maps | scenarios | experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (list->parsed()) {
      emit(coarse::list_catalog(section), out);
      return kPass;
    }
    nlohmann::json config = config_path.empty() ? nlohmann::json::object() : read_config(config_path);
    if (!config.is_object()) throw coarse::ConfigError("config must be a JSON object");
    if (!experiment.empty()) config["experiment"] = experiment;
    if (seed) config["seed"] = *seed;
    if (max_radius) config["max_radius"] = *max_radius;
    if (max_degree) config["max_degree"] = *max_degree;
    if (!config.contains("experiment")) throw coarse::ConfigError("no experiment given (use --experiment or --config)");

    auto report = coarse::run_experiment(config);
    emit(report.to_json(), out);
    std::cerr << report.body["experiment"].get<std::string>() << ": " << (report.passed() ? "PASS" : "FAIL") << "\n";
    return report.passed() ? kPass : kFailure;
  } catch (const coarse::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const coarse::InvalidElement &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const coarse::ResourceLimit &e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const coarse::Error &e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailure;
  }
}
