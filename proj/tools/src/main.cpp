#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlwave/cli/config.hpp"
#include "nlwave/cli/run.hpp"
#include "nlwave/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral lab for nonlocal nonlinear wave equations"};
  std::string config_path;
  std::string command;
  std::string out;
  std::string seed;
  app.add_option("--config", config_path, "key = value configuration file")->required();
  app.add_option("--command", command, "overrides the command key");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed");
  CLI11_PARSE(app, argc, argv);

  nlwave::cli::Overrides overrides;
  if (!command.empty()) overrides["command"] = command;
  if (!out.empty()) overrides["out"] = out;
  if (!seed.empty()) overrides["seed"] = seed;

  nlwave::cli::RunConfig cfg;
  try {
    std::ifstream is(config_path);
    if (!is) throw nlwave::ConfigError("cannot read config file " + config_path);
    std::stringstream text;
    text << is.rdbuf();
    cfg = nlwave::cli::parse_config(text.str(), overrides);
  } catch (const nlwave::ConfigError& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"type", "config"}, {"message", e.what()}};
    j["exit_code"] = nlwave::cli::kConfigError;
    std::cerr << j.dump() << '\n';
    return nlwave::cli::kConfigError;
  }
  return nlwave::cli::run(cfg, std::cerr);
}
