#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idsa/config.hpp"
#include "idsa/error.hpp"
#include "idsa/experiments.hpp"

int main(int argc, char **argv) {
  CLI::App app{"idsa-lab: isotropic diffusion source approximation experiments"};
  app.footer(idsa::config_help() +
             "\nExit codes: 0 success, 2 configuration error, 3 solver failure, 4 I/O error.");
  app.require_subcommand(1);

  auto *run = app.add_subcommand("run", "run the experiment described by a configuration file");
  std::string config_path;
  std::vector<std::string> sets;
  bool quiet = false;
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--set", sets, "override a key, e.g. --set kappa=10 (repeatable)");
  run->add_flag("-q,--quiet", quiet, "no progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : idsa::kExitConfig;
  }

  idsa::RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw idsa::IoError("cannot read " + config_path);
    std::stringstream text;
    text << in.rdbuf();
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto &s : sets) overrides.push_back(idsa::split_override(s));
    cfg = idsa::parse_config(text.str(), overrides);
  } catch (const std::exception &e) {
    std::fputs(idsa::error_record(e).c_str(), stderr);
    return idsa::exit_code_for(e);
  }

  std::ostringstream sink;
  return idsa::run(cfg, quiet ? static_cast<std::ostream &>(sink) : std::cout);
}
