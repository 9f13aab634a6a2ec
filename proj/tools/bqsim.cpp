#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bq/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stratified Boussinesq experiments"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out = ".";
    int threads = 1;
  };
  Args args;
  for (const char* name : {"simulate", "decay-probe", "sigma-sweep", "identity-check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "JSON configuration");
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--threads", args.threads, "maximum worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? bq::kExitOk : bq::kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> config;
  if (!args.config.empty()) config = args.config;
  return bq::run_command(name, config, args.out, args.threads, std::cout, std::cerr);
}
