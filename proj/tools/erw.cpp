// Command-line front end: erw [--config PATH] [--seed N] [--workers N]
//                             [--out DIR] [--format csv|plot] <subcommand>
#include "erw/harness/config.hpp"
#include "erw/harness/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace erw::harness;
  CLI::App app{"Excited random walk experiments"};
  app.set_version_flag("--version", ERW_VERSION);

  std::string config_path;
  std::string seed, workers, out, format;
  app.add_option("--config", config_path, "Config file (or ERW_CONFIG)");
  app.add_option("--seed", seed, "Master seed (or ERW_SEED)");
  app.add_option("--workers", workers, "Worker threads (or ERW_WORKERS)");
  app.add_option("--out", out, "Output directory (or ERW_OUT)");
  app.add_option("--format", format, "csv or plot (or ERW_FORMAT)");

  std::string chosen;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (config_path.empty()) {
      if (auto env = process_env("ERW_CONFIG")) config_path = *env;
    }
    if (config_path.empty()) {
      std::cerr << "error: no config given (--config or ERW_CONFIG)\n";
      return kExitInvalid;
    }
    const auto config = Config::load(config_path);
    CliOverrides cli;
    auto flag = [](const std::string& v) { return v.empty() ? std::nullopt : std::optional<std::string>(v); };
    cli.seed = flag(seed);
    cli.workers = flag(workers);
    cli.out = flag(out);
    cli.format = flag(format);
    const auto settings = resolve_settings(config, cli, process_env);
    return run(chosen, config, settings, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
