#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "otlimits/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Empirical optimal transport: exact solves, dual faces and limit laws"};
  std::string task;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
  app.add_option("task", task,
                 "solve | face | degeneracy | limit-sample | clt | bootstrap | pivotal | "
                 "semidiscrete")
      ->required();
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--jobs", jobs, "concurrent replications (default: $OTLIMITS_JOBS or 1)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : otl::kExitInvalid;
  }

  try {
    auto config = otl::load_config(config_path, otl::task_from_string(task));
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    const int workers = otl::resolve_jobs(jobs);
    return otl::run(config, workers, std::cerr);
  } catch (const otl::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return otl::kExitInvalid;
  }
}
