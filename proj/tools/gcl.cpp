#include <iostream>

#include <CLI11.hpp>

#include "gcl/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gibbs cluster point processes: sampling, identity checks and dynamics"};
  app.require_subcommand(1);

  gcl::cli::CommandOptions opts;
  opts.jobs = gcl::cli::jobs_from_env();
  std::uint64_t seed = 0;
  std::string out_dir;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config_path, "run configuration (JSON)")->required();
    sub->add_option("--seed", seed, "master seed, overrides the configuration");
    sub->add_option("--out", out_dir, "output directory, overrides the configuration");
    sub->add_option("--jobs", opts.jobs, "worker threads (default: GCL_JOBS or 1)")->check(CLI::PositiveNumber);
    return sub;
  };
  CLI::App* sample = add("sample", "sample the center ensemble and its lift");
  CLI::App* verify = add("verify", "run the configured identity checks");
  CLI::App* dynamics = add("dynamics", "run the Langevin dynamics and test invariance");
  CLI::App* diagnose = add("diagnose", "check the local-finiteness conditions of the cluster law");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gcl::cli::kConfigurationError;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--out")) opts.out_dir = out_dir;
  }

  if (sample->parsed()) return gcl::cli::cmd_sample(opts, std::cout, std::cerr);
  if (verify->parsed()) return gcl::cli::cmd_verify(opts, std::cout, std::cerr);
  if (dynamics->parsed()) return gcl::cli::cmd_dynamics(opts, std::cout, std::cerr);
  if (diagnose->parsed()) return gcl::cli::cmd_diagnose(opts, std::cout, std::cerr);
  return gcl::cli::kConfigurationError;
}
