#include <iostream>

#include <CLI11.hpp>

#include "nadegen/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dual complexes, Monge-Ampere measures and hybrid limits of degenerations"};
  app.set_version_flag("--version", "nadegen 0.1.0");

  std::string task;
  std::string config;
  nadegen::RunOverrides overrides;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::vector<double> t;
  double epsilon = 0;
  std::string out;
  unsigned workers = 0;

  app.add_option("task", task,
                 "dual-complex | ma-measure | curve-limit | skeleton | retraction | blowup | hybrid-sim | chart-check")
      ->required();
  app.add_option("--config", config, "JSON run configuration")->required();
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* samples_opt = app.add_option("--samples", samples, "sample count per |t|")->check(CLI::PositiveNumber);
  auto* t_opt = app.add_option("--t", t, "comma-separated |t| values")->delimiter(',');
  auto* eps_opt = app.add_option("--epsilon", epsilon, "vertex neighbourhood radius");
  auto* out_opt = app.add_option("--out", out, "output path (stdout when omitted)");
  auto* workers_opt = app.add_option("--workers", workers, "sampling threads, 0 for hardware concurrency");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nadegen::kExitValidation;
  }

  if (*seed_opt) overrides.seed = seed;
  if (*samples_opt) overrides.samples = samples;
  if (*t_opt) overrides.t = t;
  if (*eps_opt) overrides.epsilon = epsilon;
  if (*out_opt) overrides.out = out;
  if (*workers_opt) overrides.workers = workers;

  return nadegen::run(task, config, overrides, std::cout, std::cerr);
}
