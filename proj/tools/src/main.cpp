#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace risgeom::cli;
  CLI::App app{"Stochastic-geometry metrics for RIS-assisted cellular networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::string> mode;
  std::optional<std::string> out_dir;
  std::optional<double> ci;

  const std::pair<const char*, const char*> subcommands[] = {
      {"analytic", "Evaluate the analytic metrics over the configured sweep"},
      {"simulate", "Monte Carlo estimates with confidence intervals"},
      {"validate", "Compare analytic values against Monte Carlo intervals (exit 2 on a miss)"},
      {"raster", "Blind-spot maps as PGM images, one per (seed, mu)"},
      {"figures", "Data sets for the published figures"},
  };
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Config file (key = value lines)")->required();
    sub->add_option("--seed", seed, "Single seed, replaces the config seed list");
    sub->add_option("--reps", reps, "Monte Carlo replications")->check(CLI::Range(std::size_t{100}, std::size_t{1} << 40));
    sub->add_option("--mode", mode, "Blocking model")->check(CLI::IsMember({"geometric", "independent"}));
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--ci", ci, "Confidence level")->check(CLI::Range(0.5, 0.999999));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    RunConfig cfg = parse_config(read_file(config_path));
    if (seed) cfg.seeds = {*seed};
    if (reps) cfg.n_reps = *reps;
    if (mode) cfg.mode = risgeom::parse_blocking_mode(*mode);
    if (out_dir) cfg.output_dir = *out_dir;
    if (ci) cfg.ci_level = *ci;
    const Command command = parse_command(app.get_subcommands().front()->get_name());
    return run_command(command, cfg, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "ris-geom: " << config_path << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "ris-geom: " << e.what() << '\n';
  }
  return kExitError;
}
