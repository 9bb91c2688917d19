// hetnet-sim: air/ground HetNet 5th-percentile SE campaigns.
//
//   hetnet-sim run --preset fig4-hex-sweep --drops 20 --out results/
//   hetnet-sim plotdata --results results/records.csv --series 5pse_vs_cre --out plots/
//   hetnet-sim validate --config run.cfg
//
// Every flag except --config and --dry-run has an environment mirror with the
// HETNET_ prefix (HETNET_SEED, HETNET_DROPS, ...). Flags beat environment,
// environment beats the config file.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetnet/cli.hpp"
#include "hetnet/config.hpp"

namespace {

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> drops;
  std::optional<std::size_t> threads;
  std::string out;
  std::string preset;
  std::string format;
  std::string scale;
  std::vector<std::string> sets;
  bool dry_run = false;
};

void add_config_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "Config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--drops", f.drops, "Monte Carlo drops per scenario");
  cmd->add_option("--threads", f.threads, "Worker threads (results do not depend on this)");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--preset", f.preset, "Scenario preset: fig4-hex-sweep, fig5-ga, fig6-compare");
  cmd->add_option("--format", f.format, "Output format: csv or json-text");
  cmd->add_option("--scale", f.scale, "Region scale: full (10x10 km) or small (5x5 km)");
  cmd->add_option("--set", f.sets, "Extra override, key=value (repeatable)");
}

hetnet::RunConfig load(const RunFlags& f) {
  hetnet::KeyValues overrides = hetnet::env_overrides();
  if (f.seed) overrides.emplace_back("run.seed", std::to_string(*f.seed));
  if (f.drops) overrides.emplace_back("run.drops", std::to_string(*f.drops));
  if (f.threads) overrides.emplace_back("run.threads", std::to_string(*f.threads));
  if (!f.out.empty()) overrides.emplace_back("run.out_dir", f.out);
  if (!f.preset.empty()) overrides.emplace_back("run.preset", f.preset);
  if (!f.format.empty()) overrides.emplace_back("run.format", f.format);
  if (!f.scale.empty()) overrides.emplace_back("run.scale", f.scale);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw hetnet::ConfigError("--set", "expected key=value, got '" + s + "'");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  std::optional<std::filesystem::path> path;
  if (!f.config.empty()) {
    path = f.config;
  } else if (const char* env = std::getenv("HETNET_CONFIG")) {
    path = env;
  }
  auto config = hetnet::parse_config(path, overrides);
  // Command-line seed and drop count apply to every scenario, including ones
  // that set their own in the file.
  for (auto& s : config.scenarios) {
    if (f.seed) s.master_seed = *f.seed;
    if (f.drops) s.drops = *f.drops;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Air/ground HetNet simulator: 5th-percentile SE under eICIC/FeICIC with aerial base stations"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run scenarios and write result files");
  add_config_flags(run, run_flags);
  run->add_flag("--dry-run", run_flags.dry_run, "Validate and print the execution plan only");

  RunFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "Validate a config and print its canonical form");
  add_config_flags(validate, validate_flags);

  std::string results_path;
  std::string series;
  std::string plot_out = "plots";
  auto* plot = app.add_subcommand("plotdata", "Extract plot-ready series from a results file");
  plot->add_option("--results", results_path, "Results file written by 'run'")->required();
  plot->add_option("--series", series, "Series: 5pse_vs_cre or 5pse_vs_nuabs")->required();
  plot->add_option("--out", plot_out, "Directory for the series files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = load(run_flags);
      return hetnet::cmd_run(config, run_flags.dry_run, std::cout, std::cerr);
    }
    if (*validate) {
      const auto config = load(validate_flags);
      std::cout << hetnet::serialize_config(config);
      return 0;
    }
    if (*plot) {
      for (const auto& p : hetnet::cmd_plotdata(results_path, series, plot_out)) std::cout << p.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
