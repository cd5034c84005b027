#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alsim/experiment.hpp"
#include "alsim/json_io.hpp"

namespace {

std::vector<alsim::RunMode> parse_modes(const std::string& csv) {
  std::vector<alsim::RunMode> modes;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) modes.push_back(alsim::mode_from_name(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (modes.empty()) throw alsim::ConfigError("modes", "no modes given");
  return modes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anytime-learning simulation harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, modes_csv = "baseline,anytime";
  std::string mode_override, save_cases, load_cases;
  bool parallel = false;
  int window = 10;

  CLI::App* run = app.add_subcommand("run", "run one experiment mode");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--mode", mode_override, "override the config's mode");
  run->add_option("--save-cases", save_cases, "write the case base here");
  run->add_option("--load-cases", load_cases, "preload the case base");
  run->add_flag("--parallel", parallel, "evaluate runs in parallel");

  CLI::App* compare = app.add_subcommand("compare", "run several modes on one config");
  compare->add_option("--config", config_path, "experiment config file")->required();
  compare->add_option("--modes", modes_csv, "comma separated mode list");
  compare->add_option("--out", out_path, "output CSV path")->required();
  compare->add_flag("--parallel", parallel, "evaluate runs in parallel");

  CLI::App* summarize = app.add_subcommand("summarize", "per-phase stats from a CSV");
  summarize->add_option("csv", csv_path, "input CSV")->required();
  summarize->add_option("--window", window, "moving-average window");

  CLI::App* plot = app.add_subcommand("plot", "render an SVG performance plot");
  plot->add_option("csv", csv_path, "input CSV")->required();
  plot->add_option("--out", out_path, "output SVG path")->required();
  plot->add_option("--window", window, "moving-average window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      alsim::ExperimentConfig cfg = alsim::load_config(config_path);
      if (!mode_override.empty()) cfg.mode = alsim::mode_from_name(mode_override);
      alsim::RunOptions opts;
      opts.parallel = parallel;
      if (!load_cases.empty()) opts.load_cases = load_cases;
      if (!save_cases.empty()) opts.save_cases = save_cases;
      alsim::run_experiment_to_file(cfg, {cfg.mode}, out_path, opts);
    } else if (compare->parsed()) {
      const alsim::ExperimentConfig cfg = alsim::load_config(config_path);
      alsim::RunOptions opts;
      opts.parallel = parallel;
      alsim::run_experiment_to_file(cfg, parse_modes(modes_csv), out_path, opts);
    } else if (summarize->parsed()) {
      const std::string csv = alsim::jsonio::read_file(csv_path);
      std::cout << alsim::format_summary(alsim::summarize(csv, window));
    } else if (plot->parsed()) {
      const std::string csv = alsim::jsonio::read_file(csv_path);
      alsim::emit_plot(csv, out_path, window);
    }
  } catch (const alsim::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const alsim::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
