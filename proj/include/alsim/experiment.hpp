#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alsim/anytime.hpp"
#include "alsim/config.hpp"

namespace alsim {

// The exact CSV column set; golden-file tested.
inline constexpr const char* kCsvHeader =
    "mode,seed,episode,phase,success,published_fitness,model_epoch,change_flag,"
    "monitor_estimate,case_hit";

// Doubles are printed with 6 significant digits, '.' decimal separator.
std::string fmt_double(double v);

struct RunOptions {
  bool parallel = false;
  std::optional<std::string> load_cases;  // preload the case base from this file
  std::optional<std::string> save_cases;  // write the merged case base here
};

// Runs every (mode, seed) combination and renders the CSV. Rows are ordered
// by the given mode order, then seed order, then episode, so identical
// inputs give byte-identical output even with --parallel.
std::string experiment_csv(const ExperimentConfig& cfg, const std::vector<RunMode>& modes,
                           const RunOptions& opts = {});

// experiment_csv + file write; a failed write leaves no partial output.
void run_experiment_to_file(const ExperimentConfig& cfg, const std::vector<RunMode>& modes,
                            const std::string& out_path, const RunOptions& opts = {});

struct CsvRow {
  std::string mode;
  std::uint64_t seed = 0;
  long episode = 0;
  int phase = 0;
  double success = 0.0;
  double published_fitness = 0.0;
  long model_epoch = 0;
  bool change_flag = false;
  std::optional<double> monitor_estimate;
  std::optional<bool> case_hit;
};

// Strict parser for the schema above; throws FormatError with the line number.
std::vector<CsvRow> parse_csv(const std::string& text);

struct PhaseSummary {
  std::string mode;
  int phase = 0;
  double first_tenth_mean = 0.0;   // across seeds
  double last_quarter_mean = 0.0;  // across seeds
  // Episodes until the moving average regains the pre-change level, per
  // seed (seed order); empty for the first phase.
  std::vector<long> recovery_per_seed;
  double recovery_mean = 0.0;
};

struct SummaryStats {
  int window = 10;
  std::vector<PhaseSummary> phases;  // grouped by mode, then phase
};

// Pure function of the CSV text and the moving-average window.
SummaryStats summarize(const std::string& csv_text, int window);
std::string format_summary(const SummaryStats& stats);

// Self-contained SVG: one moving-average success polyline per mode, dashed
// vertical lines at the schedule change episodes, labeled axes.
std::string render_plot_svg(const std::string& csv_text, int window);
void emit_plot(const std::string& csv_text, const std::string& out_path, int window);

}  // namespace alsim
