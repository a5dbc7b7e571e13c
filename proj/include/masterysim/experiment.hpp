#pragma once

#include "masterysim/metrics.hpp"
#include "masterysim/session.hpp"

#include <filesystem>

namespace masterysim {

struct ExperimentConfig {
  std::filesystem::path pool_path;
  std::filesystem::path afm_params_path;
  BktParams bkt;
  std::vector<std::pair<std::string, BktParams>> bkt_overrides;  // keyed by skill name
  int n_students = 10000;
  std::optional<double> theta_mean;  // override the AFM file's distribution
  std::optional<double> theta_sd;
  Regime regime = Regime::run_to_mastery();
  std::vector<SelectorKind> selectors;
  std::vector<bool> ff_modes;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "out";
  bool trace = false;
  int parallelism = 0;  // 0 = auto

  int n_conditions() const {
    return static_cast<int>(selectors.size() * ff_modes.size());
  }
};

struct ConfigValidation {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // all detected problems, not just the first

  bool ok() const { return errors.empty(); }
};

// Parses and fully resolves a config file, applying defaults. Relative paths
// are resolved against the config file's directory. Unknown keys are errors.
ConfigValidation validate_config(const std::filesystem::path& path);

struct CliOverrides {
  std::optional<int> n_students;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<bool> trace;
  std::optional<int> jobs;
};

// Re-checks invariants after overrides are applied.
std::vector<std::string> apply_overrides(ExperimentConfig& config, const CliOverrides& overrides);

// Loads and cross-validates the referenced pool and AFM files (skill
// coverage, matching skill sets, override names). Returns all problems found.
std::vector<std::string> validate_inputs(const ExperimentConfig& config);

struct ConditionResult {
  SelectorKind selector = SelectorKind::MasteryHard;
  bool fast_forward = false;
  std::vector<StudentMetrics> students;  // ordered by student_index
  ConditionSummary summary;
};

struct ReductionEntry {
  ReductionReport report;
  double mean_paired_diff = 0.0;  // mean over students of (no-FF - FF) overpractice
  double se_paired_diff = 0.0;
};

struct ExperimentResult {
  std::vector<ConditionResult> conditions;  // config enumeration order
  std::vector<ReductionEntry> reductions;
  std::vector<std::string> trace_lines;  // per-event rows when tracing
};

// Simulates all (selector, ff) conditions. Student streams are keyed on
// (master_seed, selector id, student_index), so paired FF / no-FF arms share
// draws and results are independent of worker count and of which other
// conditions run.
ExperimentResult run_conditions(const ExperimentConfig& config);

// run_conditions plus file emission into output_dir: students.csv,
// summary.json, fig2_data.csv, fig3_data.csv, and trace.csv when tracing.
// Returns a process exit status (0 ok, 1 runtime failure). On failure the
// partially written files keep a .partial suffix.
int run_experiment(const ExperimentConfig& config);

} // namespace masterysim
