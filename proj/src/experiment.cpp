#include "masterysim/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace masterysim {
namespace {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "";
  }
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) {
    return std::to_string(value);
  }
  return std::string(buffer, ptr);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << value;
  return out.str();
}

// --- config parsing ---------------------------------------------------------

const std::vector<std::string> kTopLevelKeys = {
    "pool_path", "afm_params_path", "bkt",         "bkt_overrides", "n_students",
    "theta_mean", "theta_sd",       "regime",      "budget",        "selectors",
    "ff_modes",   "master_seed",    "output_dir",  "trace",         "parallelism"};

const std::vector<std::string> kBktKeys = {"p_init", "p_learn", "p_guess", "p_slip",
                                           "mastery_threshold"};

bool read_bkt_block(const json& block, const std::string& label, BktParams& params,
                    std::vector<std::string>& errors) {
  if (!block.is_object()) {
    errors.push_back(label + " must be an object");
    return false;
  }
  bool ok = true;
  for (const auto& [key, value] : block.items()) {
    if (std::find(kBktKeys.begin(), kBktKeys.end(), key) == kBktKeys.end()) {
      errors.push_back(label + ": unknown key '" + key + "'");
      ok = false;
      continue;
    }
    if (!value.is_number()) {
      errors.push_back(label + "." + key + " must be a number");
      ok = false;
      continue;
    }
    const double v = value.get<double>();
    if (key == "p_init") params.p_init = v;
    else if (key == "p_learn") params.p_learn = v;
    else if (key == "p_guess") params.p_guess = v;
    else if (key == "p_slip") params.p_slip = v;
    else params.mastery_threshold = v;
  }
  return ok;
}

std::vector<std::string> check_resolved(const ExperimentConfig& config) {
  std::vector<std::string> errors;
  if (config.n_students < 1) {
    errors.push_back("n_students must be >= 1 (got " + std::to_string(config.n_students) + ")");
  }
  if (config.selectors.empty()) {
    errors.push_back("selectors must be non-empty");
  }
  if (config.ff_modes.empty()) {
    errors.push_back("ff_modes must be non-empty");
  }
  if (config.regime.kind == RegimeKind::StepBudget && config.regime.budget < 1) {
    errors.push_back("budget must be >= 1 under the step_budget regime");
  }
  if (config.parallelism < 0) {
    errors.push_back("parallelism must be >= 0");
  }
  for (const auto& e : bkt_params_errors(config.bkt)) {
    errors.push_back(e);
  }
  for (const auto& [name, params] : config.bkt_overrides) {
    for (const auto& e : bkt_params_errors(params)) {
      errors.push_back("bkt_overrides['" + name + "']: " + e);
    }
  }
  if (!config.pool_path.empty() && !std::filesystem::exists(config.pool_path)) {
    errors.push_back("pool_path does not exist: " + config.pool_path.string());
  }
  if (!config.afm_params_path.empty() && !std::filesystem::exists(config.afm_params_path)) {
    errors.push_back("afm_params_path does not exist: " + config.afm_params_path.string());
  }
  if (config.theta_sd.has_value() && !(*config.theta_sd > 0.0)) {
    errors.push_back("theta_sd must be > 0");
  }
  return errors;
}

} // namespace

ConfigValidation validate_config(const std::filesystem::path& path) {
  ConfigValidation out;
  std::ifstream in(path);
  if (!in) {
    out.errors.push_back("cannot open config file: " + path.string());
    return out;
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    out.errors.push_back(path.string() + ": " + e.what());
    return out;
  }
  if (!doc.is_object()) {
    out.errors.push_back(path.string() + ": config must be a JSON object");
    return out;
  }

  ExperimentConfig config;
  config.selectors = {SelectorKind::Random, SelectorKind::Deterministic, SelectorKind::MasteryEasy,
                      SelectorKind::MasteryHard, SelectorKind::FocusedPractice};
  config.ff_modes = {false, true};
  auto& errors = out.errors;

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find(kTopLevelKeys.begin(), kTopLevelKeys.end(), key) == kTopLevelKeys.end()) {
      errors.push_back("unknown key '" + key + "'");
    }
  }

  const auto base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  auto resolve = [&base_dir](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base_dir / fp;
  };

  auto require_string = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key)) {
      errors.push_back(std::string("missing required key '") + key + "'");
      return std::nullopt;
    }
    if (!doc[key].is_string()) {
      errors.push_back(std::string("'") + key + "' must be a string");
      return std::nullopt;
    }
    return doc[key].get<std::string>();
  };

  if (const auto p = require_string("pool_path")) config.pool_path = resolve(*p);
  if (const auto p = require_string("afm_params_path")) config.afm_params_path = resolve(*p);

  if (doc.contains("bkt")) {
    read_bkt_block(doc["bkt"], "bkt", config.bkt, errors);
  }
  if (doc.contains("bkt_overrides")) {
    if (!doc["bkt_overrides"].is_object()) {
      errors.push_back("bkt_overrides must be an object keyed by skill name");
    } else {
      for (const auto& [name, block] : doc["bkt_overrides"].items()) {
        BktParams params = config.bkt;
        if (read_bkt_block(block, "bkt_overrides['" + name + "']", params, errors)) {
          config.bkt_overrides.emplace_back(name, params);
        }
      }
    }
  }
  if (doc.contains("n_students")) {
    if (!doc["n_students"].is_number_integer()) {
      errors.push_back("n_students must be an integer");
    } else {
      config.n_students = doc["n_students"].get<int>();
    }
  }
  for (const char* key : {"theta_mean", "theta_sd"}) {
    if (doc.contains(key)) {
      if (!doc[key].is_number()) {
        errors.push_back(std::string("'") + key + "' must be a number");
      } else if (std::string(key) == "theta_mean") {
        config.theta_mean = doc[key].get<double>();
      } else {
        config.theta_sd = doc[key].get<double>();
      }
    }
  }
  if (doc.contains("regime")) {
    if (!doc["regime"].is_string()) {
      errors.push_back("regime must be 'run_to_mastery' or 'step_budget'");
    } else {
      const std::string regime = doc["regime"].get<std::string>();
      if (regime == "run_to_mastery") {
        config.regime = Regime::run_to_mastery();
      } else if (regime == "step_budget") {
        if (!doc.contains("budget") || !doc["budget"].is_number_integer()) {
          errors.push_back("regime 'step_budget' requires an integer 'budget' key");
        } else {
          config.regime = Regime::step_budget(doc["budget"].get<int>());
        }
      } else {
        errors.push_back("regime must be 'run_to_mastery' or 'step_budget' (got '" + regime +
                         "')");
      }
    }
  } else if (doc.contains("budget")) {
    errors.push_back("'budget' is only valid with regime 'step_budget'");
  }
  if (doc.contains("selectors")) {
    if (!doc["selectors"].is_array() || doc["selectors"].empty()) {
      errors.push_back("selectors must be a non-empty array of selector names");
    } else {
      config.selectors.clear();
      for (const auto& entry : doc["selectors"]) {
        if (!entry.is_string()) {
          errors.push_back("selectors entries must be strings");
          continue;
        }
        const auto kind = parse_selector(entry.get<std::string>());
        if (!kind.has_value()) {
          errors.push_back("unknown selector '" + entry.get<std::string>() + "'");
        } else if (std::find(config.selectors.begin(), config.selectors.end(), *kind) !=
                   config.selectors.end()) {
          errors.push_back("selector '" + entry.get<std::string>() + "' listed twice");
        } else {
          config.selectors.push_back(*kind);
        }
      }
    }
  }
  if (doc.contains("ff_modes")) {
    if (!doc["ff_modes"].is_array() || doc["ff_modes"].empty()) {
      errors.push_back("ff_modes must be a non-empty array of booleans");
    } else {
      config.ff_modes.clear();
      for (const auto& entry : doc["ff_modes"]) {
        if (!entry.is_boolean()) {
          errors.push_back("ff_modes entries must be booleans");
        } else {
          config.ff_modes.push_back(entry.get<bool>());
        }
      }
      if (config.ff_modes.size() > 2 ||
          (config.ff_modes.size() == 2 && config.ff_modes[0] == config.ff_modes[1])) {
        errors.push_back("ff_modes must not repeat a mode");
      }
    }
  }
  if (doc.contains("master_seed")) {
    if (!doc["master_seed"].is_number_integer()) {
      errors.push_back("master_seed must be an integer");
    } else {
      config.master_seed = doc["master_seed"].get<std::uint64_t>();
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) {
      errors.push_back("output_dir must be a string");
    } else {
      config.output_dir = resolve(doc["output_dir"].get<std::string>());
    }
  }
  if (doc.contains("trace")) {
    if (!doc["trace"].is_boolean()) {
      errors.push_back("trace must be a boolean");
    } else {
      config.trace = doc["trace"].get<bool>();
    }
  }
  if (doc.contains("parallelism")) {
    if (!doc["parallelism"].is_number_integer()) {
      errors.push_back("parallelism must be an integer (0 = auto)");
    } else {
      config.parallelism = doc["parallelism"].get<int>();
    }
  }

  for (const auto& e : check_resolved(config)) {
    errors.push_back(e);
  }
  if (errors.empty()) {
    out.config = std::move(config);
  }
  return out;
}

std::vector<std::string> apply_overrides(ExperimentConfig& config, const CliOverrides& overrides) {
  if (overrides.n_students.has_value()) config.n_students = *overrides.n_students;
  if (overrides.seed.has_value()) config.master_seed = *overrides.seed;
  if (overrides.output_dir.has_value()) config.output_dir = *overrides.output_dir;
  if (overrides.trace.has_value()) config.trace = *overrides.trace;
  if (overrides.jobs.has_value()) config.parallelism = *overrides.jobs;
  return check_resolved(config);
}

namespace {

struct LoadedInputs {
  SkillModel skill_model;
  ProblemPool pool;
  BktParamTable bkt_table;
  AfmParams afm;
};

LoadedInputs load_inputs(const ExperimentConfig& config) {
  LoadedInputs inputs;
  inputs.skill_model = load_skill_model(config.pool_path);
  inputs.pool = load_pool(config.pool_path, inputs.skill_model);
  inputs.afm = load_afm_params(config.afm_params_path, inputs.skill_model);
  if (config.theta_mean.has_value()) inputs.afm.theta_mean = *config.theta_mean;
  if (config.theta_sd.has_value()) inputs.afm.theta_sd = *config.theta_sd;

  inputs.bkt_table = BktParamTable(config.bkt, inputs.skill_model.size());
  for (const auto& [name, params] : config.bkt_overrides) {
    const auto index = inputs.skill_model.index_of(name);
    if (!index.has_value()) {
      throw SchemaError("bkt_overrides: skill '" + name + "' is not in the skill model");
    }
    inputs.bkt_table.set_override(*index, params);
  }

  // Every skill must be practicable, or run-to-mastery sessions cannot finish.
  std::vector<bool> covered(static_cast<std::size_t>(inputs.skill_model.size()), false);
  for (const Problem& problem : inputs.pool.problems()) {
    for (const Step& step : problem.steps) {
      covered[static_cast<std::size_t>(step.skill)] = true;
    }
  }
  for (int i = 0; i < inputs.skill_model.size(); ++i) {
    if (!covered[static_cast<std::size_t>(i)]) {
      throw SchemaError("pool does not cover skill '" + inputs.skill_model.name(i) + "'");
    }
  }
  return inputs;
}

} // namespace

std::vector<std::string> validate_inputs(const ExperimentConfig& config) {
  try {
    (void)load_inputs(config);
  } catch (const std::exception& e) {
    return {e.what()};
  }
  return {};
}

namespace {

std::string make_trace_lines(const SessionRecord& record, const SkillModel& skill_model,
                             SelectorKind selector, bool ff, int student_index) {
  std::ostringstream out;
  const std::string prefix = std::to_string(student_index) + ',' + selector_name(selector) + ',' +
                             (ff ? "1" : "0") + ',';
  for (const StepEvent& event : record.events) {
    out << prefix << event.problem_id << ',' << event.step_position << ','
        << skill_model.name(event.skill) << ',' << (event.was_mastered_before ? 1 : 0) << ',';
    if (event.correct.has_value()) {
      out << (*event.correct ? 1 : 0);
    }
    out << ',' << (event.fast_forwarded ? 1 : 0) << '\n';
  }
  return out.str();
}

} // namespace

ExperimentResult run_conditions(const ExperimentConfig& config) {
  const LoadedInputs inputs = load_inputs(config);

  struct Condition {
    SelectorKind selector;
    bool ff;
    std::uint64_t session_seed;
  };
  std::vector<Condition> conditions;
  for (const SelectorKind selector : config.selectors) {
    for (const bool ff : config.ff_modes) {
      // The fast-forward flag is deliberately absent from the key: paired
      // arms share student streams (common random numbers).
      conditions.push_back(Condition{
          selector, ff,
          RandomStream::derive_key({config.master_seed, selector_condition_id(selector)})});
    }
  }

  const auto n_conditions = conditions.size();
  const auto n_students = static_cast<std::size_t>(config.n_students);
  std::vector<std::vector<StudentMetrics>> metrics(n_conditions);
  std::vector<std::vector<std::string>> traces(n_conditions);
  for (std::size_t c = 0; c < n_conditions; ++c) {
    metrics[c].resize(n_students);
    if (config.trace) {
      traces[c].resize(n_students);
    }
  }

  unsigned workers = config.parallelism > 0 ? static_cast<unsigned>(config.parallelism)
                                            : std::thread::hardware_concurrency();
  if (workers == 0) {
    workers = 1;
  }

  const std::size_t total_tasks = n_conditions * n_students;
  std::atomic<std::size_t> next_task{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t task = next_task.fetch_add(1, std::memory_order_relaxed);
      if (task >= total_tasks) {
        return;
      }
      const std::size_t c = task / n_students;
      const auto student = static_cast<int>(task % n_students);
      const Condition& condition = conditions[c];
      try {
        SessionConfig session;
        session.regime = config.regime;
        session.selector = condition.selector;
        session.fast_forward = condition.ff;
        session.master_seed = condition.session_seed;
        session.student_index = student;
        const SessionRecord record =
            run_session(session, inputs.pool, inputs.bkt_table, inputs.afm);
        metrics[c][static_cast<std::size_t>(student)] =
            compute_student_metrics(record, inputs.skill_model);
        if (config.trace) {
          traces[c][static_cast<std::size_t>(student)] = make_trace_lines(
              record, inputs.skill_model, condition.selector, condition.ff, student);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) {
    pool.emplace_back(worker);
  }
  for (auto& thread : pool) {
    thread.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  ExperimentResult result;
  result.conditions.reserve(n_conditions);
  for (std::size_t c = 0; c < n_conditions; ++c) {
    ConditionResult condition_result;
    condition_result.selector = conditions[c].selector;
    condition_result.fast_forward = conditions[c].ff;
    condition_result.summary = summarize(metrics[c], conditions[c].selector, conditions[c].ff);
    condition_result.students = std::move(metrics[c]);
    result.conditions.push_back(std::move(condition_result));
  }

  for (const SelectorKind selector : config.selectors) {
    const ConditionResult* with_ff = nullptr;
    const ConditionResult* without_ff = nullptr;
    for (const auto& condition : result.conditions) {
      if (condition.selector != selector) continue;
      (condition.fast_forward ? with_ff : without_ff) = &condition;
    }
    if (with_ff == nullptr || without_ff == nullptr) {
      continue;
    }
    ReductionEntry entry;
    entry.report = reduction_report(with_ff->summary, without_ff->summary);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_students; ++i) {
      sum += static_cast<double>(without_ff->students[i].overpractice_total -
                                 with_ff->students[i].overpractice_total);
    }
    entry.mean_paired_diff = sum / static_cast<double>(n_students);
    if (n_students >= 2) {
      double sq = 0.0;
      for (std::size_t i = 0; i < n_students; ++i) {
        const double d = static_cast<double>(without_ff->students[i].overpractice_total -
                                             with_ff->students[i].overpractice_total) -
                         entry.mean_paired_diff;
        sq += d * d;
      }
      const double sd = std::sqrt(sq / static_cast<double>(n_students - 1));
      entry.se_paired_diff = sd / std::sqrt(static_cast<double>(n_students));
    }
    result.reductions.push_back(entry);
  }

  if (config.trace) {
    for (std::size_t c = 0; c < n_conditions; ++c) {
      for (std::size_t s = 0; s < n_students; ++s) {
        if (!traces[c][s].empty()) {
          result.trace_lines.push_back(std::move(traces[c][s]));
        }
      }
    }
  }
  return result;
}

namespace {

json resolved_config_json(const ExperimentConfig& config) {
  json doc;
  doc["pool_path"] = config.pool_path.string();
  doc["afm_params_path"] = config.afm_params_path.string();
  doc["bkt"] = {{"p_init", config.bkt.p_init},
                {"p_learn", config.bkt.p_learn},
                {"p_guess", config.bkt.p_guess},
                {"p_slip", config.bkt.p_slip},
                {"mastery_threshold", config.bkt.mastery_threshold}};
  if (!config.bkt_overrides.empty()) {
    json overrides = json::object();
    for (const auto& [name, params] : config.bkt_overrides) {
      overrides[name] = {{"p_init", params.p_init},
                         {"p_learn", params.p_learn},
                         {"p_guess", params.p_guess},
                         {"p_slip", params.p_slip},
                         {"mastery_threshold", params.mastery_threshold}};
    }
    doc["bkt_overrides"] = std::move(overrides);
  }
  doc["n_students"] = config.n_students;
  if (config.theta_mean.has_value()) doc["theta_mean"] = *config.theta_mean;
  if (config.theta_sd.has_value()) doc["theta_sd"] = *config.theta_sd;
  doc["regime"] =
      config.regime.kind == RegimeKind::RunToMastery ? "run_to_mastery" : "step_budget";
  if (config.regime.kind == RegimeKind::StepBudget) {
    doc["budget"] = config.regime.budget;
  }
  json selectors = json::array();
  for (const SelectorKind kind : config.selectors) {
    selectors.push_back(selector_name(kind));
  }
  doc["selectors"] = std::move(selectors);
  doc["ff_modes"] = config.ff_modes;
  doc["master_seed"] = config.master_seed;
  doc["trace"] = config.trace;
  return doc;
}

class OutputFile {
public:
  OutputFile(const std::filesystem::path& final_path)
      : final_path_(final_path), partial_path_(final_path.string() + ".partial"),
        stream_(partial_path_) {
    if (!stream_) {
      throw std::runtime_error("cannot write file: " + partial_path_.string());
    }
  }

  std::ofstream& stream() { return stream_; }

  void commit() {
    stream_.close();
    std::filesystem::rename(partial_path_, final_path_);
  }

private:
  std::filesystem::path final_path_;
  std::filesystem::path partial_path_;
  std::ofstream stream_;
};

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const SkillModel& skill_model) {
  std::filesystem::create_directories(config.output_dir);

  std::vector<OutputFile> files;
  files.reserve(5);

  auto& students = files.emplace_back(config.output_dir / "students.csv").stream();
  students << "student,selector,ff,attempted_steps,overpractice_total,underpractice,"
              "mastered_all,steps_to_mastery";
  for (int i = 0; i < skill_model.size(); ++i) {
    students << ",op_" << skill_model.name(i);
  }
  students << '\n';
  for (const ConditionResult& condition : result.conditions) {
    for (std::size_t s = 0; s < condition.students.size(); ++s) {
      const StudentMetrics& m = condition.students[s];
      students << s << ',' << selector_name(condition.selector) << ','
               << (condition.fast_forward ? 1 : 0) << ',' << m.attempted_steps << ','
               << m.overpractice_total << ',' << m.underpractice << ',' << (m.mastered_all ? 1 : 0)
               << ',';
      if (m.steps_to_mastery.has_value()) {
        students << *m.steps_to_mastery;
      }
      for (int i = 0; i < skill_model.size(); ++i) {
        students << ',' << m.overpractice_by_skill[i];
      }
      students << '\n';
    }
  }

  auto& fig2 = files.emplace_back(config.output_dir / "fig2_data.csv").stream();
  fig2 << "selector,ff,skill,mean_overpractice\n";
  for (const ConditionResult& condition : result.conditions) {
    for (int i = 0; i < skill_model.size(); ++i) {
      fig2 << selector_name(condition.selector) << ',' << (condition.fast_forward ? 1 : 0) << ','
           << skill_model.name(i) << ','
           << format_double(condition.summary.per_skill_mean_overpractice[i]) << '\n';
    }
  }

  auto& fig3 = files.emplace_back(config.output_dir / "fig3_data.csv").stream();
  fig3 << "selector,ff,mean_overpractice,sd_overpractice,two_sd,percent_reduction\n";
  for (const ConditionResult& condition : result.conditions) {
    fig3 << selector_name(condition.selector) << ',' << (condition.fast_forward ? 1 : 0) << ','
         << format_double(condition.summary.mean_overpractice) << ','
         << format_double(condition.summary.sd_overpractice) << ','
         << format_double(2.0 * condition.summary.sd_overpractice) << ',';
    if (condition.fast_forward) {
      for (const ReductionEntry& entry : result.reductions) {
        if (entry.report.selector == condition.selector && entry.report.applicable) {
          fig3 << format_double(entry.report.percent_reduction);
          break;
        }
      }
    }
    fig3 << '\n';
  }

  json summary;
  json metadata;
  metadata["tool"] = "masterysim";
  metadata["master_seed"] = config.master_seed;
  const json resolved = resolved_config_json(config);
  metadata["config"] = resolved;
  metadata["config_digest"] = hex64(fnv1a64(resolved.dump()));
  metadata["common_random_numbers"] = true;
  metadata["stream_scheme"] = "counter(key = mix(master_seed, selector_id, student, purpose))";
  summary["metadata"] = std::move(metadata);

  json conditions = json::array();
  for (const ConditionResult& condition : result.conditions) {
    const ConditionSummary& s = condition.summary;
    json entry;
    entry["selector"] = selector_name(s.selector);
    entry["ff"] = s.fast_forward;
    entry["n_students"] = s.n_students;
    entry["mean_overpractice"] = s.mean_overpractice;
    entry["sd_overpractice"] = s.sd_overpractice;
    entry["mean_underpractice"] = s.mean_underpractice;
    entry["sd_underpractice"] = s.sd_underpractice;
    entry["sd_well_defined"] = s.sd_well_defined;
    entry["n_mastered"] = s.n_mastered;
    if (s.n_mastered > 0) {
      entry["mean_steps_to_mastery"] = s.mean_steps_to_mastery;
    } else {
      entry["mean_steps_to_mastery"] = nullptr;
    }
    json per_skill = json::object();
    for (int i = 0; i < skill_model.size(); ++i) {
      per_skill[skill_model.name(i)] = s.per_skill_mean_overpractice[i];
    }
    entry["per_skill_mean_overpractice"] = std::move(per_skill);
    conditions.push_back(std::move(entry));
  }
  summary["conditions"] = std::move(conditions);

  json reductions = json::array();
  for (const ReductionEntry& entry : result.reductions) {
    json r;
    r["selector"] = selector_name(entry.report.selector);
    r["mean_overpractice_without_ff"] = entry.report.mean_without;
    r["mean_overpractice_with_ff"] = entry.report.mean_with;
    r["applicable"] = entry.report.applicable;
    if (entry.report.applicable) {
      r["percent_reduction"] = entry.report.percent_reduction;
    } else {
      r["percent_reduction"] = nullptr;
    }
    if (std::isnan(entry.report.effect_size_sd)) {
      r["effect_size_sd"] = nullptr;
    } else {
      r["effect_size_sd"] = entry.report.effect_size_sd;
    }
    r["mean_paired_diff"] = entry.mean_paired_diff;
    r["se_paired_diff"] = entry.se_paired_diff;
    reductions.push_back(std::move(r));
  }
  summary["reductions"] = std::move(reductions);

  auto& summary_file = files.emplace_back(config.output_dir / "summary.json").stream();
  summary_file << summary.dump(2) << '\n';

  if (config.trace) {
    auto& trace = files.emplace_back(config.output_dir / "trace.csv").stream();
    trace << "student,selector,ff,problem,step,skill,mastered_before,correct,fast_forwarded\n";
    for (const std::string& lines : result.trace_lines) {
      trace << lines;
    }
  }

  for (auto& file : files) {
    file.commit();
  }
}

} // namespace

int run_experiment(const ExperimentConfig& config) {
  try {
    const LoadedInputs inputs = load_inputs(config);
    const ExperimentResult result = run_conditions(config);
    write_outputs(config, result, inputs.skill_model);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace masterysim
