#include "masterysim/afm_fit.hpp"
#include "masterysim/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void print_errors(const std::vector<std::string>& errors) {
  for (const auto& error : errors) {
    std::cerr << "error: " << error << "\n";
  }
}

int run_command(const std::string& config_path, const masterysim::CliOverrides& overrides) {
  auto validation = masterysim::validate_config(config_path);
  if (!validation.ok()) {
    print_errors(validation.errors);
    return kExitConfig;
  }
  auto config = std::move(*validation.config);
  const auto override_errors = masterysim::apply_overrides(config, overrides);
  if (!override_errors.empty()) {
    print_errors(override_errors);
    return kExitConfig;
  }
  const auto input_errors = masterysim::validate_inputs(config);
  if (!input_errors.empty()) {
    print_errors(input_errors);
    return kExitConfig;
  }
  const int status = masterysim::run_experiment(config);
  if (status == 0) {
    std::cout << "wrote " << (config.output_dir / "students.csv").string() << ", summary.json, "
              << "fig2_data.csv, fig3_data.csv" << (config.trace ? ", trace.csv" : "") << "\n";
  }
  return status == 0 ? kExitOk : kExitRuntime;
}

int validate_command(const std::string& config_path) {
  auto validation = masterysim::validate_config(config_path);
  if (!validation.ok()) {
    print_errors(validation.errors);
    return kExitConfig;
  }
  const auto input_errors = masterysim::validate_inputs(*validation.config);
  if (!input_errors.empty()) {
    print_errors(input_errors);
    return kExitConfig;
  }
  const auto& config = *validation.config;
  std::cout << "config ok: " << config.selectors.size() << " selector(s) x "
            << config.ff_modes.size() << " ff mode(s) = " << config.n_conditions()
            << " condition(s), " << config.n_students << " students\n";
  return kExitOk;
}

int fit_command(const std::string& log_path, const std::string& out_path,
                const masterysim::FitConfig& fit_config) {
  masterysim::StepLog log;
  try {
    log = masterysim::load_step_log(log_path);
  } catch (const masterysim::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto result = masterysim::fit(log, fit_config);
    for (const auto& skill : result.separable_skills) {
      std::cerr << "warning: skill '" << skill
                << "' has only one response class; its intercept is pinned by the L2 penalty\n";
    }
    if (!result.converged) {
      std::cerr << "warning: fit did not converge within " << fit_config.max_iterations
                << " iterations (final objective " << result.neg_log_likelihood << ")\n";
    }
    nlohmann::json fit_info;
    fit_info["converged"] = result.converged;
    fit_info["iterations"] = result.iterations;
    fit_info["neg_log_likelihood"] = result.neg_log_likelihood;
    fit_info["lambda"] = fit_config.lambda;
    fit_info["tol"] = fit_config.tol;
    fit_info["n_students"] = log.n_students();
    fit_info["n_rows"] = log.rows.size();
    masterysim::save_afm_params(out_path, result.params, log.skill_model, fit_info.dump());
    std::cout << "wrote " << out_path << " (" << log.n_skills() << " skills, "
              << (result.converged ? "converged" : "not converged") << ", "
              << result.iterations << " iterations)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mastery-practice simulator: policy comparison with fast-forwarding"};
  app.require_subcommand(1);

  std::string config_path;
  int n_students = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool trace = false;
  int jobs = 0;

  auto* run = app.add_subcommand("run", "Run the configured experiment");
  run->add_option("--config", config_path, "Experiment config file")->required();
  auto* run_n = run->add_option("--n-students", n_students, "Override student count");
  auto* run_seed = run->add_option("--seed", seed, "Override master seed");
  auto* run_out = run->add_option("--out", out_dir, "Override output directory");
  auto* run_trace = run->add_flag("--trace", trace, "Emit per-event trace.csv");
  auto* run_jobs = run->add_option("--jobs", jobs, "Worker count (0 = auto)");

  auto* validate = app.add_subcommand("validate", "Validate a config file and its inputs");
  validate->add_option("--config", config_path, "Experiment config file")->required();

  std::string log_path;
  std::string params_out = "afm_params.json";
  masterysim::FitConfig fit_config;
  auto* fit = app.add_subcommand("fit", "Fit response-model parameters from a step log");
  fit->add_option("--log", log_path, "Step log (student_id,skill,opportunity,correct)")
      ->required();
  fit->add_option("--out", params_out, "Output parameter file");
  fit->add_option("--lambda", fit_config.lambda, "L2 penalty weight");
  fit->add_option("--tol", fit_config.tol, "Gradient max-norm tolerance");
  fit->add_option("--max-iters", fit_config.max_iterations, "Iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    masterysim::CliOverrides overrides;
    if (run_n->count() > 0) overrides.n_students = n_students;
    if (run_seed->count() > 0) overrides.seed = seed;
    if (run_out->count() > 0) overrides.output_dir = out_dir;
    if (run_trace->count() > 0) overrides.trace = trace;
    if (run_jobs->count() > 0) overrides.jobs = jobs;
    return run_command(config_path, overrides);
  }
  if (validate->parsed()) {
    return validate_command(config_path);
  }
  return fit_command(log_path, params_out, fit_config);
}
