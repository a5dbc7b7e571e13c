#pragma once

#include "masterysim/afm.hpp"
#include "masterysim/step_log.hpp"

namespace masterysim {

struct FitConfig {
  double lambda = 1e-3;       // L2 weight on theta and beta (not gamma)
  double tol = 1e-5;          // projected-gradient max-norm
  int max_iterations = 5000;  // accepted line-search steps
  bool record_objective = false;
};

struct AfmFitResult {
  AfmParams params;  // fitted beta/gamma; theta_mean/theta_sd from theta_hat
  Vector theta_hat;  // per student, ordered as StepLog::student_ids
  double neg_log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> separable_skills;  // all-correct or all-incorrect
  std::vector<double> objective_trace;        // filled when record_objective
};

// Penalized negative log-likelihood of the response log:
//   sum_rows -[y ln p + (1-y) ln(1-p)] + lambda (|theta|^2 + |beta|^2)
// with p = sigmoid(theta_i + beta_k + gamma_k * T). Formulated via softplus,
// so it is finite for all finite parameters.
double negative_log_likelihood(const StepLog& log, const AfmParams& params, const Vector& theta,
                               double lambda);

// Gradient with respect to [beta, gamma, theta], packed in that order.
Vector nll_gradient(const StepLog& log, const AfmParams& params, const Vector& theta,
                    double lambda);

// Full-batch projected gradient descent with backtracking line search.
// gamma is kept non-negative by projection. Deterministic.
AfmFitResult fit(const StepLog& log, const FitConfig& config = {});

} // namespace masterysim
