#include "masterysim/afm_fit.hpp"

#include <cmath>

namespace masterysim {
namespace {

// Parameter packing: [beta (K), gamma (K), theta (S)].
struct Packed {
  int n_skills = 0;
  int n_students = 0;

  int dim() const { return 2 * n_skills + n_students; }
  auto beta(Vector& x) const { return x.segment(0, n_skills); }
  auto gamma(Vector& x) const { return x.segment(n_skills, n_skills); }
  auto theta(Vector& x) const { return x.segment(2 * n_skills, n_students); }
  auto beta(const Vector& x) const { return x.segment(0, n_skills); }
  auto gamma(const Vector& x) const { return x.segment(n_skills, n_skills); }
  auto theta(const Vector& x) const { return x.segment(2 * n_skills, n_students); }
};

double objective(const StepLog& log, const Packed& p, const Vector& x, double lambda) {
  double value = 0.0;
  for (const StepLogRow& row : log.rows) {
    const double z = x[2 * p.n_skills + row.student] + x[row.skill] +
                     x[p.n_skills + row.skill] * static_cast<double>(row.opportunity);
    value += row.correct ? softplus(-z) : softplus(z);
  }
  value += lambda * (p.theta(x).squaredNorm() + p.beta(x).squaredNorm());
  return value;
}

Vector gradient(const StepLog& log, const Packed& p, const Vector& x, double lambda) {
  Vector g = Vector::Zero(p.dim());
  for (const StepLogRow& row : log.rows) {
    const double z = x[2 * p.n_skills + row.student] + x[row.skill] +
                     x[p.n_skills + row.skill] * static_cast<double>(row.opportunity);
    const double r = sigmoid(z) - (row.correct ? 1.0 : 0.0);
    g[row.skill] += r;
    g[p.n_skills + row.skill] += r * static_cast<double>(row.opportunity);
    g[2 * p.n_skills + row.student] += r;
  }
  g.segment(0, p.n_skills) += 2.0 * lambda * p.beta(x);
  g.segment(2 * p.n_skills, p.n_students) += 2.0 * lambda * p.theta(x);
  return g;
}

// Clamp gamma components to >= 0.
void project(const Packed& p, Vector& x) {
  for (int k = 0; k < p.n_skills; ++k) {
    x[p.n_skills + k] = std::max(x[p.n_skills + k], 0.0);
  }
}

// Gradient with blocked directions zeroed: a gamma pinned at 0 whose
// gradient pushes it negative contributes nothing.
double projected_gradient_max_norm(const Packed& p, const Vector& x, const Vector& g) {
  double max_norm = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const bool gamma_at_bound = i >= p.n_skills && i < 2 * p.n_skills && x[i] == 0.0 && g[i] > 0.0;
    if (!gamma_at_bound) {
      max_norm = std::max(max_norm, std::abs(g[i]));
    }
  }
  return max_norm;
}

// Per-coordinate curvature at the current point (diagonal of the Hessian
// plus the penalty). The objective's curvature differs by orders of magnitude
// between intercepts, slopes (whose rows carry T^2 factors), and per-student
// proficiencies, which stalls unscaled descent on larger logs; rescaling the
// descent direction by this diagonal keeps the line search productive.
Vector curvature_scaling(const StepLog& log, const Packed& p, const Vector& x, double lambda) {
  Vector d = Vector::Constant(p.dim(), 2.0 * lambda);
  d.segment(p.n_skills, p.n_skills).setZero();  // gamma is not penalized
  for (const StepLogRow& row : log.rows) {
    const double t = static_cast<double>(row.opportunity);
    const double z = x[2 * p.n_skills + row.student] + x[row.skill] +
                     x[p.n_skills + row.skill] * t;
    const double s = sigmoid(z);
    const double w = s * (1.0 - s);
    d[row.skill] += w;
    d[p.n_skills + row.skill] += w * t * t;
    d[2 * p.n_skills + row.student] += w;
  }
  // Floor relative to the stiffest coordinate: a saturated coordinate with
  // near-zero curvature would otherwise dominate the direction and force the
  // line search to crush the step for everyone else.
  const double floor = std::max(1e-3 * d.maxCoeff(), 1e-6);
  for (int i = 0; i < p.dim(); ++i) {
    d[i] = std::max(d[i], floor);
  }
  return d;
}

} // namespace

double negative_log_likelihood(const StepLog& log, const AfmParams& params, const Vector& theta,
                               double lambda) {
  Packed p{log.n_skills(), log.n_students()};
  Vector x(p.dim());
  p.beta(x) = params.beta;
  p.gamma(x) = params.gamma;
  p.theta(x) = theta;
  return objective(log, p, x, lambda);
}

Vector nll_gradient(const StepLog& log, const AfmParams& params, const Vector& theta,
                    double lambda) {
  Packed p{log.n_skills(), log.n_students()};
  Vector x(p.dim());
  p.beta(x) = params.beta;
  p.gamma(x) = params.gamma;
  p.theta(x) = theta;
  return gradient(log, p, x, lambda);
}

AfmFitResult fit(const StepLog& log, const FitConfig& config) {
  if (log.rows.empty()) {
    throw std::invalid_argument("fit: empty step log");
  }
  const Packed p{log.n_skills(), log.n_students()};

  AfmFitResult result;
  // A skill with no correct (or no incorrect) rows has no interior optimum;
  // the L2 penalty pins its beta.
  std::vector<int> corrects(static_cast<std::size_t>(p.n_skills), 0);
  std::vector<int> totals(static_cast<std::size_t>(p.n_skills), 0);
  for (const StepLogRow& row : log.rows) {
    ++totals[static_cast<std::size_t>(row.skill)];
    if (row.correct) {
      ++corrects[static_cast<std::size_t>(row.skill)];
    }
  }
  for (int k = 0; k < p.n_skills; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (corrects[ku] == 0 || corrects[ku] == totals[ku]) {
      result.separable_skills.push_back(log.skill_model.name(k));
    }
  }

  Vector x = Vector::Zero(p.dim());
  double f = objective(log, p, x, config.lambda);
  if (!std::isfinite(f)) {
    throw std::runtime_error("fit: objective is not finite at the starting point");
  }
  if (config.record_objective) {
    result.objective_trace.push_back(f);
  }

  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  int iterations = 0;
  int stalled = 0;
  bool converged = false;

  while (iterations < config.max_iterations) {
    const Vector g = gradient(log, p, x, config.lambda);
    if (projected_gradient_max_norm(p, x, g) < config.tol) {
      converged = true;
      break;
    }
    const Vector direction = g.cwiseQuotient(curvature_scaling(log, p, x, config.lambda));

    step *= 2.0;
    bool accepted = false;
    while (step > 1e-18) {
      Vector candidate = x - step * direction;
      project(p, candidate);
      const double f_candidate = objective(log, p, candidate, config.lambda);
      if (!std::isfinite(f_candidate)) {
        throw std::runtime_error("fit: objective became non-finite during line search");
      }
      const double decrease = g.dot(x - candidate);
      if (f_candidate <= f - kArmijo * decrease) {
        stalled = f - f_candidate <= std::abs(f) * 1e-13 ? stalled + 1 : 0;
        x = std::move(candidate);
        f = f_candidate;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stalled > 25) {
      break;  // objective improvements are below floating-point resolution
    }
    ++iterations;
    if (config.record_objective) {
      result.objective_trace.push_back(f);
    }
  }

  result.iterations = iterations;
  result.converged = converged;
  result.neg_log_likelihood = f;
  result.params.beta = p.beta(x);
  result.params.gamma = p.gamma(x);
  result.theta_hat = p.theta(x);
  result.params.theta_mean = result.theta_hat.mean();
  if (p.n_students >= 2) {
    const double var = (result.theta_hat.array() - result.params.theta_mean).square().sum() /
                       static_cast<double>(p.n_students - 1);
    result.params.theta_sd = std::sqrt(std::max(var, 1e-12));
  } else {
    result.params.theta_sd = 1.0;
  }
  return result;
}

} // namespace masterysim
