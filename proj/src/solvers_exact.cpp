#include "l1saddle/solvers_exact.hpp"

#include <cmath>

#include "l1saddle/prox.hpp"
#include "loop_clock.hpp"

namespace l1saddle {

using detail::LoopClock;

namespace {

void validate(const SolverConfig& config) {
  if (config.iterations < 1) throw InputError("iteration budget must be at least 1");
  if (config.stepsize_mode == StepsizeMode::Constant && !(config.gamma >= 0.0)) {
    throw InputError("constant stepsize must be nonnegative");
  }
}

GapReport make_report(const Matrix& u_sum, const Matrix& v_sum, double count, std::int64_t t,
                      double seconds, const Dataset& data, const ProblemGeometry& geometry,
                      LossKind loss) {
  GapReport r = duality_gap(u_sum / count, v_sum / count, data, geometry, loss);
  r.iterations = t;
  r.elapsed_seconds = seconds;
  return r;
}

}  // namespace

double stepsize_deterministic(const ProblemGeometry& geometry, std::int64_t iterations) {
  if (iterations < 1) throw InputError("iteration budget must be at least 1");
  if (!(geometry.lipschitz > 0.0)) throw InputError("feature matrix is zero; no stepsize exists");
  const double denom = geometry.lipschitz * std::sqrt(5.0 * static_cast<double>(iterations) *
                                                      geometry.omega_u * geometry.omega_v);
  if (!(denom > 0.0)) throw InputError("degenerate geometry (k = 1?) gives no stepsize");
  return 1.0 / denom;
}

double scheduled_stepsize(const SolverConfig& config, double theorem_full, double theorem_at_one,
                          std::int64_t t) {
  switch (config.stepsize_mode) {
    case StepsizeMode::Theorem:
      return theorem_full;
    case StepsizeMode::Constant:
      return config.gamma;
    case StepsizeMode::Decaying:
      return theorem_at_one / std::sqrt(static_cast<double>(t + 1));
  }
  return theorem_full;
}

std::vector<std::int64_t> checkpoint_schedule(std::int64_t iterations, std::int64_t gap_every) {
  std::vector<std::int64_t> out;
  if (gap_every > 0) {
    for (std::int64_t t = gap_every; t < iterations; t += gap_every) out.push_back(t);
  } else if (gap_every == 0) {
    for (std::int64_t t = 1; t < iterations; t *= 2) out.push_back(t);
  }
  out.push_back(iterations);
  return out;
}

std::vector<std::int64_t> report_schedule(const SolverConfig& config) {
  if (!config.report_gaps) return {};
  return checkpoint_schedule(config.iterations, config.gap_every);
}

Matrix primal_gradient(const AugmentedView& view, const Matrix& v) {
  const Dataset& data = view.dataset();
  return view.transpose_times(v - data.one_hot()) / static_cast<double>(data.n());
}

Matrix dual_argument(const Matrix& xhat_u, const Dataset& data, LossKind loss) {
  if (loss == LossKind::Hinge) return xhat_u - data.one_hot();
  return xhat_u;
}

Matrix dual_step(const Matrix& v, const Matrix& z, double gamma, LossKind loss) {
  return loss == LossKind::Hinge ? dual_hinge_step(v, z, gamma) : dual_softmax_step(v, z, gamma);
}

SolveResult md_solve(const Dataset& data, const ProblemGeometry& geometry, LossKind loss,
                     const SolverConfig& config) {
  validate(config);
  const AugmentedView view(data);
  const std::int64_t T = config.iterations;
  const double theorem = config.stepsize_mode == StepsizeMode::Constant
                             ? config.gamma
                             : stepsize_deterministic(geometry, T);
  const double theorem_one = config.stepsize_mode == StepsizeMode::Decaying
                                 ? stepsize_deterministic(geometry, 1)
                                 : theorem;

  SolveResult result;
  result.gamma = theorem;
  Matrix u = initial_primal(data.d(), data.k(), geometry.radius);
  Matrix v = initial_dual(data.n(), data.k());
  Matrix u_sum = Matrix::Zero(u.rows(), u.cols());
  Matrix v_sum = Matrix::Zero(v.rows(), v.cols());
  const std::vector<std::int64_t> schedule = report_schedule(config);
  std::size_t next = 0;

  LoopClock clock;
  clock.start();
  for (std::int64_t t = 0; t < T; ++t) {
    if (config.on_iterate) config.on_iterate(t, u, v);
    u_sum += u;
    v_sum += v;
    if (next < schedule.size() && schedule[next] == t + 1) {
      clock.stop();
      result.reports.push_back(make_report(u_sum, v_sum, static_cast<double>(t + 1), t + 1,
                                           clock.seconds(), data, geometry, loss));
      if (config.on_report) config.on_report(result.reports.back());
      ++next;
      clock.start();
    }
    const double gamma = scheduled_stepsize(config, theorem, theorem_one, t);
    const Matrix s = primal_gradient(view, v);
    const Matrix z = dual_argument(view.times(u), data, loss);
    u = primal_md_step(u, s, gamma, geometry);
    v = dual_step(v, z, gamma, loss);
  }
  clock.stop();

  result.loop_seconds = clock.seconds();
  result.iterate.u = std::move(u);
  result.iterate.v = std::move(v);
  result.iterate.u_avg = u_sum / static_cast<double>(T);
  result.iterate.v_avg = v_sum / static_cast<double>(T);
  result.iterate.t = T;
  return result;
}

SolveResult mp_solve(const Dataset& data, const ProblemGeometry& geometry, LossKind loss,
                     const SolverConfig& config) {
  validate(config);
  const AugmentedView view(data);
  const std::int64_t T = config.iterations;
  const double theorem = config.stepsize_mode == StepsizeMode::Constant
                             ? config.gamma
                             : stepsize_deterministic(geometry, T);
  const double theorem_one = config.stepsize_mode == StepsizeMode::Decaying
                                 ? stepsize_deterministic(geometry, 1)
                                 : theorem;

  SolveResult result;
  result.gamma = theorem;
  Matrix u = initial_primal(data.d(), data.k(), geometry.radius);
  Matrix v = initial_dual(data.n(), data.k());
  Matrix u_sum = Matrix::Zero(u.rows(), u.cols());
  Matrix v_sum = Matrix::Zero(v.rows(), v.cols());
  const std::vector<std::int64_t> schedule = report_schedule(config);
  std::size_t next = 0;

  LoopClock clock;
  clock.start();
  for (std::int64_t t = 0; t < T; ++t) {
    const double gamma = scheduled_stepsize(config, theorem, theorem_one, t);
    const Matrix u_lead =
        primal_md_step(u, primal_gradient(view, v), gamma, geometry);
    const Matrix v_lead = dual_step(v, dual_argument(view.times(u), data, loss), gamma, loss);

    if (config.on_iterate) config.on_iterate(t, u_lead, v_lead);
    u_sum += u_lead;
    v_sum += v_lead;
    if (next < schedule.size() && schedule[next] == t + 1) {
      clock.stop();
      result.reports.push_back(make_report(u_sum, v_sum, static_cast<double>(t + 1), t + 1,
                                           clock.seconds(), data, geometry, loss));
      if (config.on_report) config.on_report(result.reports.back());
      ++next;
      clock.start();
    }

    const Matrix s = primal_gradient(view, v_lead);
    const Matrix z = dual_argument(view.times(u_lead), data, loss);
    u = primal_md_step(u, s, gamma, geometry);
    v = dual_step(v, z, gamma, loss);
  }
  clock.stop();

  result.loop_seconds = clock.seconds();
  result.iterate.u = std::move(u);
  result.iterate.v = std::move(v);
  result.iterate.u_avg = u_sum / static_cast<double>(T);
  result.iterate.v_avg = v_sum / static_cast<double>(T);
  result.iterate.t = T;
  return result;
}

RadiusEstimate estimate_radius(const Dataset& data, double lambda, LossKind loss, double base_radius,
                               double factor, std::int64_t budget, double tolerance) {
  if (!(base_radius > 0.0)) throw InputError("base radius must be positive");
  if (!(factor > 1.0)) throw InputError("radius growth factor must exceed 1");
  constexpr int kMaxStages = 10;

  SolverConfig config;
  config.iterations = budget;
  config.report_gaps = false;

  RadiusEstimate out;
  double radius = base_radius;
  for (int stage = 1; stage <= kMaxStages; ++stage) {
    const ProblemGeometry geometry = geometry_from(data, radius, lambda, loss);
    const SolveResult run = md_solve(data, geometry, loss, config);
    out.radius = radius;
    out.stages = stage;
    out.mass = fold(run.iterate.u_avg).cwiseAbs().sum();
    if (out.mass < (1.0 - tolerance) * radius) return out;
    if (stage < kMaxStages) radius *= factor;
  }
  out.boundary_warning = true;
  return out;
}

}  // namespace l1saddle
