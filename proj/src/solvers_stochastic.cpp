#include "l1saddle/solvers_stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l1saddle/prox.hpp"
#include "l1saddle/rng.hpp"
#include "loop_clock.hpp"

namespace l1saddle {

using detail::LoopClock;

double stepsize_stochastic(const ProblemGeometry& geometry, std::int64_t iterations) {
  if (iterations < 1) throw InputError("iteration budget must be at least 1");
  const double bilinear =
      geometry.lipschitz * std::sqrt(5.0 * geometry.omega_u * geometry.omega_v);
  const double noise = std::sqrt(geometry.omega_u * geometry.sigma2_v_bar +
                                 geometry.omega_v * geometry.sigma2_u_bar);
  if (!(bilinear > 0.0) || !std::isfinite(noise)) {
    throw InputError("degenerate geometry gives no stochastic stepsize");
  }
  // Vanishing noise leaves only the deterministic branch.
  const double branch = noise > 0.0 ? std::min(1.0 / bilinear, 1.0 / noise) : 1.0 / bilinear;
  return branch / std::sqrt(2.0 * static_cast<double>(iterations));
}

SolveResult smd_solve(const Dataset& data, const ProblemGeometry& geometry, LossKind loss,
                      SamplingScheme scheme, const SolverConfig& config,
                      const StochasticOptions& options) {
  if (config.iterations < 1) throw InputError("iteration budget must be at least 1");
  const AugmentedView view(data);
  const std::int64_t T = config.iterations;
  const double theorem = config.stepsize_mode == StepsizeMode::Constant
                             ? config.gamma
                             : stepsize_stochastic(geometry, T);
  const double theorem_one = config.stepsize_mode == StepsizeMode::Decaying
                                 ? stepsize_stochastic(geometry, 1)
                                 : theorem;
  const double n = static_cast<double>(data.n());
  const Eigen::Index rows_u = 2 * data.d();

  SolveResult result;
  result.gamma = theorem;
  CounterRng rng(config.seed, CounterRng::kDrawStream);
  Matrix u = initial_primal(data.d(), data.k(), geometry.radius);
  Matrix v = initial_dual(data.n(), data.k());
  Matrix u_sum = u;
  Matrix v_sum = v;
  if (config.on_iterate) config.on_iterate(0, u, v);
  const std::vector<std::int64_t> schedule = report_schedule(config);
  std::size_t next = 0;

  const auto primal_estimate = [&](const Matrix& v_now) -> Matrix {
    if (options.exact_oracle) return primal_gradient(view, v_now);
    const DualDraw draw = draw_dual_side(data, v_now, scheme, rng);
    return draw.eta.materialize(rows_u, data.k()) / n;
  };
  const auto dual_estimate = [&](const Matrix& u_now) -> Matrix {
    if (options.exact_oracle) return dual_argument(view.times(u_now), data, loss);
    const PrimalDraw draw = draw_primal_side(data, u_now, scheme, rng);
    return dual_argument(draw.xi.materialize(data.n(), data.k()), data, loss);
  };

  LoopClock clock;
  clock.start();
  for (std::int64_t t = 0; t < T; ++t) {
    const double gamma = scheduled_stepsize(config, theorem, theorem_one, t);
    if (options.order == UpdateOrder::Interleaved) {
      const Matrix s = primal_estimate(v);
      u = primal_md_step(u, s, gamma, geometry);
      const Matrix z = dual_estimate(u);
      v = dual_step(v, z, gamma, loss);
    } else {
      const Matrix s = primal_estimate(v);
      const Matrix z = dual_estimate(u);
      u = primal_md_step(u, s, gamma, geometry);
      v = dual_step(v, z, gamma, loss);
    }
    u_sum += u;
    v_sum += v;
    if (config.on_iterate) config.on_iterate(t + 1, u, v);

    if (next < schedule.size() && schedule[next] == t + 1) {
      clock.stop();
      const double count = static_cast<double>(t + 2);
      GapReport r = duality_gap(u_sum / count, v_sum / count, data, geometry, loss);
      r.iterations = t + 1;
      r.elapsed_seconds = clock.seconds();
      result.reports.push_back(r);
      if (config.on_report) config.on_report(r);
      ++next;
      clock.start();
    }
  }
  clock.stop();

  result.loop_seconds = clock.seconds();
  const double count = static_cast<double>(T + 1);
  result.iterate.u = std::move(u);
  result.iterate.v = std::move(v);
  result.iterate.u_avg = u_sum / count;
  result.iterate.v_avg = v_sum / count;
  result.iterate.t = T;
  return result;
}

int ssm_violator(const Eigen::Ref<const RowVector>& margins, int label) {
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < margins.size(); ++l) {
    const double score = (l == label ? 0.0 : 1.0) + margins(l);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(l);
    }
  }
  return best;
}

SsmResult ssm_solve(const Dataset& data, double lambda, double radius, const SolverConfig& config,
                    LossKind loss) {
  if (loss != LossKind::Hinge) throw InputError("the subgradient baseline supports hinge loss only");
  if (config.iterations < 1) throw InputError("iteration budget must be at least 1");
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");

  const Matrix& x = data.features();
  const double g_bound = std::sqrt(2.0) * x.rowwise().norm().maxCoeff();
  if (!(g_bound > 0.0)) throw InputError("feature matrix is zero; no stepsize exists");
  const std::int64_t T = config.iterations;

  SsmResult result;
  result.gamma = config.stepsize_mode == StepsizeMode::Constant
                     ? config.gamma
                     : radius / (g_bound * std::sqrt(static_cast<double>(T)));
  const double threshold = result.gamma * lambda;

  CounterRng rng(config.seed, CounterRng::kBaselineStream);
  Matrix u = Matrix::Zero(data.d(), data.k());
  Matrix u_sum = u;
  const std::vector<std::int64_t> schedule = report_schedule(config);
  std::size_t next = 0;

  LoopClock clock;
  clock.start();
  for (std::int64_t t = 0; t < T; ++t) {
    const int j = std::min(static_cast<int>(rng.uniform() * data.n()), data.n() - 1);
    const int y = data.labels()[j];
    const RowVector margins = x.row(j) * u;
    const int violator = ssm_violator(margins, y);
    if (violator != y) {
      u.col(violator) -= result.gamma * x.row(j).transpose();
      u.col(y) += result.gamma * x.row(j).transpose();
    }
    u = u.array().sign() * (u.array().abs() - threshold).max(0.0);
    u_sum += u;

    if (next < schedule.size() && schedule[next] == t + 1) {
      clock.stop();
      PrimalReport r;
      r.iterations = t + 1;
      r.primal_obj = primal_objective(u_sum / static_cast<double>(t + 2), data, lambda, loss);
      r.elapsed_seconds = clock.seconds();
      result.reports.push_back(r);
      ++next;
      clock.start();
    }
  }
  clock.stop();

  result.loop_seconds = clock.seconds();
  result.u = std::move(u);
  result.u_avg = u_sum / static_cast<double>(T + 1);
  return result;
}

}  // namespace l1saddle
