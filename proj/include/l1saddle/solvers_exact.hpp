#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "l1saddle/core.hpp"
#include "l1saddle/losses.hpp"

namespace l1saddle {

enum class StepsizeMode { Theorem, Constant, Decaying };

/// Called with the iteration index t and the iterate (U^t, V^t) before it is averaged.
using IterateObserver = std::function<void(std::int64_t, const Matrix&, const Matrix&)>;
using ReportObserver = std::function<void(const GapReport&)>;

struct SolverConfig {
  std::int64_t iterations = 1000;
  StepsizeMode stepsize_mode = StepsizeMode::Theorem;
  double gamma = 0.0;  // used by StepsizeMode::Constant
  std::uint64_t seed = 0;
  // > 0: report every gap_every iterations; 0: geometric checkpoints; < 0: final only.
  std::int64_t gap_every = 0;
  // false: no gap evaluations at all (timing runs).
  bool report_gaps = true;
  std::int64_t flush_every = 10000;
  IterateObserver on_iterate;
  ReportObserver on_report;
};

/// Current iterate and running averages.
struct SaddleIterate {
  Matrix u;
  Matrix v;
  Matrix u_avg;
  Matrix v_avg;
  std::int64_t t = 0;
};

struct SolveResult {
  SaddleIterate iterate;
  std::vector<GapReport> reports;
  double loop_seconds = 0.0;  // iteration loop only, without gap evaluations
  double gamma = 0.0;
};

/// 1 / (L sqrt(5 T Omega_U Omega_V)).
double stepsize_deterministic(const ProblemGeometry& geometry, std::int64_t iterations);

/// Stepsize for iteration t. `theorem_full` is the theorem value for the full
/// budget, `theorem_at_one` the value for a budget of one step (decaying base).
double scheduled_stepsize(const SolverConfig& config, double theorem_full, double theorem_at_one,
                          std::int64_t t);

/// Checkpoints (number of averaged steps) at which gap reports are emitted; always ends at T.
std::vector<std::int64_t> checkpoint_schedule(std::int64_t iterations, std::int64_t gap_every);
/// checkpoint_schedule for the config, or nothing when gap reports are off.
std::vector<std::int64_t> report_schedule(const SolverConfig& config);

/// (1/n) Xhat^T (V - Y).
Matrix primal_gradient(const AugmentedView& view, const Matrix& v);
/// Dual step argument from a (possibly estimated) Xhat U: minus Y for hinge, unchanged for softmax.
Matrix dual_argument(const Matrix& xhat_u, const Dataset& data, LossKind loss);
/// The loss's dual prox step.
Matrix dual_step(const Matrix& v, const Matrix& z, double gamma, LossKind loss);

/// Deterministic composite mirror descent. Averages iterates 0..T-1.
SolveResult md_solve(const Dataset& data, const ProblemGeometry& geometry, LossKind loss,
                     const SolverConfig& config);

/// Mirror Prox (extragradient) baseline. Averages the leader points of steps 0..T-1.
SolveResult mp_solve(const Dataset& data, const ProblemGeometry& geometry, LossKind loss,
                     const SolverConfig& config);

struct RadiusEstimate {
  double radius = 0.0;
  int stages = 0;
  double mass = 0.0;  // folded l1 mass of the averaged solution at `radius`
  bool boundary_warning = false;
};

/// Grow R by `factor` until the averaged md_solve solution leaves the boundary,
/// i.e. its folded l1 mass drops below (1 - tolerance) R. Stops after 10 stages.
RadiusEstimate estimate_radius(const Dataset& data, double lambda, LossKind loss, double base_radius,
                               double factor, std::int64_t budget, double tolerance = 0.05);

}  // namespace l1saddle
