#pragma once

#include <cstdint>
#include <vector>

#include "l1saddle/sampling.hpp"
#include "l1saddle/solvers_exact.hpp"

namespace l1saddle {

/// Interleaved: estimate eta at V^t, primal step, estimate xi at the new U, dual step.
/// Simultaneous: both estimates at (U^t, V^t), as in the deterministic solver.
enum class UpdateOrder { Interleaved, Simultaneous };

struct StochasticOptions {
  UpdateOrder order = UpdateOrder::Interleaved;
  // Replace both estimates by the exact products (test hook). No draws are made.
  bool exact_oracle = false;
};

/// (1 / sqrt(2T)) min{1 / (L sqrt(5 Omega_U Omega_V)), 1 / sqrt(Omega_U s2_V + Omega_V s2_U)}.
double stepsize_stochastic(const ProblemGeometry& geometry, std::int64_t iterations);

/// Stochastic mirror descent with dense iterates. Averages iterates 0..T and
/// divides by T + 1. Index draws come from CounterRng(seed, kDrawStream).
SolveResult smd_solve(const Dataset& data, const ProblemGeometry& geometry, LossKind loss,
                      SamplingScheme scheme, const SolverConfig& config,
                      const StochasticOptions& options = {});

struct PrimalReport {
  std::int64_t iterations = 0;
  double primal_obj = 0.0;
  double elapsed_seconds = 0.0;
};

struct SsmResult {
  Matrix u;      // last iterate, d x k
  Matrix u_avg;  // average of iterates 0..T
  std::vector<PrimalReport> reports;
  double loop_seconds = 0.0;
  double gamma = 0.0;
};

/// Composite stochastic subgradient baseline for the hinge loss: uniform example
/// sampling, soft-thresholding step, constant stepsize R / (G sqrt(T)) with
/// G = sqrt(2) max_i ||x_i||_2. Starts at U = 0.
SsmResult ssm_solve(const Dataset& data, double lambda, double radius, const SolverConfig& config,
                    LossKind loss = LossKind::Hinge);

/// Hinge subgradient of the example loss at margins U^T x: (l*, y) with
/// l* = argmax {1[l != y] + margin_l}, smallest index on ties.
int ssm_violator(const Eigen::Ref<const RowVector>& margins, int label);

}  // namespace l1saddle
