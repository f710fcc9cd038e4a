#pragma once

#include <cstdint>

#include "l1saddle/core.hpp"

namespace l1saddle {

/// Duality-gap certificate for an averaged (U, V) pair.
struct GapReport {
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;
  std::int64_t iterations = 0;
  double elapsed_seconds = 0.0;
};

/// Row term f(v, y) of the Fenchel-Young representation.
double fenchel_term(const Eigen::Ref<const RowVector>& v, int label, LossKind loss);

/// F(V, Y) = (1/n) sum_j f(v_j, y_j), with 0 log 0 = 0 for softmax.
double fenchel_penalty(const Matrix& v, const Dataset& data, LossKind loss);

/// Per-example loss of the margins U^T x.
double example_loss(const Eigen::Ref<const RowVector>& margins, int label, LossKind loss);

/// (1/n) sum_i loss(U^T x_i, y_i) + lambda ||U||_1 for a d x k matrix U.
double primal_objective(const Matrix& u, const Dataset& data, double lambda, LossKind loss);

/// min over the solid simplex of f(., V); rows of V must be stochastic to 1e-9.
double dual_objective(const Matrix& v, const Dataset& data, const ProblemGeometry& geometry,
                      LossKind loss);

/// Gap of (U, V). U may be the 2d x k simplex point or an already folded d x k matrix.
GapReport duality_gap(const Matrix& u, const Matrix& v, const Dataset& data,
                      const ProblemGeometry& geometry, LossKind loss);

/// Maximizer of -f(v, y) + (v - y)^T margins over the simplex.
/// Hinge ties go to the smallest index.
Vector fenchel_argmax(const Eigen::Ref<const RowVector>& margins, int label, LossKind loss);

/// Best-response dual point for a folded d x k primal matrix.
Matrix best_response_dual(const Matrix& u_folded, const Dataset& data, LossKind loss);

/// Throws InputError unless every row of V lies in the simplex within `tol`.
void check_row_stochastic(const Matrix& v, double tol = 1e-9);

}  // namespace l1saddle
