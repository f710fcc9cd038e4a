#pragma once

#include <functional>

#include "l1saddle/core.hpp"

namespace l1saddle {

/// Entries are floored here after multiplicative updates so iterates stay interior.
inline constexpr double kInteriorFloor = 1e-300;

/// Entropic prox on the solid simplex {x >= 0, sum x <= R}:
///   argmin C1 ||x||_1 + <S, x> + C2 sum x_i log(x_i / x0_i).
/// Closed form x_i = rho * x0_i e^{-S_i/C2} / M with rho = min(M e^{-(C1+C2)/C2}, R).
/// Exponents are shifted before evaluation so M never overflows.
Vector solid_simplex_entropy_prox(const Vector& x0, const Vector& s, double c1, double c2,
                                  double radius);

/// Composite primal mirror step on the 2d x k solid simplex with gradient S.
Matrix primal_md_step(const Matrix& u, const Matrix& s, double gamma,
                      const ProblemGeometry& geometry);

/// Hinge dual step: V+_il proportional to V_il exp(2 gamma log(k) Z_il), Z = Xhat U - Y.
Matrix dual_hinge_step(const Matrix& v, const Matrix& z, double gamma);

/// Softmax dual step with Z = Xhat U. Each row solves
///   min_v sum v log v - <z, v> + KL(v, v0) / (2 gamma log k)
/// whose solution is v proportional to exp((c z + log v0) / (1 + c)), c = 2 gamma log k.
/// Falls back to the root search when the closed form is not finite.
Matrix dual_softmax_step(const Matrix& v, const Matrix& z, double gamma);

/// Derivative of a separable row penalty, f'(v_l) for class l.
using SeparableDerivative = std::function<double(double value, int cls)>;

/// Generic dual step for separable penalties: inner 1-D solves per coordinate
/// plus bisection on the simplex multiplier. Throws NumericalError if the
/// multiplier cannot be bracketed.
RowVector dual_row_root_search(const Eigen::Ref<const RowVector>& v0,
                               const Eigen::Ref<const RowVector>& z, double gamma,
                               const SeparableDerivative& penalty_derivative);

/// Root-search variant of dual_softmax_step (all rows).
Matrix dual_softmax_step_root_search(const Matrix& v, const Matrix& z, double gamma);

/// First-order residual of a softmax dual row: spread of the stationarity terms.
double softmax_row_residual(const Eigen::Ref<const RowVector>& v_new,
                            const Eigen::Ref<const RowVector>& v0,
                            const Eigen::Ref<const RowVector>& z, double gamma);

}  // namespace l1saddle
