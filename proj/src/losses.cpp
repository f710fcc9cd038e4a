#include "l1saddle/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l1saddle {

double fenchel_term(const Eigen::Ref<const RowVector>& v, int label, LossKind loss) {
  if (loss == LossKind::Hinge) return v(label) - 1.0;
  double acc = 0.0;
  for (Eigen::Index l = 0; l < v.size(); ++l) {
    if (v(l) > 0.0) acc += v(l) * std::log(v(l));
  }
  return acc;
}

double fenchel_penalty(const Matrix& v, const Dataset& data, LossKind loss) {
  double acc = 0.0;
  for (int j = 0; j < data.n(); ++j) acc += fenchel_term(v.row(j), data.labels()[j], loss);
  return acc / data.n();
}

double example_loss(const Eigen::Ref<const RowVector>& margins, int label, LossKind loss) {
  if (loss == LossKind::Hinge) {
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < margins.size(); ++l) {
      best = std::max(best, (l == label ? 0.0 : 1.0) + margins(l));
    }
    return best - margins(label);
  }
  const double shift = margins.maxCoeff();
  const double lse = shift + std::log((margins.array() - shift).exp().sum());
  return lse - margins(label);
}

double primal_objective(const Matrix& u, const Dataset& data, double lambda, LossKind loss) {
  if (u.rows() != data.d() || u.cols() != data.k()) {
    throw InputError("primal_objective expects a d x k matrix");
  }
  const Matrix margins = data.features() * u;
  double acc = 0.0;
  for (int j = 0; j < data.n(); ++j) acc += example_loss(margins.row(j), data.labels()[j], loss);
  return acc / data.n() + lambda * u.cwiseAbs().sum();
}

void check_row_stochastic(const Matrix& v, double tol) {
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const double s = v.row(j).sum();
    if (!(std::abs(s - 1.0) <= tol) || !(v.row(j).minCoeff() >= -tol)) {
      throw InputError("row " + std::to_string(j) + " of the dual matrix is not in the simplex");
    }
  }
}

double dual_objective(const Matrix& v, const Dataset& data, const ProblemGeometry& geometry,
                      LossKind loss) {
  if (v.rows() != data.n() || v.cols() != data.k()) {
    throw InputError("dual_objective expects an n x k matrix");
  }
  check_row_stochastic(v);
  // The inner linear minimum over the solid simplex sits at 0 or at a vertex
  // R e_il. The two halves of Xhat^T (V - Y) differ only in sign, so the
  // smallest coefficient is lambda - max |X^T (V - Y)| / n.
  const Matrix g = data.features().transpose() * (v - data.one_hot());
  const double min_coeff = geometry.lambda - g.cwiseAbs().maxCoeff() / data.n();
  return -fenchel_penalty(v, data, loss) + geometry.radius * std::min(0.0, min_coeff);
}

GapReport duality_gap(const Matrix& u, const Matrix& v, const Dataset& data,
                      const ProblemGeometry& geometry, LossKind loss) {
  GapReport r;
  const Matrix folded = u.rows() == 2 * data.d() ? fold(u) : u;
  r.primal_obj = primal_objective(folded, data, geometry.lambda, loss);
  r.dual_obj = dual_objective(v, data, geometry, loss);
  r.gap = r.primal_obj - r.dual_obj;
  return r;
}

Vector fenchel_argmax(const Eigen::Ref<const RowVector>& margins, int label, LossKind loss) {
  const Eigen::Index k = margins.size();
  Vector out = Vector::Zero(k);
  if (loss == LossKind::Hinge) {
    Eigen::Index best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < k; ++l) {
      const double score = (l == label ? 0.0 : 1.0) + margins(l);
      if (score > best_score) {
        best_score = score;
        best = l;
      }
    }
    out(best) = 1.0;
    return out;
  }
  const double shift = margins.maxCoeff();
  out = (margins.transpose().array() - shift).exp();
  out /= out.sum();
  return out;
}

Matrix best_response_dual(const Matrix& u_folded, const Dataset& data, LossKind loss) {
  const Matrix margins = data.features() * u_folded;
  Matrix v(data.n(), data.k());
  for (int j = 0; j < data.n(); ++j) {
    v.row(j) = fenchel_argmax(margins.row(j), data.labels()[j], loss).transpose();
  }
  return v;
}

}  // namespace l1saddle
