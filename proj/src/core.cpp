#include "l1saddle/core.hpp"

#include <algorithm>
#include <cmath>

namespace l1saddle {

std::string to_string(LossKind loss) {
  return loss == LossKind::Hinge ? "hinge" : "softmax";
}

LossKind parse_loss(const std::string& name) {
  if (name == "hinge") return LossKind::Hinge;
  if (name == "softmax") return LossKind::Softmax;
  throw InputError("unknown loss '" + name + "' (expected hinge or softmax)");
}

Dataset::Dataset(Matrix features, std::vector<int> labels, int num_classes)
    : features_(std::move(features)), labels_(std::move(labels)), num_classes_(num_classes) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw InputError("dataset needs at least one example and one feature");
  }
  if (num_classes_ < 1) throw InputError("number of classes must be positive");
  if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
    throw InputError("label count " + std::to_string(labels_.size()) + " does not match " +
                     std::to_string(features_.rows()) + " feature rows");
  }
  one_hot_ = Matrix::Zero(features_.rows(), num_classes_);
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    const int y = labels_[j];
    if (y < 0 || y >= num_classes_) {
      throw InputError("label " + std::to_string(y) + " of example " + std::to_string(j) +
                       " outside [0, k)");
    }
    one_hot_(static_cast<Eigen::Index>(j), y) = 1.0;
  }
}

Vector AugmentedView::column(int col) const {
  if (col < 0 || col >= cols()) {
    throw InputError("augmented column " + std::to_string(col) + " outside [0, " +
                     std::to_string(cols()) + ")");
  }
  const int d = data_->d();
  if (col < d) return data_->features().col(col);
  return -data_->features().col(col - d);
}

Matrix AugmentedView::times(const Matrix& u) const {
  const int d = data_->d();
  if (u.rows() != 2 * d) throw InputError("augmented product expects 2d rows");
  return data_->features() * (u.topRows(d) - u.bottomRows(d));
}

Matrix AugmentedView::transpose_times(const Matrix& m) const {
  const int d = data_->d();
  if (m.rows() != data_->n()) throw InputError("transpose product expects n rows");
  Matrix out(2 * d, m.cols());
  out.topRows(d).noalias() = data_->features().transpose() * m;
  out.bottomRows(d) = -out.topRows(d);
  return out;
}

namespace {

double row_norm(const Eigen::Ref<const RowVector>& row, NormIndex q) {
  switch (q) {
    case NormIndex::One:
      return row.cwiseAbs().sum();
    case NormIndex::Two:
      return row.norm();
    case NormIndex::Inf:
      return row.cwiseAbs().maxCoeff<Eigen::PropagateNaN>();
  }
  return 0.0;
}

}  // namespace

double mixed_norm(const Matrix& a, NormIndex p, NormIndex q) {
  if (a.size() == 0) throw InputError("mixed_norm of an empty matrix");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double r = row_norm(a.row(i), q);
    switch (p) {
      case NormIndex::One:
        acc += r;
        break;
      case NormIndex::Two:
        acc += r * r;
        break;
      case NormIndex::Inf:
        // NaN must survive the max.
        acc = (std::isnan(r) || r > acc) ? r : acc;
        break;
    }
  }
  return p == NormIndex::Two ? std::sqrt(acc) : acc;
}

ProblemGeometry geometry_from(const Dataset& data, double radius, double lambda, LossKind loss) {
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");

  ProblemGeometry g;
  g.n = data.n();
  g.d = data.d();
  g.k = data.k();
  g.radius = radius;
  g.lambda = lambda;
  g.loss = loss;

  const Matrix& x = data.features();
  g.colnorm2_max = x.colwise().norm().maxCoeff();
  g.rowinf_sum = x.cwiseAbs().rowwise().maxCoeff().sum();

  const double n = g.n;
  g.lipschitz = g.colnorm2_max / n;
  g.log_2dk = std::log(2.0 * g.d * g.k);
  g.omega_u = radius * radius * g.log_2dk;
  g.omega_v = n * std::log(static_cast<double>(g.k));
  g.sigma2_u_bar = 4.0 * radius * radius * g.colnorm2_max * g.colnorm2_max / (n * n);
  g.sigma2_v_bar =
      8.0 * g.colnorm2_max * g.colnorm2_max / n + 8.0 * g.rowinf_sum * g.rowinf_sum / (n * n);
  // F(V0) - min F: zero for the affine hinge term, and zero for negative
  // entropy because the uniform start is its minimizer.
  g.residual = 0.0;
  return g;
}

Matrix fold(const Matrix& u_augmented) {
  if (u_augmented.rows() % 2 != 0) throw InputError("fold expects an even number of rows");
  const Eigen::Index d = u_augmented.rows() / 2;
  return u_augmented.topRows(d) - u_augmented.bottomRows(d);
}

Matrix initial_primal(int d, int k, double radius) {
  return Matrix::Constant(2 * d, k, radius / (2.0 * d * k));
}

Matrix initial_dual(int n, int k) { return Matrix::Constant(n, k, 1.0 / k); }

}  // namespace l1saddle
