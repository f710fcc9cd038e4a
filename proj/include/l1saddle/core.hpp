#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace l1saddle {

/// Dense row-major storage used for all problem-sized matrices.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Thrown for malformed user input (shapes, ranges, file contents).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine cannot produce a valid result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LossKind { Hinge, Softmax };

std::string to_string(LossKind loss);
LossKind parse_loss(const std::string& name);

/// Labelled training set. Labels are stored 0-based; files use 1-based labels.
class Dataset {
 public:
  Dataset(Matrix features, std::vector<int> labels, int num_classes);

  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  /// One-hot label matrix Y (n x k).
  const Matrix& one_hot() const { return one_hot_; }

  int n() const { return static_cast<int>(features_.rows()); }
  int d() const { return static_cast<int>(features_.cols()); }
  int k() const { return num_classes_; }

 private:
  Matrix features_;
  std::vector<int> labels_;
  int num_classes_;
  Matrix one_hot_;
};

/// Read-only view of the augmented matrix [X, -X] (n x 2d). Never materialized.
class AugmentedView {
 public:
  explicit AugmentedView(const Dataset& data) : data_(&data) {}

  int rows() const { return data_->n(); }
  int cols() const { return 2 * data_->d(); }

  double operator()(int row, int col) const {
    const int d = data_->d();
    return col < d ? data_->features()(row, col) : -data_->features()(row, col - d);
  }

  /// Column `col` in [0, 2d); throws InputError when out of range.
  Vector column(int col) const;

  /// Xhat * U for U of shape 2d x k.
  Matrix times(const Matrix& u) const;
  /// Xhat^T * M for M of shape n x k; result is 2d x k.
  Matrix transpose_times(const Matrix& m) const;

  const Dataset& dataset() const { return *data_; }

 private:
  const Dataset* data_;
};

enum class NormIndex { One, Two, Inf };

/// (sum_i ||A(i,:)||_q^p)^(1/p); p = Inf means max over rows.
double mixed_norm(const Matrix& a, NormIndex p, NormIndex q);

/// Data-dependent constants of the saddle-point problem.
struct ProblemGeometry {
  int n = 0;
  int d = 0;
  int k = 0;
  double colnorm2_max = 0.0;  // largest column l2 norm of X
  double rowinf_sum = 0.0;    // sum over rows of the row max-abs entry
  double lipschitz = 0.0;     // colnorm2_max / n
  double log_2dk = 0.0;
  double omega_u = 0.0;       // R^2 log(2dk)
  double omega_v = 0.0;       // n log k
  double radius = 0.0;
  double lambda = 0.0;
  double sigma2_u_bar = 0.0;
  double sigma2_v_bar = 0.0;
  double residual = 0.0;      // O(1/T) term of the deterministic bound
  LossKind loss = LossKind::Hinge;
};

ProblemGeometry geometry_from(const Dataset& data, double radius, double lambda, LossKind loss);

/// Fold a 2d x k solid-simplex point into U1 - U2 (d x k).
Matrix fold(const Matrix& u_augmented);

/// Initial point of the entropy geometry: U0 = R/(2dk), V0 = 1/k.
Matrix initial_primal(int d, int k, double radius);
Matrix initial_dual(int n, int k);

}  // namespace l1saddle
