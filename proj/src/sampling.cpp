#include "l1saddle/sampling.hpp"

#include <cmath>

namespace l1saddle {

std::string to_string(SamplingScheme scheme) {
  return scheme == SamplingScheme::Partial ? "partial" : "full";
}

Matrix RankOneEstimate::materialize(Eigen::Index rows, Eigen::Index cols) const {
  if (zero) return Matrix::Zero(rows, cols);
  return scale * column * row;
}

namespace {

// Augmented column norms: the two halves of Xhat share ||X(:,i)||_2.
Vector augmented_column_norms(const Dataset& data) {
  const Vector half = data.features().colwise().norm().transpose();
  Vector out(2 * half.size());
  out << half, half;
  return out;
}

// ||Xhat(j,:)||_inf = ||X(j,:)||_inf.
Vector augmented_row_norms(const Dataset& data) {
  return data.features().cwiseAbs().rowwise().maxCoeff();
}

void check_shapes(const Dataset& data, const Matrix& u, const Matrix& v) {
  if (u.rows() != 2 * data.d() || u.cols() != data.k()) {
    throw InputError("primal matrix must be 2d x k");
  }
  if (v.rows() != data.n() || v.cols() != data.k()) throw InputError("dual matrix must be n x k");
}

Vector normalized_or_flag(const Vector& weights, bool& zero) {
  const double total = weights.sum();
  zero = !(total > 0.0);
  if (zero) return Vector::Zero(weights.size());
  return weights / total;
}

Vector augmented_row(const Dataset& data, int j) {
  const RowVector x = data.features().row(j);
  Vector out(2 * x.size());
  out << x.transpose(), -x.transpose();
  return out;
}

RowVector unit_row(Eigen::Index k, int l) {
  RowVector e = RowVector::Zero(k);
  e(l) = 1.0;
  return e;
}

}  // namespace

PartialDistributions partial_distributions(const Dataset& data, const Matrix& u, const Matrix& v) {
  check_shapes(data, u, v);
  PartialDistributions out;
  const Vector sigma = augmented_column_norms(data);
  const Vector u_sup = u.cwiseAbs().rowwise().maxCoeff();
  out.p = normalized_or_flag(sigma.cwiseProduct(u_sup), out.primal_zero);
  const Matrix resid = v - data.one_hot();
  const Vector r_sup = resid.cwiseAbs().rowwise().maxCoeff();
  out.q = normalized_or_flag(augmented_row_norms(data).cwiseProduct(r_sup), out.dual_zero);
  return out;
}

FullDistributions full_distributions(const Dataset& data, const Matrix& u, const Matrix& v) {
  check_shapes(data, u, v);
  FullDistributions out;
  const Matrix u_abs = u.cwiseAbs();
  const Vector u_l1 = u_abs.rowwise().sum();
  out.p = normalized_or_flag(augmented_column_norms(data).cwiseProduct(u_l1), out.primal_zero);
  out.P = Matrix::Zero(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    if (u_l1(i) > 0.0) out.P.row(i) = u_abs.row(i) / u_l1(i);
  }

  const Matrix r_abs = (v - data.one_hot()).cwiseAbs();
  const Vector r_l1 = r_abs.rowwise().sum();
  out.q = normalized_or_flag(augmented_row_norms(data).cwiseProduct(r_l1), out.dual_zero);
  out.Q = Matrix::Zero(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    if (r_l1(j) > 0.0) out.Q.row(j) = r_abs.row(j) / r_l1(j);
  }
  return out;
}

int sample_index(const Eigen::Ref<const Vector>& weights, double total, double u) {
  const double target = u * total;
  double running = 0.0;
  int last_positive = -1;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    running += weights(i);
    last_positive = static_cast<int>(i);
    if (running > target) return last_positive;
  }
  if (last_positive < 0) throw NumericalError("sampling from an all-zero weight vector");
  return last_positive;
}

DualDraw dual_draw_at(const Dataset& data, const Matrix& v, SamplingScheme scheme, int example,
                      int cls) {
  if (v.rows() != data.n() || v.cols() != data.k()) throw InputError("dual matrix must be n x k");
  if (example < 0 || example >= data.n()) throw InputError("example index out of range");
  const Matrix resid = v - data.one_hot();
  const Vector tau = augmented_row_norms(data);
  const Vector weights =
      tau.cwiseProduct(scheme == SamplingScheme::Full
                           ? Vector(resid.cwiseAbs().rowwise().sum())
                           : Vector(resid.cwiseAbs().rowwise().maxCoeff()));
  const double total = weights.sum();

  DualDraw draw;
  if (!(total > 0.0)) return draw;
  draw.example = example;
  draw.probability = weights(example) / total;
  if (!(draw.probability > 0.0)) throw InputError("example has zero sampling probability");
  draw.eta.zero = false;
  draw.eta.column = augmented_row(data, example);
  if (scheme == SamplingScheme::Partial) {
    draw.eta.row = resid.row(example);
    draw.eta.scale = 1.0 / draw.probability;
    return draw;
  }
  if (cls < 0 || cls >= data.k()) throw InputError("class index out of range");
  const double row_mass = resid.row(example).cwiseAbs().sum();
  const double cond = std::abs(resid(example, cls)) / row_mass;
  if (!(cond > 0.0)) throw InputError("class has zero sampling probability");
  draw.cls = cls;
  draw.probability *= cond;
  draw.eta.row = unit_row(data.k(), cls);
  draw.eta.scale = resid(example, cls) / draw.probability;
  return draw;
}

PrimalDraw primal_draw_at(const Dataset& data, const Matrix& u, SamplingScheme scheme, int feature,
                          int cls) {
  if (u.rows() != 2 * data.d() || u.cols() != data.k()) {
    throw InputError("primal matrix must be 2d x k");
  }
  if (feature < 0 || feature >= 2 * data.d()) throw InputError("feature index out of range");
  const Matrix u_abs = u.cwiseAbs();
  const Vector weights = augmented_column_norms(data).cwiseProduct(
      scheme == SamplingScheme::Full ? Vector(u_abs.rowwise().sum())
                                     : Vector(u_abs.rowwise().maxCoeff()));
  const double total = weights.sum();

  PrimalDraw draw;
  if (!(total > 0.0)) return draw;
  draw.feature = feature;
  draw.probability = weights(feature) / total;
  if (!(draw.probability > 0.0)) throw InputError("feature has zero sampling probability");
  draw.xi.zero = false;
  draw.xi.column = AugmentedView(data).column(feature);
  if (scheme == SamplingScheme::Partial) {
    draw.xi.row = u.row(feature);
    draw.xi.scale = 1.0 / draw.probability;
    return draw;
  }
  if (cls < 0 || cls >= data.k()) throw InputError("class index out of range");
  const double cond = u_abs(feature, cls) / u_abs.row(feature).sum();
  if (!(cond > 0.0)) throw InputError("class has zero sampling probability");
  draw.cls = cls;
  draw.probability *= cond;
  draw.xi.row = unit_row(data.k(), cls);
  draw.xi.scale = u(feature, cls) / draw.probability;
  return draw;
}

DualDraw draw_dual_side(const Dataset& data, const Matrix& v, SamplingScheme scheme,
                        CounterRng& rng) {
  if (v.rows() != data.n() || v.cols() != data.k()) throw InputError("dual matrix must be n x k");
  const double u_row = rng.uniform();
  const double u_cls = scheme == SamplingScheme::Full ? rng.uniform() : 0.0;

  const Matrix r_abs = (v - data.one_hot()).cwiseAbs();
  const Vector row_mass = scheme == SamplingScheme::Full ? Vector(r_abs.rowwise().sum())
                                                         : Vector(r_abs.rowwise().maxCoeff());
  const Vector weights = augmented_row_norms(data).cwiseProduct(row_mass);
  const double total = weights.sum();
  if (!(total > 0.0)) return DualDraw{};
  const int j = sample_index(weights, total, u_row);
  if (scheme == SamplingScheme::Partial) return dual_draw_at(data, v, scheme, j, -1);
  const int l = sample_index(r_abs.row(j).transpose(), r_abs.row(j).sum(), u_cls);
  return dual_draw_at(data, v, scheme, j, l);
}

PrimalDraw draw_primal_side(const Dataset& data, const Matrix& u, SamplingScheme scheme,
                            CounterRng& rng) {
  if (u.rows() != 2 * data.d() || u.cols() != data.k()) {
    throw InputError("primal matrix must be 2d x k");
  }
  const double u_row = rng.uniform();
  const double u_cls = scheme == SamplingScheme::Full ? rng.uniform() : 0.0;

  const Matrix u_abs = u.cwiseAbs();
  const Vector row_mass = scheme == SamplingScheme::Full ? Vector(u_abs.rowwise().sum())
                                                         : Vector(u_abs.rowwise().maxCoeff());
  const Vector weights = augmented_column_norms(data).cwiseProduct(row_mass);
  const double total = weights.sum();
  if (!(total > 0.0)) return PrimalDraw{};
  const int i = sample_index(weights, total, u_row);
  if (scheme == SamplingScheme::Partial) return primal_draw_at(data, u, scheme, i, -1);
  const int l = sample_index(u_abs.row(i).transpose(), u_abs.row(i).sum(), u_cls);
  return primal_draw_at(data, u, scheme, i, l);
}

PartialDraw draw_partial(const Dataset& data, const Matrix& u, const Matrix& v, CounterRng& rng) {
  check_shapes(data, u, v);
  PartialDraw out;
  out.dual = draw_dual_side(data, v, SamplingScheme::Partial, rng);
  out.primal = draw_primal_side(data, u, SamplingScheme::Partial, rng);
  return out;
}

FullDraw draw_full(const Dataset& data, const Matrix& u, const Matrix& v, CounterRng& rng) {
  check_shapes(data, u, v);
  FullDraw out;
  out.dual = draw_dual_side(data, v, SamplingScheme::Full, rng);
  out.primal = draw_primal_side(data, u, SamplingScheme::Full, rng);
  return out;
}

std::pair<double, double> variance_bounds(const ProblemGeometry& geometry) {
  return {geometry.sigma2_u_bar, geometry.sigma2_v_bar};
}

}  // namespace l1saddle
