#include "l1saddle/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l1saddle {

namespace {

// x_i = exp(log_rho) * x0_i e^{t_i} / M, M = sum x0_i e^{t_i},
// log_rho = min(log M - shrink, log R). Everything stays in shifted coordinates.
template <typename In, typename Exp, typename Out>
void entropy_prox_kernel(const In& x0, const Exp& t, double shrink, double radius, Out& out) {
  const Eigen::Index size = x0.size();
  double peak = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < size; ++i) peak = std::max(peak, t(i));
  if (!std::isfinite(peak)) throw NumericalError("non-finite exponent in entropy prox");

  double mass = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    out(i) = x0(i) * std::exp(t(i) - peak);
    mass += out(i);
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NumericalError("entropy prox normalizer is not positive");
  }
  const double log_m = peak + std::log(mass);
  const double log_rho = std::min(log_m - shrink, std::log(radius));
  const double scale = std::exp(log_rho) / mass;
  for (Eigen::Index i = 0; i < size; ++i) out(i) = std::max(out(i) * scale, kInteriorFloor);
}

double dual_rate(double gamma, Eigen::Index k) {
  return 2.0 * gamma * std::log(static_cast<double>(k));
}

}  // namespace

Vector solid_simplex_entropy_prox(const Vector& x0, const Vector& s, double c1, double c2,
                                  double radius) {
  if (!(c2 > 0.0)) throw InputError("C2 must be positive");
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  if (x0.size() != s.size() || x0.size() == 0) throw InputError("prox inputs must match in size");
  if (!(x0.minCoeff() > 0.0)) throw InputError("prox start point must be strictly positive");
  const Vector t = -s / c2;
  Vector out(x0.size());
  entropy_prox_kernel(x0, t, (c1 + c2) / c2, radius, out);
  return out;
}

Matrix primal_md_step(const Matrix& u, const Matrix& s, double gamma,
                      const ProblemGeometry& geometry) {
  if (u.rows() != s.rows() || u.cols() != s.cols()) {
    throw InputError("primal step gradient shape mismatch");
  }
  if (!(u.minCoeff() > 0.0)) throw InputError("primal iterate must be strictly positive");
  // Lemma-1 form with C2 = 1/a and C1 + C2 = lambda, where a = 2 gamma R L.
  const double a = 2.0 * gamma * geometry.radius * geometry.log_2dk;
  const auto x0 = u.reshaped<Eigen::RowMajor>();
  const Vector t = (-a * s).reshaped<Eigen::RowMajor>();
  Matrix out(u.rows(), u.cols());
  auto flat = out.reshaped<Eigen::RowMajor>();
  entropy_prox_kernel(x0, t, a * geometry.lambda, geometry.radius, flat);
  return out;
}

Matrix dual_hinge_step(const Matrix& v, const Matrix& z, double gamma) {
  if (v.rows() != z.rows() || v.cols() != z.cols()) throw InputError("dual step shape mismatch");
  const double c = dual_rate(gamma, v.cols());
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const double peak = c * z.row(j).maxCoeff();
    double total = 0.0;
    for (Eigen::Index l = 0; l < v.cols(); ++l) {
      out(j, l) = v(j, l) * std::exp(c * z(j, l) - peak);
      total += out(j, l);
    }
    for (Eigen::Index l = 0; l < v.cols(); ++l) {
      out(j, l) = std::max(out(j, l) / total, kInteriorFloor);
    }
  }
  return out;
}

Matrix dual_softmax_step(const Matrix& v, const Matrix& z, double gamma) {
  if (v.rows() != z.rows() || v.cols() != z.cols()) throw InputError("dual step shape mismatch");
  const double c = dual_rate(gamma, v.cols());
  Matrix out(v.rows(), v.cols());
  RowVector logits(v.cols());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    for (Eigen::Index l = 0; l < v.cols(); ++l) {
      logits(l) = (c * z(j, l) + std::log(v(j, l))) / (1.0 + c);
    }
    const double peak = logits.maxCoeff();
    RowVector row = (logits.array() - peak).exp();
    row /= row.sum();
    if (!row.allFinite()) {
      const SeparableDerivative entropy = [](double value, int) { return std::log(value) + 1.0; };
      row = dual_row_root_search(v.row(j), z.row(j), gamma, entropy);
    }
    out.row(j) = row.cwiseMax(kInteriorFloor);
  }
  return out;
}

RowVector dual_row_root_search(const Eigen::Ref<const RowVector>& v0,
                               const Eigen::Ref<const RowVector>& z, double gamma,
                               const SeparableDerivative& penalty_derivative) {
  const Eigen::Index k = v0.size();
  const double c = dual_rate(gamma, k);
  if (c == 0.0) return v0;

  // Coordinate l solves f'(e^s) - z_l + (s - log v0_l + 1)/c + mu = 0 in s = log v_l.
  // The left side increases in s, so bisection on a fixed window is safe.
  constexpr double kLogLo = -745.0;
  constexpr double kLogHi = 50.0;
  const auto coordinate = [&](Eigen::Index l, double mu) {
    const double log_v0 = std::log(v0(l));
    const auto g = [&](double s) {
      return penalty_derivative(std::exp(s), static_cast<int>(l)) - z(l) +
             (s - log_v0 + 1.0) / c + mu;
    };
    if (g(kLogLo) >= 0.0) return 0.0;
    if (g(kLogHi) <= 0.0) return std::exp(kLogHi);
    double lo = kLogLo;
    double hi = kLogHi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
  };
  const auto total = [&](double mu) {
    double acc = 0.0;
    for (Eigen::Index l = 0; l < k; ++l) acc += coordinate(l, mu);
    return acc;
  };

  // The row mass decreases in mu; bracket the root of total(mu) = 1.
  double mu_lo = -1.0;
  double mu_hi = 1.0;
  int expansions = 0;
  while (total(mu_lo) < 1.0) {
    mu_lo *= 2.0;
    if (++expansions > 60) throw NumericalError("root search could not bracket the multiplier");
  }
  expansions = 0;
  while (total(mu_hi) > 1.0) {
    mu_hi *= 2.0;
    if (++expansions > 60) throw NumericalError("root search could not bracket the multiplier");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    if (mid == mu_lo || mid == mu_hi) break;
    (total(mid) > 1.0 ? mu_lo : mu_hi) = mid;
  }
  const double mu = 0.5 * (mu_lo + mu_hi);
  RowVector out(k);
  for (Eigen::Index l = 0; l < k; ++l) out(l) = coordinate(l, mu);
  const double mass = out.sum();
  if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericalError("root search produced no mass");
  return out / mass;
}

Matrix dual_softmax_step_root_search(const Matrix& v, const Matrix& z, double gamma) {
  if (v.rows() != z.rows() || v.cols() != z.cols()) throw InputError("dual step shape mismatch");
  const SeparableDerivative entropy = [](double value, int) { return std::log(value) + 1.0; };
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    out.row(j) = dual_row_root_search(v.row(j), z.row(j), gamma, entropy).cwiseMax(kInteriorFloor);
  }
  return out;
}

double softmax_row_residual(const Eigen::Ref<const RowVector>& v_new,
                            const Eigen::Ref<const RowVector>& v0,
                            const Eigen::Ref<const RowVector>& z, double gamma) {
  // At the optimum (1 + c) log v - c z - log v0 is the same for every class.
  const double c = dual_rate(gamma, v0.size());
  const RowVector terms =
      (1.0 + c) * v_new.array().log() - c * z.array() - v0.array().log();
  return terms.maxCoeff() - terms.minCoeff();
}

}  // namespace l1saddle
