#pragma once

// Random instance generators and independent numerical oracles shared by the
// unit tests and the acceptance binary. Nothing here calls into the closed
// forms under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "l1saddle/core.hpp"

namespace l1saddle::testing {

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(gen);
  return m;
}

inline Dataset random_dataset(int n, int d, int k, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> label(0, k - 1);
  std::vector<int> y(n);
  for (int& v : y) v = label(gen);
  return Dataset(random_matrix(n, d, gen), y, k);
}

/// Rows drawn uniformly from the open simplex.
inline Matrix random_stochastic(int rows, int cols, std::mt19937_64& gen) {
  std::exponential_distribution<double> expo;
  Matrix v(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) v(i, j) = expo(gen);
    v.row(i) /= v.row(i).sum();
  }
  return v;
}

/// Strictly positive point of {U >= 0, sum U <= R}.
inline Matrix random_solid_simplex(int rows, int cols, double radius, std::mt19937_64& gen) {
  std::exponential_distribution<double> expo;
  Matrix u(rows, cols);
  double total = expo(gen);  // slack coordinate
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) total += (u(i, j) = expo(gen));
  return u * (radius / total);
}

/// max |a - b| / |b| over entries.
inline double max_relative_difference(const Matrix& a, const Matrix& b) {
  return ((a - b).array().abs() / b.array().abs().max(1e-300)).maxCoeff();
}

inline Matrix materialize_augmented(const Dataset& data) {
  Matrix out(data.n(), 2 * data.d());
  out << data.features(), -data.features();
  return out;
}

/// Euclidean projection onto {x >= floor, sum x <= radius}.
inline Vector project_solid_simplex(const Vector& x, double radius, double floor = 0.0) {
  const Eigen::Index n = x.size();
  const double budget = radius - floor * static_cast<double>(n);
  Vector y = (x.array() - floor).cwiseMax(0.0);
  if (y.sum() > budget) {
    std::vector<double> sorted(x.data(), x.data() + n);
    for (double& s : sorted) s -= floor;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0;
    double theta = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      running += sorted[i];
      const double candidate = (running - budget) / static_cast<double>(i + 1);
      if (sorted[i] - candidate > 0.0) theta = candidate;
    }
    y = (x.array() - floor - theta).cwiseMax(0.0);
  }
  return y.array() + floor;
}

/// C1 ||x||_1 + <S, x> + C2 sum x log(x / x0), with 0 log 0 = 0.
inline double entropy_prox_objective(const Vector& x, const Vector& x0, const Vector& s, double c1,
                                     double c2) {
  double value = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    value += c1 * x(i) + s(i) * x(i);
    if (x(i) > 0.0) value += c2 * x(i) * std::log(x(i) / x0(i));
  }
  return value;
}

/// Projected gradient with backtracking on the entropy prox objective.
inline Vector entropy_prox_by_projected_gradient(const Vector& x0, const Vector& s, double c1,
                                                 double c2, double radius,
                                                 int max_steps = 100000) {
  constexpr double kFloor = 1e-14;
  const auto f = [&](const Vector& x) { return entropy_prox_objective(x, x0, s, c1, c2); };
  const auto grad = [&](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      g(i) = c1 + s(i) + c2 * (std::log(x(i) / x0(i)) + 1.0);
    }
    return g;
  };
  Vector x = project_solid_simplex(x0 * (0.5 * radius / x0.sum()), radius, kFloor);
  double step = 1.0;
  for (int it = 0; it < max_steps; ++it) {
    const Vector g = grad(x);
    const double fx = f(x);
    Vector next;
    for (int bt = 0; bt < 80; ++bt) {
      next = project_solid_simplex(x - step * g, radius, kFloor);
      const Vector diff = next - x;
      if (f(next) <= fx + g.dot(diff) + diff.squaredNorm() / (2.0 * step) + 1e-16) break;
      step *= 0.5;
    }
    const double moved = (next - x).norm();
    x = next;
    step *= 1.5;
    if (moved < 1e-15) break;
  }
  return x;
}

/// Same subproblem solved through its KKT conditions by nested bisection: for a
/// multiplier mu on the mass constraint, each coordinate solves
/// C1 + S_i + C2 (log(x_i / x0_i) + 1) + mu = 0 by bisection on log x_i, and mu
/// is bisected until the mass fits. Slower than the closed form but shares no
/// code with it and stays accurate when coordinates approach zero.
inline Vector entropy_prox_by_bisection(const Vector& x0, const Vector& s, double c1, double c2,
                                        double radius) {
  const auto coordinates = [&](double mu) {
    Vector x(x0.size());
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      double lo = -700.0, hi = 700.0;  // log x
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = c1 + s(i) + c2 * (mid - std::log(x0(i)) + 1.0) + mu;
        (g > 0.0 ? hi : lo) = mid;
      }
      x(i) = std::exp(0.5 * (lo + hi));
    }
    return x;
  };
  Vector x = coordinates(0.0);
  if (x.sum() <= radius) return x;
  double lo = 0.0, hi = 1.0;
  while (coordinates(hi).sum() > radius) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (coordinates(mid).sum() > radius ? lo : hi) = mid;
  }
  return coordinates(hi);
}

}  // namespace l1saddle::testing
