#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "l1saddle/prox.hpp"
#include "test_support.hpp"

using namespace l1saddle;
using namespace l1saddle::testing;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

ProblemGeometry geometry_for(int d, int k, double radius, double lambda) {
  const Dataset data(Matrix::Ones(1, d), {0}, k);
  return geometry_from(data, radius, lambda, LossKind::Hinge);
}

// Softmax dual row objective: sum v log v - <z, v> + KL(v, v0) / c.
double softmax_row_objective(const RowVector& v, const RowVector& v0, const RowVector& z,
                             double c) {
  double value = 0.0;
  for (Eigen::Index l = 0; l < v.size(); ++l) {
    if (v(l) <= 0.0) continue;
    value += v(l) * std::log(v(l)) - z(l) * v(l) + v(l) * std::log(v(l) / v0(l)) / c;
  }
  return value;
}

}  // namespace

TEST(EntropyProx, InteriorExampleMatchesProjectedGradient) {
  const Vector x0 = vec({1.0, 1.0});
  const Vector s = Vector::Zero(2);
  const Vector x = solid_simplex_entropy_prox(x0, s, 0.0, 1.0, 10.0);
  EXPECT_NEAR(x(0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(x(1), std::exp(-1.0), 1e-15);
  const Vector oracle = entropy_prox_by_projected_gradient(x0, s, 0.0, 1.0, 10.0);
  EXPECT_LT((x - oracle).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(EntropyProx, RadiusCap) {
  const Vector x = solid_simplex_entropy_prox(vec({1.0, 1.0}), Vector::Zero(2), 0.0, 1.0, 0.1);
  EXPECT_NEAR(x(0), 0.05, 1e-16);
  EXPECT_NEAR(x(1), 0.05, 1e-16);
}

TEST(EntropyProx, ShiftOnlyChangesMassWhileCapped) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> unif(0.2, 2.0);
  Vector x0(5), s(5);
  for (int i = 0; i < 5; ++i) {
    x0(i) = unif(gen);
    s(i) = unif(gen) - 1.0;
  }
  const double radius = 0.3;
  const Vector base = solid_simplex_entropy_prox(x0, s, 0.0, 1.0, radius);
  EXPECT_NEAR(base.sum(), radius, 1e-15);
  for (double c : {-3.0, -1.0, 0.0}) {
    const Vector shifted = solid_simplex_entropy_prox(x0, s.array() + c, 0.0, 1.0, radius);
    EXPECT_LT((shifted - base).cwiseAbs().maxCoeff(), 1e-15);
  }
  // Large positive shifts leave the cap: direction is kept, mass shrinks.
  const Vector shrunk = solid_simplex_entropy_prox(x0, s.array() + 5.0, 0.0, 1.0, radius);
  EXPECT_LT(shrunk.sum(), radius);
  EXPECT_LT((shrunk / shrunk.sum() - base / base.sum()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EntropyProx, RejectsBadParameters) {
  const Vector x0 = vec({1.0, 1.0});
  const Vector s = Vector::Zero(2);
  EXPECT_THROW(solid_simplex_entropy_prox(x0, s, 0.0, 0.0, 1.0), InputError);
  EXPECT_THROW(solid_simplex_entropy_prox(x0, s, 0.0, 1.0, 0.0), InputError);
  EXPECT_THROW(solid_simplex_entropy_prox(vec({1.0, 0.0}), s, 0.0, 1.0, 1.0), InputError);
}

TEST(EntropyProx, ExtremeExponentsStayFinite) {
  const Vector x = solid_simplex_entropy_prox(vec({1.0, 1.0, 1.0}), vec({-2000.0, -1990.0, 0.0}),
                                              0.0, 1.0, 1.0);
  EXPECT_TRUE(x.allFinite());
  EXPECT_NEAR(x.sum(), 1.0, 1e-12);
  EXPECT_GE(x.minCoeff(), kInteriorFloor);
}

TEST(EntropyProx, BeatsRandomFeasiblePoints) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    Vector x0(n), s(n);
    for (int i = 0; i < n; ++i) {
      x0(i) = 0.1 + 2.0 * unif(gen);
      s(i) = 4.0 * unif(gen) - 2.0;
    }
    const double c1 = unif(gen);
    const double c2 = 0.3 + 2.0 * unif(gen);
    const double radius = 0.2 + 4.0 * unif(gen);
    const Vector x = solid_simplex_entropy_prox(x0, s, c1, c2, radius);
    EXPECT_LE(x.sum(), radius * (1.0 + 1e-15));
    const double best = entropy_prox_objective(x, x0, s, c1, c2);
    for (int rep = 0; rep < 10000; ++rep) {
      const Matrix cand = random_solid_simplex(1, n, radius * unif(gen), gen);
      const Vector y = cand.row(0).transpose();
      ASSERT_LE(best, entropy_prox_objective(y, x0, s, c1, c2) + 1e-9);
    }
  }
}

TEST(PrimalStep, FixedPointWithoutGradient) {
  std::mt19937_64 gen(3);
  const ProblemGeometry g = geometry_for(2, 3, 2.0, 0.0);
  const Matrix u = random_solid_simplex(4, 3, 1.5, gen);
  const Matrix next = primal_md_step(u, Matrix::Zero(4, 3), 0.7, g);
  EXPECT_LT((next - u).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PrimalStep, PureShrinkageUnderLambda) {
  std::mt19937_64 gen(4);
  const ProblemGeometry g = geometry_for(2, 3, 2.0, 0.4);
  const Matrix u = random_solid_simplex(4, 3, 1.5, gen);
  const double gamma = 0.3;
  const Matrix next = primal_md_step(u, Matrix::Zero(4, 3), gamma, g);
  const Matrix ratio = next.cwiseQuotient(u);
  const double expected = std::exp(-2.0 * gamma * g.lambda * g.radius * g.log_2dk);
  EXPECT_LT((ratio.array() - expected).abs().maxCoeff(), 1e-14);
}

TEST(PrimalStep, MatchesProjectedGradientOnSubproblem) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    const ProblemGeometry g = geometry_for(2, 3, 1.0 + trial, 0.05 * trial);
    const Matrix u = random_solid_simplex(4, 3, g.radius, gen);
    const Matrix s = random_matrix(4, 3, gen);
    const double gamma = 0.1;
    const Matrix next = primal_md_step(u, s, gamma, g);
    // Subproblem: <S + lambda, U> + KL-type term scaled by 1 / (2 gamma R L).
    const double c2 = 1.0 / (2.0 * gamma * g.radius * g.log_2dk);
    const Vector x0 = u.reshaped<Eigen::RowMajor>();
    const Vector sv = s.reshaped<Eigen::RowMajor>();
    const Vector oracle = entropy_prox_by_projected_gradient(x0, sv, g.lambda - c2, c2, g.radius);
    const Vector got = next.reshaped<Eigen::RowMajor>();
    EXPECT_LT((got - oracle).cwiseAbs().maxCoeff(), 1e-5);
    EXPECT_LE(next.sum(), g.radius * (1.0 + 1e-14));
  }
}

TEST(PrimalStep, ShiftInvarianceOfExponent) {
  std::mt19937_64 gen(6);
  const ProblemGeometry g = geometry_for(3, 2, 2.0, 0.1);
  const Matrix u = random_solid_simplex(6, 2, 2.0, gen);
  const Matrix s = random_matrix(6, 2, gen);
  const double gamma = 0.05;
  const Matrix next = primal_md_step(u, s, gamma, g);
  // Unshifted closed form.
  const double a = 2.0 * gamma * g.radius * g.log_2dk;
  const Matrix w = u.cwiseProduct((-a * s).array().exp().matrix());
  const double nu = std::min(std::exp(-a * g.lambda), g.radius / w.sum());
  EXPECT_LT((next - nu * w).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PrimalStep, HugeGradientStaysFeasible) {
  const ProblemGeometry g = geometry_for(1, 2, 3.0, 0.0);
  Matrix u = Matrix::Constant(2, 2, 0.5);
  Matrix s(2, 2);
  s << -1e6, 0.0, 0.0, 1e6;
  const Matrix next = primal_md_step(u, s, 1.0, g);
  EXPECT_TRUE(next.allFinite());
  EXPECT_GT(next.minCoeff(), 0.0);
  EXPECT_NEAR(next.sum(), 3.0, 1e-12);
  EXPECT_THROW(primal_md_step(Matrix::Zero(2, 2), s, 1.0, g), InputError);
}

TEST(HingeDualStep, ZeroStepIsIdentity) {
  std::mt19937_64 gen(7);
  const Matrix v = random_stochastic(4, 3, gen);
  EXPECT_LT((dual_hinge_step(v, random_matrix(4, 3, gen), 0.0) - v).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HingeDualStep, RowConstantShiftIsIdentity) {
  std::mt19937_64 gen(8);
  const Matrix v = random_stochastic(4, 3, gen);
  Matrix z(4, 3);
  for (int j = 0; j < 4; ++j) z.row(j).setConstant(3.0 * j - 2.0);
  EXPECT_LT((dual_hinge_step(v, z, 0.8) - v).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HingeDualStep, HandComputedTwoClassRow) {
  const Matrix v = Matrix::Constant(1, 2, 0.5);
  Matrix z(1, 2);
  z << 1.0, 0.0;
  const double gamma = 1.0 / (2.0 * std::log(2.0));
  const Matrix next = dual_hinge_step(v, z, gamma);
  const double e = std::exp(1.0);
  EXPECT_NEAR(next(0, 0), e / (e + 1.0), 1e-15);
  EXPECT_NEAR(next(0, 1), 1.0 / (e + 1.0), 1e-15);
}

TEST(HingeDualStep, ShiftedAndUnshiftedAgree) {
  std::mt19937_64 gen(9);
  const Matrix v = random_stochastic(5, 4, gen);
  const Matrix z = random_matrix(5, 4, gen);
  const double gamma = 0.2;
  const double c = 2.0 * gamma * std::log(4.0);
  Matrix plain = v.cwiseProduct((c * z).array().exp().matrix());
  for (int j = 0; j < 5; ++j) plain.row(j) /= plain.row(j).sum();
  EXPECT_LT((dual_hinge_step(v, z, gamma) - plain).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SoftmaxDualStep, VanishingStep) {
  std::mt19937_64 gen(10);
  const Matrix v = random_stochastic(3, 4, gen);
  EXPECT_LT((dual_softmax_step(v, random_matrix(3, 4, gen), 1e-12) - v).cwiseAbs().maxCoeff(),
            1e-8);
}

TEST(SoftmaxDualStep, UniformIsFixedAtZeroArgument) {
  const Matrix v = Matrix::Constant(2, 5, 0.2);
  EXPECT_LT((dual_softmax_step(v, Matrix::Zero(2, 5), 0.7) - v).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(SoftmaxDualStep, ClosedFormMatchesRootSearch) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 4;
    const Matrix v = random_stochastic(4, k, gen);
    const Matrix z = 2.0 * random_matrix(4, k, gen);
    const double gamma = 0.05 + 0.1 * trial;
    const Matrix closed = dual_softmax_step(v, z, gamma);
    const Matrix searched = dual_softmax_step_root_search(v, z, gamma);
    EXPECT_LT((closed - searched).cwiseAbs().maxCoeff(), 1e-9);
    for (int j = 0; j < 4; ++j) {
      EXPECT_LE(softmax_row_residual(closed.row(j), v.row(j), z.row(j), gamma), 1e-10);
      EXPECT_NEAR(closed.row(j).sum(), 1.0, 1e-12);
    }
  }
}

// Three-class row: the closed form must minimize the row subproblem; compare
// against a dense grid over the 2-simplex refined around the best cell.
TEST(SoftmaxDualStep, MinimizesRowSubproblemOnGrid) {
  std::mt19937_64 gen(12);
  const RowVector v0 = random_stochastic(1, 3, gen).row(0);
  const RowVector z = random_matrix(1, 3, gen).row(0);
  const double gamma = 0.4;
  const double c = 2.0 * gamma * std::log(3.0);
  const RowVector got = dual_softmax_step(v0, z, gamma).row(0);
  const double at_got = softmax_row_objective(got, v0, z, c);
  const int steps = 600;
  for (int a = 1; a < steps; ++a) {
    for (int b = 1; a + b < steps; ++b) {
      RowVector p(3);
      p << a / double(steps), b / double(steps), (steps - a - b) / double(steps);
      ASSERT_LE(at_got, softmax_row_objective(p, v0, z, c) + 1e-12);
    }
  }
}

TEST(RootSearch, ZeroStepReturnsStart) {
  const RowVector v0 = (RowVector(3) << 0.2, 0.3, 0.5).finished();
  const SeparableDerivative entropy = [](double x, int) { return std::log(x) + 1.0; };
  const RowVector out = dual_row_root_search(v0, RowVector::Zero(3), 0.0, entropy);
  EXPECT_EQ(out, v0);
}

TEST(RootSearch, LinearPenaltyMatchesHingeStep) {
  // f(v) = v_y - 1 has derivative [l == y]; the step equals the hinge step with Z - Y.
  std::mt19937_64 gen(13);
  const RowVector v0 = random_stochastic(1, 4, gen).row(0);
  const RowVector z = random_matrix(1, 4, gen).row(0);
  const int label = 2;
  const SeparableDerivative linear = [label](double, int cls) { return cls == label ? 1.0 : 0.0; };
  const double gamma = 0.3;
  const RowVector searched = dual_row_root_search(v0, z, gamma, linear);
  RowVector shifted = z;
  shifted(label) -= 1.0;
  const Matrix hinge = dual_hinge_step(Matrix(v0), Matrix(shifted), gamma);
  EXPECT_LT((searched - hinge.row(0)).cwiseAbs().maxCoeff(), 1e-9);
}
