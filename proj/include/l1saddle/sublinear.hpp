#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "l1saddle/core.hpp"
#include "l1saddle/losses.hpp"
#include "l1saddle/solvers_exact.hpp"

namespace l1saddle {

// Scaled representation of the hinge-loss iterates:
//   U(i, l) = u_cols[l](i) * alpha(i),   V(j, l) = v_tilde(j, l) * beta(j).
// Primal columns are stored separately so that a column which has never been
// touched can stay implicit (its entries equal u_default). In dense mode every
// column is materialized up front.
// Dual-side matrices are column-major: every dual update walks one class
// column across all examples.
using ColumnMatrix = Eigen::MatrixXd;

struct LazyState {
  std::vector<Vector> u_cols;  // k columns of length 2d; empty = untouched
  Vector u_default;            // value of an untouched entry in row i
  Vector alpha;                // length 2d
  Vector pi;                   // cached ||U(i,:)||_1
  ColumnMatrix v_tilde;        // n x k
  Vector beta;                 // length n
  Vector rho;                  // cached ||V(j,:) - Y(j,:)||_1 = 2 - 2 V(j, y_j)
  Vector sigma;                // ||Xhat(:,i)||_2, length 2d
  Vector tau;                  // ||Xhat(j,:)||_inf, length n
  bool scale_alarm = false;    // set when a scale leaves [1e-120, 1e120]

  Eigen::Index primal_rows() const { return alpha.size(); }
  int classes() const { return static_cast<int>(u_cols.size()); }
  bool touched(int l) const { return u_cols[static_cast<std::size_t>(l)].size() > 0; }
  double u_tilde(Eigen::Index i, int l) const;
};

// Cumulative-sum machinery. For a primal entry (i, l), a_prev holds the value
// of `a` right after the last iteration that tracked column l; the sum of all
// iterates up to that point sits in u_sum. Untouched columns share
// u_default_sum and an implicit a_prev of zero.
struct AverageTracker {
  std::vector<Vector> u_sum;
  std::vector<Vector> a_prev;
  Vector u_default_sum;
  Vector a;
  ColumnMatrix v_sum;
  ColumnMatrix b_prev;
  Vector b;
};

inline constexpr double kScaleFloor = 1e-120;
inline constexpr double kScaleCeiling = 1e120;

/// Initial point U = R/(2dk), V = 1/k with all scales 1. With `sparse` set no
/// primal column is allocated until it is first updated.
LazyState make_lazy_state(const Dataset& data, double radius, bool sparse = false);
AverageTracker make_tracker(const LazyState& state);

/// U and V in explicit form (2d x k and n x k).
Matrix materialize_primal(const LazyState& state);
Matrix materialize_dual(const LazyState& state);

/// Adds the pending contribution of column l to the cumulative sum and
/// advances the running scale sum. Must run before the update of column l.
void track_primal(AverageTracker& tracker, LazyState& state, int l);
/// Dual counterpart: entries (j, cls) and (j, y_j) of every row.
void track_dual(AverageTracker& tracker, const LazyState& state, int cls,
                const std::vector<int>& labels);

/// Folds every scale into the stored matrices and brings the cumulative sums
/// up to date, leaving alpha = beta = 1 and a = b = 0.
void flush(LazyState& state, AverageTracker& tracker);

/// Multiplicative primal step whose gradient estimate has the single non-zero
/// column `eta` / n at class l. Returns the number of flushes it had to perform
/// (0 or 1); throws NumericalError if the normalizer stays degenerate.
int update_primal_lazy(LazyState& state, AverageTracker& tracker, const Eigen::Ref<const Vector>& eta,
                       int l, double gamma, const ProblemGeometry& geometry);

/// Hinge dual step with argument xi e_cls^T - Y.
int update_dual_lazy(LazyState& state, AverageTracker& tracker, const Eigen::Ref<const Vector>& xi,
                     int cls, const std::vector<int>& labels, double gamma);

/// Averages of iterates 0..t divided by t + 1, where t is the number of
/// completed iterations. Does not modify the tracker.
std::pair<Matrix, Matrix> finalize_averages(const AverageTracker& tracker, const LazyState& state,
                                            std::int64_t iterations);

/// Entry of a folded d x k primal matrix (0-based indices).
struct Triplet {
  int row = 0;
  int cls = 0;
  double value = 0.0;
};

struct SublinearOptions {
  // Keep untouched primal columns implicit and return the folded average only
  // as triplets (u_avg stays empty).
  bool sparse_output = false;
};

struct SublinearResult {
  Matrix u_avg;  // 2d x k; empty in sparse-output mode
  Matrix v_avg;  // n x k
  std::vector<Triplet> folded;  // non-zero entries of fold(u_avg)
  std::vector<GapReport> reports;
  double loop_seconds = 0.0;
  double gamma = 0.0;
  std::int64_t operations = 0;  // element-level work inside the iteration loop
  double operations_per_iteration = 0.0;
  int flushes = 0;
};

/// Sublinear stochastic mirror descent for the hinge loss: full sampling
/// scheme, lazy scaled updates and cumulative-sum tracking. Draws the same
/// uniforms from CounterRng(seed, kDrawStream) as smd_solve with the full
/// scheme, so both follow the same trajectory. on_iterate, when set,
/// receives the materialized iterates 0..T.
SublinearResult sublinear_solve(const Dataset& data, const ProblemGeometry& geometry,
                                const SolverConfig& config, const SublinearOptions& options = {});

/// Dense d x k matrix from folded triplets.
Matrix triplets_to_dense(const std::vector<Triplet>& triplets, int d, int k);

}  // namespace l1saddle
