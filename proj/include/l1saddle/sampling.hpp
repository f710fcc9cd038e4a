#pragma once

#include <utility>

#include "l1saddle/core.hpp"
#include "l1saddle/rng.hpp"

namespace l1saddle {

enum class SamplingScheme { Partial, Full };

std::string to_string(SamplingScheme scheme);

/// Rank-one estimate scale * column * row. A zero estimate has `zero` set and
/// materializes to the all-zero matrix.
struct RankOneEstimate {
  Vector column;
  RowVector row;
  double scale = 0.0;
  bool zero = true;

  Matrix materialize(Eigen::Index rows, Eigen::Index cols) const;
};

/// Row-sampling distributions. `p` lives on the 2d augmented columns, `q` on the n examples.
/// A zero flag replaces a distribution whose total weight vanishes.
struct PartialDistributions {
  Vector p;
  bool primal_zero = false;
  Vector q;
  bool dual_zero = false;
};

/// Row-then-column distributions. P (2d x k) and Q (n x k) hold the
/// conditional class distributions; rows with zero weight are left at zero.
struct FullDistributions {
  Vector p;
  Matrix P;
  bool primal_zero = false;
  Vector q;
  Matrix Q;
  bool dual_zero = false;
};

PartialDistributions partial_distributions(const Dataset& data, const Matrix& u, const Matrix& v);
FullDistributions full_distributions(const Dataset& data, const Matrix& u, const Matrix& v);

/// Primal-side draw: xi estimates Xhat U (n x k).
struct PrimalDraw {
  int feature = -1;     // augmented column i
  int cls = -1;         // class for the full scheme, -1 otherwise
  double probability = 0.0;
  RankOneEstimate xi;
};

/// Dual-side draw: eta estimates Xhat^T (V - Y) (2d x k).
struct DualDraw {
  int example = -1;
  int cls = -1;
  double probability = 0.0;
  RankOneEstimate eta;
};

struct PartialDraw {
  PrimalDraw primal;
  DualDraw dual;
};

struct FullDraw {
  PrimalDraw primal;
  DualDraw dual;
};

/// Inverse-CDF draw from nonnegative weights with the given total, by linear scan.
/// Returns the first index whose running sum exceeds u * total and never returns
/// a zero-weight index.
int sample_index(const Eigen::Ref<const Vector>& weights, double total, double u);

/// Estimate for a fixed outcome: example (and class for the full scheme) on the
/// dual side, augmented feature (and class) on the primal side. `probability`
/// is the probability of that outcome. Throws InputError for zero-probability
/// outcomes; returns a zero estimate when the whole side is zero-flagged.
DualDraw dual_draw_at(const Dataset& data, const Matrix& v, SamplingScheme scheme, int example,
                      int cls);
PrimalDraw primal_draw_at(const Dataset& data, const Matrix& u, SamplingScheme scheme, int feature,
                          int cls);

/// Dual-side and primal-side draws. The full scheme consumes two uniforms per
/// side (row, then class) and the partial scheme one, also when the side is
/// zero-flagged, so the stream position depends only on the iteration count.
DualDraw draw_dual_side(const Dataset& data, const Matrix& v, SamplingScheme scheme,
                        CounterRng& rng);
PrimalDraw draw_primal_side(const Dataset& data, const Matrix& u, SamplingScheme scheme,
                            CounterRng& rng);

/// Both estimates at the same state, dual side first.
PartialDraw draw_partial(const Dataset& data, const Matrix& u, const Matrix& v, CounterRng& rng);
FullDraw draw_full(const Dataset& data, const Matrix& u, const Matrix& v, CounterRng& rng);

/// Upper bounds on the two variance proxies of the optimal samplers:
/// 4 R^2 ||X^T||_{inf x 2}^2 / n^2 and 8 ||X^T||_{inf x 2}^2 / n + 8 ||X||_{1 x inf}^2 / n^2.
std::pair<double, double> variance_bounds(const ProblemGeometry& geometry);

}  // namespace l1saddle
