// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. All tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "l1saddle/bench.hpp"
#include "l1saddle/losses.hpp"
#include "l1saddle/prox.hpp"
#include "l1saddle/sampling.hpp"
#include "l1saddle/solvers_stochastic.hpp"
#include "l1saddle/sublinear.hpp"
#include "l1saddle/synth.hpp"
#include "moments.hpp"
#include "test_support.hpp"

using namespace l1saddle;
using namespace l1saddle::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

SolverConfig final_only(std::int64_t iterations, std::uint64_t seed = 0) {
  SolverConfig c;
  c.iterations = iterations;
  c.seed = seed;
  c.gap_every = -1;
  return c;
}

// 1. Lazy sublinear iterates against the dense full-sampling solver.
Outcome lazy_dense_equivalence() {
  constexpr double kTol = 1e-8;
  constexpr double kMaxSeconds = 10.0;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  const Dataset data = random_dataset(16, 16, 16, gen);
  const ProblemGeometry g = geometry_from(data, 16.0, 1e-3, LossKind::Hinge);
  const SolverConfig c = final_only(500, 7);
  const SolveResult dense = smd_solve(data, g, LossKind::Hinge, SamplingScheme::Full, c);
  const SublinearResult lazy = sublinear_solve(data, g, c);
  const double worst = std::max(max_relative_difference(lazy.u_avg, dense.iterate.u_avg),
                                max_relative_difference(lazy.v_avg, dense.iterate.v_avg));
  const double elapsed = seconds_since(start);
  return {worst <= kTol && elapsed < kMaxSeconds,
          fmt("max relative difference %.3g (tol %.0g), %.2f s", worst, kTol, elapsed)};
}

// 2. Sum over all outcomes of probability times estimate.
Outcome unbiased_by_enumeration() {
  constexpr double kTol = 1e-12;
  const int n = 5, d = 4, k = 3;
  std::mt19937_64 gen(202);
  const Instance s = random_instance(n, d, k, gen);
  const Matrix xhat = materialize_augmented(s.data);
  const Matrix target_xi = xhat * s.u;
  const Matrix target_eta = xhat.transpose() * (s.v - s.data.one_hot());
  double worst = 0.0;
  for (SamplingScheme scheme : {SamplingScheme::Partial, SamplingScheme::Full}) {
    const bool full = scheme == SamplingScheme::Full;
    Matrix mean_xi = Matrix::Zero(n, k);
    Matrix mean_eta = Matrix::Zero(2 * d, k);
    for (int i = 0; i < 2 * d; ++i) {
      for (int l = 0; l < (full ? k : 1); ++l) {
        const PrimalDraw draw = primal_draw_at(s.data, s.u, scheme, i, full ? l : -1);
        mean_xi += draw.probability * draw.xi.materialize(n, k);
      }
    }
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < (full ? k : 1); ++l) {
        const DualDraw draw = dual_draw_at(s.data, s.v, scheme, j, full ? l : -1);
        mean_eta += draw.probability * draw.eta.materialize(2 * d, k);
      }
    }
    worst = std::max({worst, (mean_xi - target_xi).cwiseAbs().maxCoeff(),
                      (mean_eta - target_eta).cwiseAbs().maxCoeff()});
  }
  return {worst <= kTol, fmt("max deviation %.3g over both schemes (tol %.0g)", worst, kTol)};
}

// 3. Optimal distributions against random feasible ones.
Outcome optimal_distributions() {
  constexpr double kSlack = 1e-10;
  std::mt19937_64 gen(303);
  std::uniform_int_distribution<int> size(2, 5);
  int violations = 0;
  double min_margin = INFINITY;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = size(gen), d = size(gen), k = size(gen);
    const Instance s = random_instance(n, d, k, gen);
    const PartialDistributions part = partial_distributions(s.data, s.u, s.v);
    const FullDistributions full = full_distributions(s.data, s.u, s.v);
    const double best[4] = {partial_primal_moment(s, part.p), partial_dual_moment(s, part.q),
                            full_primal_moment(s, full.p, full.P),
                            full_dual_moment(s, full.q, full.Q)};
    for (int rep = 0; rep < 200; ++rep) {
      const double other[4] = {
          partial_primal_moment(s, random_simplex_vector(2 * d, gen)),
          partial_dual_moment(s, random_simplex_vector(n, gen)),
          full_primal_moment(s, random_simplex_vector(2 * d, gen), random_stochastic(2 * d, k, gen)),
          full_dual_moment(s, random_simplex_vector(n, gen), random_stochastic(n, k, gen))};
      for (int m = 0; m < 4; ++m) {
        min_margin = std::min(min_margin, other[m] - best[m]);
        if (best[m] > other[m] + kSlack) ++violations;
      }
    }
  }
  return {violations == 0, fmt("%.0f violations in 16000 comparisons, smallest margin %.3g",
                               violations, min_margin)};
}

// 4. Closed-form entropic prox against a KKT bisection oracle, with projected
// gradient as a second check on the objective.
Outcome prox_closed_form() {
  constexpr double kObjectiveTol = 1e-5;
  constexpr double kIterateTol = 1e-4;
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_obj = 0.0, worst_x = 0.0, worst_pg = -INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    Vector x0(n), s(n);
    for (int i = 0; i < n; ++i) {
      x0(i) = 0.05 + 2.0 * unif(gen);
      s(i) = 4.0 * unif(gen) - 2.0;
    }
    const double c1 = 2.0 * unif(gen) - 0.5;
    const double c2 = 0.3 + 2.0 * unif(gen);
    const double radius = 0.2 + 4.0 * unif(gen);
    const Vector x = solid_simplex_entropy_prox(x0, s, c1, c2, radius);
    const Vector oracle = entropy_prox_by_bisection(x0, s, c1, c2, radius);
    const double fx = entropy_prox_objective(x, x0, s, c1, c2);
    worst_obj = std::max(worst_obj, std::abs(fx - entropy_prox_objective(oracle, x0, s, c1, c2)));
    worst_x = std::max(worst_x, (x - oracle).cwiseAbs().maxCoeff());
    const Vector pg = entropy_prox_by_projected_gradient(x0, s, c1, c2, radius);
    worst_pg = std::max(worst_pg, fx - entropy_prox_objective(pg, x0, s, c1, c2));
  }
  return {worst_obj <= kObjectiveTol && worst_x <= kIterateTol && worst_pg <= kObjectiveTol,
          fmt("objective %.3g (tol %.0g), iterate %.3g (tol %.0g)", worst_obj, kObjectiveTol,
              worst_x, kIterateTol) +
              fmt(", excess over projected gradient %.3g", worst_pg)};
}

// 5. Lipschitz constant against enumeration of the extreme points +-e_il.
Outcome lipschitz_brute_force() {
  constexpr double kRelTol = 1e-12;
  std::mt19937_64 gen(505);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<int> classes(2, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = random_dataset(size(gen), size(gen), classes(gen), gen);
    const Matrix xhat = materialize_augmented(data);
    double best = 0.0;
    for (int i = 0; i < xhat.cols(); ++i) {
      for (int l = 0; l < data.k(); ++l) {
        for (double sign : {1.0, -1.0}) {
          Matrix u = Matrix::Zero(xhat.cols(), data.k());
          u(i, l) = sign;
          best = std::max(best, mixed_norm(xhat * u, NormIndex::Two, NormIndex::Inf) / data.n());
        }
      }
    }
    const ProblemGeometry g = geometry_from(data, 1.0, 0.0, LossKind::Hinge);
    worst = std::max(worst, std::abs(g.lipschitz - best) / best);
  }
  return {worst <= kRelTol, fmt("max relative error %.3g (tol %.0g)", worst, kRelTol)};
}

// 6. Deterministic rate: slope of log gap against log T.
Outcome md_rate() {
  constexpr double kSlopeLow = -0.65, kSlopeHigh = -0.35;
  constexpr double kMaxSeconds = 120.0;
  const auto start = std::chrono::steady_clock::now();
  const SyntheticProblem p = synth_generate(50, 50, 50, 606);
  const ProblemGeometry g =
      geometry_from(p.data, p.planted.cwiseAbs().sum(), 1e-3, LossKind::Hinge);
  std::vector<double> xs, ys;
  for (double e : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    const auto T = static_cast<std::int64_t>(std::llround(std::pow(10.0, e)));
    const double gap = md_solve(p.data, g, LossKind::Hinge, final_only(T)).reports.back().gap;
    xs.push_back(std::log(double(T)));
    ys.push_back(std::log(gap));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  const double elapsed = seconds_since(start);
  return {slope >= kSlopeLow && slope <= kSlopeHigh && elapsed < kMaxSeconds,
          fmt("slope %.3f in [%.2f, %.2f], final gap %.3g", slope, kSlopeLow, kSlopeHigh,
              std::exp(ys.back())) +
              fmt(", %.1f s", elapsed)};
}

// 7. Stochastic bound for the full scheme, median over seeds.
Outcome smd_bound() {
  constexpr double kMaxSeconds = 120.0;
  const auto start = std::chrono::steady_clock::now();
  const int n = 30;
  const std::int64_t T = 10000;
  const SyntheticProblem p = synth_generate(n, n, n, 707);
  const ProblemGeometry g =
      geometry_from(p.data, p.planted.cwiseAbs().sum(), 1e-3, LossKind::Hinge);
  std::vector<double> gaps;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    gaps.push_back(smd_solve(p.data, g, LossKind::Hinge, SamplingScheme::Full,
                             final_only(T, seed))
                       .reports.back()
                       .gap);
  }
  const double bound = (16.2 * g.colnorm2_max / std::sqrt(double(n)) + 8.0 * g.rowinf_sum / n) *
                       g.log_2dk * g.radius / std::sqrt(double(T));
  const double med = median(gaps);
  const double elapsed = seconds_since(start);
  return {med <= bound && elapsed < kMaxSeconds,
          fmt("median gap %.4g <= bound %.4g, %.1f s", med, bound, elapsed)};
}

// 8. Monte Carlo second moments against the variance proxy bounds.
Outcome variance_bounds_monte_carlo() {
  constexpr int kDraws = 10000;
  constexpr double kStdErrors = 3.0;
  std::mt19937_64 gen(808);
  bool pass = true;
  double worst = -INFINITY;  // largest (estimate - bound) / standard error
  for (int state = 0; state < 5; ++state) {
    const int n = 4 + state, d = 3 + state % 3, k = 3 + state % 2;
    const Instance s = random_instance(n, d, k, gen);
    const ProblemGeometry g = geometry_from(s.data, 1.7, 0.0, LossKind::Hinge);
    const Matrix xhat = materialize_augmented(s.data);
    const Matrix xi_mean = xhat * s.u;
    const Matrix eta_mean = xhat.transpose() * (s.v - s.data.one_hot());
    const double n2 = double(n) * n;
    for (SamplingScheme scheme : {SamplingScheme::Partial, SamplingScheme::Full}) {
      CounterRng rng(900 + state, CounterRng::kDrawStream);
      double su = 0, su2 = 0, sv = 0, sv2 = 0;
      for (int rep = 0; rep < kDraws; ++rep) {
        const DualDraw dual = draw_dual_side(s.data, s.v, scheme, rng);
        const PrimalDraw primal = draw_primal_side(s.data, s.u, scheme, rng);
        const double a = mixed_norm(primal.xi.materialize(n, k) - xi_mean, NormIndex::Two,
                                    NormIndex::Inf);
        const double b = (dual.eta.materialize(2 * d, k) - eta_mean).cwiseAbs().maxCoeff();
        const double a2 = a * a / n2, b2 = b * b / n2;
        su += a2;
        su2 += a2 * a2;
        sv += b2;
        sv2 += b2 * b2;
      }
      const double mu = su / kDraws, mv = sv / kDraws;
      const double se_u = std::sqrt(std::max(su2 / kDraws - mu * mu, 0.0) / kDraws);
      const double se_v = std::sqrt(std::max(sv2 / kDraws - mv * mv, 0.0) / kDraws);
      pass = pass && mu <= g.sigma2_u_bar + kStdErrors * se_u &&
             mv <= g.sigma2_v_bar + kStdErrors * se_v;
      worst = std::max({worst, (mu - g.sigma2_u_bar) / std::max(se_u, 1e-300),
                        (mv - g.sigma2_v_bar) / std::max(se_v, 1e-300)});
    }
  }
  return {pass, fmt("largest excess over bound %.3g standard errors (limit %.0f)", worst,
                    kStdErrors)};
}

// 9. Sublinear runtime scaling.
Outcome sublinear_scaling() {
  constexpr double kRatioLow = 1.5, kRatioHigh = 3.0;
  constexpr double kMaxSeconds = 60.0;
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.sizes = {{200, 200, 200}, {400, 400, 400}, {800, 800, 800}};
  spec.iterations = {2000};
  spec.lambda = 1e-3;
  spec.radius_policy = RadiusPolicy::FromPlanted;
  spec.timing_repeats = 5;
  const std::vector<ScalingRow> rows = run_scaling(spec);
  bool pass = true;
  std::string detail = "ratios";
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double ratio = rows[r].wall_seconds / rows[r - 1].wall_seconds;
    pass = pass && ratio >= kRatioLow && ratio <= kRatioHigh;
    detail += fmt(" %.2f", ratio);
  }
  // Operation counts: proportional to n + d + k, so exactly doubling here.
  double per_dim = 0.0;
  for (const ScalingRow& row : rows) {
    const double current = row.ops_per_iteration / (3.0 * row.n);
    if (per_dim > 0.0 && std::abs(current - per_dim) > 1e-12 * per_dim) pass = false;
    per_dim = current;
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < kMaxSeconds;
  return {pass, detail + fmt(" in [%.1f, %.1f], ops/(n+d+k) = %.3g, %.1f s", kRatioLow,
                             kRatioHigh, per_dim, elapsed)};
}

// 10. Sublinear against the subgradient baseline at matched wall-clock.
Outcome baseline_comparison() {
  const int size = 100;
  const std::int64_t sublinear_iterations = 100000;  // a point of the 10^(m/2) grid
  const SyntheticProblem p = synth_generate(size, size, size, 1010);
  const double radius = p.planted.cwiseAbs().sum();
  const double lambda = 1e-3;
  const ProblemGeometry g = geometry_from(p.data, radius, lambda, LossKind::Hinge);

  // Per-iteration cost of the baseline, measured once on a long run.
  const std::int64_t calibration = 20000;
  SolverConfig cal = final_only(calibration);
  const double ssm_per_iteration =
      ssm_solve(p.data, lambda, radius, cal).loop_seconds / double(calibration);

  std::vector<double> sub_obj, ssm_obj, ssm_iters;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverConfig c = final_only(sublinear_iterations, seed);
    c.report_gaps = false;
    const SublinearResult sub = sublinear_solve(p.data, g, c);
    sub_obj.push_back(
        primal_objective(fold(sub.u_avg), p.data, lambda, LossKind::Hinge));
    const auto matched = std::max<std::int64_t>(
        1, std::llround(sub.loop_seconds / ssm_per_iteration));
    const SsmResult ssm = ssm_solve(p.data, lambda, radius, final_only(matched, seed));
    ssm_obj.push_back(primal_objective(ssm.u_avg, p.data, lambda, LossKind::Hinge));
    ssm_iters.push_back(double(matched));
  }
  const double a = median(sub_obj), b = median(ssm_obj);
  return {a <= b, fmt("median primal sublinear %.4g <= ssm %.4g (ssm median T = %.0f vs %.0f)", a,
                      b, median(ssm_iters), double(sublinear_iterations))};
}

// 11. Weak duality and the gap at (0, Y).
Outcome gap_soundness() {
  constexpr double kWeakTol = -1e-9;
  std::mt19937_64 gen(1111);
  double min_gap = INFINITY;
  int pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset data = random_dataset(6, 4, 3, gen);
    for (LossKind loss : {LossKind::Hinge, LossKind::Softmax}) {
      const ProblemGeometry g = geometry_from(data, 2.0, 0.01 * trial, loss);
      for (int rep = 0; rep < 10; ++rep, ++pairs) {
        const Matrix u = random_solid_simplex(8, 3, 2.0, gen);
        const Matrix v = random_stochastic(6, 3, gen);
        min_gap = std::min(min_gap, duality_gap(u, v, data, g, loss).gap);
      }
    }
  }
  double worst_at_labels = 0.0;
  const Dataset data = random_dataset(8, 5, 4, gen);
  for (double lambda : {0.0, 1e-3, 0.5, 100.0}) {
    const ProblemGeometry g = geometry_from(data, 3.0, lambda, LossKind::Hinge);
    const double gap =
        duality_gap(Matrix::Zero(5, 4), data.one_hot(), data, g, LossKind::Hinge).gap;
    worst_at_labels = std::max(worst_at_labels, std::abs(gap - 1.0));
  }
  return {pairs == 1000 && min_gap >= kWeakTol && worst_at_labels == 0.0,
          fmt("min gap over %.0f pairs %.3g, |gap(0,Y) - 1| = %.3g", pairs, min_gap,
              worst_at_labels)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"lazy-dense equivalence", lazy_dense_equivalence},
      {"unbiasedness by enumeration", unbiased_by_enumeration},
      {"optimal sampling distributions", optimal_distributions},
      {"entropic prox closed form", prox_closed_form},
      {"Lipschitz constant brute force", lipschitz_brute_force},
      {"deterministic rate", md_rate},
      {"stochastic gap bound", smd_bound},
      {"variance proxy bounds", variance_bounds_monte_carlo},
      {"sublinear scaling", sublinear_scaling},
      {"baseline comparison", baseline_comparison},
      {"gap certificate soundness", gap_soundness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
