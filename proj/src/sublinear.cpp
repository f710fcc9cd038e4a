#include "l1saddle/sublinear.hpp"

#include <algorithm>
#include <cmath>

#include "l1saddle/rng.hpp"
#include "l1saddle/sampling.hpp"
#include "l1saddle/solvers_stochastic.hpp"
#include "loop_clock.hpp"

namespace l1saddle {

using detail::LoopClock;

namespace {

bool outside_window(double scale) { return !(scale >= kScaleFloor && scale <= kScaleCeiling); }

// Allocates column l of a sparse state from the shared defaults.
void ensure_column(LazyState& state, AverageTracker& tracker, int l) {
  if (state.touched(l)) return;
  const auto c = static_cast<std::size_t>(l);
  state.u_cols[c] = state.u_default;
  tracker.u_sum[c] = tracker.u_default_sum;
  tracker.a_prev[c] = Vector::Zero(state.primal_rows());
}

// Cumulative sum of column l over iterates 0..t, t = completed iterations.
Vector column_sum(const AverageTracker& tracker, const LazyState& state, int l) {
  const auto c = static_cast<std::size_t>(l);
  if (!state.touched(l)) {
    return tracker.u_default_sum +
           state.u_default.cwiseProduct(state.alpha + tracker.a);
  }
  return tracker.u_sum[c] +
         state.u_cols[c].cwiseProduct(state.alpha + tracker.a - tracker.a_prev[c]);
}

Matrix dual_average(const AverageTracker& tracker, const LazyState& state, double count) {
  ColumnMatrix v = tracker.v_sum;
  for (Eigen::Index l = 0; l < v.cols(); ++l) {
    for (Eigen::Index j = 0; j < v.rows(); ++j) {
      v(j, l) += state.v_tilde(j, l) * (state.beta(j) + tracker.b(j) - tracker.b_prev(j, l));
    }
  }
  return v / count;
}

void append_folded(const Vector& column_average, int cls, std::vector<Triplet>& out) {
  const Eigen::Index d = column_average.size() / 2;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double value = column_average(i) - column_average(i + d);
    if (value != 0.0) out.push_back({static_cast<int>(i), cls, value});
  }
}

}  // namespace

double LazyState::u_tilde(Eigen::Index i, int l) const {
  return touched(l) ? u_cols[static_cast<std::size_t>(l)](i) : u_default(i);
}

LazyState make_lazy_state(const Dataset& data, double radius, bool sparse) {
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  const Eigen::Index rows = 2 * data.d();
  const int k = data.k();
  LazyState s;
  s.u_default = Vector::Constant(rows, radius / static_cast<double>(rows * k));
  s.u_cols.assign(static_cast<std::size_t>(k), sparse ? Vector() : s.u_default);
  s.alpha = Vector::Ones(rows);
  s.pi = s.u_default * static_cast<double>(k);
  s.v_tilde = ColumnMatrix::Constant(data.n(), k, 1.0 / k);
  s.beta = Vector::Ones(data.n());
  s.rho = Vector::Constant(data.n(), 2.0 - 2.0 / k);

  const Vector half = data.features().colwise().norm().transpose();
  s.sigma.resize(rows);
  s.sigma << half, half;
  s.tau = data.features().cwiseAbs().rowwise().maxCoeff();
  return s;
}

AverageTracker make_tracker(const LazyState& state) {
  const Eigen::Index rows = state.primal_rows();
  AverageTracker t;
  t.u_sum.resize(state.u_cols.size());
  t.a_prev.resize(state.u_cols.size());
  for (std::size_t l = 0; l < state.u_cols.size(); ++l) {
    if (state.u_cols[l].size() == 0) continue;
    t.u_sum[l] = Vector::Zero(rows);
    t.a_prev[l] = Vector::Zero(rows);
  }
  t.u_default_sum = Vector::Zero(rows);
  t.a = Vector::Zero(rows);
  t.v_sum = ColumnMatrix::Zero(state.v_tilde.rows(), state.v_tilde.cols());
  t.b_prev = ColumnMatrix::Zero(state.v_tilde.rows(), state.v_tilde.cols());
  t.b = Vector::Zero(state.v_tilde.rows());
  return t;
}

Matrix materialize_primal(const LazyState& state) {
  Matrix u(state.primal_rows(), state.classes());
  for (int l = 0; l < state.classes(); ++l) {
    const Vector& col = state.touched(l) ? state.u_cols[static_cast<std::size_t>(l)] : state.u_default;
    u.col(l) = col.cwiseProduct(state.alpha);
  }
  return u;
}

Matrix materialize_dual(const LazyState& state) {
  return state.beta.asDiagonal() * state.v_tilde;
}

void track_primal(AverageTracker& tracker, LazyState& state, int l) {
  ensure_column(state, tracker, l);
  const auto c = static_cast<std::size_t>(l);
  Vector& col = state.u_cols[c];
  Vector& sum = tracker.u_sum[c];
  Vector& prev = tracker.a_prev[c];
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const double next = tracker.a(i) + state.alpha(i);
    sum(i) += col(i) * (next - prev(i));
    prev(i) = next;
    tracker.a(i) = next;
  }
}

void track_dual(AverageTracker& tracker, const LazyState& state, int cls,
                const std::vector<int>& labels) {
  for (Eigen::Index j = 0; j < state.v_tilde.rows(); ++j) {
    const double next = tracker.b(j) + state.beta(j);
    const int y = labels[static_cast<std::size_t>(j)];
    tracker.v_sum(j, cls) += state.v_tilde(j, cls) * (next - tracker.b_prev(j, cls));
    tracker.b_prev(j, cls) = next;
    if (y != cls) {
      tracker.v_sum(j, y) += state.v_tilde(j, y) * (next - tracker.b_prev(j, y));
      tracker.b_prev(j, y) = next;
    }
    tracker.b(j) = next;
  }
}

void flush(LazyState& state, AverageTracker& tracker) {
  for (std::size_t l = 0; l < state.u_cols.size(); ++l) {
    if (state.u_cols[l].size() == 0) continue;
    tracker.u_sum[l] += state.u_cols[l].cwiseProduct(tracker.a - tracker.a_prev[l]);
    state.u_cols[l] = state.u_cols[l].cwiseProduct(state.alpha);
    tracker.a_prev[l].setZero();
  }
  tracker.u_default_sum += state.u_default.cwiseProduct(tracker.a);
  state.u_default = state.u_default.cwiseProduct(state.alpha);
  tracker.a.setZero();
  state.alpha.setOnes();

  const Eigen::Index k = state.v_tilde.cols();
  for (Eigen::Index l = 0; l < k; ++l) {
    for (Eigen::Index j = 0; j < state.v_tilde.rows(); ++j) {
      tracker.v_sum(j, l) += state.v_tilde(j, l) * (tracker.b(j) - tracker.b_prev(j, l));
      state.v_tilde(j, l) *= state.beta(j);
    }
  }
  tracker.b_prev.setZero();
  tracker.b.setZero();
  state.beta.setOnes();
  state.scale_alarm = false;
}

int update_primal_lazy(LazyState& state, AverageTracker& tracker, const Eigen::Ref<const Vector>& eta,
                       int l, double gamma, const ProblemGeometry& geometry) {
  ensure_column(state, tracker, l);
  const Eigen::Index rows = state.primal_rows();
  const double step = 2.0 * gamma * geometry.log_2dk * geometry.radius;
  const double rate = step / static_cast<double>(geometry.n);
  const double shrink = std::exp(-step * geometry.lambda);

  Vector factor(rows);
  Vector mu(rows);
  int flushes = 0;
  double mass = 0.0;
  for (int attempt = 0;; ++attempt) {
    const Vector& col = state.u_cols[static_cast<std::size_t>(l)];
    mass = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      factor(i) = std::exp(-rate * eta(i));
      mu(i) = state.pi(i) - state.alpha(i) * col(i) * (1.0 - factor(i));
      mass += mu(i);
    }
    if (mass > 0.0 && std::isfinite(mass)) break;
    if (attempt == 1) throw NumericalError("primal normalizer is not positive after a flush");
    flush(state, tracker);
    ++flushes;
  }

  const double nu = std::min(shrink, geometry.radius / mass);
  Vector& col = state.u_cols[static_cast<std::size_t>(l)];
  for (Eigen::Index i = 0; i < rows; ++i) {
    col(i) *= factor(i);
    state.alpha(i) *= nu;
    state.pi(i) = nu * mu(i);
    if (outside_window(state.alpha(i))) state.scale_alarm = true;
  }
  return flushes;
}

int update_dual_lazy(LazyState& state, AverageTracker& tracker, const Eigen::Ref<const Vector>& xi,
                     int cls, const std::vector<int>& labels, double gamma) {
  const double c = 2.0 * gamma * std::log(static_cast<double>(state.v_tilde.cols()));
  const double theta = std::exp(-c);
  int flushes = 0;
  for (Eigen::Index j = 0; j < state.v_tilde.rows(); ++j) {
    const int y = labels[static_cast<std::size_t>(j)];
    const double omega = std::exp(c * xi(j));
    const double epsilon = cls == y ? theta : 1.0;
    double chi = 0.0;
    for (int attempt = 0;; ++attempt) {
      chi = 1.0 - state.beta(j) * state.v_tilde(j, cls) * (1.0 - omega * epsilon);
      if (cls != y) chi -= state.beta(j) * state.v_tilde(j, y) * (1.0 - theta);
      if (chi > 0.0 && std::isfinite(chi)) break;
      if (attempt == 1) throw NumericalError("dual normalizer is not positive after a flush");
      flush(state, tracker);
      ++flushes;
    }
    state.beta(j) /= chi;
    state.v_tilde(j, cls) *= omega * epsilon;
    if (cls != y) state.v_tilde(j, y) *= theta;
    state.rho(j) = std::max(0.0, 2.0 - 2.0 * state.beta(j) * state.v_tilde(j, y));
    if (outside_window(state.beta(j))) state.scale_alarm = true;
  }
  return flushes;
}

std::pair<Matrix, Matrix> finalize_averages(const AverageTracker& tracker, const LazyState& state,
                                            std::int64_t iterations) {
  const double count = static_cast<double>(iterations + 1);
  Matrix u(state.primal_rows(), state.classes());
  for (int l = 0; l < state.classes(); ++l) u.col(l) = column_sum(tracker, state, l) / count;
  return {std::move(u), dual_average(tracker, state, count)};
}

Matrix triplets_to_dense(const std::vector<Triplet>& triplets, int d, int k) {
  Matrix out = Matrix::Zero(d, k);
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= d || t.cls < 0 || t.cls >= k) {
      throw InputError("triplet index out of range");
    }
    out(t.row, t.cls) = t.value;
  }
  return out;
}

SublinearResult sublinear_solve(const Dataset& data, const ProblemGeometry& geometry,
                                const SolverConfig& config, const SublinearOptions& options) {
  if (geometry.loss != LossKind::Hinge) throw InputError("the sublinear solver supports hinge loss only");
  if (config.iterations < 1) throw InputError("iteration budget must be at least 1");
  if (config.flush_every < 1) throw InputError("flush period must be at least 1");

  const std::int64_t T = config.iterations;
  const double theorem = config.stepsize_mode == StepsizeMode::Constant
                             ? config.gamma
                             : stepsize_stochastic(geometry, T);
  const double theorem_one = config.stepsize_mode == StepsizeMode::Decaying
                                 ? stepsize_stochastic(geometry, 1)
                                 : theorem;

  const int n = data.n();
  const int d = data.d();
  const int k = data.k();
  const Matrix& x = data.features();
  const Matrix xt = x.transpose();
  const std::vector<int>& labels = data.labels();

  SublinearResult result;
  result.gamma = theorem;
  LazyState state = make_lazy_state(data, geometry.radius, options.sparse_output);
  AverageTracker tracker = make_tracker(state);
  CounterRng rng(config.seed, CounterRng::kDrawStream);
  const std::vector<std::int64_t> schedule = report_schedule(config);
  std::size_t next = 0;

  Vector row_weights(n);
  Vector feature_weights(2 * d);
  Vector class_weights(k);
  Vector eta(2 * d);
  Vector xi(n);
  std::int64_t ops = 0;

  if (config.on_iterate) config.on_iterate(0, materialize_primal(state), materialize_dual(state));

  LoopClock clock;
  clock.start();
  for (std::int64_t t = 0; t < T; ++t) {
    const double gamma = scheduled_stepsize(config, theorem, theorem_one, t);

    // Gradient estimate for the primal step: row j of V - Y, then class l.
    const double u_row = rng.uniform();
    const double u_cls = rng.uniform();
    row_weights = state.tau.cwiseProduct(state.rho);
    const double row_total = row_weights.sum();
    ops += n;
    int l = 0;
    if (row_total > 0.0) {
      const int j = sample_index(row_weights, row_total, u_row);
      const int y = labels[static_cast<std::size_t>(j)];
      for (int c = 0; c < k; ++c) {
        class_weights(c) = std::abs(state.v_tilde(j, c) * state.beta(j) - (c == y ? 1.0 : 0.0));
      }
      ops += k;
      l = sample_index(class_weights, class_weights.sum(), u_cls);
      const double resid = state.v_tilde(j, l) * state.beta(j) - (l == y ? 1.0 : 0.0);
      const double scale = (resid > 0.0 ? 1.0 : -1.0) * row_total / state.tau(j);
      eta.head(d) = x.row(j).transpose() * scale;
      eta.tail(d) = -eta.head(d);
    } else {
      eta.setZero();
    }
    ops += 2 * d;
    track_primal(tracker, state, l);
    result.flushes += update_primal_lazy(state, tracker, eta, l, gamma, geometry);
    ops += 4 * d;

    // Gradient estimate for the dual step: row i of U, then class cls.
    const double u_feature = rng.uniform();
    const double u_cls2 = rng.uniform();
    feature_weights = state.sigma.cwiseProduct(state.pi);
    const double feature_total = feature_weights.sum();
    ops += 2 * d;
    int cls = 0;
    if (feature_total > 0.0) {
      const int i = sample_index(feature_weights, feature_total, u_feature);
      for (int c = 0; c < k; ++c) class_weights(c) = state.u_tilde(i, c) * state.alpha(i);
      ops += k;
      cls = sample_index(class_weights, class_weights.sum(), u_cls2);
      const double scale = (i < d ? 1.0 : -1.0) * feature_total / state.sigma(i);
      xi = xt.row(i < d ? i : i - d).transpose() * scale;
    } else {
      xi.setZero();
    }
    ops += n;
    track_dual(tracker, state, cls, labels);
    result.flushes += update_dual_lazy(state, tracker, xi, cls, labels, gamma);
    ops += 2 * n;

    if (config.on_iterate) {
      clock.stop();
      config.on_iterate(t + 1, materialize_primal(state), materialize_dual(state));
      clock.start();
    }
    if (state.scale_alarm || (t + 1) % config.flush_every == 0) {
      flush(state, tracker);
      ++result.flushes;
    }

    if (next < schedule.size() && schedule[next] == t + 1) {
      clock.stop();
      const auto [u_avg, v_avg] = finalize_averages(tracker, state, t + 1);
      GapReport r = duality_gap(u_avg, v_avg, data, geometry, LossKind::Hinge);
      r.iterations = t + 1;
      r.elapsed_seconds = clock.seconds();
      result.reports.push_back(r);
      if (config.on_report) config.on_report(r);
      ++next;
      clock.start();
    }
  }
  clock.stop();
  result.loop_seconds = clock.seconds();
  result.operations = ops;
  result.operations_per_iteration = static_cast<double>(ops) / static_cast<double>(T);

  const double count = static_cast<double>(T + 1);
  if (options.sparse_output) {
    for (int c = 0; c < k; ++c) {
      if (state.touched(c)) append_folded(column_sum(tracker, state, c) / count, c, result.folded);
    }
    result.v_avg = dual_average(tracker, state, count);
  } else {
    auto [u_avg, v_avg] = finalize_averages(tracker, state, T);
    for (int c = 0; c < k; ++c) append_folded(u_avg.col(c), c, result.folded);
    result.u_avg = std::move(u_avg);
    result.v_avg = std::move(v_avg);
  }
  return result;
}

}  // namespace l1saddle
