#include "l1saddle/bench.hpp"

#include <algorithm>
#include <ostream>

#include "l1saddle/io.hpp"
#include "l1saddle/synth.hpp"

namespace l1saddle {

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::MirrorDescent: return "md";
    case SolverKind::MirrorProx: return "mp";
    case SolverKind::SmdPartial: return "smd-partial";
    case SolverKind::SmdFull: return "smd-full";
    case SolverKind::Sublinear: return "sublinear";
    case SolverKind::Subgradient: return "ssm";
  }
  return "md";
}

SolverKind parse_solver(const std::string& name) {
  for (SolverKind s : {SolverKind::MirrorDescent, SolverKind::MirrorProx, SolverKind::SmdPartial,
                       SolverKind::SmdFull, SolverKind::Sublinear, SolverKind::Subgradient}) {
    if (to_string(s) == name) return s;
  }
  throw InputError("unknown solver '" + name +
                   "' (expected md, mp, smd-partial, smd-full, sublinear or ssm)");
}

TrainOutcome train(const Dataset& data, const TrainOptions& options) {
  TrainOutcome out;
  if (options.solver == SolverKind::Subgradient) {
    SsmResult r = ssm_solve(data, options.lambda, options.radius, options.config, options.loss);
    out.folded = std::move(r.u_avg);
    out.primal_reports = std::move(r.reports);
    out.seconds = r.loop_seconds;
    out.gamma = r.gamma;
    out.primal_obj = primal_objective(out.folded, data, options.lambda, options.loss);
    return out;
  }

  const ProblemGeometry geometry = geometry_from(data, options.radius, options.lambda, options.loss);
  if (options.solver == SolverKind::Sublinear) {
    SublinearOptions sub;
    sub.sparse_output = options.sparse_output;
    SublinearResult r = sublinear_solve(data, geometry, options.config, sub);
    out.folded = triplets_to_dense(r.folded, data.d(), data.k());
    out.triplets = std::move(r.folded);
    out.reports = std::move(r.reports);
    out.seconds = r.loop_seconds;
    out.gamma = r.gamma;
    out.operations = r.operations;
  } else {
    SolveResult r;
    switch (options.solver) {
      case SolverKind::MirrorDescent:
        r = md_solve(data, geometry, options.loss, options.config);
        break;
      case SolverKind::MirrorProx:
        r = mp_solve(data, geometry, options.loss, options.config);
        break;
      case SolverKind::SmdPartial:
        r = smd_solve(data, geometry, options.loss, SamplingScheme::Partial, options.config);
        break;
      default:
        r = smd_solve(data, geometry, options.loss, SamplingScheme::Full, options.config);
        break;
    }
    out.folded = fold(r.iterate.u_avg);
    out.reports = std::move(r.reports);
    out.seconds = r.loop_seconds;
    out.gamma = r.gamma;
  }
  out.primal_obj = out.reports.empty()
                       ? primal_objective(out.folded, data, options.lambda, options.loss)
                       : out.reports.back().primal_obj;
  return out;
}

void validate(const ExperimentSpec& spec) {
  if (spec.sizes.empty()) throw InputError("experiment needs at least one size");
  if (spec.iterations.empty()) throw InputError("experiment needs at least one iteration budget");
  if (spec.solvers.empty()) throw InputError("experiment needs at least one solver");
  if (spec.repetitions < 1) throw InputError("repetitions must be at least 1");
  if (spec.timing_repeats < 1) throw InputError("timing repeats must be at least 1");
  for (const auto& s : spec.sizes) {
    if (s[0] < 1 || s[1] < 1 || s[2] < 2) throw InputError("sizes need n, d >= 1 and k >= 2");
  }
  for (std::int64_t t : spec.iterations) {
    if (t < 1) throw InputError("iteration budgets must be positive");
  }
}

double resolve_radius(const ExperimentSpec& spec, const Dataset& data, const Matrix& planted) {
  switch (spec.radius_policy) {
    case RadiusPolicy::Given:
      return spec.radius;
    case RadiusPolicy::FromPlanted:
      return planted.cwiseAbs().sum();
    case RadiusPolicy::Doubling:
      return estimate_radius(data, spec.lambda, spec.loss, spec.radius, 2.0, spec.doubling_budget)
          .radius;
  }
  return spec.radius;
}

std::vector<ScalingRow> run_scaling(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<ScalingRow> rows;
  for (const auto& [n, d, k] : spec.sizes) {
    const SyntheticProblem problem = synth_generate(n, d, k, spec.seed);
    const double radius = resolve_radius(spec, problem.data, problem.planted);
    const ProblemGeometry geometry =
        geometry_from(problem.data, radius, spec.lambda, LossKind::Hinge);
    for (std::int64_t T : spec.iterations) {
      SolverConfig config;
      config.iterations = T;
      config.seed = spec.seed;
      config.flush_every = spec.flush_every;
      config.report_gaps = false;
      std::vector<double> times;
      double ops = 0.0;
      for (int r = 0; r < spec.timing_repeats; ++r) {
        const SublinearResult result = sublinear_solve(problem.data, geometry, config);
        times.push_back(result.loop_seconds);
        ops = result.operations_per_iteration;
      }
      std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
      rows.push_back({n, T, times[times.size() / 2], ops});
    }
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "n,T,wall_seconds,ops_per_iter\n";
  for (const ScalingRow& r : rows) {
    out << r.n << ',' << r.iterations << ',' << format_double(r.wall_seconds) << ','
        << format_double(r.ops_per_iteration) << '\n';
  }
}

std::vector<CompareRow> run_compare(const ExperimentSpec& spec) {
  validate(spec);
  const auto [n, d, k] = spec.sizes.front();
  const SyntheticProblem problem = synth_generate(n, d, k, spec.seed);
  const double radius = resolve_radius(spec, problem.data, problem.planted);

  std::vector<CompareRow> rows;
  for (SolverKind solver : spec.solvers) {
    for (std::int64_t T : spec.iterations) {
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        TrainOptions options;
        options.solver = solver;
        options.loss = spec.loss;
        options.radius = radius;
        options.lambda = spec.lambda;
        options.config.iterations = T;
        options.config.seed = spec.seed + static_cast<std::uint64_t>(rep);
        options.config.gap_every = -1;
        options.config.flush_every = spec.flush_every;
        const TrainOutcome outcome = train(problem.data, options);
        CompareRow row;
        row.solver = to_string(solver);
        row.iterations = T;
        row.rep = rep;
        if (!outcome.reports.empty()) row.gap = outcome.reports.back().gap;
        row.primal = outcome.primal_obj;
        row.seconds = outcome.seconds;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "solver,T,rep,gap,primal,seconds\n";
  for (const CompareRow& r : rows) {
    out << r.solver << ',' << r.iterations << ',' << r.rep << ','
        << (r.gap ? format_double(*r.gap) : std::string()) << ',' << format_double(r.primal) << ','
        << format_double(r.seconds) << '\n';
  }
}

}  // namespace l1saddle
