#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l1saddle/solvers_stochastic.hpp"
#include "l1saddle/sublinear.hpp"

namespace l1saddle {

enum class SolverKind { MirrorDescent, MirrorProx, SmdPartial, SmdFull, Sublinear, Subgradient };

/// md, mp, smd-partial, smd-full, sublinear, ssm.
std::string to_string(SolverKind solver);
SolverKind parse_solver(const std::string& name);

struct TrainOptions {
  SolverKind solver = SolverKind::MirrorDescent;
  LossKind loss = LossKind::Hinge;
  double radius = 1.0;
  double lambda = 1e-3;
  SolverConfig config;
  bool sparse_output = false;  // sublinear only
};

struct TrainOutcome {
  Matrix folded;                   // d x k averaged solution
  std::vector<Triplet> triplets;   // sublinear only
  std::vector<GapReport> reports;  // empty for ssm
  std::vector<PrimalReport> primal_reports;  // ssm only
  double primal_obj = 0.0;
  double seconds = 0.0;  // iteration loop only
  double gamma = 0.0;
  std::int64_t operations = 0;  // sublinear only
};

/// Runs one solver on one problem.
TrainOutcome train(const Dataset& data, const TrainOptions& options);

enum class RadiusPolicy { Given, FromPlanted, Doubling };

struct ExperimentSpec {
  std::vector<std::array<int, 3>> sizes;  // (n, d, k)
  std::vector<std::int64_t> iterations;
  int repetitions = 1;
  std::uint64_t seed = 0;
  std::vector<SolverKind> solvers{SolverKind::Sublinear};
  LossKind loss = LossKind::Hinge;
  double lambda = 1e-3;
  RadiusPolicy radius_policy = RadiusPolicy::FromPlanted;
  double radius = 1.0;                  // the radius (Given) or the search base (Doubling)
  std::int64_t doubling_budget = 1000;  // md iterations per search stage
  std::int64_t flush_every = 10000;
  int timing_repeats = 3;  // scaling study: median over this many runs
};

/// Throws InputError on empty grids, non-positive sizes or repetitions.
void validate(const ExperimentSpec& spec);

/// Radius for a generated problem under the experiment's radius policy.
double resolve_radius(const ExperimentSpec& spec, const Dataset& data, const Matrix& planted);

struct ScalingRow {
  int n = 0;
  std::int64_t iterations = 0;
  double wall_seconds = 0.0;
  double ops_per_iteration = 0.0;
};

/// Sublinear solver on synthetic problems of each size and budget. Wall time
/// is the median loop time over timing_repeats runs.
std::vector<ScalingRow> run_scaling(const ExperimentSpec& spec);
/// Header n,T,wall_seconds,ops_per_iter.
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

struct CompareRow {
  std::string solver;
  std::int64_t iterations = 0;
  int rep = 0;
  std::optional<double> gap;  // absent for ssm
  double primal = 0.0;
  double seconds = 0.0;
};

/// Every solver at every budget and repetition on the first size in the spec.
/// Repetition r uses draw seed spec.seed + r; the problem itself uses spec.seed.
std::vector<CompareRow> run_compare(const ExperimentSpec& spec);
/// Header solver,T,rep,gap,primal,seconds.
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

}  // namespace l1saddle
