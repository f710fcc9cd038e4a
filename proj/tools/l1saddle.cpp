// Command-line front end: synthetic data, training, gap certificates and the
// two benchmark studies.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1saddle/bench.hpp"
#include "l1saddle/io.hpp"
#include "l1saddle/synth.hpp"

using namespace l1saddle;

namespace {

constexpr int kInputErrorExit = 2;

struct Common {
  std::string loss = "hinge";
  double lambda = 1e-3;
  double radius = 1.0;
  bool radius_doubling = false;
  std::int64_t iters = 1000;
  std::uint64_t seed = 0;
  std::int64_t gap_every = 0;
  std::int64_t flush_every = 10000;
  std::string out;
};

void add_problem_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--loss", c.loss, "hinge or softmax")->check(CLI::IsMember({"hinge", "softmax"}));
  cmd->add_option("--lambda", c.lambda, "l1 regularization weight");
  cmd->add_option("--radius", c.radius, "l1 ball radius R (base radius with --radius-doubling)");
}

void add_run_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--iters", c.iters, "iteration budget T");
  cmd->add_option("--seed", c.seed, "seed for index draws");
  cmd->add_option("--flush-every", c.flush_every, "renormalization period of the sublinear solver");
}

// Either the output file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw InputError("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

void print_reports(std::ostream& out, const TrainOutcome& outcome) {
  if (!outcome.primal_reports.empty()) {
    out << "iterations,primal,seconds\n";
    for (const PrimalReport& r : outcome.primal_reports) {
      out << r.iterations << ',' << format_double(r.primal_obj) << ','
          << format_double(r.elapsed_seconds) << '\n';
    }
    return;
  }
  out << "iterations,primal,dual,gap,seconds\n";
  for (const GapReport& r : outcome.reports) {
    out << r.iterations << ',' << format_double(r.primal_obj) << ',' << format_double(r.dual_obj)
        << ',' << format_double(r.gap) << ',' << format_double(r.elapsed_seconds) << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"l1-regularized multiclass classification via saddle-point mirror descent"};
  app.require_subcommand(1);

  // synth
  int n = 100, d = 100, k = 100;
  std::string planted_out;
  Common sc;
  auto* synth = app.add_subcommand("synth", "generate a planted synthetic dataset (dense-csv)");
  synth->add_option("--n", n, "examples")->check(CLI::PositiveNumber);
  synth->add_option("--d", d, "features")->check(CLI::PositiveNumber);
  synth->add_option("--k", k, "classes")->check(CLI::PositiveNumber);
  synth->add_option("--seed", sc.seed, "data seed");
  synth->add_option("--out", sc.out, "dataset path (stdout if omitted)");
  synth->add_option("--planted-out", planted_out, "write the planted U as dense CSV");

  // train
  Common tc;
  std::string data_path, format = "dense-csv", solver = "md";
  bool sparse_output = false;
  auto* train_cmd = app.add_subcommand("train", "fit a model and print gap reports as CSV");
  train_cmd->add_option("--data", data_path, "dataset path")->required();
  train_cmd->add_option("--format", format, "dense-csv or sparse-svm");
  train_cmd->add_option("--solver", solver, "md, mp, smd-partial, smd-full, sublinear or ssm");
  add_problem_flags(train_cmd, tc);
  train_cmd->add_flag("--radius-doubling", tc.radius_doubling,
                      "grow R by doubling until the md solution is interior");
  add_run_flags(train_cmd, tc);
  train_cmd->add_option("--gap-every", tc.gap_every,
                        "report period (0: powers of two, negative: final only)");
  train_cmd->add_flag("--sparse-output", sparse_output,
                      "sublinear: keep untouched columns implicit and save triplets");
  train_cmd->add_option("--out", tc.out, "model path (dense CSV, or triplets with --sparse-output)");

  // gap
  Common gc;
  std::string gap_data, gap_format = "dense-csv", model_path;
  auto* gap = app.add_subcommand("gap", "duality gap certificate of a saved model");
  gap->add_option("--data", gap_data, "dataset path")->required();
  gap->add_option("--format", gap_format, "dense-csv or sparse-svm");
  gap->add_option("--model", model_path, "model path (dense CSV or triplets)")->required();
  add_problem_flags(gap, gc);

  // bench-scaling
  Common bc;
  std::string sizes = "200,400,800", iter_grid = "2000";
  int repeats = 3;
  auto* scaling = app.add_subcommand("bench-scaling", "sublinear runtime versus n = d = k");
  scaling->add_option("--sizes", sizes, "comma separated n = d = k values");
  scaling->add_option("--iters", iter_grid, "comma separated iteration budgets");
  scaling->add_option("--lambda", bc.lambda, "l1 regularization weight");
  scaling->add_option("--seed", bc.seed, "data and draw seed");
  scaling->add_option("--flush-every", bc.flush_every, "renormalization period");
  scaling->add_option("--repeats", repeats, "timing repetitions (median reported)");
  scaling->add_option("--out", bc.out, "CSV path (stdout if omitted)");

  // bench-compare
  Common cc;
  int size = 100, reps = 10;
  std::string compare_iters = "10,32,100,316,1000,3162,10000";
  std::string solvers = "sublinear,smd-partial,smd-full,md,mp,ssm";
  auto* compare = app.add_subcommand("bench-compare", "solver comparison on a synthetic problem");
  compare->add_option("--size", size, "n = d = k")->check(CLI::PositiveNumber);
  compare->add_option("--iters", compare_iters, "comma separated iteration budgets");
  compare->add_option("--reps", reps, "repetitions per budget")->check(CLI::PositiveNumber);
  compare->add_option("--solvers", solvers, "comma separated solver names");
  compare->add_option("--loss", cc.loss, "hinge or softmax")->check(CLI::IsMember({"hinge", "softmax"}));
  compare->add_option("--lambda", cc.lambda, "l1 regularization weight");
  compare->add_option("--radius", cc.radius, "l1 radius (default: planted norm)");
  compare->add_option("--seed", cc.seed, "data seed; repetition r draws with seed + r");
  compare->add_option("--flush-every", cc.flush_every, "renormalization period");
  compare->add_option("--out", cc.out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputErrorExit;
  }

  if (synth->parsed()) {
    const SyntheticProblem problem = synth_generate(n, d, k, sc.seed);
    Sink sink(sc.out);
    write_dataset(sink.stream(), problem.data);
    if (!planted_out.empty()) save_model(planted_out, problem.planted);
    return 0;
  }

  if (train_cmd->parsed()) {
    const Dataset data = load_dataset(data_path, parse_format(format));
    TrainOptions options;
    options.solver = parse_solver(solver);
    options.loss = parse_loss(tc.loss);
    options.lambda = tc.lambda;
    options.radius = tc.radius;
    options.config.iterations = tc.iters;
    options.config.seed = tc.seed;
    options.config.gap_every = tc.gap_every;
    options.config.flush_every = tc.flush_every;
    options.sparse_output = sparse_output;
    if (sparse_output && options.solver != SolverKind::Sublinear) {
      throw InputError("--sparse-output requires --solver sublinear");
    }
    if (tc.radius_doubling) {
      const RadiusEstimate est =
          estimate_radius(data, options.lambda, options.loss, tc.radius, 2.0, tc.iters);
      options.radius = est.radius;
      std::cerr << "radius " << format_double(est.radius) << " after " << est.stages
                << " stage(s)" << (est.boundary_warning ? " (solution still on the boundary)" : "")
                << '\n';
    }
    const TrainOutcome outcome = train(data, options);
    print_reports(std::cout, outcome);
    if (!tc.out.empty()) {
      if (sparse_output) {
        save_model(tc.out, outcome.triplets, data.d(), data.k());
      } else {
        save_model(tc.out, outcome.folded);
      }
    }
    return 0;
  }

  if (gap->parsed()) {
    const Dataset data = load_dataset(gap_data, parse_format(gap_format));
    const Matrix u = load_model(model_path);
    if (u.rows() != data.d() || u.cols() != data.k()) {
      throw InputError("model shape does not match the dataset");
    }
    const LossKind loss = parse_loss(gc.loss);
    const ProblemGeometry geometry = geometry_from(data, gc.radius, gc.lambda, loss);
    // A saved model carries no dual iterate; the best response to U stands in.
    const GapReport r = duality_gap(u, best_response_dual(u, data, loss), data, geometry, loss);
    std::cout << "primal,dual,gap\n"
              << format_double(r.primal_obj) << ',' << format_double(r.dual_obj) << ','
              << format_double(r.gap) << '\n';
    return 0;
  }

  if (scaling->parsed()) {
    ExperimentSpec spec;
    for (std::int64_t s : parse_list(sizes)) {
      const int v = static_cast<int>(s);
      spec.sizes.push_back({v, v, v});
    }
    spec.iterations = parse_list(iter_grid);
    spec.lambda = bc.lambda;
    spec.seed = bc.seed;
    spec.flush_every = bc.flush_every;
    spec.timing_repeats = repeats;
    const std::vector<ScalingRow> rows = run_scaling(spec);
    Sink sink(bc.out);
    write_scaling_csv(sink.stream(), rows);
    return 0;
  }

  ExperimentSpec spec;
  spec.sizes = {{size, size, size}};
  spec.iterations = parse_list(compare_iters);
  spec.repetitions = reps;
  spec.seed = cc.seed;
  spec.loss = parse_loss(cc.loss);
  spec.lambda = cc.lambda;
  spec.flush_every = cc.flush_every;
  spec.solvers.clear();
  std::stringstream names(solvers);
  std::string name;
  while (std::getline(names, name, ',')) spec.solvers.push_back(parse_solver(name));
  if (compare->count("--radius") > 0) {
    spec.radius_policy = RadiusPolicy::Given;
    spec.radius = cc.radius;
  }
  const std::vector<CompareRow> rows = run_compare(spec);
  Sink sink(cc.out);
  write_compare_csv(sink.stream(), rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
