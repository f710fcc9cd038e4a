#include "l1saddle/synth.hpp"

#include <cmath>
#include <random>

#include "l1saddle/rng.hpp"

namespace l1saddle {

Matrix planted_identity(int d, int k) { return Matrix::Identity(d, k); }

std::vector<int> planted_labels(const Matrix& x, const Matrix& planted, const Matrix& noise) {
  const Matrix scores = x * planted + noise;
  std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index j = 0; j < scores.rows(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index l = 1; l < scores.cols(); ++l) {
      if (scores(j, l) > scores(j, best)) best = l;
    }
    labels[static_cast<std::size_t>(j)] = static_cast<int>(best);
  }
  return labels;
}

SyntheticProblem synth_generate(int n, int d, int k, std::uint64_t seed, double noise_scale) {
  if (n < 1 || d < 1 || k < 1) throw InputError("synthetic sizes must be positive");
  const double scale = noise_scale < 0.0 ? 1.0 / std::sqrt(static_cast<double>(d)) : noise_scale;
  CounterRng rng(seed, CounterRng::kDataStream);
  std::normal_distribution<double> normal;

  Matrix x(n, d);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) x(j, i) = normal(rng);
  Matrix noise(n, k);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < k; ++l) noise(j, l) = scale * normal(rng);

  Matrix planted = planted_identity(d, k);
  std::vector<int> labels = planted_labels(x, planted, noise);
  return {Dataset(std::move(x), std::move(labels), k), std::move(planted)};
}

}  // namespace l1saddle
