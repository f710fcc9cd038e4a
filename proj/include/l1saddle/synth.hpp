#pragma once

#include <cstdint>
#include <vector>

#include "l1saddle/core.hpp"

namespace l1saddle {

struct SyntheticProblem {
  Dataset data;
  Matrix planted;  // U°, d x k: ones on the leading diagonal, zeros elsewhere
};

/// X with i.i.d. N(0, 1) entries and labels y_j = argmax_l {x_j^T U°(:,l) + s g_l}
/// with g ~ N(0, I_k) and s = noise_scale (1/sqrt(d) when negative). Uses
/// CounterRng(seed, kDataStream), so a seed always yields the same problem.
SyntheticProblem synth_generate(int n, int d, int k, std::uint64_t seed, double noise_scale = -1.0);

/// argmax over each row of X U° + noise, smallest index on ties.
std::vector<int> planted_labels(const Matrix& x, const Matrix& planted, const Matrix& noise);

/// The leading rectangular identity of shape d x k.
Matrix planted_identity(int d, int k);

}  // namespace l1saddle
