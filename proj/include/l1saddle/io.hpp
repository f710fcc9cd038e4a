#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "l1saddle/core.hpp"
#include "l1saddle/sublinear.hpp"

namespace l1saddle {

enum class DataFormat { DenseCsv, SparseSvm };

std::string to_string(DataFormat format);
DataFormat parse_format(const std::string& name);

/// Reads "label,f1,...,fd" (dense-csv) or "label idx:val ..." (sparse-svm,
/// 1-based feature indices, densified). Labels are 1-based; k is the largest
/// label unless `num_classes` > 0 fixes it. Blank lines are skipped. Errors
/// name `source` and the 1-based line number.
Dataset read_dataset(std::istream& in, DataFormat format, const std::string& source = "<input>",
                     int num_classes = 0);
Dataset load_dataset(const std::string& path, DataFormat format, int num_classes = 0);

/// Writes dense-csv with 1-based labels.
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::string& path, const Dataset& data);

/// One matrix row per line, comma separated, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in, const std::string& source = "<input>");

/// Header "d k nnz", then "i l value" lines with 1-based indices.
void write_triplets(std::ostream& out, const std::vector<Triplet>& triplets, int d, int k);
struct TripletFile {
  int d = 0;
  int k = 0;
  std::vector<Triplet> entries;
};
TripletFile read_triplets(std::istream& in, const std::string& source = "<input>");

void save_model(const std::string& path, const Matrix& u);
void save_model(const std::string& path, const std::vector<Triplet>& triplets, int d, int k);
/// Loads a d x k model from either format, telling them apart by the first line.
Matrix load_model(const std::string& path);

/// Shortest round-trip decimal form with at most 17 significant digits.
std::string format_double(double value);

}  // namespace l1saddle
