#include "l1saddle/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace l1saddle {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, out);
  return ec == std::errc() && ptr == last && !token.empty();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

int parse_label(std::string_view token, const std::string& source, std::size_t line) {
  int label = 0;
  if (!parse_number(token, label)) fail(source, line, "label is not an integer");
  if (label < 1) fail(source, line, "label must be at least 1 (labels are 1-based)");
  return label;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

}  // namespace

std::string to_string(DataFormat format) {
  return format == DataFormat::DenseCsv ? "dense-csv" : "sparse-svm";
}

DataFormat parse_format(const std::string& name) {
  if (name == "dense-csv") return DataFormat::DenseCsv;
  if (name == "sparse-svm") return DataFormat::SparseSvm;
  throw InputError("unknown data format '" + name + "' (expected dense-csv or sparse-svm)");
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InputError("cannot format number");
  return std::string(buf, ptr);
}

Dataset read_dataset(std::istream& in, DataFormat format, const std::string& source,
                     int num_classes) {
  std::vector<int> labels;
  std::vector<std::size_t> label_lines;
  // Dense rows, or (index, value) pairs for the sparse format.
  std::vector<std::vector<double>> dense_rows;
  std::vector<std::vector<std::pair<int, double>>> sparse_rows;
  int d = 0;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (format == DataFormat::DenseCsv) {
      const auto fields = split(text, ',');
      if (fields.size() < 2) fail(source, line, "expected a label followed by features");
      labels.push_back(parse_label(fields[0], source, line));
      std::vector<double> row(fields.size() - 1);
      for (std::size_t f = 1; f < fields.size(); ++f) {
        if (!parse_number(fields[f], row[f - 1])) {
          fail(source, line, "feature " + std::to_string(f) + " is not a number");
        }
      }
      if (dense_rows.empty()) {
        d = static_cast<int>(row.size());
      } else if (static_cast<int>(row.size()) != d) {
        fail(source, line, "expected " + std::to_string(d) + " features, found " +
                               std::to_string(row.size()));
      }
      dense_rows.push_back(std::move(row));
    } else {
      const auto tokens = split_whitespace(text);
      labels.push_back(parse_label(tokens[0], source, line));
      std::vector<std::pair<int, double>> row;
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto colon = tokens[t].find(':');
        int index = 0;
        double value = 0.0;
        if (colon == std::string_view::npos || !parse_number(tokens[t].substr(0, colon), index) ||
            !parse_number(tokens[t].substr(colon + 1), value)) {
          fail(source, line, "malformed entry '" + std::string(tokens[t]) + "'");
        }
        if (index < 1) fail(source, line, "feature index must be at least 1");
        d = std::max(d, index);
        row.emplace_back(index - 1, value);
      }
      sparse_rows.push_back(std::move(row));
    }
    label_lines.push_back(line);
  }
  if (labels.empty()) throw InputError(source + ": no examples");
  if (d == 0) throw InputError(source + ": no features");

  int k = num_classes;
  if (k <= 0) {
    for (int y : labels) k = std::max(k, y);
  }
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] > k) {
      fail(source, label_lines[j], "label " + std::to_string(labels[j]) + " exceeds k = " +
                                       std::to_string(k));
    }
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  Matrix x = Matrix::Zero(n, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (format == DataFormat::DenseCsv) {
      const auto& row = dense_rows[static_cast<std::size_t>(j)];
      for (int i = 0; i < d; ++i) x(j, i) = row[static_cast<std::size_t>(i)];
    } else {
      for (const auto& [i, value] : sparse_rows[static_cast<std::size_t>(j)]) x(j, i) = value;
    }
  }
  std::vector<int> zero_based(labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j) zero_based[j] = labels[j] - 1;
  return Dataset(std::move(x), std::move(zero_based), k);
}

Dataset load_dataset(const std::string& path, DataFormat format, int num_classes) {
  std::ifstream in = open_in(path);
  return read_dataset(in, format, path, num_classes);
}

void write_dataset(std::ostream& out, const Dataset& data) {
  const Matrix& x = data.features();
  for (int j = 0; j < data.n(); ++j) {
    out << data.labels()[static_cast<std::size_t>(j)] + 1;
    for (int i = 0; i < data.d(); ++i) out << ',' << format_double(x(j, i));
    out << '\n';
  }
}

void save_dataset(const std::string& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  write_dataset(out, data);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_number(fields[c], row[c])) fail(source, line, "entry is not a number");
    }
    if (!rows.empty() && row.size() != rows.front().size()) fail(source, line, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(source + ": empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_triplets(std::ostream& out, const std::vector<Triplet>& triplets, int d, int k) {
  out << d << ' ' << k << ' ' << triplets.size() << '\n';
  for (const Triplet& t : triplets) {
    out << t.row + 1 << ' ' << t.cls + 1 << ' ' << format_double(t.value) << '\n';
  }
}

TripletFile read_triplets(std::istream& in, const std::string& source) {
  TripletFile file;
  std::string raw;
  std::size_t line = 0;
  std::size_t expected = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    const auto tokens = split_whitespace(text);
    if (tokens.size() != 3) fail(source, line, "expected three fields");
    if (!header) {
      if (!parse_number(tokens[0], file.d) || !parse_number(tokens[1], file.k) ||
          !parse_number(tokens[2], expected) || file.d < 1 || file.k < 1) {
        fail(source, line, "header must be 'd k nnz' with positive d and k");
      }
      header = true;
      continue;
    }
    Triplet t;
    if (!parse_number(tokens[0], t.row) || !parse_number(tokens[1], t.cls) ||
        !parse_number(tokens[2], t.value)) {
      fail(source, line, "expected 'i l value'");
    }
    if (t.row < 1 || t.row > file.d || t.cls < 1 || t.cls > file.k) {
      fail(source, line, "index out of range");
    }
    --t.row;
    --t.cls;
    file.entries.push_back(t);
  }
  if (!header) throw InputError(source + ": missing header");
  if (file.entries.size() != expected) {
    throw InputError(source + ": header announces " + std::to_string(expected) + " entries, found " +
                     std::to_string(file.entries.size()));
  }
  return file;
}

void save_model(const std::string& path, const Matrix& u) {
  std::ofstream out = open_out(path);
  write_matrix_csv(out, u);
}

void save_model(const std::string& path, const std::vector<Triplet>& triplets, int d, int k) {
  std::ofstream out = open_out(path);
  write_triplets(out, triplets, d, k);
}

Matrix load_model(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string first;
  while (std::getline(in, first) && trim(first).empty()) {
  }
  in.clear();
  in.seekg(0);
  const bool triplets = first.find(',') == std::string::npos && split_whitespace(trim(first)).size() == 3;
  if (!triplets) return read_matrix_csv(in, path);
  const TripletFile file = read_triplets(in, path);
  return triplets_to_dense(file.entries, file.d, file.k);
}

}  // namespace l1saddle
