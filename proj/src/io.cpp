#include "gwish/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "gwish/errors.hpp"

namespace gwish {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(trimmed(cur));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

std::vector<std::string> read_nonempty_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Dataset load_dataset(const std::string& path) {
  const std::vector<std::string> raw = read_nonempty_lines(path);
  std::vector<std::pair<std::size_t, std::string>> rows;  // (1-based line no, text)
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!trimmed(raw[i]).empty()) rows.emplace_back(i + 1, raw[i]);
  if (rows.empty()) throw IoError("'" + path + "' is empty");

  Dataset d;
  const std::vector<std::string> first = split_csv(rows.front().second);
  d.p = static_cast<int>(first.size());
  double probe;
  std::size_t start = 0;
  if (!parse_double(first.front(), probe)) {  // header row
    d.variable_names = first;
    start = 1;
  }
  d.n = static_cast<int>(rows.size() - start);
  d.rows = Matrix::Zero(d.n, d.p);
  for (std::size_t r = start; r < rows.size(); ++r) {
    const auto& [lineno, text] = rows[r];
    const std::vector<std::string> fields = split_csv(text);
    if (static_cast<int>(fields.size()) != d.p)
      throw IoError("'" + path + "' line " + std::to_string(lineno) + " has " +
                    std::to_string(fields.size()) + " fields, expected " + std::to_string(d.p));
    for (int c = 0; c < d.p; ++c) {
      double v;
      if (!parse_double(fields[c], v))
        throw IoError("'" + path + "' line " + std::to_string(lineno) + ": field '" +
                      fields[c] + "' is not a number");
      d.rows(static_cast<int>(r - start), c) = v;
    }
  }
  return d;
}

ScatterResult compute_scatter(const Dataset& d, bool center) {
  Matrix z = d.rows;
  if (center && d.n > 0) z.rowwise() -= z.colwise().mean();
  ScatterResult out;
  out.u = SpdMatrix(d.n > 0 ? Matrix(z.transpose() * z) : Matrix::Zero(d.p, d.p));
  out.n = d.n;
  out.centered = center;
  return out;
}

Dataset generate_dataset(const SpdMatrix& k_true, int n, RngStream& rng) {
  const int p = k_true.dim();
  Eigen::LLT<Matrix> llt(k_true.mat());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError(0, "generating precision must be positive definite");
  Dataset d;
  d.n = n;
  d.p = p;
  d.rows = Matrix::Zero(n, p);
  Vector eps(p);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < p; ++c) eps(c) = rng.normal();
    // z = L'^{-1} eps has covariance (L L')^{-1} = k_true^{-1}
    d.rows.row(r) = llt.matrixL().transpose().solve(eps).transpose();
  }
  return d;
}

Graph load_graph(const std::string& path) {
  const std::vector<std::string> raw = read_nonempty_lines(path);
  std::vector<std::pair<std::size_t, std::string>> rows;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string t = trimmed(raw[i]);
    if (t.empty() || t.front() == '#') continue;
    rows.emplace_back(i + 1, t);
  }
  if (rows.empty()) throw IoError("'" + path + "' has no content");
  int p = 0;
  {
    std::istringstream head(rows.front().second);
    std::string extra;
    if (!(head >> p) || p < 1 || (head >> extra))
      throw IoError("'" + path + "' line " + std::to_string(rows.front().first) +
                    ": expected the node count alone");
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::istringstream ss(rows[r].second);
    int i, j;
    std::string extra;
    if (!(ss >> i >> j) || (ss >> extra))
      throw IoError("'" + path + "' line " + std::to_string(rows[r].first) +
                    ": expected an edge as 'i j'");
    pairs.emplace_back(i, j);
  }
  try {
    return from_edge_list(p, pairs);
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << g.order() << "\n";
  for (int i = 0; i < g.order(); ++i)
    for (int j : g.neighbors(i))
      if (j > i) out << i + 1 << " " << j + 1 << "\n";
}

Matrix load_matrix_csv(const std::string& path) {
  const std::vector<std::string> raw = read_nonempty_lines(path);
  std::vector<std::pair<std::size_t, std::string>> rows;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!trimmed(raw[i]).empty()) rows.emplace_back(i + 1, raw[i]);
  if (rows.empty()) throw IoError("'" + path + "' is empty");
  const int p = static_cast<int>(rows.size());
  Matrix m(p, p);
  for (int r = 0; r < p; ++r) {
    const std::vector<std::string> fields = split_csv(rows[r].second);
    if (static_cast<int>(fields.size()) != p)
      throw IoError("'" + path + "' line " + std::to_string(rows[r].first) + " has " +
                    std::to_string(fields.size()) + " fields; a " + std::to_string(p) + "x" +
                    std::to_string(p) + " matrix needs " + std::to_string(p));
    for (int c = 0; c < p; ++c) {
      double v;
      if (!parse_double(fields[c], v))
        throw IoError("'" + path + "' line " + std::to_string(rows[r].first) + ": field '" +
                      fields[c] + "' is not a number");
      m(r, c) = v;
    }
  }
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ",";
      out << m(r, c);
    }
    out << "\n";
  }
}

Dataset iris_virginica() {
  // Fisher's 1936 iris measurements, virginica block (public domain).
  static constexpr double kRows[50][4] = {
      {6.3, 3.3, 6.0, 2.5}, {5.8, 2.7, 5.1, 1.9}, {7.1, 3.0, 5.9, 2.1}, {6.3, 2.9, 5.6, 1.8},
      {6.5, 3.0, 5.8, 2.2}, {7.6, 3.0, 6.6, 2.1}, {4.9, 2.5, 4.5, 1.7}, {7.3, 2.9, 6.3, 1.8},
      {6.7, 2.5, 5.8, 1.8}, {7.2, 3.6, 6.1, 2.5}, {6.5, 3.2, 5.1, 2.0}, {6.4, 2.7, 5.3, 1.9},
      {6.8, 3.0, 5.5, 2.1}, {5.7, 2.5, 5.0, 2.0}, {5.8, 2.8, 5.1, 2.4}, {6.4, 3.2, 5.3, 2.3},
      {6.5, 3.0, 5.5, 1.8}, {7.7, 3.8, 6.7, 2.2}, {7.7, 2.6, 6.9, 2.3}, {6.0, 2.2, 5.0, 1.5},
      {6.9, 3.2, 5.7, 2.3}, {5.6, 2.8, 4.9, 2.0}, {7.7, 2.8, 6.7, 2.0}, {6.3, 2.7, 4.9, 1.8},
      {6.7, 3.3, 5.7, 2.1}, {7.2, 3.2, 6.0, 1.8}, {6.2, 2.8, 4.8, 1.8}, {6.1, 3.0, 4.9, 1.8},
      {6.4, 2.8, 5.6, 2.1}, {7.2, 3.0, 5.8, 1.6}, {7.4, 2.8, 6.1, 1.9}, {7.9, 3.8, 6.4, 2.0},
      {6.4, 2.8, 5.6, 2.2}, {6.3, 2.8, 5.1, 1.5}, {6.1, 2.6, 5.6, 1.4}, {7.7, 3.0, 6.1, 2.3},
      {6.3, 3.4, 5.6, 2.4}, {6.4, 3.1, 5.5, 1.8}, {6.0, 3.0, 4.8, 1.8}, {6.9, 3.1, 5.4, 2.1},
      {6.7, 3.1, 5.6, 2.4}, {6.9, 3.1, 5.1, 2.3}, {5.8, 2.7, 5.1, 1.9}, {6.8, 3.2, 5.9, 2.3},
      {6.7, 3.3, 5.7, 2.5}, {6.7, 3.0, 5.2, 2.3}, {6.3, 2.5, 5.0, 1.9}, {6.5, 3.0, 5.2, 2.0},
      {6.2, 3.4, 5.4, 2.3}, {5.9, 3.0, 5.1, 1.8}};
  Dataset d;
  d.n = 50;
  d.p = 4;
  d.variable_names = {"SL", "SW", "PL", "PW"};
  d.rows = Matrix(50, 4);
  for (int r = 0; r < 50; ++r)
    for (int c = 0; c < 4; ++c) d.rows(r, c) = kRows[r][c];
  return d;
}

}  // namespace gwish
