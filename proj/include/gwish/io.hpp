#pragma once

#include <string>
#include <vector>

#include "gwish/graph.hpp"
#include "gwish/matrix.hpp"
#include "gwish/rng.hpp"

namespace gwish {

struct Dataset {
  int n = 0;
  int p = 0;
  Matrix rows;  // n x p
  std::vector<std::string> variable_names;  // empty when the file had no header
};

struct ScatterResult {
  SpdMatrix u;  // positive semidefinite
  int n = 0;
  bool centered = false;
};

// CSV with n rows of p decimal fields and an optional single header row
// (detected by a non-numeric first row). A header-only file yields n = 0.
Dataset load_dataset(const std::string& path);

// center = false: U = sum z_i z_i'; center = true: outer products of the
// mean-subtracted rows.
ScatterResult compute_scatter(const Dataset& d, bool center);

// n independent mean-zero Gaussian rows with precision k_true.
Dataset generate_dataset(const SpdMatrix& k_true, int n, RngStream& rng);

// Graph text format: line 1 is p; each following nonempty line is "i j"
// (1-based); lines starting with '#' are ignored.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

// Matrix CSV: p rows of p comma-separated decimal fields, no header.
// Values round-trip exactly.
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const Matrix& m, const std::string& path);

// The bundled 50x4 iris virginica measurements (sepal length/width, petal
// length/width, centimeters), so the validation harness needs no files.
Dataset iris_virginica();

}  // namespace gwish
