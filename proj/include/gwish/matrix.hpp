#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gwish/graph.hpp"

namespace gwish {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric matrix value type. Construction averages the input with its
// transpose and rejects relative asymmetry above 1e-8. Positive definiteness
// is verified only where a role demands it; use spd_checked for those roles.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(Matrix m);

  static SpdMatrix identity(int p) { return SpdMatrix(Matrix::Identity(p, p)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

// As SpdMatrix(m), additionally verifying positive definiteness by Cholesky.
SpdMatrix spd_checked(Matrix m);

// Upper-triangular factor with positive diagonal; product() rebuilds Phi'Phi.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  explicit CholeskyFactor(Matrix upper);

  int dim() const { return static_cast<int>(u_.rows()); }
  const Matrix& mat() const { return u_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return u_(i, j); }
  double& entry(Eigen::Index i, Eigen::Index j) { return u_(i, j); }
  Matrix product() const { return u_.transpose() * u_; }

 private:
  Matrix u_;
};

// Trace inner product tr(A'B) = sum_ij a_ij b_ij for symmetric inputs.
double trace_inner(const SpdMatrix& a, const SpdMatrix& b);

// Upper Cholesky factor, Phi'Phi = k. Throws NotPositiveDefiniteError naming
// the first nonpositive pivot.
CholeskyFactor chol_upper(const SpdMatrix& k);

// The value the completion rule assigns at (l, m), l < m:
//   -(1/Phi_ll) * sum_{r<l} Phi_rl Phi_rm.
double completion_value(const CholeskyFactor& phi, int l, int m);

// Copy of src keeping the diagonal and the entries (i, j) in `pattern` with
// i < j; every other entry zeroed.
CholeskyFactor restricted_to(const CholeskyFactor& src, const Graph& pattern);

// Fill every determined entry (i, j) not in g, i < j, with its completion
// value so that (Phi'Phi)_ij = 0 off the graph. Diagonal and free entries
// must be populated beforehand; rows are processed top to bottom. The sum
// runs over rows above i only: including row i would make the rule
// self-referential and the off-graph product would no longer vanish.
CholeskyFactor complete_cholesky(CholeskyFactor phi, const Graph& g);

// K_{C,V\C} (K_{V\C})^{-1} K_{V\C,C}; the zero matrix when c covers all
// nodes. `c` holds sorted 0-based indices.
Matrix schur_complement_b(const SpdMatrix& k, const std::vector<int>& c);

// Replace the `clique` block of k with a + schur_complement_b(k, clique),
// leaving every entry with a row or column outside the clique untouched.
// Preserves the zero pattern of g and positive definiteness.
SpdMatrix clique_transform(const SpdMatrix& k, const std::vector<int>& clique,
                           const SpdMatrix& a, const Graph& g);

// log of the K -> Phi change-of-variables factor that differs across
// patterns: sum_i nu_i log Phi_ii.
double log_jacobian_k_to_phi(const CholeskyFactor& phi, const Graph& g);

// ((delta - 2)/2) log|k| - <k, d>/2. The normalizing constant is excluded.
double log_unnorm_density(const SpdMatrix& k, double delta, const SpdMatrix& d);

}  // namespace gwish
