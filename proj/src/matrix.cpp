#include "gwish/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gwish/errors.hpp"

namespace gwish {

SpdMatrix::SpdMatrix(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale)
    throw std::invalid_argument("matrix asymmetry " + std::to_string(asym / scale) +
                                " exceeds the 1e-8 relative tolerance");
  m_ = 0.5 * (m + m.transpose());
}

SpdMatrix spd_checked(Matrix m) {
  SpdMatrix out(std::move(m));
  chol_upper(out);  // throws when not positive definite
  return out;
}

CholeskyFactor::CholeskyFactor(Matrix upper) {
  if (upper.rows() != upper.cols()) throw std::invalid_argument("factor must be square");
  for (Eigen::Index i = 1; i < upper.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (upper(i, j) != 0.0)
        throw std::invalid_argument("factor has a nonzero below the diagonal");
  u_ = std::move(upper);
}

double trace_inner(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_inner: dimension mismatch");
  return (a.mat().array() * b.mat().array()).sum();
}

CholeskyFactor chol_upper(const SpdMatrix& k) {
  const int p = k.dim();
  Matrix u = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    double d = k(j, j);
    for (int r = 0; r < j; ++r) d -= u(r, j) * u(r, j);
    if (!(d > 0.0))
      throw NotPositiveDefiniteError(j + 1, "matrix is not positive definite: pivot " +
                                                std::to_string(j + 1) + " is " +
                                                std::to_string(d));
    u(j, j) = std::sqrt(d);
    for (int m = j + 1; m < p; ++m) {
      double s = k(j, m);
      for (int r = 0; r < j; ++r) s -= u(r, j) * u(r, m);
      u(j, m) = s / u(j, j);
    }
  }
  return CholeskyFactor(std::move(u));
}

double completion_value(const CholeskyFactor& phi, int l, int m) {
  double s = 0.0;
  for (int r = 0; r < l; ++r) s += phi(r, l) * phi(r, m);
  return -s / phi(l, l);
}

CholeskyFactor restricted_to(const CholeskyFactor& src, const Graph& pattern) {
  const int p = src.dim();
  Matrix u = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    u(i, i) = src(i, i);
    for (int j = i + 1; j < p; ++j)
      if (pattern.has_edge(i, j)) u(i, j) = src(i, j);
  }
  return CholeskyFactor(std::move(u));
}

CholeskyFactor complete_cholesky(CholeskyFactor phi, const Graph& g) {
  const int p = phi.dim();
  for (int i = 0; i < p; ++i) {
    if (!(phi(i, i) > 0.0))
      throw NotPositiveDefiniteError(
          i + 1, "completion requires a positive diagonal; entry " + std::to_string(i + 1) +
                     " is " + std::to_string(phi(i, i)));
    for (int j = i + 1; j < p; ++j)
      if (!g.has_edge(i, j)) phi.entry(i, j) = completion_value(phi, i, j);
  }
  return phi;
}

Matrix schur_complement_b(const SpdMatrix& k, const std::vector<int>& c) {
  const int p = k.dim();
  const int nc = static_cast<int>(c.size());
  if (nc == 0) throw std::invalid_argument("schur_complement_b: empty node set");
  std::vector<char> in_c(p, 0);
  for (int i : c) in_c[i] = 1;
  std::vector<int> rest;
  rest.reserve(p - nc);
  for (int i = 0; i < p; ++i)
    if (!in_c[i]) rest.push_back(i);
  if (rest.empty()) return Matrix::Zero(nc, nc);

  const int nr = static_cast<int>(rest.size());
  Matrix k_rc(nr, nc), k_rr(nr, nr);
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < nc; ++b) k_rc(a, b) = k(rest[a], c[b]);
    for (int b = 0; b < nr; ++b) k_rr(a, b) = k(rest[a], rest[b]);
  }
  Eigen::LLT<Matrix> llt(k_rr);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError(0, "schur_complement_b: complement block is singular");
  Matrix b = k_rc.transpose() * llt.solve(k_rc);
  return 0.5 * (b + b.transpose());
}

SpdMatrix clique_transform(const SpdMatrix& k, const std::vector<int>& clique,
                           const SpdMatrix& a, const Graph& g) {
  for (std::size_t s = 0; s < clique.size(); ++s)
    for (std::size_t t = s + 1; t < clique.size(); ++t)
      if (!g.has_edge(clique[s], clique[t]))
        throw std::invalid_argument("clique_transform: node set is not a clique of the graph");
  if (static_cast<int>(clique.size()) != a.dim())
    throw std::invalid_argument("clique_transform: block size mismatch");
  Matrix b = schur_complement_b(k, clique);
  Matrix out = k.mat();
  for (std::size_t s = 0; s < clique.size(); ++s)
    for (std::size_t t = 0; t < clique.size(); ++t)
      out(clique[s], clique[t]) = a(s, t) + b(s, t);
  return SpdMatrix(std::move(out));
}

double log_jacobian_k_to_phi(const CholeskyFactor& phi, const Graph& g) {
  const std::vector<int> nu = nu_counts(g);
  double out = 0.0;
  for (int i = 0; i < phi.dim(); ++i) out += nu[i] * std::log(phi(i, i));
  return out;
}

double log_unnorm_density(const SpdMatrix& k, double delta, const SpdMatrix& d) {
  const CholeskyFactor phi = chol_upper(k);
  double logdet = 0.0;
  for (int i = 0; i < k.dim(); ++i) logdet += 2.0 * std::log(phi(i, i));
  return 0.5 * (delta - 2.0) * logdet - 0.5 * trace_inner(k, d);
}

}  // namespace gwish
