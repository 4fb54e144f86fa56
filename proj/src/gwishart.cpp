#include "gwish/gwishart.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwish/errors.hpp"

namespace gwish {

GWishartParams::GWishartParams(double delta_in, SpdMatrix d_in)
    : delta(delta_in), d(std::move(d_in)) {
  if (!(delta > 0.0))
    throw std::invalid_argument("shape must be positive, got " + std::to_string(delta));
  chol_upper(d);  // rate must be positive definite
}

namespace {

// Bartlett draw for the (delta, d_block) parameterization on a dense block.
Matrix wishart_block(double delta, const Matrix& d_block, RngStream& rng) {
  const int p = static_cast<int>(d_block.rows());
  const double df = delta + p - 1;
  Matrix t = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    t(i, i) = std::sqrt(rng.chi_squared(df - i));
    for (int j = i + 1; j < p; ++j) t(i, j) = rng.normal();
  }
  Eigen::LLT<Matrix> llt(d_block);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError(0, "wishart rate block is not positive definite");
  // phi = t L^{-1} with d = L L', so phi'phi carries scale d^{-1}.
  Matrix phi = llt.matrixL().solve<Eigen::OnTheRight>(t);
  return phi.transpose() * phi;
}

Matrix inverse_spd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError(0, "matrix inversion needs a positive definite input");
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

void check_settings(const CompletionSettings& settings) {
  if (!(settings.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (settings.max_sweeps < 1) throw std::invalid_argument("need at least one sweep");
}

SpdMatrix complete_node_wise(const SpdMatrix& sigma, const Graph& g,
                             const CompletionSettings& settings) {
  const int p = sigma.dim();
  Matrix w = sigma.mat();
  // The sweep tolerance tracks the input scale: an absolute 1e-8 cannot be
  // met in double precision when a near-singular draw puts sigma at 1e6.
  const double threshold =
      settings.tol * std::max(1.0, sigma.mat().diagonal().cwiseAbs().maxCoeff());
  double change = 0.0;
  bool converged = false;
  for (int sweep = 0; sweep < settings.max_sweeps && !converged; ++sweep) {
    change = 0.0;
    for (int j = 0; j < p; ++j) {
      const std::vector<int>& nb = g.neighbors(j);
      Vector col_new = Vector::Zero(p);
      if (!nb.empty()) {
        const int q = static_cast<int>(nb.size());
        Matrix w_nn(q, q);
        Vector rhs(q);
        for (int a = 0; a < q; ++a) {
          rhs(a) = sigma(nb[a], j);
          for (int b = 0; b < q; ++b) w_nn(a, b) = w(nb[a], nb[b]);
        }
        Eigen::LLT<Matrix> llt(w_nn);
        if (llt.info() != Eigen::Success)
          throw NotPositiveDefiniteError(0, "node-wise completion: neighbor block lost "
                                            "positive definiteness");
        const Vector beta = llt.solve(rhs);
        for (int a = 0; a < q; ++a) col_new += beta(a) * w.col(nb[a]);
      }
      for (int i = 0; i < p; ++i) {
        if (i == j) continue;
        change = std::max(change, std::abs(col_new(i) - w(i, j)));
        w(i, j) = col_new(i);
        w(j, i) = col_new(i);
      }
    }
    converged = change < threshold;
  }
  if (!converged)
    throw ConvergenceError(change, "node-wise completion did not converge in " +
                                       std::to_string(settings.max_sweeps) +
                                       " sweeps; last change " + std::to_string(change));
  Matrix k = inverse_spd(w);
  // The limit has exact zeros off the graph; pin the finite-sweep remainder.
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (!g.has_edge(i, j)) k(i, j) = k(j, i) = 0.0;
  SpdMatrix out(std::move(k));
  chol_upper(out);
  return out;
}

}  // namespace

SpdMatrix sample_wishart(const GWishartParams& params, RngStream& rng) {
  return SpdMatrix(wishart_block(params.delta, params.d.mat(), rng));
}

SpdMatrix ips_fixed_point(const Graph& g, const SpdMatrix& s, const CompletionSettings& settings) {
  check_settings(settings);
  const int p = s.dim();
  if (p != g.order()) throw std::invalid_argument("ips_fixed_point: dimension mismatch");
  const CliqueList cliques = maximal_cliques(g);
  std::vector<Matrix> targets;
  targets.reserve(cliques.cliques.size());
  double target_scale = 1.0;
  for (const auto& c : cliques.cliques) {
    const int q = static_cast<int>(c.size());
    Matrix s_c(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) s_c(a, b) = s(c[a], c[b]);
    targets.push_back(inverse_spd(s_c));
    target_scale = std::max(target_scale, targets.back().cwiseAbs().maxCoeff());
  }
  const double threshold = settings.tol * target_scale;
  Matrix k = Matrix::Identity(p, p);
  double change = 0.0;
  for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
    change = 0.0;
    for (std::size_t jc = 0; jc < cliques.cliques.size(); ++jc) {
      const auto& c = cliques.cliques[jc];
      const Matrix b = schur_complement_b(SpdMatrix(k), c);
      for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t t = 0; t < c.size(); ++t) {
          const double v = targets[jc](a, t) + b(a, t);
          change = std::max(change, std::abs(v - k(c[a], c[t])));
          k(c[a], c[t]) = v;
        }
    }
    if (change < threshold) return SpdMatrix(std::move(k));
  }
  throw ConvergenceError(change, "clique fixed point did not converge in " +
                                     std::to_string(settings.max_sweeps) +
                                     " sweeps; last change " + std::to_string(change));
}

SpdMatrix gwishart_complete(const SpdMatrix& sigma, const Graph& g,
                            const CompletionSettings& settings) {
  check_settings(settings);
  if (sigma.dim() != g.order())
    throw std::invalid_argument("gwishart_complete: dimension mismatch");
  switch (settings.engine) {
    case CompletionEngine::clique_ips:
      return ips_fixed_point(g, sigma, settings);
    case CompletionEngine::node_wise:
    default:
      return complete_node_wise(sigma, g, settings);
  }
}

SpdMatrix sample_gwishart(const Graph& g, const GWishartParams& params,
                          const CompletionSettings& settings, RngStream& rng) {
  const SpdMatrix kstar = sample_wishart(params, rng);
  return gwishart_complete(SpdMatrix(inverse_spd(kstar.mat())), g, settings);
}

SpdMatrix block_gibbs_step(const SpdMatrix& k, const Graph& g, const CliqueList& cliques,
                           const GWishartParams& params, RngStream& rng) {
  Matrix out = k.mat();
  for (const auto& c : cliques.cliques) {
    const int q = static_cast<int>(c.size());
    Matrix d_c(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) d_c(a, b) = params.d(c[a], c[b]);
    const Matrix fresh = wishart_block(params.delta, d_c, rng);
    const Matrix b = schur_complement_b(SpdMatrix(out), c);
    for (int a = 0; a < q; ++a)
      for (int t = 0; t < q; ++t) out(c[a], c[t]) = fresh(a, t) + b(a, t);
  }
  return SpdMatrix(std::move(out));
}

SpdMatrix block_gibbs_step(const SpdMatrix& k, const Graph& g, const GWishartParams& params,
                           RngStream& rng) {
  return block_gibbs_step(k, g, maximal_cliques(g), params, rng);
}

SpdMatrix gwishart_mode(const Graph& g, const GWishartParams& params,
                        const CompletionSettings& settings) {
  if (!(params.delta > 2.0))
    throw std::invalid_argument("mode requires shape > 2, got " + std::to_string(params.delta));
  return ips_fixed_point(g, SpdMatrix(params.d.mat() / (params.delta - 2.0)), settings);
}

GWishartParams posterior_params(const GWishartParams& prior, const SpdMatrix& scatter, int n) {
  if (n < 0) throw std::invalid_argument("sample count must be nonnegative");
  if (scatter.dim() != prior.d.dim())
    throw std::invalid_argument("posterior_params: dimension mismatch");
  return GWishartParams(prior.delta + n, SpdMatrix(prior.d.mat() + scatter.mat()));
}

double log_unnorm_density(const SpdMatrix& k, const GWishartParams& params) {
  return log_unnorm_density(k, params.delta, params.d);
}

namespace {

double log_multigamma(int k, double a) {
  double out = 0.25 * k * (k - 1) * std::log(M_PI);
  for (int i = 0; i < k; ++i) out += std::lgamma(a - 0.5 * i);
  return out;
}

double log_i_complete(double delta, const Matrix& d_block) {
  const int k = static_cast<int>(d_block.rows());
  const double a = 0.5 * (delta + k - 1);
  Eigen::LLT<Matrix> llt(d_block);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError(0, "normalizing constant needs a positive definite rate");
  double logdet = 0.0;
  for (int i = 0; i < k; ++i) logdet += 2.0 * std::log(llt.matrixLLT()(i, i));
  return a * k * std::log(2.0) + log_multigamma(k, a) - a * logdet;
}

// Separators of a junction forest: maximum-weight spanning forest of the
// clique intersection graph (Kruskal), weights |C_a ∩ C_b|.
std::vector<std::vector<int>> junction_separators(const std::vector<std::vector<int>>& cliques) {
  struct Link {
    int w, a, b;
  };
  const int nj = static_cast<int>(cliques.size());
  std::vector<Link> links;
  for (int a = 0; a < nj; ++a)
    for (int b = a + 1; b < nj; ++b) {
      std::vector<int> inter;
      std::set_intersection(cliques[a].begin(), cliques[a].end(), cliques[b].begin(),
                            cliques[b].end(), std::back_inserter(inter));
      if (!inter.empty()) links.push_back({static_cast<int>(inter.size()), a, b});
    }
  std::stable_sort(links.begin(), links.end(),
                   [](const Link& x, const Link& y) { return x.w > y.w; });
  std::vector<int> parent(nj);
  for (int i = 0; i < nj; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<int>> seps;
  for (const Link& e : links) {
    const int ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    std::vector<int> inter;
    std::set_intersection(cliques[e.a].begin(), cliques[e.a].end(), cliques[e.b].begin(),
                          cliques[e.b].end(), std::back_inserter(inter));
    seps.push_back(std::move(inter));
  }
  return seps;
}

}  // namespace

double log_ig_decomposable(const Graph& g, const GWishartParams& params) {
  if (!is_decomposable(g))
    throw std::invalid_argument(
        "normalizing constant in closed form needs a decomposable graph; this graph "
        "contains a chordless cycle");
  const CliqueList cliques = maximal_cliques(g);
  double out = 0.0;
  for (const auto& c : cliques.cliques) {
    const int q = static_cast<int>(c.size());
    Matrix d_c(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) d_c(a, b) = params.d(c[a], c[b]);
    out += log_i_complete(params.delta, d_c);
  }
  for (const auto& s : junction_separators(cliques.cliques)) {
    const int q = static_cast<int>(s.size());
    Matrix d_s(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) d_s(a, b) = params.d(s[a], s[b]);
    out -= log_i_complete(params.delta, d_s);
  }
  return out;
}

}  // namespace gwish
