#pragma once

#include "gwish/graph.hpp"
#include "gwish/matrix.hpp"
#include "gwish/rng.hpp"

namespace gwish {

// Shape/rate pair (delta, D) of the Wishart family with density proportional
// to |K|^{(delta-2)/2} exp(-<K,D>/2). This is the classical Wishart with
// degrees of freedom delta + p - 1 and scale D^{-1}; delta > 2 guarantees an
// integrable density with a mode.
struct GWishartParams {
  double delta;
  SpdMatrix d;

  GWishartParams(double delta_in, SpdMatrix d_in);
};

enum class CompletionEngine { node_wise, clique_ips };

struct CompletionSettings {
  CompletionEngine engine = CompletionEngine::node_wise;
  double tol = 1e-8;  // max absolute entry change per full sweep
  int max_sweeps = 1000;
};

// One draw via Bartlett decomposition on the bridge df = delta + p - 1,
// scale = D^{-1}. Mean is (delta + p - 1) D^{-1}.
SpdMatrix sample_wishart(const GWishartParams& params, RngStream& rng);

// The unique K with zeros off g, (K^{-1})_ij = Sigma_ij on edges and the
// diagonal. The node-wise engine iterates regressions on the covariance side;
// the clique engine runs the deterministic fixed point with per-clique
// targets (Sigma_C)^{-1}. Both return the same matrix.
SpdMatrix gwishart_complete(const SpdMatrix& sigma, const Graph& g,
                            const CompletionSettings& settings = {});

// Direct sampler: one unconstrained Wishart draw, inverted and completed
// into the cone of g. Draws are independent across calls.
SpdMatrix sample_gwishart(const Graph& g, const GWishartParams& params,
                          const CompletionSettings& settings, RngStream& rng);

// One full Gibbs sweep over the maximal cliques: each clique block is
// replaced by a fresh Wishart(delta, D_C) draw plus its Schur complement.
// Stationary distribution is the g-constrained law of `params`.
SpdMatrix block_gibbs_step(const SpdMatrix& k, const Graph& g,
                           const GWishartParams& params, RngStream& rng);
SpdMatrix block_gibbs_step(const SpdMatrix& k, const Graph& g, const CliqueList& cliques,
                           const GWishartParams& params, RngStream& rng);

// Deterministic fixed point started from the identity: the K with zeros off
// g and (K^{-1})_C = s_C on every maximal clique C.
SpdMatrix ips_fixed_point(const Graph& g, const SpdMatrix& s,
                          const CompletionSettings& settings = {});

// Maximizer of the unnormalized log density over the cone of g, computed as
// the fixed point with target D/(delta - 2); at the output the free-entry
// gradient vanishes. Requires delta > 2. Defaults to a tight tolerance so
// the stationarity residual is negligible.
SpdMatrix gwishart_mode(const Graph& g, const GWishartParams& params,
                        const CompletionSettings& settings = {CompletionEngine::clique_ips,
                                                              1e-12, 5000});

// Conjugate update: (delta, D) -> (delta + n, D + scatter).
GWishartParams posterior_params(const GWishartParams& prior, const SpdMatrix& scatter, int n);

double log_unnorm_density(const SpdMatrix& k, const GWishartParams& params);

// log of the normalizing constant for decomposable graphs, exact via the
// clique/separator factorization; every clique block uses
//   log I = a k log 2 + log Gamma_k(a) - a log|D_C|,  a = (delta + k - 1)/2.
// Refuses non-decomposable graphs rather than approximate.
double log_ig_decomposable(const Graph& g, const GWishartParams& params);

}  // namespace gwish
