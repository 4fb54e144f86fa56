#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gwish/gwishart.hpp"

namespace gwish {

// Form of the acceptance exponent for the transdimensional proposal.
// `derived` follows standard reversible-jump accounting (reverse proposal
// density over forward proposal density) and is the default; the exact
// enumeration oracles on two and three nodes single it out. `as_printed`
// keeps the alternative exponent with the opposite sign and a doubly shifted
// prior-side residual, retained for comparison.
enum class AlphaVariant { derived, as_printed };

enum class EdgePrior { uniform, bernoulli };

struct DrjConfig {
  double sigma_g = 1.0;    // proposal sd for the new Cholesky entry
  std::int64_t iters = 0;  // total iterations, burn-in included
  std::int64_t burnin = 0;
  std::uint64_t seed = 1;
  AlphaVariant alpha_variant = AlphaVariant::derived;
  EdgePrior edge_prior = EdgePrior::uniform;
  double edge_prior_beta = 0.5;  // Bernoulli inclusion probability
  // Diffuse priors occasionally draw near-singular matrices whose completion
  // converges slowly; chains run millions of completions, so the sweep cap
  // sits well above the standalone default.
  CompletionSettings completion{CompletionEngine::node_wise, 1e-8, 10000};
  bool record_graph_freq = true;  // honored for graphs small enough to key by bitmask
};

struct EdgeProposal {
  int l = 0, m = 0;  // 0-based, l < m
  bool add = false;
};

// Scratch record of one proposal: the auxiliary matrices, the scalar
// bookkeeping of the jump and the acceptance exponent.
struct DrjProposal {
  EdgeProposal move;
  double gamma = 0.0;
  double gamma_tilde = 0.0;
  double vartheta = 0.0;
  double vartheta_tilde = 0.0;
  Matrix k_tilde;   // proposed matrix under the proposed graph
  Matrix k0;        // prior-side matrix moved back to the current graph
  Matrix k0_tilde;  // prior-side draw under the proposed graph
  double log_alpha = 0.0;
  bool numeric_failure = false;  // non-finite exponent; treated as a reject
  int aux_redraws = 0;           // prior-side draws retried for conditioning
};

struct DrjChainState {
  Graph g;
  SpdMatrix k;  // zeros off g, positive definite
  RngStream rng;

  DrjChainState(Graph g0, SpdMatrix k0, std::uint64_t seed)
      : g(std::move(g0)), k(std::move(k0)), rng(seed) {}
};

struct DrjSummary {
  Matrix edge_prob;  // symmetric, unit diagonal
  Matrix mean_k;     // average recorded precision draw
  double accept_rate = 0.0;
  std::int64_t n_recorded = 0;
  std::int64_t n_numeric_rejects = 0;
  std::int64_t n_aux_redraws = 0;
  std::map<std::uint64_t, double> graph_freq;  // edge bitmask -> frequency
};

// Uniform draw over all p(p-1)/2 unordered pairs; delete when the edge is
// present, add otherwise. Symmetric, so no proposal ratio enters the
// acceptance exponent.
EdgeProposal propose_move(const Graph& g, RngStream& rng);

// One transition of the chain: propose an edge flip, run the paired
// posterior/prior jump, accept or reject, then refresh K with a fresh draw
// given the resulting graph (a valid Gibbs update of K given G); that
// refreshed pair is what callers should record. Returns true on acceptance.
// Fills *proposal when non-null.
bool drj_step(DrjChainState& state, const GWishartParams& prior, const GWishartParams& post,
              const DrjConfig& cfg, DrjProposal* proposal = nullptr);

// Run the chain from g0 (conventionally the empty graph) and accumulate
// post-burn-in edge frequencies, the averaged precision and the acceptance
// rate.
DrjSummary run_drj(const SpdMatrix& scatter, int n, const GWishartParams& prior,
                   const Graph& g0, const DrjConfig& cfg);

// Merge summaries of independent chains, weighted by recorded counts.
// Associative and order-independent up to floating point.
DrjSummary merge_summaries(const std::vector<DrjSummary>& parts);

// Exhaustive posterior over all graphs on p <= 3 nodes (every such graph is
// decomposable, so the closed-form constants apply exactly). Keys are edge
// bitmasks; probabilities are computed in log space. Refuses p > 3.
std::map<std::uint64_t, double> exact_graph_posterior(const SpdMatrix& scatter, int n,
                                                      const GWishartParams& prior, int p);

// Bit index of pair (i, j), i < j, in row-major upper-triangle order:
// (0,1), (0,2), ..., (0,p-1), (1,2), ...
int pair_bit(int p, int i, int j);

// Bitmask of the graph's edges under pair_bit numbering.
std::uint64_t graph_bits(const Graph& g);

}  // namespace gwish
