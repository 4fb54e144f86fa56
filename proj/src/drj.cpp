#include "gwish/drj.hpp"

#include <cassert>

#include "gwish/errors.hpp"
#include <cmath>
#include <stdexcept>
#include <string>

namespace gwish {

int pair_bit(int p, int i, int j) {
  assert(i < j);
  return i * (2 * p - i - 1) / 2 + (j - i - 1);
}

std::uint64_t graph_bits(const Graph& g) {
  const int p = g.order();
  std::uint64_t bits = 0;
  for (int i = 0; i < p; ++i)
    for (int j : g.neighbors(i))
      if (j > i) bits |= std::uint64_t{1} << pair_bit(p, i, j);
  return bits;
}

EdgeProposal propose_move(const Graph& g, RngStream& rng) {
  const int p = g.order();
  if (p < 2) throw std::invalid_argument("proposals need at least two nodes");
  int t = rng.uniform_below(p * (p - 1) / 2);
  int i = 0;
  while (t >= p - i - 1) {
    t -= p - i - 1;
    ++i;
  }
  const int j = i + 1 + t;
  return {i, j, !g.has_edge(i, j)};
}

namespace {

double frob_inner(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

}  // namespace

bool drj_step(DrjChainState& state, const GWishartParams& prior, const GWishartParams& post,
              const DrjConfig& cfg, DrjProposal* proposal) {
  const Graph& g = state.g;
  const EdgeProposal mv = propose_move(g, state.rng);
  const int l = mv.l, m = mv.m;
  const Graph g_prop = toggle_edge(g, l, m);

  // Posterior-side draw under the current graph, prior-side draw under the
  // proposed one. Both sides then trade the (l, m) coordinate in opposite
  // directions, so the intractable constants of both graphs drop out.
  const SpdMatrix k = sample_gwishart(g, post, cfg.completion, state.rng);
  const CholeskyFactor phi = chol_upper(k);
  // A diffuse prior now and then yields a draw too ill-conditioned to
  // complete; redraw instead of aborting a long chain and count it.
  SpdMatrix k0_tilde;
  int aux_redraws = 0;
  for (;;) {
    try {
      k0_tilde = sample_gwishart(g_prop, prior, cfg.completion, state.rng);
      break;
    } catch (const ConvergenceError&) {
      if (++aux_redraws > 100) throw;
    } catch (const NotPositiveDefiniteError&) {
      if (++aux_redraws > 100) throw;
    }
  }
  const CholeskyFactor phi0_tilde = chol_upper(k0_tilde);

  double gamma, gamma_tilde, vartheta, vartheta_tilde;
  double resid_injected, resid_dropped;
  CholeskyFactor phi_tilde, phi0;
  if (mv.add) {
    vartheta = phi(l, m);  // determined entry under the current graph
    vartheta_tilde = completion_value(phi0_tilde, l, m);
    gamma = state.rng.normal(vartheta, cfg.sigma_g);
    gamma_tilde = phi0_tilde(l, m) - vartheta_tilde;

    phi_tilde = restricted_to(phi, g);
    phi_tilde.entry(l, m) = gamma;
    phi_tilde = complete_cholesky(std::move(phi_tilde), g_prop);
    // The completion reproduces vartheta_tilde at (l, m): rows above l agree
    // with phi0_tilde entry for entry.
    phi0 = complete_cholesky(restricted_to(phi0_tilde, g), g);

    resid_injected = gamma - vartheta;
    resid_dropped = gamma_tilde;
  } else {
    gamma = phi(l, m);  // free entry being removed
    vartheta = completion_value(phi, l, m);
    vartheta_tilde = phi0_tilde(l, m);  // determined under the proposed graph
    gamma_tilde = state.rng.normal(vartheta_tilde, cfg.sigma_g);

    phi_tilde = complete_cholesky(restricted_to(phi, g_prop), g_prop);
    phi0 = restricted_to(phi0_tilde, g_prop);
    phi0.entry(l, m) = gamma_tilde;
    phi0 = complete_cholesky(std::move(phi0), g);

    resid_injected = gamma_tilde - vartheta_tilde;
    resid_dropped = gamma - vartheta;
  }
  const Matrix k_tilde = phi_tilde.product();
  const Matrix k0 = phi0.product();

#ifndef NDEBUG
  for (int i = 0; i < g.order(); ++i) {
    assert(phi_tilde(i, i) == phi(i, i));
    assert(phi0(i, i) == phi0_tilde(i, i));
  }
#endif

  const double two_sg2 = 2.0 * cfg.sigma_g * cfg.sigma_g;
  double bracket;
  if (cfg.alpha_variant == AlphaVariant::derived) {
    bracket = (resid_injected * resid_injected - resid_dropped * resid_dropped) / two_sg2;
  } else if (mv.add) {
    const double shifted = gamma_tilde - vartheta_tilde;
    bracket = -(resid_injected * resid_injected - shifted * shifted) / two_sg2;
  } else {
    bracket = (resid_dropped * resid_dropped - resid_injected * resid_injected) / two_sg2;
  }

  // Diagonals are copied on both sides, so the determinants cancel and only
  // one diagonal entry survives from the change-of-variables factors.
  const double diag_term = mv.add ? std::log(phi(l, l) / phi0(l, l))
                                  : std::log(phi0(l, l) / phi(l, l));
  double log_alpha = -0.5 * frob_inner(k_tilde - k.mat(), post.d.mat()) +
                     0.5 * frob_inner(k0_tilde.mat() - k0, prior.d.mat()) + diag_term + bracket;
  if (cfg.edge_prior == EdgePrior::bernoulli) {
    const double odds = std::log(cfg.edge_prior_beta) - std::log1p(-cfg.edge_prior_beta);
    log_alpha += mv.add ? odds : -odds;
  }

  bool accepted = false;
  bool numeric_failure = false;
  if (!std::isfinite(log_alpha)) {
    numeric_failure = true;  // treated as a reject
  } else {
    accepted = std::log(state.rng.uniform01()) < log_alpha;
  }
  if (accepted) state.g = g_prop;
  // Gibbs refresh of K given the resulting graph; this fresh draw is the
  // recorded one, independent of the accept/reject randomness.
  state.k = sample_gwishart(state.g, post, cfg.completion, state.rng);

  if (proposal != nullptr) {
    proposal->move = mv;
    proposal->gamma = gamma;
    proposal->gamma_tilde = gamma_tilde;
    proposal->vartheta = vartheta;
    proposal->vartheta_tilde = vartheta_tilde;
    proposal->k_tilde = k_tilde;
    proposal->k0 = k0;
    proposal->k0_tilde = k0_tilde.mat();
    proposal->log_alpha = log_alpha;
    proposal->numeric_failure = numeric_failure;
    proposal->aux_redraws = aux_redraws;
  }
  return accepted;
}

namespace {

constexpr int kGraphFreqMaxNodes = 6;

}  // namespace

DrjSummary run_drj(const SpdMatrix& scatter, int n, const GWishartParams& prior,
                   const Graph& g0, const DrjConfig& cfg) {
  const int p = g0.order();
  if (p < 2) throw std::invalid_argument("structure search needs at least two nodes");
  if (cfg.iters <= 0) throw std::invalid_argument("iteration count must be positive");
  if (cfg.burnin < 0 || cfg.burnin >= cfg.iters)
    throw std::invalid_argument("burn-in must be shorter than the run");
  if (!(cfg.sigma_g > 0.0)) throw std::invalid_argument("proposal sd must be positive");
  if (cfg.edge_prior == EdgePrior::bernoulli &&
      !(cfg.edge_prior_beta > 0.0 && cfg.edge_prior_beta < 1.0))
    throw std::invalid_argument("edge inclusion probability must lie in (0, 1)");

  const GWishartParams post = posterior_params(prior, scatter, n);
  DrjChainState state(g0, SpdMatrix::identity(p), cfg.seed);
  state.k = sample_gwishart(state.g, post, cfg.completion, state.rng);

  const bool track_graphs = cfg.record_graph_freq && p <= kGraphFreqMaxNodes;
  Matrix edge_counts = Matrix::Zero(p, p);
  Matrix k_sum = Matrix::Zero(p, p);
  std::map<std::uint64_t, std::int64_t> graph_counts;
  std::int64_t accepted = 0, recorded = 0, numeric_rejects = 0, aux_redraws = 0;

  DrjProposal scratch;
  for (std::int64_t it = 0; it < cfg.iters; ++it) {
    const bool acc = drj_step(state, prior, post, cfg, &scratch);
    if (scratch.numeric_failure) ++numeric_rejects;
    aux_redraws += scratch.aux_redraws;
    if (it < cfg.burnin) continue;
    accepted += acc ? 1 : 0;
    ++recorded;
    for (int i = 0; i < p; ++i)
      for (int j : state.g.neighbors(i))
        if (j > i) edge_counts(i, j) += 1.0;
    k_sum += state.k.mat();
    if (track_graphs) ++graph_counts[graph_bits(state.g)];
  }

  DrjSummary out;
  out.n_recorded = recorded;
  out.n_numeric_rejects = numeric_rejects;
  out.n_aux_redraws = aux_redraws;
  out.accept_rate = static_cast<double>(accepted) / static_cast<double>(recorded);
  out.edge_prob = Matrix::Identity(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const double f = edge_counts(i, j) / static_cast<double>(recorded);
      out.edge_prob(i, j) = f;
      out.edge_prob(j, i) = f;
    }
  out.mean_k = k_sum / static_cast<double>(recorded);
  for (const auto& [bits, count] : graph_counts)
    out.graph_freq[bits] = static_cast<double>(count) / static_cast<double>(recorded);
  return out;
}

DrjSummary merge_summaries(const std::vector<DrjSummary>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  DrjSummary out;
  double total = 0.0;
  for (const auto& s : parts) total += static_cast<double>(s.n_recorded);
  const int p = static_cast<int>(parts.front().edge_prob.rows());
  out.edge_prob = Matrix::Zero(p, p);
  out.mean_k = Matrix::Zero(p, p);
  for (const auto& s : parts) {
    const double w = static_cast<double>(s.n_recorded) / total;
    out.edge_prob += w * s.edge_prob;
    out.mean_k += w * s.mean_k;
    out.accept_rate += w * s.accept_rate;
    out.n_recorded += s.n_recorded;
    out.n_numeric_rejects += s.n_numeric_rejects;
    out.n_aux_redraws += s.n_aux_redraws;
    for (const auto& [bits, f] : s.graph_freq) out.graph_freq[bits] += w * f;
  }
  return out;
}

std::map<std::uint64_t, double> exact_graph_posterior(const SpdMatrix& scatter, int n,
                                                      const GWishartParams& prior, int p) {
  if (p < 1) throw std::invalid_argument("need at least one node");
  if (p > 3)
    throw std::invalid_argument(
        "exhaustive scoring is limited to p <= 3: beyond that the graph space contains "
        "chordless four-cycles, which have no closed-form constant");
  if (scatter.dim() != p || prior.d.dim() != p)
    throw std::invalid_argument("exact_graph_posterior: dimension mismatch");
  const GWishartParams post = posterior_params(prior, scatter, n);
  const int npairs = p * (p - 1) / 2;
  std::map<std::uint64_t, double> logw;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << npairs); ++bits) {
    std::vector<std::pair<int, int>> pairs;
    int b = 0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j, ++b)
        if (bits >> b & 1) pairs.emplace_back(i + 1, j + 1);
    const Graph g = from_edge_list(p, pairs);
    logw[bits] = log_ig_decomposable(g, post) - log_ig_decomposable(g, prior);
  }
  double mx = logw.begin()->second;
  for (const auto& [bits, v] : logw) mx = std::max(mx, v);
  double z = 0.0;
  for (const auto& [bits, v] : logw) z += std::exp(v - mx);
  std::map<std::uint64_t, double> out;
  for (const auto& [bits, v] : logw) out[bits] = std::exp(v - mx) / z;
  return out;
}

}  // namespace gwish
