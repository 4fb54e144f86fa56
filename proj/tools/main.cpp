#include <chrono>
#include <cstdint>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gwish/drj.hpp"
#include "gwish/errors.hpp"
#include "gwish/gwishart.hpp"
#include "gwish/io.hpp"
#include "gwish/validate.hpp"

namespace {

using gwish::Matrix;
using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_report(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw gwish::IoError("cannot write '" + out_path + "'");
    out << report.dump(2) << "\n";
  }
}

void write_sample_row(std::ofstream& out, const Matrix& k) {
  bool first = true;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = i; j < k.cols(); ++j) {
      if (!first) out << ",";
      out << k(i, j);
      first = false;
    }
  out << "\n";
}

gwish::CompletionSettings engine_settings(const std::string& engine) {
  gwish::CompletionSettings s;
  s.engine = engine == "clique-ips" ? gwish::CompletionEngine::clique_ips
                                    : gwish::CompletionEngine::node_wise;
  return s;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int run_sample(const std::string& graph_path, double delta, const std::string& dmat_path,
               std::int64_t iters, const std::string& method, std::int64_t burnin,
               const std::string& engine, std::uint64_t seed, const std::string& out_path,
               const std::string& samples_path) {
  Timer timer;
  const gwish::Graph g = gwish::load_graph(graph_path);
  const gwish::GWishartParams params(delta, gwish::spd_checked(gwish::load_matrix_csv(dmat_path)));
  if (params.d.dim() != g.order())
    throw std::invalid_argument("graph has " + std::to_string(g.order()) +
                                " nodes but the rate matrix is " +
                                std::to_string(params.d.dim()) + "-dimensional");
  const gwish::CompletionSettings settings = engine_settings(engine);
  gwish::RngStream rng(seed);

  std::ofstream samples;
  if (!samples_path.empty()) {
    samples.open(samples_path);
    if (!samples) throw gwish::IoError("cannot write '" + samples_path + "'");
    samples << std::setprecision(17);
  }

  Matrix sum = Matrix::Zero(g.order(), g.order());
  std::int64_t recorded = 0;
  if (method == "direct") {
    for (std::int64_t i = 0; i < iters; ++i) {
      const gwish::SpdMatrix k = gwish::sample_gwishart(g, params, settings, rng);
      sum += k.mat();
      ++recorded;
      if (samples.is_open()) write_sample_row(samples, k.mat());
    }
  } else {
    const gwish::CliqueList cliques = gwish::maximal_cliques(g);
    gwish::SpdMatrix k = gwish::SpdMatrix::identity(g.order());
    for (std::int64_t i = 0; i < burnin; ++i)
      k = gwish::block_gibbs_step(k, g, cliques, params, rng);
    for (std::int64_t i = 0; i < iters; ++i) {
      k = gwish::block_gibbs_step(k, g, cliques, params, rng);
      sum += k.mat();
      ++recorded;
      if (samples.is_open()) write_sample_row(samples, k.mat());
    }
  }

  json report;
  report["command"] = "sample";
  report["seed"] = seed;
  report["inputs"] = {{"graph", graph_path}, {"dmat", dmat_path},   {"delta", delta},
                      {"iters", iters},      {"method", method},    {"engine", engine},
                      {"burnin", burnin},    {"samples", samples_path}};
  report["mean_k"] = matrix_to_json(sum / static_cast<double>(recorded));
  report["n_draws"] = recorded;
  report["timing"] = {{"seconds", timer.seconds()}};
  emit_report(report, out_path);
  return 0;
}

int run_mode(const std::string& graph_path, double delta, const std::string& dmat_path,
             double tol, const std::string& out_path) {
  Timer timer;
  const gwish::Graph g = gwish::load_graph(graph_path);
  const gwish::GWishartParams params(delta, gwish::spd_checked(gwish::load_matrix_csv(dmat_path)));
  if (params.d.dim() != g.order())
    throw std::invalid_argument("graph/matrix dimension mismatch");
  gwish::CompletionSettings settings{gwish::CompletionEngine::clique_ips, tol, 5000};
  const gwish::SpdMatrix mode = gwish::gwishart_mode(g, params, settings);

  json report;
  report["command"] = "mode";
  report["inputs"] = {{"graph", graph_path}, {"dmat", dmat_path}, {"delta", delta}, {"tol", tol}};
  report["mode"] = matrix_to_json(mode.mat());
  report["timing"] = {{"seconds", timer.seconds()}};
  emit_report(report, out_path);
  return 0;
}

json edges_of_bits(int p, std::uint64_t bits) {
  json edges = json::array();
  int b = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j, ++b)
      if (bits >> b & 1) edges.push_back({i + 1, j + 1});
  return edges;
}

int run_drj_cmd(const std::string& data_path, double delta, const std::string& dmat_path,
                bool dmat_identity, double sigma_g, std::int64_t iters, std::int64_t burnin,
                const std::string& alpha_variant, bool center, std::uint64_t seed,
                const std::string& out_path, int chains) {
  Timer timer;
  const gwish::Dataset data = gwish::load_dataset(data_path);
  const gwish::ScatterResult scatter = gwish::compute_scatter(data, center);
  const Matrix d0 = dmat_identity ? Matrix(Matrix::Identity(data.p, data.p))
                                  : gwish::load_matrix_csv(dmat_path);
  const gwish::GWishartParams prior(delta, gwish::spd_checked(d0));
  if (prior.d.dim() != data.p) throw std::invalid_argument("data/rate dimension mismatch");

  gwish::DrjConfig cfg;
  cfg.sigma_g = sigma_g;
  cfg.iters = iters;
  cfg.burnin = burnin;
  cfg.alpha_variant = alpha_variant == "as-printed" ? gwish::AlphaVariant::as_printed
                                                    : gwish::AlphaVariant::derived;

  std::vector<gwish::DrjSummary> parts(chains);
  std::vector<std::future<gwish::DrjSummary>> jobs;
  for (int c = 0; c < chains; ++c) {
    gwish::DrjConfig chain_cfg = cfg;
    chain_cfg.seed = seed + static_cast<std::uint64_t>(c);
    jobs.push_back(std::async(std::launch::async, [&, chain_cfg] {
      return gwish::run_drj(scatter.u, scatter.n, prior, gwish::Graph(data.p), chain_cfg);
    }));
  }
  for (int c = 0; c < chains; ++c) parts[c] = jobs[c].get();
  const gwish::DrjSummary merged = gwish::merge_summaries(parts);

  json report;
  report["command"] = "drj";
  report["seed"] = seed;
  report["alpha_variant"] = alpha_variant;
  report["inputs"] = {{"data", data_path},
                      {"dmat", dmat_identity ? "identity" : dmat_path},
                      {"delta", delta},
                      {"sigma_g", sigma_g},
                      {"iters", iters},
                      {"burnin", burnin},
                      {"center", center},
                      {"chains", chains},
                      {"n", scatter.n}};
  if (!data.variable_names.empty()) report["inputs"]["variables"] = data.variable_names;
  report["edge_prob"] = matrix_to_json(merged.edge_prob);
  report["accept_rate"] = merged.accept_rate;
  report["mean_k"] = matrix_to_json(merged.mean_k);
  report["n_recorded"] = merged.n_recorded;
  report["n_numeric_rejects"] = merged.n_numeric_rejects;
  report["n_aux_redraws"] = merged.n_aux_redraws;
  if (!merged.graph_freq.empty()) {
    json freqs = json::array();
    for (const auto& [bits, f] : merged.graph_freq)
      freqs.push_back({{"edges", edges_of_bits(data.p, bits)}, {"frequency", f}});
    report["graph_freq"] = std::move(freqs);
  }
  if (chains > 1) {
    json per_chain = json::array();
    for (int c = 0; c < chains; ++c)
      per_chain.push_back({{"seed", seed + static_cast<std::uint64_t>(c)},
                           {"accept_rate", parts[c].accept_rate},
                           {"n_recorded", parts[c].n_recorded}});
    report["chains"] = std::move(per_chain);
  }
  report["timing"] = {{"seconds", timer.seconds()}};
  emit_report(report, out_path);
  return 0;
}

int run_exact(const std::string& data_path, double delta, const std::string& dmat_path,
              bool dmat_identity, bool center, const std::string& out_path) {
  Timer timer;
  const gwish::Dataset data = gwish::load_dataset(data_path);
  const gwish::ScatterResult scatter = gwish::compute_scatter(data, center);
  const Matrix d0 = dmat_identity ? Matrix(Matrix::Identity(data.p, data.p))
                                  : gwish::load_matrix_csv(dmat_path);
  const gwish::GWishartParams prior(delta, gwish::spd_checked(d0));
  const auto posterior = gwish::exact_graph_posterior(scatter.u, scatter.n, prior, data.p);

  Matrix edge_prob = Matrix::Identity(data.p, data.p);
  json graphs = json::array();
  for (const auto& [bits, prob] : posterior) {
    graphs.push_back({{"edges", edges_of_bits(data.p, bits)}, {"probability", prob}});
    int b = 0;
    for (int i = 0; i < data.p; ++i)
      for (int j = i + 1; j < data.p; ++j, ++b)
        if (bits >> b & 1) {
          edge_prob(i, j) += prob;
          edge_prob(j, i) += prob;
        }
  }

  json report;
  report["command"] = "exact";
  report["inputs"] = {{"data", data_path},
                      {"dmat", dmat_identity ? "identity" : dmat_path},
                      {"delta", delta},
                      {"center", center},
                      {"n", scatter.n}};
  report["graph_posterior"] = std::move(graphs);
  report["edge_prob"] = matrix_to_json(edge_prob);
  report["timing"] = {{"seconds", timer.seconds()}};
  emit_report(report, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sampling for graph-constrained Wishart laws and transdimensional "
               "structure search over Gaussian graphical models"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw precision matrices for a fixed graph");
  std::string graph_path, dmat_path, out_path, samples_path;
  std::string method = "direct", engine = "node-wise";
  double delta = 3.0;
  std::int64_t iters = 0, burnin = 0;
  std::uint64_t seed = 1;
  sample->add_option("--graph", graph_path, "graph file")->required();
  sample->add_option("--delta", delta, "shape parameter")->required();
  sample->add_option("--dmat", dmat_path, "rate matrix CSV")->required();
  sample->add_option("--iters", iters, "number of draws / sweeps")->required();
  sample->add_option("--method", method)->check(CLI::IsMember({"direct", "block-gibbs"}));
  sample->add_option("--burnin", burnin, "discarded sweeps (block-gibbs only)");
  sample->add_option("--engine", engine)->check(CLI::IsMember({"node-wise", "clique-ips"}));
  sample->add_option("--seed", seed);
  sample->add_option("--out", out_path, "report path (stdout when omitted)");
  sample->add_option("--samples", samples_path, "stream draws as CSV (upper triangle, row-major)");

  // mode
  auto* mode = app.add_subcommand("mode", "Density maximizer for a fixed graph");
  std::string m_graph, m_dmat, m_out;
  double m_delta = 3.0, m_tol = 1e-10;
  mode->add_option("--graph", m_graph)->required();
  mode->add_option("--delta", m_delta)->required();
  mode->add_option("--dmat", m_dmat)->required();
  mode->add_option("--tol", m_tol, "fixed-point tolerance");
  mode->add_option("--out", m_out);

  // drj
  auto* drj = app.add_subcommand("drj", "Transdimensional search over graphs");
  std::string d_data, d_dmat, d_out, d_alpha = "derived";
  bool d_identity = false, d_center = true;
  double d_delta = 3.0, d_sigma = 1.0;
  std::int64_t d_iters = 100000, d_burnin = 10000;
  std::uint64_t d_seed = 1;
  int d_chains = 1;
  drj->add_option("--data", d_data, "dataset CSV")->required();
  drj->add_option("--delta", d_delta)->required();
  auto* opt_dmat = drj->add_option("--dmat", d_dmat, "prior rate matrix CSV");
  drj->add_flag("--dmat-identity", d_identity, "identity prior rate")->excludes(opt_dmat);
  drj->add_option("--sigma-g", d_sigma, "proposal standard deviation");
  drj->add_option("--iters", d_iters, "total iterations including burn-in");
  drj->add_option("--burnin", d_burnin);
  drj->add_option("--alpha-variant", d_alpha)->check(CLI::IsMember({"derived", "as-printed"}));
  drj->add_option("--center", d_center, "center the scatter matrix (true/false)");
  drj->add_option("--seed", d_seed);
  drj->add_option("--chains", d_chains, "independent seeded chains")->check(CLI::PositiveNumber);
  drj->add_option("--out", d_out);

  // exact
  auto* exact = app.add_subcommand("exact", "Exhaustive posterior over graphs (p <= 3)");
  std::string e_data, e_dmat, e_out;
  bool e_identity = false, e_center = true;
  double e_delta = 3.0;
  exact->add_option("--data", e_data)->required();
  exact->add_option("--delta", e_delta)->required();
  auto* e_opt_dmat = exact->add_option("--dmat", e_dmat);
  exact->add_flag("--dmat-identity", e_identity)->excludes(e_opt_dmat);
  exact->add_option("--center", e_center);
  exact->add_option("--out", e_out);

  // validate
  auto* validate = app.add_subcommand("validate", "Run the built-in validation suite");
  bool quick = false;
  validate->add_flag("--quick", quick, "tenth-length runs, threefold tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed())
      return run_sample(graph_path, delta, dmat_path, iters, method, burnin, engine, seed,
                        out_path, samples_path);
    if (mode->parsed()) return run_mode(m_graph, m_delta, m_dmat, m_tol, m_out);
    if (drj->parsed()) {
      if (!d_identity && d_dmat.empty())
        throw std::invalid_argument("provide --dmat PATH or --dmat-identity");
      return run_drj_cmd(d_data, d_delta, d_dmat, d_identity, d_sigma, d_iters, d_burnin,
                         d_alpha, d_center, d_seed, d_out, d_chains);
    }
    if (exact->parsed()) {
      if (!e_identity && e_dmat.empty())
        throw std::invalid_argument("provide --dmat PATH or --dmat-identity");
      return run_exact(e_data, e_delta, e_dmat, e_identity, e_center, e_out);
    }
    if (validate->parsed()) {
      gwish::ValidateOptions opts;
      opts.quick = quick;
      const int failures = gwish::run_acceptance(opts, std::cout);
      std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) +
                    " criterion(s) failed") << "\n";
      return failures == 0 ? 0 : 1;
    }
  } catch (const gwish::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gwish::NotPositiveDefiniteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const gwish::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
