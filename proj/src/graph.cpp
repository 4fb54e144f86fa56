#include "gwish/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gwish {

Graph::Graph(int p) : p_(p) {
  if (p < 1) throw std::invalid_argument("graph needs at least one node");
  adj_.assign(static_cast<std::size_t>(p) * p, 0);
  nbrs_.assign(p, {});
}

void Graph::add_edge(int i, int j) {
  if (has_edge(i, j)) return;
  adj_[static_cast<std::size_t>(i) * p_ + j] = 1;
  adj_[static_cast<std::size_t>(j) * p_ + i] = 1;
  nbrs_[i].insert(std::upper_bound(nbrs_[i].begin(), nbrs_[i].end(), j), j);
  nbrs_[j].insert(std::upper_bound(nbrs_[j].begin(), nbrs_[j].end(), i), i);
  ++edge_count_;
}

Graph from_edge_list(int p, const std::vector<std::pair<int, int>>& pairs) {
  Graph g(p);
  for (const auto& [i, j] : pairs) {
    if (i < 1 || i > p || j < 1 || j > p)
      throw std::invalid_argument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") is out of range for " + std::to_string(p) + " nodes");
    if (i == j)
      throw std::invalid_argument("self loop at node " + std::to_string(i) + " rejected");
    g.add_edge(i - 1, j - 1);
  }
  return g;
}

Graph toggle_edge(const Graph& g, int i, int j) {
  if (i == j) throw std::invalid_argument("cannot toggle a self loop");
  if (i < 0 || j < 0 || i >= g.order() || j >= g.order())
    throw std::invalid_argument("toggle_edge: node index out of range");
  Graph out = g;
  if (g.has_edge(i, j)) {
    out.adj_[static_cast<std::size_t>(i) * out.p_ + j] = 0;
    out.adj_[static_cast<std::size_t>(j) * out.p_ + i] = 0;
    auto& ni = out.nbrs_[i];
    auto& nj = out.nbrs_[j];
    ni.erase(std::find(ni.begin(), ni.end(), j));
    nj.erase(std::find(nj.begin(), nj.end(), i));
    --out.edge_count_;
  } else {
    out.add_edge(i, j);
  }
  return out;
}

std::vector<int> nu_counts(const Graph& g) {
  std::vector<int> nu(g.order(), 0);
  for (int i = 0; i < g.order(); ++i)
    for (int j : g.neighbors(i))
      if (j > i) ++nu[i];
  return nu;
}

namespace {

// Bron-Kerbosch with pivoting over sorted index vectors.
void expand_cliques(const Graph& g, std::vector<int>& r, std::vector<int> p,
                    std::vector<int> x, std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  int pivot = -1;
  std::size_t best = 0;
  for (const auto* side : {&p, &x}) {
    for (int u : *side) {
      std::size_t cnt = 0;
      for (int v : p)
        if (g.has_edge(u, v)) ++cnt;
      if (pivot < 0 || cnt > best) {
        pivot = u;
        best = cnt;
      }
    }
  }
  std::vector<int> candidates;
  for (int v : p)
    if (!g.has_edge(pivot, v)) candidates.push_back(v);
  for (int v : candidates) {
    std::vector<int> p_next, x_next;
    for (int u : p)
      if (g.has_edge(v, u)) p_next.push_back(u);
    for (int u : x)
      if (g.has_edge(v, u)) x_next.push_back(u);
    r.push_back(v);
    expand_cliques(g, r, std::move(p_next), std::move(x_next), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.insert(std::upper_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

CliqueList maximal_cliques(const Graph& g) {
  std::vector<int> all(g.order());
  for (int i = 0; i < g.order(); ++i) all[i] = i;
  CliqueList list;
  std::vector<int> r;
  expand_cliques(g, r, all, {}, list.cliques);
  for (auto& c : list.cliques) std::sort(c.begin(), c.end());
  std::sort(list.cliques.begin(), list.cliques.end());
  return list;
}

bool is_decomposable(const Graph& g) {
  const int p = g.order();
  std::vector<int> weight(p, 0), order(p, -1), position(p, -1);
  std::vector<char> visited(p, 0);
  for (int step = 0; step < p; ++step) {
    int v = -1;
    for (int u = 0; u < p; ++u)
      if (!visited[u] && (v < 0 || weight[u] > weight[v])) v = u;
    visited[v] = 1;
    order[step] = v;
    position[v] = step;
    for (int u : g.neighbors(v))
      if (!visited[u]) ++weight[u];
  }
  // Perfect elimination check: the earlier-visited neighbors of v, minus the
  // last-visited one, must all neighbor that last-visited one.
  for (int step = 1; step < p; ++step) {
    const int v = order[step];
    int parent = -1;
    for (int u : g.neighbors(v))
      if (position[u] < step && (parent < 0 || position[u] > position[parent])) parent = u;
    if (parent < 0) continue;
    for (int u : g.neighbors(v)) {
      if (u == parent || position[u] >= step) continue;
      if (!g.has_edge(u, parent)) return false;
    }
  }
  return true;
}

}  // namespace gwish
