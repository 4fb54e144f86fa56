#pragma once

#include <utility>
#include <vector>

namespace gwish {

// Immutable undirected graph on nodes 0..p-1, no self loops. File formats and
// diagnostics use 1-based node labels; everything in memory is 0-based.
class Graph {
 public:
  explicit Graph(int p);

  int order() const { return p_; }
  int edge_count() const { return edge_count_; }
  bool has_edge(int i, int j) const { return adj_[static_cast<std::size_t>(i) * p_ + j] != 0; }
  const std::vector<int>& neighbors(int i) const { return nbrs_[i]; }

  bool is_complete() const { return edge_count_ == p_ * (p_ - 1) / 2; }
  bool is_empty() const { return edge_count_ == 0; }

  bool operator==(const Graph& other) const {
    return p_ == other.p_ && adj_ == other.adj_;
  }

 private:
  void add_edge(int i, int j);

  int p_ = 0;
  int edge_count_ = 0;
  std::vector<char> adj_;               // row-major p*p adjacency
  std::vector<std::vector<int>> nbrs_;  // sorted neighbor lists

  friend Graph from_edge_list(int p, const std::vector<std::pair<int, int>>& pairs);
  friend Graph toggle_edge(const Graph& g, int i, int j);
};

// Build a graph from 1-based (i, j) pairs; duplicates and reversed pairs
// collapse. Rejects out-of-range nodes and self loops.
Graph from_edge_list(int p, const std::vector<std::pair<int, int>>& pairs);

// New graph with (i, j) added if absent, removed if present (0-based).
Graph toggle_edge(const Graph& g, int i, int j);

// nu[i] = number of neighbors of i with larger index; sums to edge_count().
std::vector<int> nu_counts(const Graph& g);

struct CliqueList {
  std::vector<std::vector<int>> cliques;  // members sorted; list sorted lexicographically
  int count() const { return static_cast<int>(cliques.size()); }
};

// All maximal cliques via Bron-Kerbosch with pivoting; isolated nodes appear
// as singletons. The order is deterministic.
CliqueList maximal_cliques(const Graph& g);

// Chordality test via maximum cardinality search.
bool is_decomposable(const Graph& g);

}  // namespace gwish
