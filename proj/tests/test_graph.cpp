#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gwish/graph.hpp"
#include "gwish/rng.hpp"

using namespace gwish;

namespace {

Graph four_cycle() { return from_edge_list(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}}); }

Graph random_graph(int p, double edge_prob, RngStream& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j)
      if (rng.uniform01() < edge_prob) pairs.emplace_back(i, j);
  return from_edge_list(p, pairs);
}

// Independent chordality oracle: a chordless cycle of length >= 4 exists iff
// some vertex subset induces a connected 2-regular subgraph of size >= 4.
bool brute_force_chordal(const Graph& g) {
  const int p = g.order();
  for (int mask = 1; mask < (1 << p); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < p; ++i)
      if (mask >> i & 1) s.push_back(i);
    if (s.size() < 4) continue;
    bool two_regular = true;
    for (int v : s) {
      int deg = 0;
      for (int u : s)
        if (u != v && g.has_edge(u, v)) ++deg;
      if (deg != 2) {
        two_regular = false;
        break;
      }
    }
    if (!two_regular) continue;
    std::vector<int> stack{s[0]}, seen{s[0]};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : s)
        if (u != v && g.has_edge(u, v) &&
            std::find(seen.begin(), seen.end(), u) == seen.end()) {
          seen.push_back(u);
          stack.push_back(u);
        }
    }
    if (seen.size() == s.size()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("edge list construction") {
  const Graph c4 = four_cycle();
  CHECK(c4.order() == 4);
  CHECK(c4.edge_count() == 4);
  CHECK(c4.has_edge(0, 1));
  CHECK(c4.has_edge(0, 2));
  CHECK(c4.has_edge(1, 3));
  CHECK(c4.has_edge(2, 3));
  CHECK_FALSE(c4.has_edge(0, 3));
  CHECK_FALSE(c4.has_edge(1, 2));

  const Graph empty = from_edge_list(3, {});
  for (int i = 0; i < 3; ++i) CHECK(empty.neighbors(i).empty());

  const Graph dedup = from_edge_list(2, {{2, 1}, {1, 2}});
  CHECK(dedup.edge_count() == 1);
  CHECK(dedup.has_edge(0, 1));

  CHECK_THROWS_AS(from_edge_list(3, {{1, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list(3, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list(3, {{2, 2}}), std::invalid_argument);
}

TEST_CASE("maximal cliques") {
  const CliqueList c4 = maximal_cliques(four_cycle());
  REQUIRE(c4.count() == 4);
  CHECK(c4.cliques[0] == std::vector<int>{0, 1});
  CHECK(c4.cliques[1] == std::vector<int>{0, 2});
  CHECK(c4.cliques[2] == std::vector<int>{1, 3});
  CHECK(c4.cliques[3] == std::vector<int>{2, 3});

  const CliqueList full = maximal_cliques(from_edge_list(3, {{1, 2}, {1, 3}, {2, 3}}));
  REQUIRE(full.count() == 1);
  CHECK(full.cliques[0] == std::vector<int>{0, 1, 2});

  const CliqueList empty = maximal_cliques(from_edge_list(3, {}));
  REQUIRE(empty.count() == 3);
  for (int i = 0; i < 3; ++i) CHECK(empty.cliques[i] == std::vector<int>{i});
}

TEST_CASE("clique cover properties on random graphs") {
  RngStream rng(7);
  for (int rep = 0; rep < 60; ++rep) {
    const int p = 2 + rng.uniform_below(7);
    const Graph g = random_graph(p, 0.4, rng);
    const CliqueList cl = maximal_cliques(g);
    std::vector<char> node_covered(p, 0);
    int edges_covered = 0;
    std::vector<char> edge_seen(p * p, 0);
    for (const auto& c : cl.cliques) {
      for (std::size_t a = 0; a < c.size(); ++a) {
        node_covered[c[a]] = 1;
        for (std::size_t b = a + 1; b < c.size(); ++b) {
          REQUIRE(g.has_edge(c[a], c[b]));  // every clique pair is an edge
          if (!edge_seen[c[a] * p + c[b]]) {
            edge_seen[c[a] * p + c[b]] = 1;
            ++edges_covered;
          }
        }
      }
    }
    for (int i = 0; i < p; ++i) CHECK(node_covered[i]);
    CHECK(edges_covered == g.edge_count());
    // no clique contained in another
    for (std::size_t a = 0; a < cl.cliques.size(); ++a)
      for (std::size_t b = 0; b < cl.cliques.size(); ++b)
        if (a != b)
          CHECK_FALSE(std::includes(cl.cliques[b].begin(), cl.cliques[b].end(),
                                    cl.cliques[a].begin(), cl.cliques[a].end()));
  }
}

TEST_CASE("nu counts") {
  const std::vector<int> c4 = nu_counts(four_cycle());
  CHECK(c4 == std::vector<int>{2, 1, 1, 0});
  CHECK(nu_counts(from_edge_list(3, {{1, 2}, {1, 3}, {2, 3}})) == std::vector<int>{2, 1, 0});
  CHECK(nu_counts(from_edge_list(5, {})) == std::vector<int>{0, 0, 0, 0, 0});

  RngStream rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const Graph g = random_graph(2 + rng.uniform_below(7), 0.5, rng);
    const std::vector<int> nu = nu_counts(g);
    CHECK(std::accumulate(nu.begin(), nu.end(), 0) == g.edge_count());
  }
}

TEST_CASE("decomposability") {
  CHECK_FALSE(is_decomposable(four_cycle()));
  CHECK(is_decomposable(from_edge_list(3, {{1, 2}, {1, 3}, {2, 3}})));
  CHECK(is_decomposable(from_edge_list(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}, {1, 4}})));

  // every graph on up to 3 nodes is chordal
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<std::pair<int, int>> pairs;
    const std::pair<int, int> all[3] = {{1, 2}, {1, 3}, {2, 3}};
    for (int b = 0; b < 3; ++b)
      if (bits >> b & 1) pairs.push_back(all[b]);
    CHECK(is_decomposable(from_edge_list(3, pairs)));
  }

  // exhaustive agreement with the brute-force oracle on four nodes
  for (int bits = 0; bits < 64; ++bits) {
    std::vector<std::pair<int, int>> pairs;
    int b = 0;
    for (int i = 1; i <= 4; ++i)
      for (int j = i + 1; j <= 4; ++j, ++b)
        if (bits >> b & 1) pairs.emplace_back(i, j);
    const Graph g = from_edge_list(4, pairs);
    CHECK(is_decomposable(g) == brute_force_chordal(g));
  }

  RngStream rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const Graph g = random_graph(5, 0.5, rng);
    CHECK(is_decomposable(g) == brute_force_chordal(g));
  }
}

TEST_CASE("edge toggles") {
  const Graph c4 = four_cycle();
  const Graph plus = toggle_edge(c4, 0, 3);
  CHECK(plus.edge_count() == 5);
  CHECK(plus.has_edge(0, 3));
  CHECK(toggle_edge(plus, 0, 3) == c4);

  CHECK(toggle_edge(from_edge_list(2, {}), 0, 1).is_complete());
  const Graph path = toggle_edge(from_edge_list(3, {{1, 2}, {1, 3}, {2, 3}}), 0, 1);
  CHECK(path.edge_count() == 2);
  CHECK(path.has_edge(0, 2));
  CHECK(path.has_edge(1, 2));

  CHECK_THROWS_AS(toggle_edge(c4, 1, 1), std::invalid_argument);

  RngStream rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 2 + rng.uniform_below(7);
    const Graph g = random_graph(p, 0.5, rng);
    const int i = rng.uniform_below(p);
    int j = rng.uniform_below(p);
    if (j == i) j = (j + 1) % p;
    CHECK(toggle_edge(toggle_edge(g, i, j), i, j) == g);
  }
}
