#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gwish/errors.hpp"
#include "gwish/matrix.hpp"
#include "gwish/rng.hpp"

using namespace gwish;

namespace {

Graph random_graph(int p, double edge_prob, RngStream& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j)
      if (rng.uniform01() < edge_prob) pairs.emplace_back(i, j);
  return from_edge_list(p, pairs);
}

SpdMatrix random_spd(int p, RngStream& rng) {
  Matrix a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = rng.normal();
  return SpdMatrix(Matrix(a * a.transpose() / p + Matrix::Identity(p, p)));
}

}  // namespace

TEST_CASE("symmetric construction") {
  Matrix near(2, 2);
  near << 1.0, 0.5 + 1e-10, 0.5, 1.0;
  const SpdMatrix s(near);
  CHECK(s(0, 1) == s(1, 0));

  Matrix bad(2, 2);
  bad << 1.0, 0.7, 0.5, 1.0;
  CHECK_THROWS_AS(SpdMatrix{bad}, std::invalid_argument);
  CHECK_THROWS_AS(spd_checked(Matrix::Zero(2, 2)), NotPositiveDefiniteError);
}

TEST_CASE("trace inner product") {
  CHECK(trace_inner(SpdMatrix::identity(4), SpdMatrix::identity(4)) == doctest::Approx(4.0));
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 2, 3;
  b << 0, 1, 1, 0;
  CHECK(trace_inner(SpdMatrix(a), SpdMatrix(b)) == doctest::Approx(4.0));
  CHECK(trace_inner(SpdMatrix(a), SpdMatrix(Matrix::Zero(2, 2))) == doctest::Approx(0.0));
  CHECK_THROWS_AS(trace_inner(SpdMatrix(a), SpdMatrix::identity(3)), std::invalid_argument);
}

TEST_CASE("upper cholesky") {
  const CholeskyFactor id = chol_upper(SpdMatrix::identity(3));
  CHECK((id.mat() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  Matrix k(2, 2);
  k << 4, 2, 2, 2;
  const CholeskyFactor phi = chol_upper(SpdMatrix(k));
  CHECK(phi(0, 0) == doctest::Approx(2.0));
  CHECK(phi(0, 1) == doctest::Approx(1.0));
  CHECK(phi(1, 0) == doctest::Approx(0.0));
  CHECK(phi(1, 1) == doctest::Approx(1.0));
  CHECK((phi.product() - k).cwiseAbs().maxCoeff() < 1e-10);

  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  try {
    chol_upper(SpdMatrix(bad));
    FAIL("expected a positive definiteness failure");
  } catch (const NotPositiveDefiniteError& e) {
    CHECK(e.pivot() == 2);
  }

  RngStream rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const SpdMatrix s = random_spd(2 + rng.uniform_below(8), rng);
    const CholeskyFactor f = chol_upper(s);
    const double scale = s.mat().cwiseAbs().maxCoeff();
    CHECK((f.product() - s.mat()).cwiseAbs().maxCoeff() < 1e-10 * scale);
  }
}

TEST_CASE("cholesky completion") {
  // first-row determined entries vanish
  const Graph none = from_edge_list(2, {});
  Matrix u = Matrix::Identity(2, 2);
  u(0, 0) = 1.7;
  u(1, 1) = 0.4;
  const CholeskyFactor done = complete_cholesky(CholeskyFactor(u), none);
  CHECK(done(0, 1) == 0.0);

  // hand evaluation of the fill rule at (2, 4) with rows one and two set
  const Graph g = from_edge_list(4, {{1, 2}, {1, 4}});
  Matrix v = Matrix::Identity(4, 4);
  v(0, 1) = 0.5;
  v(0, 3) = 2.0;
  const CholeskyFactor filled = complete_cholesky(CholeskyFactor(v), g);
  CHECK(filled(1, 3) == doctest::Approx(-1.0));
  CHECK(filled(0, 2) == 0.0);

  // complete graph: nothing to fill
  const Graph full = from_edge_list(3, {{1, 2}, {1, 3}, {2, 3}});
  Matrix w(3, 3);
  w << 1.0, 0.3, -0.2, 0.0, 1.1, 0.7, 0.0, 0.0, 0.9;
  const CholeskyFactor same = complete_cholesky(CholeskyFactor(w), full);
  CHECK((same.mat() - w).cwiseAbs().maxCoeff() == 0.0);

  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = 0.0;
  CHECK_THROWS_AS(complete_cholesky(CholeskyFactor(z), none), NotPositiveDefiniteError);
}

TEST_CASE("completion zeroes the off-graph product") {
  RngStream rng(5);
  for (int rep = 0; rep < 80; ++rep) {
    const int p = 2 + rng.uniform_below(11);
    const Graph g = random_graph(p, 0.4, rng);
    Matrix u = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      u(i, i) = 0.5 + 1.5 * rng.uniform01();
      for (int j = i + 1; j < p; ++j)
        if (g.has_edge(i, j)) u(i, j) = rng.normal();
    }
    const CholeskyFactor phi = complete_cholesky(CholeskyFactor(u), g);
    const Matrix k = phi.product();
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (!g.has_edge(i, j)) CHECK(std::abs(k(i, j)) < 1e-10);
    CHECK_NOTHROW(chol_upper(SpdMatrix(k)));
  }
}

TEST_CASE("schur complement") {
  Matrix k3(3, 3);
  k3 << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const Matrix b = schur_complement_b(SpdMatrix(k3), {0});
  CHECK(b(0, 0) == doctest::Approx(2.0 / 3.0));

  // whole vertex set: empty complement
  const Matrix zero = schur_complement_b(SpdMatrix(k3), {0, 1, 2});
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  // decoupled blocks
  Matrix bd = Matrix::Identity(4, 4);
  bd(0, 1) = bd(1, 0) = 0.4;
  bd(2, 3) = bd(3, 2) = -0.3;
  CHECK(schur_complement_b(SpdMatrix(bd), {0, 1}).cwiseAbs().maxCoeff() < 1e-14);

  // (inv(k)_C)^{-1} = k_C - B_C
  RngStream rng(9);
  for (int rep = 0; rep < 40; ++rep) {
    const int p = 3 + rng.uniform_below(6);
    const SpdMatrix s = random_spd(p, rng);
    std::vector<int> c;
    for (int i = 0; i < p; ++i)
      if (rng.uniform01() < 0.5) c.push_back(i);
    if (c.empty() || static_cast<int>(c.size()) == p) continue;
    const Matrix b_c = schur_complement_b(s, c);
    const Matrix inv = Eigen::LLT<Matrix>(s.mat()).solve(Matrix::Identity(p, p));
    const int q = static_cast<int>(c.size());
    Matrix inv_c(q, q), k_c(q, q);
    for (int a = 0; a < q; ++a)
      for (int t = 0; t < q; ++t) {
        inv_c(a, t) = inv(c[a], c[t]);
        k_c(a, t) = s(c[a], c[t]);
      }
    const Matrix back = Eigen::LLT<Matrix>(inv_c).solve(Matrix::Identity(q, q));
    CHECK((back - (k_c - b_c)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("clique transform") {
  RngStream rng(21);
  // complete graph, whole-set clique: result is the target block exactly
  const Graph full = from_edge_list(3, {{1, 2}, {1, 3}, {2, 3}});
  const SpdMatrix k = random_spd(3, rng);
  const SpdMatrix a = random_spd(3, rng);
  const SpdMatrix moved = clique_transform(k, {0, 1, 2}, a, full);
  CHECK((moved.mat() - a.mat()).cwiseAbs().maxCoeff() < 1e-14);

  // scalar case on the empty graph
  const Graph none = from_edge_list(3, {});
  Matrix five(1, 1);
  five << 5.0;
  const SpdMatrix scalar = clique_transform(SpdMatrix::identity(3), {1}, SpdMatrix(five), none);
  CHECK(scalar(1, 1) == doctest::Approx(5.0));
  CHECK(scalar(0, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(clique_transform(k, {0, 1}, random_spd(2, rng), none), std::invalid_argument);

  // defining identity, pattern and definiteness preserved
  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int p = 3 + rng.uniform_below(6);
    const Graph g = random_graph(p, 0.5, rng);
    const CliqueList cliques = maximal_cliques(g);
    const auto& c = cliques.cliques[rng.uniform_below(cliques.count())];
    SpdMatrix start = SpdMatrix::identity(p);
    const SpdMatrix target = random_spd(static_cast<int>(c.size()), rng);
    const SpdMatrix out = clique_transform(start, c, target, g);
    const Matrix b_after = schur_complement_b(out, c);
    for (std::size_t s = 0; s < c.size(); ++s)
      for (std::size_t t = 0; t < c.size(); ++t)
        CHECK(out(c[s], c[t]) - b_after(s, t) == doctest::Approx(target(s, t)).epsilon(1e-12));
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (!g.has_edge(i, j)) CHECK(out(i, j) == 0.0);
    CHECK_NOTHROW(chol_upper(out));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("jacobian factor") {
  const Graph full2 = from_edge_list(2, {{1, 2}});
  Matrix d(2, 2);
  d << 1.9, 0.0, 0.0, 0.7;
  CHECK(log_jacobian_k_to_phi(CholeskyFactor(d), full2) == doctest::Approx(std::log(1.9)));

  const Graph none = from_edge_list(3, {});
  Matrix any = Matrix::Identity(3, 3) * 2.3;
  CHECK(log_jacobian_k_to_phi(CholeskyFactor(any), none) == doctest::Approx(0.0));

  const Graph c4 = from_edge_list(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  CHECK(log_jacobian_k_to_phi(CholeskyFactor(Matrix::Identity(4, 4)), c4) ==
        doctest::Approx(0.0));

  RngStream rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const int p = 2 + rng.uniform_below(5);
    const Graph g = random_graph(p, 0.5, rng);
    Matrix u = Matrix::Identity(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) u(i, j) = rng.normal();
    CHECK(log_jacobian_k_to_phi(CholeskyFactor(u), g) == doctest::Approx(0.0));
  }
}

TEST_CASE("unnormalized log density") {
  for (int p : {1, 3, 5})
    CHECK(log_unnorm_density(SpdMatrix::identity(p), 3.0, SpdMatrix::identity(p)) ==
          doctest::Approx(-0.5 * p));

  RngStream rng(29);
  const SpdMatrix k = random_spd(3, rng);
  const SpdMatrix d = random_spd(3, rng);
  CHECK(log_unnorm_density(k, 2.0, d) == doctest::Approx(-0.5 * trace_inner(k, d)));

  // analytic free-entry gradient against central differences
  for (int rep = 0; rep < 10; ++rep) {
    const int p = 2 + rng.uniform_below(4);
    const SpdMatrix point = random_spd(p, rng);
    const SpdMatrix rate = random_spd(p, rng);
    const double delta = 2.5 + 5.0 * rng.uniform01();
    const Matrix inv = Eigen::LLT<Matrix>(point.mat()).solve(Matrix::Identity(p, p));
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) {
        const double analytic = (i == j)
                                    ? 0.5 * ((delta - 2.0) * inv(i, i) - rate(i, i))
                                    : (delta - 2.0) * inv(i, j) - rate(i, j);
        const double h = 1e-5;
        Matrix up = point.mat(), dn = point.mat();
        up(i, j) += h;
        dn(i, j) -= h;
        if (i != j) {
          up(j, i) += h;
          dn(j, i) -= h;
        }
        const double numeric = (log_unnorm_density(SpdMatrix(up), delta, rate) -
                                log_unnorm_density(SpdMatrix(dn), delta, rate)) /
                               (2.0 * h);
        CHECK(std::abs(numeric - analytic) < 1e-6);
      }
  }

  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(log_unnorm_density(SpdMatrix(bad), 3.0, SpdMatrix::identity(2)),
                  NotPositiveDefiniteError);
}
