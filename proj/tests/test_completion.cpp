#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <vector>

#include "chordalrank/completion.hpp"
#include "chordalrank/graph.hpp"
#include "chordalrank/pattern.hpp"
#include "chordalrank/rng.hpp"
#include "doctest.h"
#include "util.hpp"

using namespace chordalrank;

namespace {

struct ChordalSetup {
  Graph graph;
  PatternPtr pattern;
  std::vector<Clique> cliques;
  CliqueTree tree;
};

ChordalSetup chordal_setup(Rng& rng, int n, double density) {
  ChordalSetup s{chordal_extension(testutil::random_connected_graph(rng, n, density)), nullptr, {}, {}};
  EliminationOrder o;
  REQUIRE(is_chordal(s.graph, &o));
  s.pattern = SymPattern::make(s.graph);
  s.cliques = maximal_cliques(s.graph, o);
  s.tree = clique_tree(s.cliques);
  return s;
}

// Factor with prescribed rank whose clique blocks are comfortably conditioned.
Matrix rank_r_factor(Rng& rng, int n, int r) {
  Matrix f(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) f(i, j) = rng.normal();
  return f;
}

int max_block_rank(const PatternVec& x, const std::vector<Clique>& cliques, double tol) {
  int rank = 0;
  for (const auto& c : cliques) {
    Matrix b = extract_block(x, selector(c, *x.pattern));
    rank = std::max(rank, numerical_rank(b, tol));
  }
  return rank;
}

}  // namespace

TEST_CASE("numerical rank thresholds relative to the largest eigenvalue") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-12;
  CHECK(numerical_rank(d) == 1);
  CHECK(numerical_rank(Matrix::Zero(3, 3)) == 0);

  Rng rng(5);
  Matrix f = rank_r_factor(rng, 6, 3);
  CHECK(numerical_rank(Matrix(f * f.transpose())) == 3);
}

TEST_CASE("completability accepts factor-projected data") {
  Rng rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    auto s = chordal_setup(rng, 3 + rng.uniform_index(6), 0.4);
    Matrix f = rank_r_factor(rng, s.graph.num_vertices(), 2);
    PatternVec x = testutil::project_factor(s.pattern, f);
    auto report = check_completable(x, s.cliques);
    CHECK(report.completable);
    for (double e : report.min_eigenvalues) CHECK(e >= -1e-9);
  }
}

TEST_CASE("completability rejects an indefinite block") {
  Graph g(2, {{0, 1}});
  auto p = SymPattern::make(g);
  PatternVec x = zero_vec(p);
  x.values(p->index_of(0, 0)) = 1.0;
  x.values(p->index_of(1, 1)) = 1.0;
  x.values(p->index_of(0, 1)) = 2.0;  // eigenvalues 3 and -1
  auto report = check_completable(x, {{0, 1}});
  CHECK(!report.completable);
  CHECK(report.min_eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("completion throws on data that is not block-feasible") {
  Graph g(2, {{0, 1}});
  auto p = SymPattern::make(g);
  PatternVec x = zero_vec(p);
  x.values(p->index_of(0, 0)) = 1.0;
  x.values(p->index_of(1, 1)) = 1.0;
  x.values(p->index_of(0, 1)) = 2.0;
  CHECK_THROWS_AS(min_rank_complete(x, clique_tree({{0, 1}})), std::invalid_argument);
}

TEST_CASE("star-path pattern completes at the maximal block rank") {
  // vertices 0..3, edges {0,1},{1,2},{0,3}: cliques are three edges
  Graph g(4, {{0, 1}, {0, 3}, {1, 2}});
  auto p = SymPattern::make(g);
  PatternVec x = zero_vec(p);
  for (int i = 0; i < 4; ++i) x.values(p->index_of(i, i)) = 1.0;
  x.values(p->index_of(0, 1)) = 0.5;
  x.values(p->index_of(1, 2)) = 0.5;
  x.values(p->index_of(0, 3)) = 0.5;
  EliminationOrder o;
  REQUIRE(is_chordal(g, &o));
  auto cliques = maximal_cliques(g, o);
  Matrix full = min_rank_complete(x, clique_tree(cliques));
  // every specified entry is reproduced
  const auto& entries = p->entries();
  for (size_t l = 0; l < entries.size(); ++l)
    CHECK(full(entries[l].first, entries[l].second) == doctest::Approx(x.values(l)).epsilon(1e-10));
  // each 2x2 block has rank 2, so the completion must too
  CHECK(numerical_rank(full) == 2);
  Vector eig = jacobi_eig(full).values;
  CHECK(eig(eig.size() - 1) >= -1e-9);
}

TEST_CASE("completion rank equals the maximal clique block rank") {
  Rng rng(17);
  int done = 0;
  while (done < 100) {
    int n = 4 + rng.uniform_index(7);  // 4..10
    int r = 1 + rng.uniform_index(3);  // 1..3
    auto s = chordal_setup(rng, n, 0.35);
    int width = 0;
    for (const auto& c : s.cliques) width = std::max(width, static_cast<int>(c.size()));
    if (width <= r) continue;  // want the rank strictly below some block size
    Matrix f = rank_r_factor(rng, n, r);
    PatternVec x = testutil::project_factor(s.pattern, f);
    int expected = max_block_rank(x, s.cliques, 1e-6);
    Matrix full = min_rank_complete(x, s.tree);

    CHECK(numerical_rank(full) == expected);
    // pattern fidelity; per-clique factorizations compound down the tree, so
    // the bound is looser than a single eigendecomposition's
    const auto& entries = s.pattern->entries();
    for (size_t l = 0; l < entries.size(); ++l) {
      CHECK(full(entries[l].first, entries[l].second) == doctest::Approx(x.values(l)).epsilon(1e-8));
      CHECK(full(entries[l].second, entries[l].first) == doctest::Approx(x.values(l)).epsilon(1e-8));
    }
    // PSD
    Vector eig = jacobi_eig(full).values;
    CHECK(eig(eig.size() - 1) >= -1e-8 * std::max(1.0, eig(0)));
    ++done;
  }
}

TEST_CASE("a full pattern completes to itself") {
  Rng rng(19);
  int n = 5;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  Graph g(n, edges);
  auto p = SymPattern::make(g);
  Matrix f = rank_r_factor(rng, n, n);
  Matrix m = f * f.transpose() + Matrix::Identity(n, n);  // safely positive definite
  PatternVec x = zero_vec(p);
  const auto& entries = p->entries();
  for (size_t l = 0; l < entries.size(); ++l) x.values(l) = m(entries[l].first, entries[l].second);
  Matrix full = min_rank_complete(x, clique_tree({{0, 1, 2, 3, 4}}));
  CHECK((full - m).cwiseAbs().maxCoeff() <= 1e-12 * m.norm());
}

TEST_CASE("disconnected patterns share factor directions across components") {
  // two components {0,1} and {2,3}, each an edge clique with a rank-1 block.
  // Entries between the components are free, so the minimum-rank completion
  // correlates them and stays at the maximum block rank instead of adding
  // the component ranks up.
  Graph g(4, {{0, 1}, {2, 3}});
  auto p = SymPattern::make(g);
  Rng rng(23);
  Matrix f = rank_r_factor(rng, 4, 1);
  PatternVec x = testutil::project_factor(p, f);
  Matrix full = min_rank_complete(x, clique_tree({{0, 1}, {2, 3}}));
  const auto& entries = p->entries();
  for (int l = 0; l < p->size(); ++l) {
    auto [i, j] = entries[l];
    CHECK(std::abs(full(i, j) - x.values(l)) <= 1e-12);
  }
  Vector eig = jacobi_eig(full).values;
  CHECK(eig(eig.size() - 1) >= -1e-10);
  CHECK(numerical_rank(full) == 1);
}
