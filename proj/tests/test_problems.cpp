#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <vector>

#include "chordalrank/problems.hpp"
#include "chordalrank/reweight.hpp"
#include "doctest.h"
#include "util.hpp"

using namespace chordalrank;

namespace {

// Exhaustive maxcut over sign vectors (first vertex pinned by symmetry).
double brute_force_maxcut(const Graph& g) {
  const int n = g.num_vertices();
  double best = 0.0;
  std::vector<int> s(n, 1);
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    for (int i = 1; i < n; ++i) s[i] = (mask >> (i - 1)) & 1 ? -1 : 1;
    best = std::max(best, cut_value(g, s));
  }
  return best;
}

// The rank-1 lift [1, v][1, v]^T of the ground truth, projected on a pattern.
PatternVec truth_lift(const SscInstance& inst, PatternPtr pattern) {
  SscLift lift{inst.Ns, inst.Np, inst.D};
  Vector f = Vector::Zero(lift.dim());
  f(lift.constant_index()) = 1.0;
  for (int i = 0; i < inst.Ns; ++i)
    for (int d = 0; d < inst.D; ++d) f(lift.normal_index(i, d)) = inst.normals[i](d);
  for (int j = 0; j < inst.Np; ++j) f(lift.label_index(inst.labels[j], j)) = 1.0;
  return testutil::project_factor(pattern, Matrix(f));
}

double constraint_violation(const SdpProblem& p, const PatternVec& x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    double v = inner(c.a, x) - c.b;
    worst = std::max(worst, c.sense == Sense::Eq ? std::abs(v) : std::max(v, 0.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("maxcut generation matches the cut relaxation layout") {
  MaxcutProblem mc = gen_maxcut(6, 0.5, 11);
  const Graph& g = mc.graph;
  CHECK(g.num_vertices() == 6);
  CHECK(mc.sdp.n == 6);
  CHECK(static_cast<int>(mc.sdp.constraints.size()) == 6);
  // objective of a cut vector is minus its cut value
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    std::vector<int> s(6);
    for (auto& si : s) si = rng.bernoulli(0.5) ? 1 : -1;
    Vector sv(6);
    for (int i = 0; i < 6; ++i) sv(i) = s[i];
    PatternVec x = testutil::project_factor(mc.sdp.cost.pattern, Matrix(sv));
    CHECK(inner(mc.sdp.cost, x) == doctest::Approx(-cut_value(g, s)).epsilon(1e-12));
    CHECK(constraint_violation(mc.sdp, x) <= 1e-12);
  }
  CHECK_THROWS_AS(gen_maxcut(1, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_maxcut(5, 0.0, 0), std::invalid_argument);
}

TEST_CASE("identical seeds reproduce the instance, different seeds vary") {
  MaxcutProblem a = gen_maxcut(12, 0.3, 7);
  MaxcutProblem b = gen_maxcut(12, 0.3, 7);
  CHECK(a.graph == b.graph);
  CHECK(a.sdp.cost.values == b.sdp.cost.values);
  bool any_diff = false;
  for (std::uint64_t s = 8; s < 12 && !any_diff; ++s)
    any_diff = !(gen_maxcut(12, 0.3, s).graph == a.graph);
  CHECK(any_diff);
}

TEST_CASE("the relaxation upper-bounds the true cut on small graphs") {
  Rng seeds(23);
  for (int t = 0; t < 6; ++t) {
    MaxcutProblem mc = gen_maxcut(5 + static_cast<int>(seeds.uniform_index(6)), 0.5, 100 + t);
    if (mc.graph.num_edges() == 0) continue;
    AdmmSolver solver(decompose(mc.sdp));
    Solution sol = solver.solve();
    REQUIRE(sol.status == SolveStatus::Converged);
    double bound = -sol.objective;
    CHECK(bound >= brute_force_maxcut(mc.graph) - 1e-4 * (1.0 + bound));
  }
}

TEST_CASE("rounding a rank one cut matrix recovers its cut") {
  Graph g(5, {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}});
  // values cover the chordal extension, as a solver solution would
  Graph ext = chordal_extension(g);
  std::vector<int> s = {1, -1, 1, -1, 1};
  Vector sv(5);
  for (int i = 0; i < 5; ++i) sv(i) = s[i];
  PatternVec x = testutil::project_factor(SymPattern::make(ext), Matrix(sv));
  CutResult cut = round_maxcut(g, x, 5, 3);
  CHECK(cut.value == cut_value(g, s));
  // the positive class may be either side of the hyperplane
  bool same = true, flipped = true;
  for (int i = 0; i < 5; ++i) {
    same = same && cut.assignment[i] == s[i];
    flipped = flipped && cut.assignment[i] == -s[i];
  }
  CHECK((same || flipped));
  // a partial matrix on a non-chordal pattern has no completion recipe
  PatternVec raw = testutil::project_factor(SymPattern::make(g), Matrix(sv));
  CHECK_THROWS_AS(round_maxcut(g, raw, 5, 3), std::invalid_argument);
}

TEST_CASE("rounding the triangle optimum finds the true maxcut") {
  MaxcutProblem mc = gen_maxcut(3, 1.0, 1);
  REQUIRE(mc.graph.num_edges() == 3);
  AdmmSolver solver(decompose(mc.sdp));
  Solution sol = solver.solve();
  REQUIRE(sol.status == SolveStatus::Converged);
  CHECK(sol.objective == doctest::Approx(-2.25).epsilon(1e-3));
  CutResult cut = round_maxcut(mc.graph, sol.x, 2, 20);
  CHECK(cut.value == 2.0);
}

TEST_CASE("ssc generation respects membership and angle bounds") {
  SscInstance inst = gen_ssc(3, 12, 3, 0.05, 17);
  REQUIRE(static_cast<int>(inst.points.size()) == 12);
  REQUIRE(static_cast<int>(inst.normals.size()) == 3);
  for (const Vector& r : inst.normals) CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      CHECK(line_angle_degrees(inst.normals[a], inst.normals[b]) >= 15.0 - 1e-9);
  for (int j = 0; j < 12; ++j) {
    CHECK(inst.labels[j] == j % 3);
    CHECK(std::abs(inst.normals[inst.labels[j]].dot(inst.points[j])) <= inst.eps + 1e-15);
  }
  SscInstance clean = gen_ssc(2, 6, 4, 0.0, 5);
  for (int j = 0; j < 6; ++j)
    CHECK(std::abs(clean.normals[clean.labels[j]].dot(clean.points[j])) <= 1e-12);
  CHECK_THROWS_AS(gen_ssc(0, 5, 2, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_ssc(3, 2, 2, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_ssc(2, 4, 1, 0.1, 1), std::invalid_argument);
}

TEST_CASE("the ssc lift has the documented size and block bookkeeping") {
  SscInstance inst = gen_ssc(4, 80, 5, 0.1, 31);
  SdpProblem p = build_ssc_sdp(inst);
  CHECK(p.n == 341);  // 1 + 4 * (5 + 80)
  CHECK(static_cast<int>(p.penalty_blocks.size()) == 320);
  for (const auto& blk : p.penalty_blocks) CHECK(static_cast<int>(blk.size()) == 6);

  // the pattern is chordal with exactly the N_s * N_p declared cliques
  EliminationOrder order;
  REQUIRE(is_chordal(p.pattern, &order));
  auto cliques = maximal_cliques(p.pattern, order);
  CHECK(static_cast<int>(cliques.size()) == 320);
  for (const auto& c : cliques) CHECK(static_cast<int>(c.size()) == 7);
}

TEST_CASE("the ground truth lift is feasible and extraction inverts it") {
  for (std::uint64_t seed : {2, 9}) {
    SscInstance inst = gen_ssc(3, 9, 2, 0.15, seed);
    SdpProblem p = build_ssc_sdp(inst);
    PatternVec x = truth_lift(inst, p.cost.pattern);
    CHECK(constraint_violation(p, x) <= 1e-12);

    SscEstimate est = extract_ssc(x, inst);
    CHECK(clustering_accuracy(est.labels, inst.labels) == 1.0);
    for (int i = 0; i < inst.Ns; ++i) {
      CHECK(!est.degenerate[i]);
      CHECK(line_angle_degrees(est.normals[i], inst.normals[i]) <= 1e-8);
    }
  }
}

TEST_CASE("noisy points break feasibility when the bound is removed") {
  SscInstance inst = gen_ssc(2, 8, 2, 0.1, 13);
  bool any_violation = false;
  for (int j = 0; j < inst.Np; ++j)
    any_violation =
        any_violation || std::abs(inst.normals[inst.labels[j]].dot(inst.points[j])) > 1e-8;
  CHECK(any_violation);
  SscInstance zeroed = inst;
  zeroed.eps = 0.0;
  SdpProblem p = build_ssc_sdp(zeroed);
  PatternVec x = truth_lift(zeroed, p.cost.pattern);
  CHECK(constraint_violation(p, x) > 1e-8);
}

TEST_CASE("sign-flipped normals give the same labels and matching lines") {
  SscInstance inst = gen_ssc(2, 6, 3, 0.0, 41);
  SscInstance flipped = inst;
  for (auto& r : flipped.normals) r = -r;
  SdpProblem p = build_ssc_sdp(flipped);
  PatternVec x = truth_lift(flipped, p.cost.pattern);
  SscEstimate est = extract_ssc(x, inst);
  CHECK(clustering_accuracy(est.labels, inst.labels) == 1.0);
  for (int i = 0; i < inst.Ns; ++i)
    CHECK(line_angle_degrees(est.normals[i], inst.normals[i]) <= 1e-8);
}

TEST_CASE("label matching maximizes agreement over relabelings") {
  CHECK(clustering_accuracy({0, 1, 2, 0}, {0, 1, 2, 0}) == 1.0);
  CHECK(clustering_accuracy({1, 2, 0, 1}, {0, 1, 2, 0}) == 1.0);
  CHECK(clustering_accuracy({0, 0, 1, 1}, {0, 1, 0, 1}) == 0.5);
  LabelMatching m = best_label_matching({1, 1, 0, 0}, {0, 0, 1, 1});
  CHECK(m.accuracy == 1.0);
  CHECK(m.permutation == std::vector<int>{1, 0});
  CHECK_THROWS_AS(clustering_accuracy({0, 1}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(clustering_accuracy({9}, {0}), std::invalid_argument);
}

TEST_CASE("solving a small ssc instance recovers the clustering") {
  SscInstance inst = gen_ssc(2, 8, 2, 0.1, 3);
  SscSolveResult r = solve_ssc(inst, {}, 5, 3);
  CHECK(r.reweight.rounds.back().min_rank_ratio > 0.99);
  LabelMatching m = best_label_matching(r.estimate.labels, inst.labels);
  CHECK(m.accuracy == 1.0);
  for (int i = 0; i < inst.Ns; ++i) {
    REQUIRE(!r.estimate.degenerate[i]);
    CHECK(line_angle_degrees(r.estimate.normals[i], inst.normals[m.permutation[i]]) <= 5.0);
  }
}

TEST_CASE("generated points keep a margin from wrong subspaces") {
  // labels must be decidable from the data alone: a point within eps of two
  // subspaces could be assigned either way by any exact solver
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SscInstance inst = gen_ssc(2, 20, 2, 0.1, seed);
    for (int j = 0; j < inst.Np; ++j)
      for (int i = 0; i < inst.Ns; ++i) {
        if (i == inst.labels[j]) continue;
        CHECK(std::abs(inst.normals[i].dot(inst.points[j])) > inst.eps);
      }
  }
}
