#pragma once

#include <Eigen/Cholesky>
#include <limits>
#include <vector>

#include "chordalrank/graph.hpp"
#include "chordalrank/linalg.hpp"
#include "chordalrank/pattern.hpp"

namespace chordalrank {

enum class Sense { Eq, Le };

// One affine constraint <A, X> {=, <=} b with A given by a PatternVec.
struct Constraint {
  PatternVec a;
  double b = 0.0;
  Sense sense = Sense::Eq;
};

// Sparse SDP: minimize <C, X> over X PSD with the given sparsity pattern,
// subject to affine constraints. target_rank is carried for monitoring by
// rank-penalty drivers; the solver itself never enforces it.
struct SdpProblem {
  int n = 0;
  Graph pattern;
  PatternVec cost;
  std::vector<Constraint> constraints;
  int target_rank = 1;
  // blocks that carry rank penalties; empty means "use the decomposition
  // cliques". Each must be a clique of the extended pattern.
  std::vector<Clique> penalty_blocks;
};

// The problem rewritten over clique blocks of a chordal extension: the
// global PSD cone becomes one small cone per maximal clique, coupled through
// the shared entries.
struct DecomposedProblem {
  SdpProblem problem;
  Graph extended;
  PatternPtr ext_pattern;
  CliqueTree tree;
  std::vector<SelectorMap> selectors;          // one per tree clique
  std::vector<SelectorMap> penalty_selectors;  // one per penalty block
  PatternVec cost;                             // embedded on ext_pattern
  std::vector<PatternVec> constraint_mats;     // embedded on ext_pattern
  Vector rhs;
  std::vector<Sense> senses;
  Vector coverage;  // per pattern entry: number of cliques containing it
};

DecomposedProblem decompose(const SdpProblem& p);

struct AdmmOptions {
  double rho = 10.0;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  int max_iter = 10000;
  // consensus gap required at convergence, relative to 1 + ||x||
  double consensus_tol = 1e-5;
  bool adaptive_rho = true;
  double rho_ratio = 10.0;  // rebalance when one residual exceeds the other by this factor
  double rho_min = 1e-4;
  double rho_max = 1e8;
  double rank_tol = 1e-6;
  double divergence_factor = 1e8;
};

enum class SolveStatus { Converged, MaxIter, InfeasibleSuspected };

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double rho = 0.0;
  int max_clique_rank = 0;
};

struct Solution {
  SolveStatus status = SolveStatus::MaxIter;
  PatternVec x;                // on the extended pattern, plain entries
  std::vector<Matrix> blocks;  // final clique blocks X_k
  double objective = 0.0;      // <C, X>, never including a solve's extra cost
  std::vector<int> clique_ranks;
  int iterations = 0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  bool kkt_regularized = false;
  std::vector<IterationRecord> trace;
};

// Iterate state. x and slack are in solver coordinates (off-diagonal pattern
// entries scaled by sqrt(2), so clique selection is an orthonormal map);
// slack_dup holds the nonnegative duplicates maintained by the projection
// step, slack itself is the affine-step coordinate and may dip below zero
// mid-run.
struct AdmmState {
  Vector x;
  Vector slack;
  std::vector<Matrix> blocks;
  std::vector<Matrix> multipliers;
  Vector slack_dup;
  Vector slack_mult;
  double rho = 0.0;
  int iter = 0;
  double primal_res = std::numeric_limits<double>::infinity();
  double dual_res = std::numeric_limits<double>::infinity();
  bool initialized = false;
};

// Three-step operator-splitting solver on the decomposed problem:
//   1. affine step: equality-constrained QP via one KKT solve,
//   2. per-clique PSD projection (slacks clipped at zero),
//   3. dual ascent on the consensus multipliers.
// The KKT matrix [[D, A^T], [A, 0]] contains no rho, so its factorization is
// computed once and reused across iterations, penalty rebalancing, and
// successive warm-started solves.
class AdmmSolver {
 public:
  explicit AdmmSolver(DecomposedProblem dec, AdmmOptions opts = {});

  // Minimizes <cost + extra_cost, X>; pass nullptr for the bare problem.
  // Warm-starts from the state left by the previous call (reset() clears).
  // Reported objectives always exclude extra_cost.
  Solution solve(const PatternVec* extra_cost = nullptr);
  void reset();

  // Adds seeded symmetric noise of the given scale to the block iterates
  // (duals untouched). Feasibility-style problems can have solution sets
  // symmetric under variable relabelings; the zero start then converges to
  // the relabeling-invariant center, which downstream rank heuristics cannot
  // escape. Perturbing after a plain solve deterministically picks a generic
  // solution near the center instead.
  void randomize_state(std::uint64_t seed, double scale = 1.0);

  const DecomposedProblem& decomposition() const { return dec_; }
  const AdmmOptions& options() const { return opts_; }
  const AdmmState& state() const { return state_; }
  // mutable access for drivers that stage a custom state before stepping
  AdmmState& mutable_state() {
    ensure_factorized();
    if (!state_.initialized) init_state();
    return state_;
  }
  int factorization_count() const { return factorization_count_; }
  bool kkt_regularized() const { return kkt_regularized_; }

  // Individual steps on the current state, for direct exercise in tests.
  // step1 takes the total cost (base plus any penalty term) as a PatternVec
  // on the extended pattern.
  void step1_affine(const PatternVec& cost_total);
  void step2_project();
  void step3_dual();

 private:
  void ensure_factorized();
  void init_state();
  void step1_core(const Vector& c_solver);
  Vector to_solver(const PatternVec& v) const;
  Matrix clique_matrix(int k) const;  // smat of the clique's slice of state x
  double feasibility_inf() const;     // worst constraint violation of state x

  DecomposedProblem dec_;
  AdmmOptions opts_;
  AdmmState state_;

  Vector theta_;                // per-entry solver scaling (1 or sqrt(2))
  Vector cost_solver_;          // base cost, solver coordinates
  std::vector<std::vector<std::pair<int, double>>> rows_;  // constraint rows, solver coords
  std::vector<int> ineq_slot_;  // constraint index -> slack index, -1 for eq
  int num_ineq_ = 0;
  double rhs_inf_ = 0.0;

  Eigen::LLT<Matrix> schur_;
  bool factorized_ = false;
  bool kkt_regularized_ = false;
  int factorization_count_ = 0;

  // step-to-step scratch shared between steps and the residual bookkeeping
  std::vector<int> step_ranks_;
  Vector scatter_prev_;
  Vector slack_dup_prev_;
};

}  // namespace chordalrank
