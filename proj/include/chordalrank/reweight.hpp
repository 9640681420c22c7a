#pragma once

#include <vector>

#include "chordalrank/admm.hpp"
#include "chordalrank/linalg.hpp"
#include "chordalrank/pattern.hpp"

namespace chordalrank {

// Per-block rank penalty weights. Each weight matrix lives on one penalty
// block; the aggregated penalty is the scatter-sum of all of them.
struct WeightState {
  std::vector<Clique> blocks;
  std::vector<Matrix> weights;
  double delta = 1e-3;  // inverse regularizer, scaled per block on update
  Vector tau;           // per-block spectral norm target
  int outer_iter = 0;
};

// All weights start at identity (no direction favored), tau at 1.
WeightState init_weights(const std::vector<Clique>& blocks, double delta = 1e-3);

// Inverse reweighting: W_k <- tau_k * (X_k + delta_k I)^-1, normalized so
// its spectral norm is exactly tau_k. delta_k = delta * max(1, sigma_max(X_k))
// keeps the inverse conditioned across problem scales. Negative eigenvalues
// of X_k (solver noise) are clipped to zero first.
void update_weights(WeightState& state, const std::vector<Matrix>& solution_blocks);

// W_C = sum_k scatter of W_k onto the pattern. Every block must be a clique
// of the pattern; the support never grows between rounds since the blocks
// are fixed.
PatternVec aggregate(const WeightState& state, PatternPtr pattern);

// lambda_max / sum(lambda_i) with negatives clipped; 1 for the zero block.
// Close to 1 means numerically rank-one.
double rank_ratio(const Matrix& block);

struct ReweightOptions {
  double delta = 1e-3;
  double ratio_target = 0.99;
  int max_outer = 20;
  double x_change_tol = 1e-4;  // relative iterate change that counts as stalled
};

struct RoundRecord {
  int round = 0;
  double objective = 0.0;
  int max_clique_rank = 0;
  double min_rank_ratio = 0.0;
  int solver_iters = 0;
};

struct ReweightResult {
  Solution solution;  // from the final round
  std::vector<RoundRecord> rounds;
  WeightState weights;
  std::vector<IterationRecord> trace;  // all rounds' solver iterations
};

// Alternates solve(cost + W_C) with weight updates until every penalty
// block's rank ratio clears ratio_target, the iterate stalls, or max_outer
// rounds pass. The solver is warm-started round to round and its KKT
// factorization is never redone (only the cost vector changes). A round
// whose solve suspects infeasibility ends the run immediately; callers read
// the status off the returned solution.
//
// seed_blocks, when given, must hold one matrix per penalty block; the first
// round then runs with weights updated from them instead of identity. A
// data-informed seed matters for feasibility-style problems whose round-one
// identity penalty is constant over the solution set: every feasible point
// ties, the solver returns the symmetry center, and the reweighting fixed
// point there never separates anything.
ReweightResult run_reweighted(AdmmSolver& solver, const ReweightOptions& opts = {},
                              const std::vector<Matrix>* seed_blocks = nullptr);

}  // namespace chordalrank
