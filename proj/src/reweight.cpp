#include "chordalrank/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chordalrank {

WeightState init_weights(const std::vector<Clique>& blocks, double delta) {
  if (blocks.empty()) throw std::invalid_argument("init_weights: no penalty blocks");
  WeightState s;
  s.blocks = blocks;
  s.delta = delta;
  s.tau = Vector::Ones(static_cast<int>(blocks.size()));
  for (const auto& c : blocks)
    s.weights.push_back(Matrix::Identity(static_cast<int>(c.size()), static_cast<int>(c.size())));
  return s;
}

void update_weights(WeightState& state, const std::vector<Matrix>& solution_blocks) {
  if (solution_blocks.size() != state.blocks.size())
    throw std::invalid_argument("update_weights: block count mismatch");
  for (size_t k = 0; k < solution_blocks.size(); ++k) {
    const Matrix& xk = solution_blocks[k];
    if (!xk.allFinite()) throw std::invalid_argument("update_weights: non-finite block");
    EigResult e = jacobi_eig(xk);
    const int d = static_cast<int>(xk.rows());
    const double lmax = (d > 0) ? std::max(e.values(0), 0.0) : 0.0;
    const double delta_k = state.delta * std::max(1.0, lmax);
    // inverse on the clipped spectrum; the largest inverse eigenvalue comes
    // from the smallest (clipped) eigenvalue, so normalization is exact
    Vector inv(d);
    for (int i = 0; i < d; ++i) inv(i) = 1.0 / (std::max(e.values(i), 0.0) + delta_k);
    const double wmax = (d > 0) ? inv(d - 1) : 1.0;  // eigenvalues sorted descending
    Matrix w = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
      w.noalias() += (state.tau(static_cast<int>(k)) * inv(i) / wmax) * e.vectors.col(i) *
                     e.vectors.col(i).transpose();
    state.weights[k] = symmetrize(w);
  }
  ++state.outer_iter;
}

PatternVec aggregate(const WeightState& state, PatternPtr pattern) {
  PatternVec wc = zero_vec(pattern);
  for (size_t k = 0; k < state.blocks.size(); ++k)
    scatter_add(state.weights[k], selector(state.blocks[k], *pattern), wc);
  return wc;
}

double rank_ratio(const Matrix& block) {
  if (block.rows() == 0) return 1.0;
  EigResult e = jacobi_eig(block);
  double sum = 0.0;
  for (int i = 0; i < e.values.size(); ++i) sum += std::max(e.values(i), 0.0);
  if (sum == 0.0) return 1.0;
  return std::max(e.values(0), 0.0) / sum;
}

ReweightResult run_reweighted(AdmmSolver& solver, const ReweightOptions& opts,
                              const std::vector<Matrix>* seed_blocks) {
  const DecomposedProblem& dec = solver.decomposition();
  std::vector<Clique> blocks;
  for (const auto& sel : dec.penalty_selectors) blocks.push_back(sel.clique);

  ReweightResult result;
  result.weights = init_weights(blocks, opts.delta);
  if (seed_blocks != nullptr) {
    update_weights(result.weights, *seed_blocks);
    result.weights.outer_iter = 0;
  }
  Vector prev_x;

  for (int round = 1; round <= opts.max_outer; ++round) {
    PatternVec wc = aggregate(result.weights, dec.ext_pattern);
    Solution sol = solver.solve(&wc);

    double min_ratio = 1.0;
    std::vector<Matrix> penalty_blocks;
    for (const auto& sel : dec.penalty_selectors) {
      penalty_blocks.push_back(extract_block(sol.x, sel));
      min_ratio = std::min(min_ratio, rank_ratio(penalty_blocks.back()));
    }
    RoundRecord rec;
    rec.round = round;
    rec.objective = sol.objective;
    rec.max_clique_rank =
        sol.clique_ranks.empty()
            ? 0
            : *std::max_element(sol.clique_ranks.begin(), sol.clique_ranks.end());
    rec.min_rank_ratio = min_ratio;
    rec.solver_iters = sol.iterations;
    result.rounds.push_back(rec);
    result.trace.insert(result.trace.end(), sol.trace.begin(), sol.trace.end());

    const bool stalled =
        prev_x.size() > 0 &&
        (sol.x.values - prev_x).norm() <= opts.x_change_tol * (1.0 + sol.x.values.norm());
    prev_x = sol.x.values;
    const SolveStatus status = sol.status;
    result.solution = std::move(sol);

    // A suspected-infeasible round ends the run; the caller reads the status
    // off the returned solution.
    if (status == SolveStatus::InfeasibleSuspected) break;
    if (min_ratio > opts.ratio_target || stalled || round == opts.max_outer) break;
    update_weights(result.weights, penalty_blocks);
  }
  return result;
}

}  // namespace chordalrank
