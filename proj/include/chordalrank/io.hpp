#pragma once

#include <string>
#include <vector>

#include "chordalrank/admm.hpp"
#include "chordalrank/graph.hpp"
#include "chordalrank/pattern.hpp"
#include "chordalrank/problems.hpp"
#include "chordalrank/reweight.hpp"

namespace chordalrank {

// On-disk formats are JSON with 1-based indices. Symmetric matrices appear
// as upper-triangle triplets [i, j, v] with i <= j carrying the plain matrix
// entry (no internal scaling leaks into files). A triplet with value 0 still
// contributes its position to the sparsity pattern.
//
// Loaders throw std::runtime_error whose message names the file and the
// offending field; writers throw when the file cannot be opened.

// {"n": int, "edges": [[i, j], ...]}
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

// {"n", "cost": [[i, j, v], ...],
//  "constraints": [{"a": [[i, j, v], ...], "b": num, "sense": "eq"|"le"}, ...],
//  "target_rank": int (optional, default 1),
//  "penalty_blocks": [[v1, v2, ...], ...] (optional)}
// The sparsity pattern is the union of the cost/constraint supports plus a
// clique over every penalty block. Saving writes one cost triplet per
// pattern entry (zeros included) so the pattern survives a round trip.
SdpProblem load_problem(const std::string& path);
void save_problem(const std::string& path, const SdpProblem& p);

// {"D", "Ns", "Np", "eps", "seed", "points": [[...], ...],
//  "normals": [[...], ...], "labels": [...]} — labels are 1-based on disk.
SscInstance load_ssc_instance(const std::string& path);
void save_ssc_instance(const std::string& path, const SscInstance& inst);

// {"n", "entries": [[i, j, v], ...]} — sparse symmetric values; the entry
// positions define the pattern.
PatternVec load_pattern_values(const std::string& path);
void save_pattern_values(const std::string& path, const PatternVec& x);

// Pattern values plus solver metadata: {"n", "objective", "status",
// "iterations", "primal_res", "dual_res", "entries"}. Values round-trip
// exactly, so a reloaded solution reproduces the stored objective.
void save_solution(const std::string& path, const Solution& sol);
PatternVec load_solution(const std::string& path, double* objective = nullptr);

// {"n", "rank", "matrix": [[row], ...]} — dense symmetric matrix.
void save_dense_matrix(const std::string& path, const Matrix& m, int rank);

// CSV logs with fixed headers:
//   iter,objective,primal_res,dual_res,rho,max_clique_rank
//   round,objective,max_clique_rank,min_rank_ratio,solver_iters
void write_iteration_csv(const std::string& path, const std::vector<IterationRecord>& trace);
void write_rounds_csv(const std::string& path, const std::vector<RoundRecord>& rounds);

}  // namespace chordalrank
