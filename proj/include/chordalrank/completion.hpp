#pragma once

#include <vector>

#include "chordalrank/graph.hpp"
#include "chordalrank/linalg.hpp"
#include "chordalrank/pattern.hpp"

namespace chordalrank {

// Count of eigenvalues above rel_tol * max(lambda_max, rel_tol).
int numerical_rank(const Matrix& a, double rel_tol = 1e-6);

struct CompletabilityReport {
  bool completable = false;
  std::vector<double> min_eigenvalues;  // one per clique
};

// A partial symmetric matrix with chordal pattern has a PSD completion iff
// every maximal-clique principal block is PSD. Each block's tolerance is
// psd_tol_rel times its spectral norm.
CompletabilityReport check_completable(const PatternVec& x, const std::vector<Clique>& cliques,
                                       double psd_tol_rel = 1e-9);

// PSD completion of minimum rank: the result has numerical rank equal to the
// largest clique-block rank (for connected patterns). Walks the clique tree
// breadth-first keeping an explicit low-rank factor; each new clique's
// factor is rotated onto the placed factor through the separator, reusing
// existing factor directions before opening new ones. Disconnected patterns
// get zero fill across components (block-diagonal result). Throws
// std::invalid_argument when some clique block is not PSD.
Matrix min_rank_complete(const PatternVec& x, const CliqueTree& tree, double rel_tol = 1e-6,
                         double psd_tol_rel = 1e-9);

}  // namespace chordalrank
