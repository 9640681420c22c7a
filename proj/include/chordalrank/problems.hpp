#pragma once

#include <cstdint>
#include <vector>

#include "chordalrank/admm.hpp"
#include "chordalrank/graph.hpp"
#include "chordalrank/linalg.hpp"
#include "chordalrank/pattern.hpp"
#include "chordalrank/reweight.hpp"
#include "chordalrank/rng.hpp"

namespace chordalrank {

// ---------------------------------------------------------------------------
// Maxcut
// ---------------------------------------------------------------------------

struct MaxcutProblem {
  Graph graph;
  SdpProblem sdp;  // minimize <-L/4, X> subject to X_ii = 1, X PSD
};

// Erdos-Renyi graph on n vertices with independent edge probability
// edge_density, plus its cut relaxation SDP. The SDP value of a cut vector
// s is -cut(s), so the relaxation bound equals minus the optimal objective.
MaxcutProblem gen_maxcut(int n, double edge_density, std::uint64_t seed);

struct CutResult {
  std::vector<int> assignment;  // +1 / -1 per vertex
  double value = 0.0;           // number of edges across the cut
};

double cut_value(const Graph& g, const std::vector<int>& assignment);

// Random-hyperplane rounding on the minimum-rank completion of x: factor the
// completion, sample `trials` Gaussian hyperplanes, keep the best cut.
// Throws when x has no PSD completion.
CutResult round_maxcut(const Graph& g, const PatternVec& x, std::uint64_t seed, int trials);

// ---------------------------------------------------------------------------
// Subspace clustering
// ---------------------------------------------------------------------------

struct SscInstance {
  int D = 0;   // ambient dimension
  int Ns = 0;  // subspace count
  int Np = 0;  // point count
  double eps = 0.0;
  std::uint64_t seed = 0;       // generator seed, kept for provenance
  std::vector<Vector> points;   // Np vectors in R^D
  std::vector<Vector> normals;  // Ns unit normals
  std::vector<int> labels;      // true subspace per point
};

// Index layout of the rank-1 lift X = [1, v][1, v]^T with
// v = [r_1, ..., r_Ns, s_11, s_21, ..., s_Ns1, s_12, ...]
// (label indicators ordered subspace-fastest).
struct SscLift {
  int Ns = 0, Np = 0, D = 0;
  int dim() const { return 1 + Ns * (D + Np); }
  int constant_index() const { return 0; }
  int normal_index(int i, int d) const { return 1 + i * D + d; }
  int label_index(int i, int j) const { return 1 + Ns * D + j * Ns + i; }
};

// Hyperplane instance: unit normals uniform on the sphere with pairwise line
// angle at least 15 degrees, points split round-robin across subspaces,
// in-plane coordinates uniform in [-1, 1], then per-coordinate noise
// Uniform(-eps, eps). Draws are rejected while the perturbed point violates
// its own membership bound |r^T x| <= eps or sits within 1.25*eps of a wrong
// subspace (such a point could be labeled either way by any exact solver).
// Throws std::invalid_argument on bad shape parameters.
SscInstance gen_ssc(int Ns, int Np, int D, double eps, std::uint64_t seed);

// Lifted feasibility SDP: zero cost, the membership/label constraints linear
// in X, pattern equal to the union of the cliques {1} u r_i u {s_ij} (one per
// point/subspace pair, size D+2), and the blocks r_i u {s_ij} as rank penalty
// targets: driving one to rank one forces the label entry to agree with the
// membership rows of point j against subspace i.
SdpProblem build_ssc_sdp(const SscInstance& inst);

// Candidate rank-1 values for the penalty blocks, fitted from the data: each
// subspace gets a normal orthogonal to D-1 sampled points, labels go to the
// best-fitting candidate. Used to seed the reweighting (the lifted problem
// has no cost, so identity weights give every feasible point the same
// round-one objective and the run starts blind); different seeds sample
// different points, so failed runs can be retried deterministically.
std::vector<Matrix> ssc_seed_blocks(const SscInstance& inst, std::uint64_t seed);

struct SscEstimate {
  std::vector<Vector> normals;    // unit normals, sign matched to block data
  std::vector<bool> degenerate;   // leading eigenvector had ~zero constant part
  std::vector<int> labels;
};

// Reads normals from the leading eigenvector of each [1, r_i] block (scaled
// so the constant coordinate is +1, then normalized) and labels from
// argmax_i X[1, s_ij] (ties to the lowest subspace).
SscEstimate extract_ssc(const PatternVec& x, const SscInstance& inst);

struct SscSolveResult {
  ReweightResult reweight;  // from the accepted attempt
  SscEstimate estimate;
  int attempts = 0;  // seeded runs consumed; 1 means the first run was accepted
};

// Full pipeline: build the lift, run seeded reweighting, extract the
// clustering. An attempt is accepted when the worst penalty-block rank ratio
// clears opts.ratio_target; otherwise the run restarts from fresh seed blocks
// (seed * 100 + attempt), keeping the last attempt after max_attempts.
SscSolveResult solve_ssc(const SscInstance& inst, const ReweightOptions& opts = {},
                         int max_attempts = 5, std::uint64_t seed = 1);

struct LabelMatching {
  double accuracy = 0.0;
  std::vector<int> permutation;  // estimated label -> true label
};

// Best agreement over all relabelings of the estimated classes (exhaustive;
// throws for more than 8 classes).
LabelMatching best_label_matching(const std::vector<int>& estimated,
                                  const std::vector<int>& truth);
double clustering_accuracy(const std::vector<int>& estimated, const std::vector<int>& truth);

// Angle between the lines spanned by a and b, in degrees.
double line_angle_degrees(const Vector& a, const Vector& b);

}  // namespace chordalrank
