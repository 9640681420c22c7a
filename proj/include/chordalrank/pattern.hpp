#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "chordalrank/graph.hpp"
#include "chordalrank/linalg.hpp"

namespace chordalrank {

// One entry of a symmetric matrix in upper-triangle triplet form, i <= j.
// The value is the plain matrix entry; symmetry is implied.
struct Triplet {
  int i = 0;
  int j = 0;
  double v = 0.0;
};

// Index set of a symmetric sparsity pattern: the entries (i, j) with i <= j,
// in lexicographic order, with every diagonal entry present regardless of
// the graph. Shared immutably between vectors on the same pattern.
class SymPattern {
 public:
  static std::shared_ptr<const SymPattern> make(const Graph& g);

  int n() const { return n_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<std::pair<int, int>>& entries() const { return entries_; }
  // -1 when (i, j) is not in the pattern
  int index_of(int i, int j) const;
  bool is_diagonal(int idx) const { return entries_[idx].first == entries_[idx].second; }

  bool same_as(const SymPattern& o) const { return n_ == o.n_ && entries_ == o.entries_; }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> entries_;
};

using PatternPtr = std::shared_ptr<const SymPattern>;

// Vector of values over a pattern's entries. Off-diagonal values are stored
// unscaled; `inner` weights them by 2 so the dot product equals the trace
// inner product of the corresponding symmetric matrices. (Storing them
// pre-scaled by sqrt(2) would break the bit-exact extract/scatter round
// trip: fl(fl(x/sqrt2)*sqrt2) != x for some doubles.)
struct PatternVec {
  PatternPtr pattern;
  Vector values;
};

PatternVec zero_vec(PatternPtr pattern);

// Entry map of one clique's principal block: block half-vector position
// (local (u, v), u <= v, lexicographic) -> global pattern index.
struct SelectorMap {
  Clique clique;
  int block_dim = 0;
  std::vector<int> rows;
};

// Union of the off-diagonal supports of a cost and a set of constraint
// matrices, as a graph. Throws on out-of-range indices.
Graph aggregate_pattern(int n, const std::vector<Triplet>& cost,
                        const std::vector<std::vector<Triplet>>& constraints);

// Throws std::invalid_argument naming the first missing pair if the clique
// touches an entry outside the pattern.
SelectorMap selector(const Clique& clique, const SymPattern& pattern);

// Dense symmetric principal block of the matrix represented by x.
// Entries are copied verbatim (mirrored across the diagonal).
Matrix extract_block(const PatternVec& x, const SelectorMap& sel);

// accum += the block's entries at the selected positions (upper triangle
// verbatim). Overlapping cliques accumulate.
void scatter_add(const Matrix& block, const SelectorMap& sel, PatternVec& accum);

// Trace inner product <A, B> of the symmetric matrices represented by a, b.
double inner(const PatternVec& a, const PatternVec& b);

// Copies x into a (usually larger) pattern; every entry of x's pattern must
// exist in target. Remaining entries are zero.
PatternVec embed(const PatternVec& x, PatternPtr target);

// Dense n x n symmetric matrix represented by x (entries off pattern are 0).
Matrix to_dense(const PatternVec& x);

// Builds a vector on the pattern from triplets (entries must be in pattern;
// duplicate triplets accumulate).
PatternVec vec_from_triplets(PatternPtr pattern, const std::vector<Triplet>& ts);

}  // namespace chordalrank
