#pragma once

// Shared helpers for the test binaries.

#include <utility>
#include <vector>

#include "chordalrank/graph.hpp"
#include "chordalrank/linalg.hpp"
#include "chordalrank/pattern.hpp"
#include "chordalrank/rng.hpp"

namespace testutil {

using namespace chordalrank;

// Random connected graph: random spanning tree plus extra edges.
inline Graph random_connected_graph(Rng& rng, int n, double extra_density) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(static_cast<int>(rng.uniform_index(v)), v);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(extra_density)) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

// Arbitrary (possibly disconnected) random graph.
inline Graph random_graph(Rng& rng, int n, double density) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(density)) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

// Projection of the rank-r matrix F F^T onto the pattern.
inline PatternVec project_factor(PatternPtr pattern, const Matrix& f) {
  PatternVec x = zero_vec(pattern);
  const auto& entries = pattern->entries();
  for (size_t l = 0; l < entries.size(); ++l)
    x.values(l) = f.row(entries[l].first).dot(f.row(entries[l].second));
  return x;
}

inline Matrix random_gaussian(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace testutil
