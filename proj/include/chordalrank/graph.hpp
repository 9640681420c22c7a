#pragma once

#include <utility>
#include <vector>

namespace chordalrank {

// Undirected simple graph on vertices 0..n-1. Edges are stored (i, j) with
// i < j, sorted and deduplicated; adjacency lists are sorted.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const;

  bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

// Elimination order: order[k] is the k-th vertex eliminated,
// position[v] its index in that sequence.
struct EliminationOrder {
  std::vector<int> order;
  std::vector<int> position;
};

// Sorted ascending vertex list.
using Clique = std::vector<int>;

// Rooted clique tree (forest for disconnected patterns). separators[k] is
// cliques[k] intersected with its parent; empty for roots. bfs_order lists
// every clique, each root before its descendants.
struct CliqueTree {
  std::vector<Clique> cliques;
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<Clique> separators;
  std::vector<int> bfs_order;
  std::vector<int> roots;
};

// Maximum cardinality search; ties broken by lowest vertex index.
// The returned order (reverse of the visit sequence) is a perfect
// elimination order iff the graph is chordal.
EliminationOrder mcs_order(const Graph& g);

// True iff o is a perfect elimination order of g.
bool is_peo(const Graph& g, const EliminationOrder& o);

// Chordality test. When chordal and witness != nullptr, *witness receives a
// perfect elimination order.
bool is_chordal(const Graph& g, EliminationOrder* witness = nullptr);

// Chordal supergraph of g. Chordal inputs come back unchanged; otherwise
// greedy minimum-degree elimination (ties by lowest index) records fill.
Graph chordal_extension(const Graph& g);

// Maximal cliques of a chordal graph from a perfect elimination order.
// Throws std::invalid_argument if o is not a PEO of g.
std::vector<Clique> maximal_cliques(const Graph& g, const EliminationOrder& o);

// Clique tree via maximum-weight spanning tree of the clique intersection
// graph (weight = overlap size). Root per component: largest clique, ties by
// lowest first vertex. Throws std::invalid_argument if the cliques cannot
// satisfy the running intersection property (not from a chordal graph).
CliqueTree clique_tree(const std::vector<Clique>& cliques);

}  // namespace chordalrank
