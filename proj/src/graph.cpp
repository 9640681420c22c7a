#include "chordalrank/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace chordalrank {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  adj_.assign(n_, {});
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool Graph::has_edge(int u, int v) const {
  if (u == v) return false;
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

EliminationOrder mcs_order(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> weight(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<int> visit;
  visit.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (visited[v]) continue;
      if (best < 0 || weight[v] > weight[best]) best = v;
    }
    visited[best] = true;
    visit.push_back(best);
    for (int u : g.neighbors(best))
      if (!visited[u]) ++weight[u];
  }
  EliminationOrder o;
  o.order.assign(visit.rbegin(), visit.rend());
  o.position.assign(n, 0);
  for (int k = 0; k < n; ++k) o.position[o.order[k]] = k;
  return o;
}

bool is_peo(const Graph& g, const EliminationOrder& o) {
  const int n = g.num_vertices();
  if (static_cast<int>(o.order.size()) != n) return false;
  // classical test: the earliest later-neighbor u of v must dominate the
  // rest of v's later neighborhood
  for (int k = 0; k < n; ++k) {
    const int v = o.order[k];
    int u = -1;
    for (int w : g.neighbors(v)) {
      if (o.position[w] <= k) continue;
      if (u < 0 || o.position[w] < o.position[u]) u = w;
    }
    if (u < 0) continue;
    for (int w : g.neighbors(v)) {
      if (o.position[w] <= k || w == u) continue;
      if (!g.has_edge(u, w)) return false;
    }
  }
  return true;
}

bool is_chordal(const Graph& g, EliminationOrder* witness) {
  EliminationOrder o = mcs_order(g);
  if (!is_peo(g, o)) return false;
  if (witness) *witness = std::move(o);
  return true;
}

Graph chordal_extension(const Graph& g) {
  if (is_chordal(g)) return g;  // min-degree alone does not guarantee zero fill

  const int n = g.num_vertices();
  std::vector<std::set<int>> adj(n);
  for (const auto& [u, v] : g.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::vector<bool> gone(n, false);
  std::vector<std::pair<int, int>> edges = g.edges();
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      if (best < 0 || adj[v].size() < adj[best].size()) best = v;
    }
    // make the remaining neighborhood a clique, record fill
    std::vector<int> nb(adj[best].begin(), adj[best].end());
    for (size_t a = 0; a < nb.size(); ++a) {
      for (size_t b = a + 1; b < nb.size(); ++b) {
        if (!adj[nb[a]].count(nb[b])) {
          adj[nb[a]].insert(nb[b]);
          adj[nb[b]].insert(nb[a]);
          edges.emplace_back(nb[a], nb[b]);
        }
      }
    }
    gone[best] = true;
    for (int u : nb) adj[u].erase(best);
    adj[best].clear();
  }
  return Graph(n, std::move(edges));
}

std::vector<Clique> maximal_cliques(const Graph& g, const EliminationOrder& o) {
  if (!is_peo(g, o))
    throw std::invalid_argument("maximal_cliques: order is not a perfect elimination order");
  const int n = g.num_vertices();
  std::vector<Clique> cand;
  cand.reserve(n);
  for (int k = 0; k < n; ++k) {
    const int v = o.order[k];
    Clique c{v};
    for (int w : g.neighbors(v))
      if (o.position[w] > k) c.push_back(w);
    std::sort(c.begin(), c.end());
    cand.push_back(std::move(c));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // drop candidates strictly contained in another
  std::vector<Clique> out;
  for (size_t i = 0; i < cand.size(); ++i) {
    bool contained = false;
    for (size_t j = 0; j < cand.size() && !contained; ++j) {
      if (i == j || cand[j].size() <= cand[i].size()) continue;
      contained = std::includes(cand[j].begin(), cand[j].end(), cand[i].begin(), cand[i].end());
    }
    if (!contained) out.push_back(cand[i]);
  }
  return out;
}

namespace {

int overlap_size(const Clique& a, const Clique& b) {
  int count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (a[i] > b[j])
      ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

Clique intersect(const Clique& a, const Clique& b) {
  Clique out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    up[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

CliqueTree clique_tree(const std::vector<Clique>& cliques) {
  const int p = static_cast<int>(cliques.size());
  for (const auto& c : cliques) {
    if (c.empty()) throw std::invalid_argument("clique_tree: empty clique");
    if (!std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end())
      throw std::invalid_argument("clique_tree: clique vertices must be sorted and distinct");
  }

  // candidate edges of the intersection graph, heaviest first
  struct Cand {
    int w, i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      int w = overlap_size(cliques[i], cliques[j]);
      if (w > 0) cands.push_back({w, i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  UnionFind uf(p);
  std::vector<std::vector<int>> tree_adj(p);
  for (const auto& c : cands) {
    if (uf.unite(c.i, c.j)) {
      tree_adj[c.i].push_back(c.j);
      tree_adj[c.j].push_back(c.i);
    }
  }
  for (auto& a : tree_adj) std::sort(a.begin(), a.end());

  CliqueTree t;
  t.cliques = cliques;
  t.parent.assign(p, -1);
  t.children.assign(p, {});
  t.separators.assign(p, {});

  // one root per component: largest clique, ties by lowest first vertex,
  // then lexicographic, then index
  std::vector<int> comp_root;
  {
    std::vector<int> comp_of(p, -1);
    for (int i = 0; i < p; ++i) comp_of[i] = uf.find(i);
    std::vector<int> best_by_comp(p, -1);
    for (int i = 0; i < p; ++i) {
      int c = comp_of[i];
      int& b = best_by_comp[c];
      if (b < 0) {
        b = i;
        continue;
      }
      const Clique& ci = cliques[i];
      const Clique& cb = cliques[b];
      bool better = false;
      if (ci.size() != cb.size())
        better = ci.size() > cb.size();
      else if (ci.front() != cb.front())
        better = ci.front() < cb.front();
      else if (ci != cb)
        better = ci < cb;
      if (better) b = i;
    }
    std::vector<bool> seen(p, false);
    for (int i = 0; i < p; ++i) {
      int c = comp_of[i];
      if (!seen[c]) {
        seen[c] = true;
        comp_root.push_back(best_by_comp[c]);
      }
    }
  }
  t.roots = comp_root;

  // BFS orientation, children visited in ascending index order
  std::vector<bool> placed(p, false);
  for (int root : t.roots) {
    std::vector<int> queue{root};
    placed[root] = true;
    for (size_t head = 0; head < queue.size(); ++head) {
      int k = queue[head];
      t.bfs_order.push_back(k);
      for (int nb : tree_adj[k]) {
        if (placed[nb]) continue;
        placed[nb] = true;
        t.parent[nb] = k;
        t.children[k].push_back(nb);
        t.separators[nb] = intersect(cliques[nb], cliques[k]);
        queue.push_back(nb);
      }
    }
  }

  // running intersection check: each vertex's cliques must form one subtree
  int max_v = 0;
  for (const auto& c : cliques) max_v = std::max(max_v, c.back());
  std::vector<int> clique_count(max_v + 1, 0), edge_count(max_v + 1, 0);
  for (const auto& c : cliques)
    for (int v : c) ++clique_count[v];
  for (int k = 0; k < p; ++k) {
    if (t.parent[k] < 0) continue;
    for (int v : t.separators[k]) ++edge_count[v];
  }
  for (int v = 0; v <= max_v; ++v) {
    if (clique_count[v] == 0) continue;
    if (clique_count[v] - edge_count[v] != 1)
      throw std::invalid_argument(
          "clique_tree: running intersection property fails at vertex " + std::to_string(v));
  }
  return t;
}

}  // namespace chordalrank
