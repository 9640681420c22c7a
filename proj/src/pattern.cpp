#include "chordalrank/pattern.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace chordalrank {

std::shared_ptr<const SymPattern> SymPattern::make(const Graph& g) {
  auto p = std::make_shared<SymPattern>();
  p->n_ = g.num_vertices();
  p->entries_.reserve(g.num_vertices() + g.num_edges());
  for (int i = 0; i < g.num_vertices(); ++i) {
    p->entries_.emplace_back(i, i);
    for (int j : g.neighbors(i))
      if (j > i) p->entries_.emplace_back(i, j);
  }
  // per-vertex construction above already yields lexicographic order
  return p;
}

int SymPattern::index_of(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(i, j));
  if (it == entries_.end() || *it != std::make_pair(i, j)) return -1;
  return static_cast<int>(it - entries_.begin());
}

PatternVec zero_vec(PatternPtr pattern) {
  PatternVec v;
  v.values = Vector::Zero(pattern->size());
  v.pattern = std::move(pattern);
  return v;
}

Graph aggregate_pattern(int n, const std::vector<Triplet>& cost,
                        const std::vector<std::vector<Triplet>>& constraints) {
  std::vector<std::pair<int, int>> edges;
  auto take = [&](const Triplet& t) {
    if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n)
      throw std::invalid_argument("aggregate_pattern: entry (" + std::to_string(t.i) + "," +
                                  std::to_string(t.j) + ") out of range");
    if (t.i != t.j) edges.emplace_back(std::min(t.i, t.j), std::max(t.i, t.j));
  };
  for (const auto& t : cost) take(t);
  for (const auto& a : constraints)
    for (const auto& t : a) take(t);
  return Graph(n, std::move(edges));
}

SelectorMap selector(const Clique& clique, const SymPattern& pattern) {
  SelectorMap s;
  s.clique = clique;
  s.block_dim = static_cast<int>(clique.size());
  s.rows.reserve(clique.size() * (clique.size() + 1) / 2);
  for (size_t u = 0; u < clique.size(); ++u) {
    for (size_t v = u; v < clique.size(); ++v) {
      int idx = pattern.index_of(clique[u], clique[v]);
      if (idx < 0)
        throw std::invalid_argument("selector: pattern is missing entry (" +
                                    std::to_string(clique[u]) + "," +
                                    std::to_string(clique[v]) + ")");
      s.rows.push_back(idx);
    }
  }
  return s;
}

Matrix extract_block(const PatternVec& x, const SelectorMap& sel) {
  const int d = sel.block_dim;
  Matrix b(d, d);
  int r = 0;
  for (int u = 0; u < d; ++u) {
    for (int v = u; v < d; ++v) {
      double val = x.values(sel.rows[r++]);
      b(u, v) = val;
      b(v, u) = val;
    }
  }
  return b;
}

void scatter_add(const Matrix& block, const SelectorMap& sel, PatternVec& accum) {
  const int d = sel.block_dim;
  if (block.rows() != d || block.cols() != d)
    throw std::invalid_argument("scatter_add: block dimension mismatch");
  int r = 0;
  for (int u = 0; u < d; ++u)
    for (int v = u; v < d; ++v) accum.values(sel.rows[r++]) += block(u, v);
}

namespace {
void require_same_pattern(const PatternVec& a, const PatternVec& b, const char* who) {
  if (a.pattern == b.pattern) return;
  if (a.pattern && b.pattern && a.pattern->same_as(*b.pattern)) return;
  throw std::invalid_argument(std::string(who) + ": pattern mismatch");
}
}  // namespace

double inner(const PatternVec& a, const PatternVec& b) {
  require_same_pattern(a, b, "inner");
  const auto& entries = a.pattern->entries();
  double diag = 0.0, off = 0.0;
  for (size_t l = 0; l < entries.size(); ++l) {
    double p = a.values(l) * b.values(l);
    if (entries[l].first == entries[l].second)
      diag += p;
    else
      off += p;
  }
  return diag + 2.0 * off;
}

PatternVec embed(const PatternVec& x, PatternPtr target) {
  PatternVec out = zero_vec(target);
  const auto& entries = x.pattern->entries();
  for (size_t l = 0; l < entries.size(); ++l) {
    int idx = target->index_of(entries[l].first, entries[l].second);
    if (idx < 0)
      throw std::invalid_argument("embed: target pattern is missing entry (" +
                                  std::to_string(entries[l].first) + "," +
                                  std::to_string(entries[l].second) + ")");
    out.values(idx) = x.values(l);
  }
  return out;
}

Matrix to_dense(const PatternVec& x) {
  const int n = x.pattern->n();
  Matrix m = Matrix::Zero(n, n);
  const auto& entries = x.pattern->entries();
  for (size_t l = 0; l < entries.size(); ++l) {
    auto [i, j] = entries[l];
    m(i, j) = x.values(l);
    m(j, i) = x.values(l);
  }
  return m;
}

PatternVec vec_from_triplets(PatternPtr pattern, const std::vector<Triplet>& ts) {
  PatternVec out = zero_vec(std::move(pattern));
  for (const auto& t : ts) {
    int idx = out.pattern->index_of(t.i, t.j);
    if (idx < 0)
      throw std::invalid_argument("vec_from_triplets: entry (" + std::to_string(t.i) + "," +
                                  std::to_string(t.j) + ") not in pattern");
    out.values(idx) += t.v;
  }
  return out;
}

}  // namespace chordalrank
