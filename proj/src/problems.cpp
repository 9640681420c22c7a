#include "chordalrank/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chordalrank/completion.hpp"

namespace chordalrank {

MaxcutProblem gen_maxcut(int n, double edge_density, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_maxcut: need at least two vertices");
  if (!(edge_density > 0.0 && edge_density <= 1.0))
    throw std::invalid_argument("gen_maxcut: edge density must lie in (0, 1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(edge_density)) edges.push_back({i, j});
  Graph g(n, edges);

  std::vector<Triplet> cost;
  for (int i = 0; i < n; ++i)
    cost.push_back({i, i, -0.25 * static_cast<double>(g.neighbors(i).size())});
  for (auto [i, j] : g.edges()) cost.push_back({i, j, 0.25});

  MaxcutProblem mc;
  mc.graph = g;
  mc.sdp.n = n;
  mc.sdp.pattern = g;
  mc.sdp.cost = vec_from_triplets(SymPattern::make(g), cost);
  mc.sdp.target_rank = 1;
  for (int i = 0; i < n; ++i)
    mc.sdp.constraints.push_back(
        {vec_from_triplets(mc.sdp.cost.pattern, {{i, i, 1.0}}), 1.0, Sense::Eq});
  return mc;
}

double cut_value(const Graph& g, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != g.num_vertices())
    throw std::invalid_argument("cut_value: assignment size mismatch");
  double v = 0.0;
  for (auto [i, j] : g.edges())
    if (assignment[i] != assignment[j]) v += 1.0;
  return v;
}

CutResult round_maxcut(const Graph& g, const PatternVec& x, std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("round_maxcut: need at least one trial");
  const int n = g.num_vertices();

  // Factor the minimum-rank completion. Solver iterates carry projection
  // noise, so the PSD check is looser than the completion default.
  std::vector<std::pair<int, int>> off_diag;
  for (auto [i, j] : x.pattern->entries())
    if (i != j) off_diag.push_back({i, j});
  Graph pat(x.pattern->n(), off_diag);
  EliminationOrder order;
  if (!is_chordal(pat, &order))
    throw std::invalid_argument(
        "round_maxcut: values must cover a chordal pattern (solve on the extended pattern first)");
  CliqueTree tree = clique_tree(maximal_cliques(pat, order));
  Matrix completed = min_rank_complete(x, tree, 1e-6, 1e-3);
  EigResult e = jacobi_eig(completed);
  int r = 0;
  while (r < e.values.size() && e.values(r) > 1e-9 * std::max(e.values(0), 1.0)) ++r;
  r = std::max(r, 1);
  Matrix f(n, r);
  for (int k = 0; k < r; ++k) f.col(k) = e.vectors.col(k) * std::sqrt(std::max(e.values(k), 0.0));

  Rng rng(seed);
  CutResult best;
  best.assignment.assign(n, 1);
  best.value = -1.0;
  std::vector<int> s(n);
  for (int t = 0; t < trials; ++t) {
    Vector h(r);
    for (int k = 0; k < r; ++k) h(k) = rng.normal();
    for (int i = 0; i < n; ++i) s[i] = (f.row(i).dot(h) < 0.0) ? -1 : 1;
    double v = cut_value(g, s);
    if (v > best.value) {
      best.assignment = s;
      best.value = v;
    }
  }
  return best;
}

SscInstance gen_ssc(int Ns, int Np, int D, double eps, std::uint64_t seed) {
  if (Ns < 1) throw std::invalid_argument("gen_ssc: need at least one subspace");
  if (Np < Ns) throw std::invalid_argument("gen_ssc: need at least one point per subspace");
  if (D < 2) throw std::invalid_argument("gen_ssc: ambient dimension must be at least 2");
  if (eps < 0.0) throw std::invalid_argument("gen_ssc: noise bound must be nonnegative");

  SscInstance inst;
  inst.D = D;
  inst.Ns = Ns;
  inst.Np = Np;
  inst.eps = eps;
  inst.seed = seed;
  Rng rng(seed);

  const double min_angle = 15.0 * M_PI / 180.0;
  constexpr int kMaxAttempts = 100000;
  for (int i = 0; i < Ns; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxAttempts)
        throw std::runtime_error("gen_ssc: could not place normals with the minimum pairwise angle");
      Vector r(D);
      for (int d = 0; d < D; ++d) r(d) = rng.normal();
      double nrm = r.norm();
      if (nrm < 1e-12) continue;
      r /= nrm;
      bool ok = true;
      for (const Vector& prev : inst.normals) {
        double c = std::min(1.0, std::abs(prev.dot(r)));
        if (std::acos(c) < min_angle) {
          ok = false;
          break;
        }
      }
      if (ok) {
        inst.normals.push_back(r);
        break;
      }
    }
  }

  // Orthonormal in-plane basis per subspace: coordinate axes reduced against
  // the normal, kept deterministic by always dropping the last dependent one.
  std::vector<Matrix> bases(Ns);
  for (int i = 0; i < Ns; ++i) {
    Matrix b(D, D - 1);
    int cols = 0;
    for (int d = 0; d < D && cols < D - 1; ++d) {
      Vector v = Vector::Zero(D);
      v(d) = 1.0;
      v -= inst.normals[i] * inst.normals[i].dot(v);
      for (int k = 0; k < cols; ++k) v -= b.col(k) * b.col(k).dot(v);
      double nrm = v.norm();
      if (nrm > 1e-8) b.col(cols++) = v / nrm;
    }
    bases[i] = b.leftCols(cols);
  }

  // A draw that also fits a wrong subspace within the membership tolerance
  // would make the instance ill-posed: the lifted problem sees labels only
  // through those fits, so such a point could be assigned either way by any
  // exact solver. Resample with a safety margin, like the pairwise angle
  // floor above; if the geometry leaves no margin (close subspaces, large
  // eps), keep the widest-margin draw seen.
  const double margin = 1.25 * eps;
  for (int j = 0; j < Np; ++j) {
    int label = j % Ns;
    inst.labels.push_back(label);
    Vector best;
    double best_gap = -1.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      Vector coords(bases[label].cols());
      for (int k = 0; k < coords.size(); ++k) coords(k) = rng.uniform(-1.0, 1.0);
      Vector x = bases[label] * coords;
      if (eps > 0.0) {
        Vector eta(D);
        for (int d = 0; d < D; ++d) eta(d) = rng.uniform(-eps, eps);
        x += eta;
        if (std::abs(inst.normals[label].dot(x)) > eps) continue;
      }
      double gap = std::numeric_limits<double>::infinity();
      for (int i = 0; i < Ns; ++i)
        if (i != label) gap = std::min(gap, std::abs(inst.normals[i].dot(x)));
      if (gap > best_gap) {
        best_gap = gap;
        best = x;
      }
      if (gap > margin) break;
    }
    if (best.size() == 0)
      throw std::runtime_error("gen_ssc: could not sample noise within the membership bound");
    inst.points.push_back(best);
  }
  return inst;
}

SdpProblem build_ssc_sdp(const SscInstance& inst) {
  SscLift lift{inst.Ns, inst.Np, inst.D};
  const int m = lift.dim();

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < inst.Ns; ++i) {
    for (int j = 0; j < inst.Np; ++j) {
      std::vector<int> clique;
      clique.push_back(lift.constant_index());
      for (int d = 0; d < inst.D; ++d) clique.push_back(lift.normal_index(i, d));
      clique.push_back(lift.label_index(i, j));
      for (size_t u = 0; u < clique.size(); ++u)
        for (size_t v = u + 1; v < clique.size(); ++v)
          edges.push_back({std::min(clique[u], clique[v]), std::max(clique[u], clique[v])});
    }
  }

  SdpProblem p;
  p.n = m;
  p.pattern = Graph(m, edges);
  p.cost = zero_vec(SymPattern::make(p.pattern));
  p.target_rank = 1;

  auto pat = p.cost.pattern;
  auto add = [&](const std::vector<Triplet>& ts, double b, Sense sense) {
    p.constraints.push_back({vec_from_triplets(pat, ts), b, sense});
  };

  // Off-diagonal triplet values are halved: a symmetric entry pair (u,v),
  // (v,u) contributes twice to <A, X>.
  add({{0, 0, 1.0}}, 1.0, Sense::Eq);
  for (int i = 0; i < inst.Ns; ++i) {
    std::vector<Triplet> ts;
    for (int d = 0; d < inst.D; ++d) ts.push_back({lift.normal_index(i, d), lift.normal_index(i, d), 1.0});
    add(ts, 1.0, Sense::Eq);  // unit normal
  }
  for (int j = 0; j < inst.Np; ++j) {
    for (int i = 0; i < inst.Ns; ++i) {
      int s = lift.label_index(i, j);
      add({{s, s, 1.0}, {0, s, -0.5}}, 0.0, Sense::Eq);  // binary label
    }
  }
  for (int j = 0; j < inst.Np; ++j) {
    std::vector<Triplet> ts;
    for (int i = 0; i < inst.Ns; ++i) ts.push_back({0, lift.label_index(i, j), 0.5});
    add(ts, 1.0, Sense::Eq);  // each point picks one subspace
  }
  for (int j = 0; j < inst.Np; ++j) {
    for (int i = 0; i < inst.Ns; ++i) {
      int s = lift.label_index(i, j);
      for (double sign : {1.0, -1.0}) {
        std::vector<Triplet> ts;
        for (int d = 0; d < inst.D; ++d)
          ts.push_back({lift.normal_index(i, d), s, sign * 0.5 * inst.points[j](d)});
        ts.push_back({0, s, -0.5 * inst.eps});
        add(ts, 0.0, Sense::Le);  // membership: |r_i^T x_j| <= eps when selected
      }
    }
  }

  // One rank target per point/subspace pair: the [r_i, s_ij] sub-block.
  // Rank-1 pressure here forces the X[s, r] coupling, which activates the
  // membership rows for every point carrying label mass; penalizing only
  // normal blocks would leave label entries free and let all the mass
  // collapse onto one subspace.
  for (int i = 0; i < inst.Ns; ++i) {
    for (int j = 0; j < inst.Np; ++j) {
      Clique block;
      for (int d = 0; d < inst.D; ++d) block.push_back(lift.normal_index(i, d));
      block.push_back(lift.label_index(i, j));
      p.penalty_blocks.push_back(block);
    }
  }
  return p;
}

std::vector<Matrix> ssc_seed_blocks(const SscInstance& inst, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> cand;
  for (int i = 0; i < inst.Ns; ++i) {
    // normal = least-fit direction of D-1 sampled points (exact complement
    // when they span a hyperplane)
    Matrix scatter = Matrix::Zero(inst.D, inst.D);
    for (int k = 0; k < inst.D - 1; ++k) {
      const Vector& p = inst.points[rng.uniform_index(inst.points.size())];
      scatter += p * p.transpose();
    }
    EigResult e = jacobi_eig(scatter);
    cand.push_back(e.vectors.col(inst.D - 1));
  }

  // Sharpen the candidates: assign points to the best-fitting hyperplane,
  // refit each normal to its class scatter, repeat.
  std::vector<int> assign(inst.Np, 0);
  auto assign_points = [&] {
    for (int j = 0; j < inst.Np; ++j) {
      int best = 0;
      for (int i = 1; i < inst.Ns; ++i)
        if (std::abs(cand[i].dot(inst.points[j])) < std::abs(cand[best].dot(inst.points[j])))
          best = i;
      assign[j] = best;
    }
  };
  assign_points();
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int i = 0; i < inst.Ns; ++i) {
      Matrix scatter = Matrix::Zero(inst.D, inst.D);
      int count = 0;
      for (int j = 0; j < inst.Np; ++j) {
        if (assign[j] != i) continue;
        scatter += inst.points[j] * inst.points[j].transpose();
        ++count;
      }
      if (count == 0) continue;
      EigResult e = jacobi_eig(scatter);
      cand[i] = e.vectors.col(inst.D - 1);
    }
    assign_points();
  }

  std::vector<Matrix> blocks;
  for (int i = 0; i < inst.Ns; ++i) {
    for (int j = 0; j < inst.Np; ++j) {
      Vector v(inst.D + 1);
      v.head(inst.D) = cand[i];
      v(inst.D) = (assign[j] == i) ? 1.0 : 0.0;
      blocks.push_back(Matrix(v * v.transpose()));
    }
  }
  return blocks;
}

SscEstimate extract_ssc(const PatternVec& x, const SscInstance& inst) {
  SscLift lift{inst.Ns, inst.Np, inst.D};
  SscEstimate est;
  for (int i = 0; i < inst.Ns; ++i) {
    Clique block;
    block.push_back(lift.constant_index());
    for (int d = 0; d < inst.D; ++d) block.push_back(lift.normal_index(i, d));
    Matrix b = extract_block(x, selector(block, *x.pattern));
    EigResult e = jacobi_eig(b);
    Vector w = e.vectors.col(0);
    if (std::abs(w(0)) <= 1e-6 * std::max(1.0, w.norm())) {
      est.normals.push_back(Vector::Zero(inst.D));
      est.degenerate.push_back(true);
    } else {
      Vector r = w.tail(inst.D) / w(0);
      double nrm = r.norm();
      est.normals.push_back(nrm > 0.0 ? Vector(r / nrm) : Vector::Zero(inst.D));
      est.degenerate.push_back(nrm == 0.0);
    }
  }
  for (int j = 0; j < inst.Np; ++j) {
    int best = 0;
    double best_val = x.values(x.pattern->index_of(0, lift.label_index(0, j)));
    for (int i = 1; i < inst.Ns; ++i) {
      double v = x.values(x.pattern->index_of(0, lift.label_index(i, j)));
      if (v > best_val) {
        best = i;
        best_val = v;
      }
    }
    est.labels.push_back(best);
  }
  return est;
}

SscSolveResult solve_ssc(const SscInstance& inst, const ReweightOptions& opts, int max_attempts,
                         std::uint64_t seed) {
  if (max_attempts < 1) throw std::invalid_argument("solve_ssc: need at least one attempt");
  AdmmSolver solver(decompose(build_ssc_sdp(inst)));
  SscSolveResult out;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    ++out.attempts;
    solver.reset();
    std::vector<Matrix> seeds = ssc_seed_blocks(inst, seed * 100 + attempt);
    out.reweight = run_reweighted(solver, opts, &seeds);
    if (out.reweight.rounds.back().min_rank_ratio > opts.ratio_target) break;
  }
  out.estimate = extract_ssc(out.reweight.solution.x, inst);
  return out;
}

LabelMatching best_label_matching(const std::vector<int>& estimated,
                                  const std::vector<int>& truth) {
  if (estimated.size() != truth.size())
    throw std::invalid_argument("best_label_matching: label list length mismatch");
  int k = 0;
  for (int l : estimated) k = std::max(k, l + 1);
  for (int l : truth) k = std::max(k, l + 1);
  k = std::max(k, 1);
  if (k > 8) throw std::invalid_argument("best_label_matching: exhaustive matching capped at 8 classes");

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  LabelMatching best;
  best.permutation = perm;
  do {
    int agree = 0;
    for (size_t j = 0; j < truth.size(); ++j)
      if (perm[estimated[j]] == truth[j]) ++agree;
    double acc = truth.empty() ? 1.0 : static_cast<double>(agree) / truth.size();
    if (acc > best.accuracy) {
      best.accuracy = acc;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double clustering_accuracy(const std::vector<int>& estimated, const std::vector<int>& truth) {
  return best_label_matching(estimated, truth).accuracy;
}

double line_angle_degrees(const Vector& a, const Vector& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 90.0;
  double c = std::min(1.0, std::abs(a.dot(b)) / (na * nb));
  return std::acos(c) * 180.0 / M_PI;
}

}  // namespace chordalrank
