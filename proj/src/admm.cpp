#include "chordalrank/admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chordalrank/completion.hpp"
#include "chordalrank/rng.hpp"

namespace chordalrank {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Half-vectorization of a clique block in solver coordinates: entries in
// local (u, v) u <= v lexicographic order (matching SelectorMap::rows),
// off-diagonal entries scaled by sqrt(2). Makes block selection an
// orthonormal map, so the consensus coupling matrix stays diagonal.
Vector svec(const Matrix& b) {
  const int d = static_cast<int>(b.rows());
  Vector s(d * (d + 1) / 2);
  int p = 0;
  for (int u = 0; u < d; ++u) {
    s(p++) = b(u, u);
    for (int v = u + 1; v < d; ++v) s(p++) = kSqrt2 * b(u, v);
  }
  return s;
}

Matrix smat(const Vector& s, int d) {
  Matrix b(d, d);
  int p = 0;
  for (int u = 0; u < d; ++u) {
    b(u, u) = s(p++);
    for (int v = u + 1; v < d; ++v) {
      b(u, v) = s(p++) / kSqrt2;
      b(v, u) = b(u, v);
    }
  }
  return b;
}

}  // namespace

DecomposedProblem decompose(const SdpProblem& p) {
  if (p.n < 1) throw std::invalid_argument("decompose: n must be positive");
  if (p.pattern.num_vertices() != p.n)
    throw std::invalid_argument("decompose: pattern size does not match n");
  if (p.target_rank < 1) throw std::invalid_argument("decompose: target_rank must be >= 1");
  if (!p.cost.pattern || p.cost.pattern->n() != p.n)
    throw std::invalid_argument("decompose: cost pattern does not match n");

  DecomposedProblem d;
  d.problem = p;
  d.extended = chordal_extension(p.pattern);
  EliminationOrder order;
  if (!is_chordal(d.extended, &order))
    throw std::logic_error("decompose: extension is not chordal");
  d.tree = clique_tree(maximal_cliques(d.extended, order));
  d.ext_pattern = SymPattern::make(d.extended);

  d.selectors.reserve(d.tree.cliques.size());
  d.coverage = Vector::Zero(d.ext_pattern->size());
  for (const auto& c : d.tree.cliques) {
    d.selectors.push_back(selector(c, *d.ext_pattern));
    for (int r : d.selectors.back().rows) d.coverage(r) += 1.0;
  }
  for (int l = 0; l < d.ext_pattern->size(); ++l)
    if (d.coverage(l) < 1.0)
      throw std::logic_error("decompose: pattern entry not covered by any clique");

  std::vector<Clique> blocks = p.penalty_blocks;
  if (blocks.empty()) blocks = d.tree.cliques;
  d.penalty_selectors.reserve(blocks.size());
  for (auto c : blocks) {
    std::sort(c.begin(), c.end());
    d.penalty_selectors.push_back(selector(c, *d.ext_pattern));
  }

  d.cost = embed(p.cost, d.ext_pattern);
  d.rhs = Vector(p.constraints.size());
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    d.constraint_mats.push_back(embed(p.constraints[i].a, d.ext_pattern));
    d.rhs(static_cast<int>(i)) = p.constraints[i].b;
    d.senses.push_back(p.constraints[i].sense);
  }
  return d;
}

AdmmSolver::AdmmSolver(DecomposedProblem dec, AdmmOptions opts)
    : dec_(std::move(dec)), opts_(opts) {
  const int L = dec_.ext_pattern->size();
  theta_ = Vector(L);
  for (int l = 0; l < L; ++l) theta_(l) = dec_.ext_pattern->is_diagonal(l) ? 1.0 : kSqrt2;
  cost_solver_ = theta_.cwiseProduct(dec_.cost.values);

  const int m = static_cast<int>(dec_.constraint_mats.size());
  rows_.resize(m);
  ineq_slot_.assign(m, -1);
  for (int r = 0; r < m; ++r) {
    const Vector& a = dec_.constraint_mats[r].values;
    for (int l = 0; l < L; ++l)
      if (a(l) != 0.0) rows_[r].push_back({l, theta_(l) * a(l)});
    if (dec_.senses[r] == Sense::Le) ineq_slot_[r] = num_ineq_++;
  }
  if (m > 0) rhs_inf_ = dec_.rhs.cwiseAbs().maxCoeff();
}

double AdmmSolver::feasibility_inf() const {
  double worst = 0.0;
  for (size_t r = 0; r < rows_.size(); ++r) {
    double v = -dec_.rhs(static_cast<int>(r));
    for (const auto& [l, a] : rows_[r]) v += a * state_.x(l);
    worst = std::max(worst, ineq_slot_[r] >= 0 ? std::max(0.0, v) : std::abs(v));
  }
  return worst;
}

void AdmmSolver::ensure_factorized() {
  if (factorized_) return;
  const int m = static_cast<int>(rows_.size());
  Matrix s = Matrix::Zero(m, m);
  // per-entry incidence: S = A D^-1 A^T assembled entry by entry
  const int L = dec_.ext_pattern->size();
  std::vector<std::vector<std::pair<int, double>>> on_entry(L);
  for (int r = 0; r < m; ++r)
    for (const auto& [l, a] : rows_[r]) on_entry[l].push_back({r, a});
  for (int l = 0; l < L; ++l) {
    const double inv = 1.0 / dec_.coverage(l);
    for (size_t i = 0; i < on_entry[l].size(); ++i)
      for (size_t j = i; j < on_entry[l].size(); ++j) {
        const double v = on_entry[l][i].second * on_entry[l][j].second * inv;
        s(on_entry[l][i].first, on_entry[l][j].first) += v;
        if (i != j) s(on_entry[l][j].first, on_entry[l][i].first) += v;
      }
  }
  for (int r = 0; r < m; ++r)
    if (ineq_slot_[r] >= 0) s(r, r) += 1.0;  // slack column, unit diagonal in D

  schur_.compute(s);
  if (schur_.info() != Eigen::Success) {
    // rank-deficient: redundant or inconsistent constraints; regularize and flag
    kkt_regularized_ = true;
    schur_.compute(s + 1e-10 * Matrix::Identity(m, m));
    if (schur_.info() != Eigen::Success)
      throw std::runtime_error("kkt_factorize: Schur complement not factorizable");
  }
  ++factorization_count_;
  factorized_ = true;
}

void AdmmSolver::init_state() {
  const int L = dec_.ext_pattern->size();
  state_.x = Vector::Zero(L);
  state_.slack = Vector::Zero(num_ineq_);
  state_.blocks.clear();
  state_.multipliers.clear();
  for (const auto& sel : dec_.selectors) {
    state_.blocks.push_back(Matrix::Zero(sel.block_dim, sel.block_dim));
    state_.multipliers.push_back(Matrix::Zero(sel.block_dim, sel.block_dim));
  }
  state_.slack_dup = Vector::Zero(num_ineq_);
  state_.slack_mult = Vector::Zero(num_ineq_);
  state_.rho = opts_.rho;
  state_.iter = 0;
  state_.primal_res = std::numeric_limits<double>::infinity();
  state_.dual_res = std::numeric_limits<double>::infinity();
  state_.initialized = true;

  step_ranks_.assign(dec_.selectors.size(), 0);
  scatter_prev_ = Vector::Zero(L);
  slack_dup_prev_ = Vector::Zero(num_ineq_);
}

Vector AdmmSolver::to_solver(const PatternVec& v) const {
  if (!v.pattern || !(v.pattern == dec_.ext_pattern || v.pattern->same_as(*dec_.ext_pattern)))
    throw std::invalid_argument("AdmmSolver: vector is not on the decomposed pattern");
  return theta_.cwiseProduct(v.values);
}

Matrix AdmmSolver::clique_matrix(int k) const {
  const SelectorMap& sel = dec_.selectors[k];
  Vector s(sel.rows.size());
  for (size_t p = 0; p < sel.rows.size(); ++p) s(static_cast<int>(p)) = state_.x(sel.rows[p]);
  return smat(s, sel.block_dim);
}

void AdmmSolver::step1_affine(const PatternVec& cost_total) {
  step1_core(to_solver(cost_total));
}

void AdmmSolver::step1_core(const Vector& c) {
  ensure_factorized();
  if (!state_.initialized) init_state();
  const double rho = state_.rho;
  const int L = dec_.ext_pattern->size();
  const int m = static_cast<int>(rows_.size());

  Vector r1 = Vector::Zero(L);
  for (size_t k = 0; k < dec_.selectors.size(); ++k) {
    Vector v = svec(state_.blocks[k] + state_.multipliers[k] / rho);
    const auto& rows = dec_.selectors[k].rows;
    for (size_t p = 0; p < rows.size(); ++p) r1(rows[p]) += v(static_cast<int>(p));
  }
  r1 -= c / rho;
  Vector r1_slack = state_.slack_dup + state_.slack_mult / rho;

  Vector t(m);
  for (int r = 0; r < m; ++r) {
    double acc = 0.0;
    for (const auto& [l, a] : rows_[r]) acc += a * r1(l) / dec_.coverage(l);
    if (ineq_slot_[r] >= 0) acc += r1_slack(ineq_slot_[r]);
    t(r) = acc - dec_.rhs(r);
  }
  Vector omega = schur_.solve(t);

  for (int r = 0; r < m; ++r)
    for (const auto& [l, a] : rows_[r]) r1(l) -= a * omega(r);
  state_.x = r1.cwiseQuotient(dec_.coverage);
  for (int r = 0; r < m; ++r)
    if (ineq_slot_[r] >= 0) state_.slack(ineq_slot_[r]) = r1_slack(ineq_slot_[r]) - omega(r);
}

void AdmmSolver::step2_project() {
  const double rho = state_.rho;
  for (size_t k = 0; k < dec_.selectors.size(); ++k) {
    Matrix target = clique_matrix(static_cast<int>(k)) - state_.multipliers[k] / rho;
    EigResult e = jacobi_eig(target);
    const int d = static_cast<int>(target.rows());
    Matrix proj = Matrix::Zero(d, d);
    int rank = 0;
    const double lmax = (e.values.size() > 0) ? std::max(e.values(0), 0.0) : 0.0;
    const double rank_thr = opts_.rank_tol * std::max(lmax, opts_.rank_tol);
    for (int i = 0; i < e.values.size(); ++i) {
      if (e.values(i) <= 0.0) break;  // sorted descending
      proj.noalias() += e.values(i) * e.vectors.col(i) * e.vectors.col(i).transpose();
      if (e.values(i) > rank_thr) ++rank;
    }
    state_.blocks[k] = symmetrize(proj);
    step_ranks_[k] = rank;
  }
  state_.slack_dup = (state_.slack - state_.slack_mult / state_.rho).cwiseMax(0.0);
}

void AdmmSolver::step3_dual() {
  const double rho = state_.rho;
  const int L = dec_.ext_pattern->size();
  Vector scatter_new = Vector::Zero(L);
  double primal_sq = 0.0;
  for (size_t k = 0; k < dec_.selectors.size(); ++k) {
    Matrix gap = state_.blocks[k] - clique_matrix(static_cast<int>(k));
    state_.multipliers[k] += rho * gap;
    primal_sq += gap.squaredNorm();
    Vector v = svec(state_.blocks[k]);
    const auto& rows = dec_.selectors[k].rows;
    for (size_t p = 0; p < rows.size(); ++p) scatter_new(rows[p]) += v(static_cast<int>(p));
  }
  for (int j = 0; j < num_ineq_; ++j) {
    const double gap = state_.slack_dup(j) - state_.slack(j);
    state_.slack_mult(j) += rho * gap;
    primal_sq += gap * gap;
  }
  state_.primal_res = std::sqrt(primal_sq);
  const double dual_sq = (scatter_new - scatter_prev_).squaredNorm() +
                         (state_.slack_dup - slack_dup_prev_).squaredNorm();
  state_.dual_res = rho * std::sqrt(dual_sq);
  scatter_prev_ = scatter_new;
  slack_dup_prev_ = state_.slack_dup;
}

Solution AdmmSolver::solve(const PatternVec* extra_cost) {
  ensure_factorized();
  if (!state_.initialized) init_state();
  Vector c_total = cost_solver_;
  if (extra_cost) c_total += to_solver(*extra_cost);

  Solution sol;
  sol.kkt_regularized = kkt_regularized_;
  double init_primal = -1.0, init_dual = -1.0;
  int iters = 0;

  for (int it = 0; it < opts_.max_iter; ++it) {
    step1_core(c_total);
    step2_project();
    step3_dual();
    ++state_.iter;
    ++iters;

    // convergence scales: block magnitudes vs their consensus images, and
    // the accumulated multiplier image in x-space
    double blocks_sq = state_.slack_dup.squaredNorm();
    double image_sq = state_.slack.squaredNorm();
    double max_gap = 0.0;
    Vector mult_scatter = Vector::Zero(dec_.ext_pattern->size());
    for (size_t k = 0; k < dec_.selectors.size(); ++k) {
      Matrix b = clique_matrix(static_cast<int>(k));
      blocks_sq += state_.blocks[k].squaredNorm();
      image_sq += b.squaredNorm();
      max_gap = std::max(max_gap, Matrix(state_.blocks[k] - b).norm());
      Vector v = svec(state_.multipliers[k]);
      const auto& rows = dec_.selectors[k].rows;
      for (size_t p = 0; p < rows.size(); ++p) mult_scatter(rows[p]) += v(static_cast<int>(p));
    }
    for (int j = 0; j < num_ineq_; ++j)
      max_gap = std::max(max_gap, std::abs(state_.slack_dup(j) - state_.slack(j)));
    const double scale_p = std::max(std::sqrt(blocks_sq), std::sqrt(image_sq));
    const double scale_d =
        std::sqrt(mult_scatter.squaredNorm() + state_.slack_mult.squaredNorm());

    IterationRecord rec;
    rec.iter = state_.iter;
    rec.objective = cost_solver_.dot(state_.x);
    rec.primal_res = state_.primal_res;
    rec.dual_res = state_.dual_res;
    rec.rho = state_.rho;
    rec.max_clique_rank = step_ranks_.empty() ? 0 : *std::max_element(step_ranks_.begin(), step_ranks_.end());
    sol.trace.push_back(rec);

    if (init_primal < 0.0) {
      init_primal = state_.primal_res;
      init_dual = state_.dual_res;
    } else if (state_.primal_res > opts_.divergence_factor * (init_primal + 1.0) ||
               state_.dual_res > opts_.divergence_factor * (init_dual + 1.0)) {
      sol.status = SolveStatus::InfeasibleSuspected;
      break;
    }

    // state x is in svec coordinates, so its norm is the Frobenius norm of
    // the represented symmetric matrix; the returned iterate must satisfy
    // the affine constraints outright, not just through the slack split
    const double x_norm = state_.x.norm();
    if (state_.primal_res <= opts_.eps_abs + opts_.eps_rel * scale_p &&
        state_.dual_res <= opts_.eps_abs + opts_.eps_rel * scale_d &&
        max_gap <= opts_.consensus_tol * (1.0 + x_norm) &&
        feasibility_inf() <= opts_.eps_abs * (1.0 + rhs_inf_)) {
      sol.status = SolveStatus::Converged;
      break;
    }

    if (opts_.adaptive_rho) {
      if (state_.primal_res > opts_.rho_ratio * state_.dual_res)
        state_.rho = std::min(state_.rho * 2.0, opts_.rho_max);
      else if (state_.dual_res > opts_.rho_ratio * state_.primal_res)
        state_.rho = std::max(state_.rho / 2.0, opts_.rho_min);
    }
  }

  sol.x = PatternVec{dec_.ext_pattern, state_.x.cwiseQuotient(theta_)};
  sol.blocks = state_.blocks;
  sol.objective = cost_solver_.dot(state_.x);
  for (const auto& b : state_.blocks) sol.clique_ranks.push_back(numerical_rank(b, opts_.rank_tol));
  sol.iterations = iters;
  sol.primal_res = state_.primal_res;
  sol.dual_res = state_.dual_res;
  return sol;
}

void AdmmSolver::reset() { state_ = AdmmState{}; }

void AdmmSolver::randomize_state(std::uint64_t seed, double scale) {
  ensure_factorized();
  if (!state_.initialized) init_state();
  Rng rng(seed);
  for (Matrix& b : state_.blocks) {
    Matrix g(b.rows(), b.cols());
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j) g(i, j) = scale * rng.normal();
    b += symmetrize(g);
  }
}

}  // namespace chordalrank
