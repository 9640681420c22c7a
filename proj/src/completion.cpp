#include "chordalrank/completion.hpp"

#include <cmath>
#include <stdexcept>

namespace chordalrank {

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.rows() == 0) return 0;
  EigResult e = jacobi_eig(a);
  const double lmax = e.values(0);
  const double thr = rel_tol * std::max(lmax, rel_tol);
  int r = 0;
  while (r < e.values.size() && e.values(r) > thr) ++r;
  return r;
}

CompletabilityReport check_completable(const PatternVec& x, const std::vector<Clique>& cliques,
                                       double psd_tol_rel) {
  CompletabilityReport rep;
  rep.completable = true;
  rep.min_eigenvalues.reserve(cliques.size());
  for (const auto& c : cliques) {
    Matrix block = extract_block(x, selector(c, *x.pattern));
    EigResult e = jacobi_eig(block);
    const double lmin = e.values(e.values.size() - 1);
    double norm = std::max(std::abs(e.values(0)), std::abs(lmin));
    rep.min_eigenvalues.push_back(lmin);
    if (lmin < -psd_tol_rel * norm) rep.completable = false;
  }
  return rep;
}

namespace {

// Appends `extra` zero columns.
void widen(Matrix& m, int extra) {
  const int w = static_cast<int>(m.cols());
  m.conservativeResize(Eigen::NoChange, w + extra);
  m.rightCols(extra).setZero();
}

// Extends the orthonormal set `basis` (columns) to `target` columns using
// canonical axes; deterministic.
Matrix orthonormal_complement(const Matrix& basis, int target) {
  const int dim = static_cast<int>(basis.rows());
  Matrix out(dim, target - basis.cols());
  int got = 0;
  for (int axis = 0; axis < dim && got < out.cols(); ++axis) {
    Vector v = Vector::Zero(dim);
    v(axis) = 1.0;
    for (int c = 0; c < basis.cols(); ++c) v -= basis.col(c).dot(v) * basis.col(c);
    for (int c = 0; c < got; ++c) v -= out.col(c).dot(v) * out.col(c);
    double norm = v.norm();
    if (norm > 1e-8) out.col(got++) = v / norm;
  }
  if (got != out.cols())
    throw std::runtime_error("min_rank_complete: failed to complete orthonormal basis");
  return out;
}

}  // namespace

Matrix min_rank_complete(const PatternVec& x, const CliqueTree& tree, double rel_tol,
                         double psd_tol_rel) {
  auto rep = check_completable(x, tree.cliques, psd_tol_rel);
  if (!rep.completable)
    throw std::invalid_argument("min_rank_complete: some clique block is not PSD");

  const int n = x.pattern->n();
  Matrix y(n, 0);  // factor: completion = y * y^T; width grows as needed
  std::vector<bool> placed(n, false);

  for (int k : tree.bfs_order) {
    const Clique& c = tree.cliques[k];
    std::vector<int> sep_local, new_local;
    for (size_t t = 0; t < c.size(); ++t) (placed[c[t]] ? sep_local : new_local).push_back(static_cast<int>(t));
    if (new_local.empty()) continue;

    // thresholded factor Z of the clique block, Z Z^T ~= block
    Matrix block = extract_block(x, selector(c, *x.pattern));
    EigResult e = jacobi_eig(block);
    const double lmax = std::max(e.values(0), 0.0);
    const double thr = rel_tol * std::max(lmax, rel_tol);
    int rc = 0;
    while (rc < e.values.size() && e.values(rc) > thr) ++rc;
    Matrix z(c.size(), rc);
    for (int t = 0; t < rc; ++t) z.col(t) = std::sqrt(e.values(t)) * e.vectors.col(t);

    if (sep_local.empty()) {
      // first clique of a component: reuse the leftmost columns so component
      // ranks share factor directions instead of adding up; entries between
      // components are unconstrained, so the overlap is free
      if (rc > y.cols()) widen(y, rc - static_cast<int>(y.cols()));
      for (int t : new_local) y.row(c[t]).head(rc) = z.row(t);
      for (int t : new_local) placed[c[t]] = true;
      continue;
    }

    const int w = static_cast<int>(y.cols());
    Matrix zs(sep_local.size(), rc), zn(new_local.size(), rc);
    for (size_t t = 0; t < sep_local.size(); ++t) zs.row(t) = z.row(sep_local[t]);
    for (size_t t = 0; t < new_local.size(); ++t) zn.row(t) = z.row(new_local[t]);
    Matrix ys(sep_local.size(), w);
    for (size_t t = 0; t < sep_local.size(); ++t) ys.row(t) = y.row(c[sep_local[t]]);

    // Separator coupling m = Zs^T Ys. Both Gram matrices equal the separator
    // block of x, so m's singular values are its nonzero eigenvalues; the
    // left/right singular directions give the rotation aligning the clique
    // frame onto the placed frame. One-sided SVD keeps small singular values
    // accurate relative to themselves, which matters when a separator sits
    // just above the rank threshold.
    Matrix m = zs.transpose() * ys;  // rc x w
    SvdResult sv = jacobi_svd(m);
    const double smax = (sv.sigma.size() > 0) ? sv.sigma(0) : 0.0;
    const double sthr = rel_tol * std::max(smax, rel_tol);
    int q = 0;
    while (q < sv.sigma.size() && sv.sigma(q) > sthr) ++q;
    Matrix u1 = sv.u.leftCols(q);
    Matrix v1 = sv.v.leftCols(q);

    const int need = rc - q;
    Matrix uperp = orthonormal_complement(u1, rc);  // rc x need

    // Directions for the unmatched part of the clique frame: reuse the span
    // of already-placed rows first (keeps the completion rank at the running
    // maximum), then open fresh columns.
    Matrix tdir(w, 0);
    if (need > 0) {
      std::vector<Vector> accepted;
      // orthonormal basis of the placed rows' span
      std::vector<Vector> row_basis;
      for (int vtx = 0; vtx < n; ++vtx) {
        if (!placed[vtx]) continue;
        Vector r = y.row(vtx).transpose();
        const double scale = r.norm();
        if (scale == 0.0) continue;
        for (const auto& b : row_basis) r -= b.dot(r) * b;
        if (r.norm() > 1e-7 * scale) row_basis.push_back(r / r.norm());
      }
      for (const auto& cand : row_basis) {
        if (static_cast<int>(accepted.size()) == need) break;
        Vector r = cand;
        for (int t = 0; t < q; ++t) r -= v1.col(t).dot(r) * v1.col(t);
        for (const auto& b : accepted) r -= b.dot(r) * b;
        if (r.norm() > 1e-7) accepted.push_back(r / r.norm());
      }
      const int fresh = need - static_cast<int>(accepted.size());
      if (fresh > 0) {
        widen(y, fresh);
        const int w2 = static_cast<int>(y.cols());
        for (auto& b : accepted) {
          b.conservativeResize(w2);
          b.tail(fresh).setZero();
        }
        v1.conservativeResize(w2, Eigen::NoChange);
        v1.bottomRows(fresh).setZero();
        for (int t = 0; t < fresh; ++t) {
          Vector axis = Vector::Zero(w2);
          axis(w + t) = 1.0;
          accepted.push_back(axis);
        }
      }
      tdir = Matrix(y.cols(), need);
      for (int t = 0; t < need; ++t) tdir.col(t) = accepted[t];
    }

    const int wq = static_cast<int>(y.cols());
    Matrix rot = Matrix::Zero(rc, wq);  // partial isometry: Zs * rot ~= Ys
    if (q > 0) rot.noalias() += u1 * v1.transpose();
    if (need > 0) rot.noalias() += uperp * tdir.transpose();

    for (size_t t = 0; t < new_local.size(); ++t) y.row(c[new_local[t]]) = zn.row(t) * rot;
    for (int t : new_local) placed[c[t]] = true;
  }

  return symmetrize(y * y.transpose());
}

}  // namespace chordalrank
