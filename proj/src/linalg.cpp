#include "chordalrank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace chordalrank {

EigResult jacobi_eig(const Matrix& a_in, int max_sweeps) {
  const int n = static_cast<int>(a_in.rows());
  if (a_in.cols() != n) throw std::invalid_argument("jacobi_eig: matrix not square");
  Matrix a = symmetrize(a_in);
  Matrix v = Matrix::Identity(n, n);
  if (n == 0) return {Vector(0), v};
  if (n == 1) return {a.col(0), v};

  const double norm = a.norm();
  const double stop = (norm > 0.0) ? 1e-15 * norm : 0.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    // off-diagonal Frobenius mass
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // skip rotations that cannot change anything at working precision
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        // smaller-magnitude root keeps the rotation angle <= pi/4 (stability)
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // sort eigenpairs descending; index tiebreak keeps the order deterministic
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });
  EigResult r;
  r.values = Vector(n);
  r.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.values(k) = a(idx[k], idx[k]);
    r.vectors.col(k) = v.col(idx[k]);
  }
  return r;
}

SvdResult jacobi_svd(const Matrix& a, int max_sweeps) {
  // operate on whichever orientation has fewer columns; swap factors back
  if (a.cols() > a.rows()) {
    SvdResult t = jacobi_svd(Matrix(a.transpose()), max_sweeps);
    return {t.v, t.sigma, t.u};
  }
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Matrix w = a;
  Matrix v = Matrix::Identity(n, n);
  if (n == 0) return {Matrix(m, 0), Vector(0), v};

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double app = w.col(p).squaredNorm();
        const double aqq = w.col(q).squaredNorm();
        const double apq = w.col(p).dot(w.col(q));
        if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
        const double tau = (aqq - app) / (2.0 * apq);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double wkp = w(k, p);
          const double wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  Vector sigma(n);
  for (int j = 0; j < n; ++j) sigma(j) = w.col(j).norm();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return sigma(i) > sigma(j); });

  SvdResult r;
  r.sigma = Vector(n);
  r.u = Matrix(m, n);
  r.v = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    r.sigma(j) = sigma(idx[j]);
    r.v.col(j) = v.col(idx[j]);
    if (r.sigma(j) > 0.0) {
      r.u.col(j) = w.col(idx[j]) / r.sigma(j);
    } else {
      // zero column: fill with the canonical axis least covered by the
      // columns so far, orthonormalized against them
      Vector best = Vector::Zero(m);
      double best_norm = -1.0;
      for (int axis = 0; axis < m; ++axis) {
        Vector cand = Vector::Zero(m);
        cand(axis) = 1.0;
        for (int t = 0; t < j; ++t) cand -= r.u.col(t).dot(cand) * r.u.col(t);
        if (cand.norm() > best_norm) {
          best_norm = cand.norm();
          best = cand;
        }
      }
      r.u.col(j) = best / best.norm();
    }
  }
  return r;
}

Matrix project_psd(const Matrix& a) {
  EigResult e = jacobi_eig(a);
  const int n = static_cast<int>(a.rows());
  Matrix out = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (e.values(k) <= 0.0) break;  // sorted descending
    out.noalias() += e.values(k) * e.vectors.col(k) * e.vectors.col(k).transpose();
  }
  return symmetrize(out);
}

double spectral_norm_sym(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  EigResult e = jacobi_eig(a);
  double m = 0.0;
  for (int k = 0; k < e.values.size(); ++k) m = std::max(m, std::abs(e.values(k)));
  return m;
}

Matrix pinv_sym(const Matrix& a, double rel_tol) {
  EigResult e = jacobi_eig(a);
  const int n = static_cast<int>(a.rows());
  const double lmax = (n > 0) ? std::max(e.values(0), 0.0) : 0.0;
  const double thr = rel_tol * std::max(lmax, rel_tol);
  Matrix out = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (e.values(k) <= thr) continue;
    out.noalias() += (1.0 / e.values(k)) * e.vectors.col(k) * e.vectors.col(k).transpose();
  }
  return symmetrize(out);
}

}  // namespace chordalrank
