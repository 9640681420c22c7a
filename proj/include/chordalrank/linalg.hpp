#pragma once

#include <Eigen/Dense>

namespace chordalrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric eigendecomposition, eigenvalues sorted descending,
// eigenvectors as columns of an orthogonal matrix.
struct EigResult {
  Vector values;
  Matrix vectors;
};

// Cyclic Jacobi with a fixed sweep order. Deterministic: the same input
// always produces the same rotation sequence, so downstream iterates are
// bit-identical run to run. Intended for symmetric matrices up to a few
// hundred rows (clique blocks, completions at bench scale).
EigResult jacobi_eig(const Matrix& a, int max_sweeps = 64);

// Thin SVD, singular values sorted descending: a = u * sigma.asDiagonal() * v^T
// with u, v having orthonormal columns (k = min(rows, cols) of them).
struct SvdResult {
  Matrix u;
  Vector sigma;
  Matrix v;
};

// One-sided Jacobi SVD, same determinism contract as jacobi_eig. Works on the
// columns of a directly instead of forming a^T a, so small singular values
// come out with high relative accuracy.
SvdResult jacobi_svd(const Matrix& a, int max_sweeps = 64);

// Nearest PSD matrix in Frobenius norm: eigenvalues clipped at zero.
Matrix project_psd(const Matrix& a);

// Largest eigenvalue magnitude (spectral norm for symmetric input).
double spectral_norm_sym(const Matrix& a);

// Eigenvalue-thresholded pseudoinverse of a symmetric PSD matrix.
// Eigenvalues <= rel_tol * max(lambda_max, rel_tol) are treated as zero.
Matrix pinv_sym(const Matrix& a, double rel_tol);

// Exactly symmetrizes a nearly symmetric matrix.
inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace chordalrank
