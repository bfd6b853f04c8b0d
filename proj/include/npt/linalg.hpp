#pragma once

#include "npt/matrix.hpp"

namespace npt {

// Householder factorization A = Q R with Q square m x m orthogonal and R m x n
// upper triangular; m >= n required
struct QrFull {
	Matrix q;
	Matrix r;
};

QrFull qr_full(const Matrix& a);

// minimizes ||A X - B||_F over X (n x k) for full-column-rank A (m x n, m >= n);
// residual, when requested, is the Frobenius norm of A X - B at the minimizer
Matrix lsq_solve(const Matrix& a, const Matrix& b, double* residual = nullptr);

// orthonormal basis of the orthogonal complement of range(A) inside R^m,
// returned as the trailing m-n columns of the full Q factor; A must have
// full column rank
Matrix orth_complement(const Matrix& a);

// square solve via the same Householder path
Matrix solve_square(const Matrix& a, const Matrix& b);

// minimum-norm solution of the underdetermined full-row-rank system A X = B
// (A wide, m < n), plus an orthonormal basis of null(A)
struct MinNorm {
	Matrix x;
	Matrix null_basis; // n x (n - m)
};
MinNorm min_norm_solve(const Matrix& a, const Matrix& b);

} // namespace npt
