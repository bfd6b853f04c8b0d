#include "npt/linalg.hpp"

#include <cassert>
#include <cmath>

#include "npt/errors.hpp"

namespace npt {

namespace {

// Householder reflector acting on rows k..m-1: P = I - w v v^T
struct Reflector {
	std::size_t k;
	std::vector<double> v;
	double w;
};

// reduces a copy of A to upper triangular form, returning the reflectors
std::vector<Reflector> householder(Matrix& a) {
	const std::size_t m = a.rows, n = a.cols;
	assert(m >= n);
	std::vector<Reflector> refl;
	refl.reserve(n);
	for (std::size_t k = 0; k < n; ++k) {
		double sigma = 0.0;
		for (std::size_t i = k; i < m; ++i)
			sigma += a(i, k) * a(i, k);
		sigma = std::sqrt(sigma);
		if (sigma == 0.0) {
			refl.push_back({k, std::vector<double>(m - k, 0.0), 0.0});
			continue;
		}
		double x0 = a(k, k);
		double alpha = x0 >= 0.0 ? -sigma : sigma;
		std::vector<double> v(m - k);
		v[0] = x0 - alpha;
		for (std::size_t i = k + 1; i < m; ++i)
			v[i - k] = a(i, k);
		double vtv = 0.0;
		for (double t : v)
			vtv += t * t;
		double w = vtv > 0.0 ? 2.0 / vtv : 0.0;
		// apply to the remaining columns
		for (std::size_t j = k; j < n; ++j) {
			double dot = 0.0;
			for (std::size_t i = k; i < m; ++i)
				dot += v[i - k] * a(i, j);
			dot *= w;
			for (std::size_t i = k; i < m; ++i)
				a(i, j) -= dot * v[i - k];
		}
		a(k, k) = alpha; // exact value, avoids residual rounding in column k
		for (std::size_t i = k + 1; i < m; ++i)
			a(i, k) = 0.0;
		refl.push_back({k, std::move(v), w});
	}
	return refl;
}

// applies Q^T (product of reflectors in order) to b in place
void apply_qt(const std::vector<Reflector>& refl, Matrix& b) {
	for (const Reflector& h : refl) {
		if (h.w == 0.0)
			continue;
		for (std::size_t j = 0; j < b.cols; ++j) {
			double dot = 0.0;
			for (std::size_t i = 0; i < h.v.size(); ++i)
				dot += h.v[i] * b(h.k + i, j);
			dot *= h.w;
			for (std::size_t i = 0; i < h.v.size(); ++i)
				b(h.k + i, j) -= dot * h.v[i];
		}
	}
}

// applies Q (reflectors in reverse order) to b in place
void apply_q(const std::vector<Reflector>& refl, Matrix& b) {
	for (std::size_t t = refl.size(); t-- > 0;) {
		const Reflector& h = refl[t];
		if (h.w == 0.0)
			continue;
		for (std::size_t j = 0; j < b.cols; ++j) {
			double dot = 0.0;
			for (std::size_t i = 0; i < h.v.size(); ++i)
				dot += h.v[i] * b(h.k + i, j);
			dot *= h.w;
			for (std::size_t i = 0; i < h.v.size(); ++i)
				b(h.k + i, j) -= dot * h.v[i];
		}
	}
}

void check_full_rank(const Matrix& r, std::size_t n) {
	double dmax = 0.0;
	for (std::size_t i = 0; i < n; ++i)
		dmax = std::max(dmax, std::fabs(r(i, i)));
	for (std::size_t i = 0; i < n; ++i)
		if (std::fabs(r(i, i)) <= 1e-12 * dmax || dmax == 0.0)
			fail_numerical("rank-deficient system: |R(" + std::to_string(i) + "," +
			               std::to_string(i) + ")| = " + std::to_string(std::fabs(r(i, i))) +
			               " vs max diag " + std::to_string(dmax));
}

// back-substitution on the leading n x n block of R
Matrix back_substitute(const Matrix& r, const Matrix& y, std::size_t n) {
	Matrix x(n, y.cols);
	for (std::size_t j = 0; j < y.cols; ++j) {
		for (std::size_t ii = n; ii-- > 0;) {
			double s = y(ii, j);
			for (std::size_t k = ii + 1; k < n; ++k)
				s -= r(ii, k) * x(k, j);
			x(ii, j) = s / r(ii, ii);
		}
	}
	return x;
}

} // namespace

QrFull qr_full(const Matrix& a) {
	Matrix r = a;
	std::vector<Reflector> refl = householder(r);
	Matrix q = identity(a.rows);
	apply_q(refl, q);
	return {std::move(q), std::move(r)};
}

Matrix lsq_solve(const Matrix& a, const Matrix& b, double* residual) {
	if (a.rows < a.cols)
		fail_numerical("least-squares system is underdetermined");
	if (a.rows != b.rows)
		fail_usage("least-squares shape mismatch");
	Matrix r = a;
	std::vector<Reflector> refl = householder(r);
	check_full_rank(r, a.cols);
	Matrix y = b;
	apply_qt(refl, y);
	if (residual) {
		double s = 0.0;
		for (std::size_t i = a.cols; i < y.rows; ++i)
			for (std::size_t j = 0; j < y.cols; ++j)
				s += y(i, j) * y(i, j);
		*residual = std::sqrt(s);
	}
	return back_substitute(r, y, a.cols);
}

Matrix orth_complement(const Matrix& a) {
	if (a.rows <= a.cols)
		fail_numerical("orthogonal complement requires a tall matrix");
	QrFull f = qr_full(a);
	check_full_rank(f.r, a.cols);
	return submatrix(f.q, 0, a.cols, a.rows, a.rows - a.cols);
}

Matrix solve_square(const Matrix& a, const Matrix& b) {
	if (a.rows != a.cols)
		fail_usage("square solve on non-square matrix");
	return lsq_solve(a, b);
}

MinNorm min_norm_solve(const Matrix& a, const Matrix& b) {
	if (a.rows >= a.cols)
		fail_numerical("minimum-norm solve requires a wide matrix");
	if (a.rows != b.rows)
		fail_usage("minimum-norm solve shape mismatch");
	// A = R^T Q1^T from the factorization A^T = Q R; forward-substitute R^T u = B,
	// then the minimum-norm solution is Q1 u and null(A) is the trailing Q block
	QrFull f = qr_full(transpose(a));
	const std::size_t m = a.rows, n = a.cols;
	check_full_rank(f.r, m);
	Matrix u(m, b.cols);
	for (std::size_t j = 0; j < b.cols; ++j) {
		for (std::size_t i = 0; i < m; ++i) {
			double s = b(i, j);
			for (std::size_t k = 0; k < i; ++k)
				s -= f.r(k, i) * u(k, j);
			u(i, j) = s / f.r(i, i);
		}
	}
	Matrix q1 = submatrix(f.q, 0, 0, n, m);
	MinNorm out;
	out.x = matmul(q1, u);
	out.null_basis = submatrix(f.q, 0, m, n, n - m);
	return out;
}

} // namespace npt
