#include "npt/matrix.hpp"

#include <cassert>
#include <cmath>

namespace npt {

Matrix identity(std::size_t n) {
	Matrix m(n, n);
	for (std::size_t i = 0; i < n; ++i)
		m(i, i) = 1.0;
	return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
	assert(x.cols == y.rows);
	Matrix z(x.rows, y.cols);
	// ikj order keeps the inner loop contiguous in y and z
	for (std::size_t i = 0; i < x.rows; ++i) {
		const double* xi = &x.a[i * x.cols];
		double* zi = &z.a[i * z.cols];
		for (std::size_t k = 0; k < x.cols; ++k) {
			double v = xi[k];
			if (v == 0.0)
				continue;
			const double* yk = &y.a[k * y.cols];
			for (std::size_t j = 0; j < y.cols; ++j)
				zi[j] += v * yk[j];
		}
	}
	return z;
}

Matrix transpose(const Matrix& x) {
	Matrix z(x.cols, x.rows);
	for (std::size_t i = 0; i < x.rows; ++i)
		for (std::size_t j = 0; j < x.cols; ++j)
			z(j, i) = x(i, j);
	return z;
}

Matrix add(const Matrix& x, const Matrix& y) {
	assert(x.same_shape(y));
	Matrix z = x;
	for (std::size_t i = 0; i < z.a.size(); ++i)
		z.a[i] += y.a[i];
	return z;
}

Matrix sub(const Matrix& x, const Matrix& y) {
	assert(x.same_shape(y));
	Matrix z = x;
	for (std::size_t i = 0; i < z.a.size(); ++i)
		z.a[i] -= y.a[i];
	return z;
}

Matrix scale(double s, const Matrix& x) {
	Matrix z = x;
	for (double& v : z.a)
		v *= s;
	return z;
}

double max_abs(const Matrix& x) {
	double m = 0.0;
	for (double v : x.a)
		m = std::max(m, std::fabs(v));
	return m;
}

double fro_norm(const Matrix& x) {
	double s = 0.0;
	for (double v : x.a)
		s += v * v;
	return std::sqrt(s);
}

Matrix submatrix(const Matrix& x, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) {
	assert(r0 + h <= x.rows && c0 + w <= x.cols);
	Matrix z(h, w);
	for (std::size_t i = 0; i < h; ++i)
		for (std::size_t j = 0; j < w; ++j)
			z(i, j) = x(r0 + i, c0 + j);
	return z;
}

void paste(Matrix& dst, const Matrix& src, std::size_t r0, std::size_t c0) {
	assert(r0 + src.rows <= dst.rows && c0 + src.cols <= dst.cols);
	for (std::size_t i = 0; i < src.rows; ++i)
		for (std::size_t j = 0; j < src.cols; ++j)
			dst(r0 + i, c0 + j) = src(i, j);
}

} // namespace npt
