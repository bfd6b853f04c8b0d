#pragma once

#include <cstddef>
#include <vector>

namespace npt {

// dense row-major double matrix; grayscale images use the same storage
// with pixel values kept in [0,1]
struct Matrix {
	std::size_t rows = 0, cols = 0;
	std::vector<double> a;

	Matrix() = default;
	Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

	double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
	double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

	bool empty() const { return a.empty(); }
	bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

using GrayImage = Matrix;

Matrix identity(std::size_t n);
Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
Matrix add(const Matrix& x, const Matrix& y);
Matrix sub(const Matrix& x, const Matrix& y);
Matrix scale(double s, const Matrix& x);

double max_abs(const Matrix& x);
double fro_norm(const Matrix& x);

// copies the h x w window with top-left corner (r0, c0); must be in bounds
Matrix submatrix(const Matrix& x, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w);
// writes src into dst at (r0, c0); must fit
void paste(Matrix& dst, const Matrix& src, std::size_t r0, std::size_t c0);

} // namespace npt
