#pragma once

#include <cstdint>

#include "npt/matrix.hpp"

namespace npt {

// orthonormal Hartley matrix: entries cas(2*pi*((k*j) mod N)/N)/sqrt(N) with
// cas x = cos x + sin x; symmetric and involutory (H*H = I)
Matrix dht_matrix(std::size_t order);

struct NptOperator {
	std::size_t order = 0;
	double alpha = 1.0;
	Matrix psi;     // alpha*I + (1-alpha)*H
	Matrix hartley;
};

// alpha must lie in (0.5, 1]: at 0.5 psi is singular, below it the series
// form of the inverse diverges
NptOperator npt_operator(std::size_t order, double alpha);
// test-side constructor without the alpha range check (pure-transform case)
NptOperator npt_operator_unchecked(std::size_t order, double alpha);

// psi * image * psi
Matrix npt_forward(const NptOperator& op, const Matrix& image);

// exact inverse via psi^-1 = (alpha*I - (1-alpha)*H) / (2*alpha - 1)
Matrix npt_inverse_matrix(const NptOperator& op);
Matrix npt_inverse_direct(const NptOperator& op, const Matrix& transformed);

struct SeriesResult {
	Matrix image;
	int iterations_used = 0;
};

// psi^-1 expanded as (1/alpha) * sum_k (-(1-alpha)/alpha * H)^k; terms are
// accumulated until the next one falls below tol, then the inverse image is
// formed by the two-sided product
SeriesResult npt_inverse_series(const NptOperator& op, const Matrix& transformed,
                                double tol, int max_iter);

// H * image * H for a square image
Matrix dht_apply_2d(const Matrix& image);

struct CountedTransform {
	Matrix data;
	std::uint64_t mults = 0;
	std::uint64_t adds = 0;
};

// naive two-sided product with explicit operation counters:
// exactly 2N^3 multiplications and 2N^2(N-1) additions
CountedTransform dht_apply_2d_counted(const Matrix& image);

} // namespace npt
