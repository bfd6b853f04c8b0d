#include "npt/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "npt/errors.hpp"

namespace npt {

Matrix dht_matrix(std::size_t order) {
	if (order == 0)
		fail_usage("transform order must be positive");
	Matrix h(order, order);
	const double scale = 1.0 / std::sqrt(static_cast<double>(order));
	const double step = 2.0 * std::numbers::pi / static_cast<double>(order);
	for (std::size_t k = 0; k < order; ++k) {
		for (std::size_t j = k; j < order; ++j) {
			// reducing k*j mod N before the trig call keeps H*H-I at 1e-13
			// even for order 512; the raw angle loses digits past k*j ~ 1e5
			double ang = step * static_cast<double>((k * j) % order);
			double v = (std::cos(ang) + std::sin(ang)) * scale;
			h(k, j) = v;
			h(j, k) = v;
		}
	}
	return h;
}

NptOperator npt_operator_unchecked(std::size_t order, double alpha) {
	NptOperator op;
	op.order = order;
	op.alpha = alpha;
	op.hartley = dht_matrix(order);
	op.psi = Matrix(order, order);
	for (std::size_t i = 0; i < order; ++i)
		for (std::size_t j = 0; j < order; ++j)
			op.psi(i, j) = (1.0 - alpha) * op.hartley(i, j) + (i == j ? alpha : 0.0);
	return op;
}

NptOperator npt_operator(std::size_t order, double alpha) {
	if (!(alpha > 0.5 && alpha <= 1.0))
		fail_usage("alpha must lie in (0.5, 1], got " + std::to_string(alpha));
	return npt_operator_unchecked(order, alpha);
}

static void check_square_match(const NptOperator& op, const Matrix& image) {
	if (image.rows != image.cols)
		fail_usage("image must be square");
	if (image.rows != op.order)
		fail_usage("image side does not match operator order");
}

Matrix npt_forward(const NptOperator& op, const Matrix& image) {
	check_square_match(op, image);
	return matmul(matmul(op.psi, image), op.psi);
}

Matrix npt_inverse_matrix(const NptOperator& op) {
	const double d = 2.0 * op.alpha - 1.0;
	Matrix phi(op.order, op.order);
	for (std::size_t i = 0; i < op.order; ++i)
		for (std::size_t j = 0; j < op.order; ++j)
			phi(i, j) = ((i == j ? op.alpha : 0.0) - (1.0 - op.alpha) * op.hartley(i, j)) / d;
	return phi;
}

Matrix npt_inverse_direct(const NptOperator& op, const Matrix& transformed) {
	check_square_match(op, transformed);
	Matrix phi = npt_inverse_matrix(op);
	return matmul(matmul(phi, transformed), phi);
}

SeriesResult npt_inverse_series(const NptOperator& op, const Matrix& transformed,
                                double tol, int max_iter) {
	check_square_match(op, transformed);
	if (tol <= 0.0)
		fail_usage("series tolerance must be positive");
	if (max_iter < 1)
		fail_usage("series iteration budget must be at least 1");
	const double rho = (1.0 - op.alpha) / op.alpha;
	const double inv_a = 1.0 / op.alpha;
	// (-rho*H)^k collapses to (+/- rho^k) * (I or H) because H*H = I
	Matrix acc(op.order, op.order);
	double coeff = inv_a;
	int used = 0;
	double last_term = 0.0;
	bool converged = false;
	for (int k = 0; k < max_iter; ++k) {
		const bool odd = (k % 2) == 1;
		double term_mag = 0.0;
		for (std::size_t i = 0; i < op.order; ++i) {
			for (std::size_t j = 0; j < op.order; ++j) {
				double base = odd ? op.hartley(i, j) : (i == j ? 1.0 : 0.0);
				double t = coeff * base;
				acc(i, j) += t;
				term_mag = std::max(term_mag, std::fabs(t));
			}
		}
		++used;
		last_term = term_mag;
		coeff *= -rho;
		// next term magnitude: |coeff| * max|H or I| <= |coeff| * 1.1
		if (std::fabs(coeff) <= tol) {
			converged = true;
			break;
		}
	}
	if (!converged)
		fail_numerical("series inverse did not converge in " + std::to_string(max_iter) +
		               " terms, last term magnitude " + std::to_string(last_term));
	SeriesResult out;
	out.image = matmul(matmul(acc, transformed), acc);
	out.iterations_used = used;
	return out;
}

Matrix dht_apply_2d(const Matrix& image) {
	if (image.rows != image.cols)
		fail_usage("2-d transform requires a square image");
	Matrix h = dht_matrix(image.rows);
	return matmul(matmul(h, image), h);
}

CountedTransform dht_apply_2d_counted(const Matrix& image) {
	if (image.rows != image.cols)
		fail_usage("2-d transform requires a square image");
	const std::size_t n = image.rows;
	Matrix h = dht_matrix(n);
	CountedTransform out;
	Matrix t(n, n);
	// left product, plain textbook loops so the counts are the definition
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j) {
			double s = h(i, 0) * image(0, j);
			++out.mults;
			for (std::size_t k = 1; k < n; ++k) {
				s += h(i, k) * image(k, j);
				++out.mults;
				++out.adds;
			}
			t(i, j) = s;
		}
	}
	out.data = Matrix(n, n);
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j) {
			double s = t(i, 0) * h(0, j);
			++out.mults;
			for (std::size_t k = 1; k < n; ++k) {
				s += t(i, k) * h(k, j);
				++out.mults;
				++out.adds;
			}
			out.data(i, j) = s;
		}
	}
	return out;
}

} // namespace npt
