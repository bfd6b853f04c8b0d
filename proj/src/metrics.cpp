#include "npt/metrics.hpp"

#include <cmath>

#include "npt/errors.hpp"

namespace npt {

double psnr(const Matrix& a, const Matrix& b) {
	if (!a.same_shape(b) || a.empty())
		fail_usage("psnr requires two non-empty images of the same shape");
	double mse = 0.0;
	for (std::size_t i = 0; i < a.a.size(); ++i) {
		double d = 255.0 * (a.a[i] - b.a[i]);
		mse += d * d;
	}
	mse /= static_cast<double>(a.a.size());
	if (mse == 0.0)
		return 99.0;
	double v = 20.0 * std::log10(255.0 / std::sqrt(mse));
	return v > 99.0 ? 99.0 : v;
}

double ncorr(const Matrix& a, const Matrix& b) {
	if (!a.same_shape(b) || a.empty())
		fail_usage("ncorr requires two non-empty images of the same shape");
	double dot = 0.0, na = 0.0, nb = 0.0;
	for (std::size_t i = 0; i < a.a.size(); ++i) {
		dot += a.a[i] * b.a[i];
		na += a.a[i] * a.a[i];
		nb += b.a[i] * b.a[i];
	}
	if (na == 0.0 || nb == 0.0)
		fail_usage("ncorr undefined for an all-zero image");
	return dot / (std::sqrt(na) * std::sqrt(nb));
}

double ncorr_centered(const Matrix& a, const Matrix& b) {
	if (!a.same_shape(b) || a.empty())
		fail_usage("ncorr requires two non-empty images of the same shape");
	double ma = 0.0, mb = 0.0;
	for (std::size_t i = 0; i < a.a.size(); ++i) {
		ma += a.a[i];
		mb += b.a[i];
	}
	ma /= static_cast<double>(a.a.size());
	mb /= static_cast<double>(b.a.size());
	double dot = 0.0, na = 0.0, nb = 0.0;
	for (std::size_t i = 0; i < a.a.size(); ++i) {
		double x = a.a[i] - ma, y = b.a[i] - mb;
		dot += x * y;
		na += x * x;
		nb += y * y;
	}
	// constant up to accumulation rounding counts as constant
	const double n = static_cast<double>(a.a.size());
	if (std::sqrt(na / n) <= 1e-12 * (std::fabs(ma) + 1.0) ||
	    std::sqrt(nb / n) <= 1e-12 * (std::fabs(mb) + 1.0))
		fail_usage("centered ncorr undefined for a constant image");
	return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace npt
