#pragma once

#include "npt/matrix.hpp"

namespace npt {

// peak signal-to-noise ratio in dB on the 0..255 scale for [0,1] data;
// saturates at 99.0 dB (including the zero-MSE case)
double psnr(const Matrix& a, const Matrix& b);

// normalized correlation: <a,b> / (||a|| * ||b||); scale-invariant, in [-1,1]
double ncorr(const Matrix& a, const Matrix& b);

// mean-removed variant, diagnostics only
double ncorr_centered(const Matrix& a, const Matrix& b);

} // namespace npt
