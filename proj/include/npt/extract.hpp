#pragma once

#include "npt/embed.hpp"

namespace npt {

// psi split at N-k | k
struct PsiPartition {
	Matrix psi11, psi12, psi21, psi22;
};

PsiPartition partition_psi(const Matrix& psi, std::size_t k);

// columns form an orthonormal basis of the complement of range(psi12) inside
// R^(N-r); transpose(L)*psi12 vanishes and the column rank is N-2r
struct NullProjector {
	Matrix l;
};

NullProjector build_null_projector(const PsiPartition& part);

struct ExtractionReport {
	enum class Mode { non_blind, quasi_blind };
	Matrix logo;                  // extracted logo at its recorded dims
	Matrix recovered_host_region; // quasi-blind only: host rows 0..N-r-1
	double ncorr = 0.0;           // integrity of the verbatim region against its
	                              // expected content; exactly 1 on intact data
	double psnr_db = 0.0;         // same comparison in dB, saturated at 99
	double solver_residual = 0.0; // least-squares residual relative to the
	                              // transform-row magnitude
	bool degenerate = false;      // alpha == 1: nothing recoverable, region content returned
	Mode mode = Mode::non_blind;
};

// exact-host least-squares recovery of the bottom-rows payload
ExtractionReport extract_nonblind_bottom(const Matrix& watermarked, const Matrix& host,
                                         double alpha, const Placement& placement);

// exact-host least-squares recovery of a block payload at any recorded offset
// (top-left and optimum placements)
ExtractionReport extract_nonblind_block(const Matrix& watermarked, const Matrix& host,
                                        double alpha, const Placement& placement);

// recovery of both the hidden host region and the logo from the watermarked
// image, the restored last r rows, and alpha alone; the r free parameters per
// column are pinned by requiring the (r+1)-th order finite differences of each
// assembled column to vanish on the windows straddling the seam to the known
// rows (assumes hosts that continue smoothly across the seam)
ExtractionReport extract_quasiblind_bottom(const Matrix& watermarked,
                                           const Matrix& known_last_rows, double alpha,
                                           std::size_t logo_rows, std::size_t logo_cols);

struct DetectedRegion {
	bool bottom_rows = false;
	std::size_t r = 0;                        // set when bottom_rows
	std::size_t row = 0, col = 0, height = 0, width = 0;
};

// locates the restored (exactly equal) region of a clean watermarked image:
// trailing fully-equal rows first, otherwise the largest all-equal rectangle
DetectedRegion estimate_logo_size(const Matrix& watermarked, const Matrix& host);

} // namespace npt
