#pragma once

#include "npt/transforms.hpp"

namespace npt {

enum class PlacementKind { bottom, top_left, optimum };

struct Placement {
	PlacementKind kind = PlacementKind::bottom;
	std::size_t offset_row = 0, offset_col = 0; // block corner; (0,0) for top_left
	std::size_t r = 0;                          // bottom: replaced row count
	std::size_t block = 0;                      // block placements: square side m
	std::size_t logo_rows = 0, logo_cols = 0;   // logo dims before reshape/padding
};

struct ReshapedLogo {
	std::size_t r = 0;
	Matrix block; // r x N
};

// row-major flatten of the m x n logo into r = m*n/N rows of width N
ReshapedLogo reshape_logo(const Matrix& logo, std::size_t host_order);
Matrix unreshape_logo(const Matrix& block, std::size_t m, std::size_t n);

// pads a rectangular logo to a square of side max(m, n) with mid-gray 0.5
Matrix squarify_logo(const Matrix& logo);

struct EmbedResult {
	Matrix watermarked;
	Placement placement;
	double alpha = 1.0;
};

// replace the last r host rows with the reshaped logo, transform, then put the
// original rows back so the payload hides in the transformed upper region
EmbedResult embed_bottom(const Matrix& host, const Matrix& logo, double alpha);

// replace the m x m block at the given offset, transform, restore the block
EmbedResult embed_block_at(const Matrix& host, const Matrix& logo_block, double alpha,
                           std::size_t offset_row, std::size_t offset_col, PlacementKind kind);

EmbedResult embed_topleft(const Matrix& host, const Matrix& logo_block, double alpha);

// offset minimizing the Frobenius distance between the host block and the
// logo block, scanned on a stride grid; ties go to the smallest (row, col)
Placement find_optimum_block(const Matrix& host, const Matrix& logo_block, std::size_t stride);

EmbedResult embed_optimum(const Matrix& host, const Matrix& logo_block, double alpha,
                          std::size_t stride);

std::size_t default_stride(std::size_t order);

} // namespace npt
