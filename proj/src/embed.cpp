#include "npt/embed.hpp"

#include <cmath>
#include <string>

#include "npt/errors.hpp"

namespace npt {

namespace {

void check_host(const Matrix& host) {
	if (host.empty() || host.rows != host.cols)
		fail_usage("host must be a non-empty square image");
}

void check_block_size(std::size_t m, std::size_t order) {
	// the non-blind solve needs at least as many equations as unknowns per
	// column, which requires the complement to be at least block-sized
	if (m == 0)
		fail_usage("logo block is empty");
	if (2 * m > order)
		fail_usage("logo block side " + std::to_string(m) + " exceeds half the host side " +
		           std::to_string(order));
}

} // namespace

ReshapedLogo reshape_logo(const Matrix& logo, std::size_t host_order) {
	if (logo.empty())
		fail_usage("logo is empty");
	const std::size_t count = logo.rows * logo.cols;
	if (host_order == 0 || count % host_order != 0)
		fail_usage("logo pixel count " + std::to_string(count) +
		           " is not divisible by the host side " + std::to_string(host_order));
	const std::size_t r = count / host_order;
	if (r >= host_order)
		fail_usage("logo too large: reshaped to " + std::to_string(r) + " rows of a " +
		           std::to_string(host_order) + "-row host");
	ReshapedLogo out;
	out.r = r;
	out.block = Matrix(r, host_order);
	for (std::size_t t = 0; t < count; ++t)
		out.block.a[t] = logo.a[t]; // both row-major, same linear order
	return out;
}

Matrix unreshape_logo(const Matrix& block, std::size_t m, std::size_t n) {
	if (block.rows * block.cols != m * n)
		fail_usage("reshaped block does not hold m*n pixels");
	Matrix logo(m, n);
	for (std::size_t t = 0; t < logo.a.size(); ++t)
		logo.a[t] = block.a[t];
	return logo;
}

Matrix squarify_logo(const Matrix& logo) {
	if (logo.empty())
		fail_usage("logo is empty");
	const std::size_t side = std::max(logo.rows, logo.cols);
	if (logo.rows == side && logo.cols == side)
		return logo;
	Matrix block(side, side, 0.5);
	paste(block, logo, 0, 0);
	return block;
}

EmbedResult embed_bottom(const Matrix& host, const Matrix& logo, double alpha) {
	check_host(host);
	const std::size_t order = host.rows;
	ReshapedLogo rl = reshape_logo(logo, order);
	NptOperator op = npt_operator(order, alpha);
	Matrix spm = host;
	paste(spm, rl.block, order - rl.r, 0);
	Matrix ap = npt_forward(op, spm);
	// hide the payload: keep the transformed upper region, restore the
	// original bottom rows untouched
	Matrix wm = ap;
	paste(wm, submatrix(host, order - rl.r, 0, rl.r, order), order - rl.r, 0);
	EmbedResult out;
	out.watermarked = std::move(wm);
	out.placement.kind = PlacementKind::bottom;
	out.placement.r = rl.r;
	out.placement.logo_rows = logo.rows;
	out.placement.logo_cols = logo.cols;
	out.alpha = alpha;
	return out;
}

EmbedResult embed_block_at(const Matrix& host, const Matrix& logo_block, double alpha,
                           std::size_t offset_row, std::size_t offset_col, PlacementKind kind) {
	check_host(host);
	if (logo_block.rows != logo_block.cols)
		fail_usage("block placement requires a square logo block");
	const std::size_t order = host.rows, m = logo_block.rows;
	check_block_size(m, order);
	if (offset_row + m > order || offset_col + m > order)
		fail_usage("block offset places the logo outside the host");
	NptOperator op = npt_operator(order, alpha);
	Matrix spm = host;
	paste(spm, logo_block, offset_row, offset_col);
	Matrix ap = npt_forward(op, spm);
	Matrix wm = ap;
	paste(wm, submatrix(host, offset_row, offset_col, m, m), offset_row, offset_col);
	EmbedResult out;
	out.watermarked = std::move(wm);
	out.placement.kind = kind;
	out.placement.offset_row = offset_row;
	out.placement.offset_col = offset_col;
	out.placement.block = m;
	out.placement.logo_rows = logo_block.rows;
	out.placement.logo_cols = logo_block.cols;
	out.alpha = alpha;
	return out;
}

EmbedResult embed_topleft(const Matrix& host, const Matrix& logo_block, double alpha) {
	return embed_block_at(host, logo_block, alpha, 0, 0, PlacementKind::top_left);
}

Placement find_optimum_block(const Matrix& host, const Matrix& logo_block, std::size_t stride) {
	check_host(host);
	if (stride == 0)
		fail_usage("stride must be positive");
	const std::size_t order = host.rows, m = logo_block.rows;
	check_block_size(m, order);
	double best = -1.0;
	std::size_t best_r = 0, best_c = 0;
	for (std::size_t i = 0; i + m <= order; i += stride) {
		for (std::size_t j = 0; j + m <= order; j += stride) {
			double d2 = 0.0;
			for (std::size_t bi = 0; bi < m; ++bi)
				for (std::size_t bj = 0; bj < m; ++bj) {
					double d = host(i + bi, j + bj) - logo_block(bi, bj);
					d2 += d * d;
				}
			// strict < with row-major scan order realizes the lexicographic
			// tie-break
			if (best < 0.0 || d2 < best) {
				best = d2;
				best_r = i;
				best_c = j;
			}
		}
	}
	Placement pl;
	pl.kind = PlacementKind::optimum;
	pl.offset_row = best_r;
	pl.offset_col = best_c;
	pl.block = m;
	pl.logo_rows = m;
	pl.logo_cols = m;
	return pl;
}

EmbedResult embed_optimum(const Matrix& host, const Matrix& logo_block, double alpha,
                          std::size_t stride) {
	Placement pl = find_optimum_block(host, logo_block, stride);
	return embed_block_at(host, logo_block, alpha, pl.offset_row, pl.offset_col,
	                      PlacementKind::optimum);
}

std::size_t default_stride(std::size_t order) {
	return order <= 128 ? 1 : 4;
}

} // namespace npt
