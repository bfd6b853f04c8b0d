#include "npt/extract.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "npt/errors.hpp"
#include "npt/linalg.hpp"
#include "npt/metrics.hpp"

namespace npt {

namespace {

constexpr double kTamperRelTol = 1e-6; // known-rows mismatch, relative Frobenius

void check_pair(const Matrix& watermarked, const Matrix& host) {
	if (watermarked.empty() || watermarked.rows != watermarked.cols)
		fail_usage("watermarked image must be a non-empty square");
	if (!watermarked.same_shape(host))
		fail_usage("watermarked image and host differ in shape");
}

// integrity of the verbatim region: the embedder writes this region into the
// watermarked image unchanged, so on intact data it matches its expected
// content exactly (bit-exact even through 8-bit files) and any attack that
// touches it drives ncorr below 1
void fill_integrity(ExtractionReport& rep, const Matrix& region, const Matrix& expected) {
	if (max_abs(sub(region, expected)) == 0.0) {
		rep.ncorr = 1.0;
		rep.psnr_db = 99.0;
		return;
	}
	bool any_zero = max_abs(region) == 0.0 || max_abs(expected) == 0.0;
	rep.ncorr = any_zero ? 0.0 : ncorr(region, expected);
	rep.psnr_db = psnr(region, expected);
}

double relative_residual(double abs_residual, const Matrix& scale_ref) {
	double scale = fro_norm(scale_ref);
	return scale > 0.0 ? abs_residual / scale : abs_residual;
}

} // namespace

PsiPartition partition_psi(const Matrix& psi, std::size_t k) {
	if (psi.rows != psi.cols || k > psi.rows)
		fail_usage("bad psi partition");
	const std::size_t n = psi.rows, t = n - k;
	PsiPartition p;
	p.psi11 = submatrix(psi, 0, 0, t, t);
	p.psi12 = submatrix(psi, 0, t, t, k);
	p.psi21 = submatrix(psi, t, 0, k, t);
	p.psi22 = submatrix(psi, t, t, k, k);
	return p;
}

NullProjector build_null_projector(const PsiPartition& part) {
	const std::size_t t = part.psi12.rows, r = part.psi12.cols;
	if (r == 0)
		return {identity(t)};
	if (2 * r >= t + r)
		fail_usage("null projector requires r < N/2");
	return {orth_complement(part.psi12)};
}

ExtractionReport extract_nonblind_bottom(const Matrix& watermarked, const Matrix& host,
                                         double alpha, const Placement& placement) {
	check_pair(watermarked, host);
	const std::size_t order = host.rows, r = placement.r;
	if (r == 0 || r >= order)
		fail_usage("bottom placement needs 0 < r < N");
	if (placement.logo_rows * placement.logo_cols != r * order)
		fail_usage("logo dims disagree with the replaced row count");
	ExtractionReport rep;
	rep.mode = ExtractionReport::Mode::non_blind;
	Matrix tail = submatrix(watermarked, order - r, 0, r, order);
	Matrix tail_expected = submatrix(host, order - r, 0, r, order);
	fill_integrity(rep, tail, tail_expected);
	if (alpha == 1.0) {
		// psi12 vanishes, nothing of the payload reaches the visible rows;
		// hand back the restored region content under the degenerate flag
		rep.degenerate = true;
		rep.logo = unreshape_logo(tail, placement.logo_rows, placement.logo_cols);
		return rep;
	}
	NptOperator op = npt_operator(order, alpha);
	Matrix phi = npt_inverse_matrix(op);
	PsiPartition part = partition_psi(op.psi, r);
	Matrix aop = submatrix(watermarked, 0, 0, order - r, order);
	Matrix s1 = submatrix(host, 0, 0, order - r, order);
	Matrix w = matmul(aop, phi);
	Matrix rhs = sub(w, matmul(part.psi11, s1));
	double abs_res = 0.0;
	Matrix p1 = lsq_solve(part.psi12, rhs, &abs_res);
	rep.solver_residual = relative_residual(abs_res, w);
	rep.logo = unreshape_logo(p1, placement.logo_rows, placement.logo_cols);
	return rep;
}

ExtractionReport extract_nonblind_block(const Matrix& watermarked, const Matrix& host,
                                        double alpha, const Placement& placement) {
	check_pair(watermarked, host);
	const std::size_t order = host.rows, m = placement.block;
	const std::size_t r0 = placement.offset_row, c0 = placement.offset_col;
	if (m == 0 || 2 * m > order)
		fail_usage("block side must satisfy 0 < m <= N/2");
	if (r0 + m > order || c0 + m > order)
		fail_usage("recorded block offset is out of bounds");
	ExtractionReport rep;
	rep.mode = ExtractionReport::Mode::non_blind;
	const std::size_t lr = placement.logo_rows ? placement.logo_rows : m;
	const std::size_t lc = placement.logo_cols ? placement.logo_cols : m;
	if (lr > m || lc > m)
		fail_usage("recorded logo dims exceed the embedded block");
	fill_integrity(rep, submatrix(watermarked, r0, c0, m, m), submatrix(host, r0, c0, m, m));
	if (alpha == 1.0) {
		rep.degenerate = true;
		rep.logo = submatrix(watermarked, r0, c0, lr, lc);
		return rep;
	}
	NptOperator op = npt_operator(order, alpha);
	Matrix phi = npt_inverse_matrix(op);
	// rows outside the block stay fully known in the transform image; on those
	// rows A_pm*phi = psi*S_pm, and S_pm differs from the host only inside the
	// block, so the unknown enters through psi[out-rows, block-rows] alone
	const std::size_t nout = order - m;
	Matrix mred(nout, m);
	Matrix aout(nout, order);
	Matrix psi_out(nout, order);
	std::size_t oi = 0;
	for (std::size_t i = 0; i < order; ++i) {
		if (i >= r0 && i < r0 + m)
			continue;
		for (std::size_t j = 0; j < order; ++j) {
			aout(oi, j) = watermarked(i, j);
			psi_out(oi, j) = op.psi(i, j);
		}
		for (std::size_t j = 0; j < m; ++j)
			mred(oi, j) = op.psi(i, r0 + j);
		++oi;
	}
	Matrix wfull = matmul(aout, phi);
	Matrix rhs_full = sub(wfull, matmul(psi_out, host));
	Matrix rhs = submatrix(rhs_full, 0, c0, nout, m);
	double abs_res = 0.0;
	Matrix x = lsq_solve(mred, rhs, &abs_res);
	rep.solver_residual = relative_residual(abs_res, submatrix(wfull, 0, c0, nout, m));
	Matrix block = add(x, submatrix(host, r0, c0, m, m));
	rep.logo = submatrix(block, 0, 0, lr, lc);
	return rep;
}

ExtractionReport extract_quasiblind_bottom(const Matrix& watermarked,
                                           const Matrix& known_last_rows, double alpha,
                                           std::size_t logo_rows, std::size_t logo_cols) {
	if (watermarked.empty() || watermarked.rows != watermarked.cols)
		fail_usage("watermarked image must be a non-empty square");
	const std::size_t order = watermarked.rows, r = known_last_rows.rows;
	if (r == 0)
		fail_usage("nothing embedded: zero known rows");
	if (known_last_rows.cols != order || 2 * r >= order)
		fail_usage("known rows must be r x N with r < N/2");
	if (logo_rows * logo_cols != r * order)
		fail_usage("logo dims disagree with the known row count");
	if (alpha == 1.0)
		fail_usage("alpha = 1 leaves no payload trace outside the restored rows");

	// the restored rows are readable from the watermarked image itself; a
	// mismatch against the caller's copy means the file was altered
	Matrix tail = submatrix(watermarked, order - r, 0, r, order);
	double mismatch = fro_norm(sub(tail, known_last_rows));
	double known_scale = fro_norm(known_last_rows);
	if (mismatch > kTamperRelTol * (known_scale > 0.0 ? known_scale : 1.0))
		fail_tamper("known rows disagree with the watermarked image (relative mismatch " +
		            std::to_string(mismatch / (known_scale > 0.0 ? known_scale : 1.0)) + ")");

	NptOperator op = npt_operator(order, alpha);
	Matrix phi = npt_inverse_matrix(op);
	PsiPartition part = partition_psi(op.psi, r);
	const std::size_t t = order - r;
	Matrix aop = submatrix(watermarked, 0, 0, t, order);
	Matrix w = matmul(aop, phi); // = psi11 * S1 + psi12 * p1

	NullProjector proj = build_null_projector(part);
	Matrix lt = transpose(proj.l);
	Matrix b = matmul(lt, part.psi11); // (N-2r) x (N-r), kills the p1 term
	Matrix c = matmul(lt, w);
	MinNorm mn = min_norm_solve(b, c); // per-column family s0 + K z

	// pin the r free values per column: the (r+1)-th differences of the
	// assembled column [s; known] must vanish on the r windows that straddle
	// the seam between recovered and known rows
	std::vector<double> coeff(r + 2);
	{
		double sign = 1.0;
		double binom = 1.0;
		for (std::size_t k2 = 0; k2 <= r + 1; ++k2) {
			coeff[k2] = sign * binom;
			sign = -sign;
			binom = binom * static_cast<double>(r + 1 - k2) / static_cast<double>(k2 + 1);
		}
	}
	Matrix g(r, r);
	Matrix grhs(r, order);
	for (std::size_t wrow = 0; wrow < r; ++wrow) {
		const std::size_t start = t - r - 1 + wrow; // window rows start..start+r+1
		for (std::size_t jz = 0; jz < r; ++jz) {
			double s = 0.0;
			for (std::size_t k2 = 0; k2 <= r + 1; ++k2) {
				std::size_t gi = start + k2;
				if (gi < t)
					s += coeff[k2] * mn.null_basis(gi, jz);
			}
			g(wrow, jz) = s;
		}
		for (std::size_t col = 0; col < order; ++col) {
			double s = 0.0;
			for (std::size_t k2 = 0; k2 <= r + 1; ++k2) {
				std::size_t gi = start + k2;
				double v = gi < t ? mn.x(gi, col) : known_last_rows(gi - t, col);
				s += coeff[k2] * v;
			}
			grhs(wrow, col) = -s;
		}
	}
	Matrix z = solve_square(g, grhs);
	Matrix s1 = add(mn.x, matmul(mn.null_basis, z));

	Matrix rhs = sub(w, matmul(part.psi11, s1));
	double abs_res = 0.0;
	Matrix p1 = lsq_solve(part.psi12, rhs, &abs_res);

	ExtractionReport rep;
	rep.mode = ExtractionReport::Mode::quasi_blind;
	// the projector step makes the remaining system consistent by construction,
	// so this residual reflects only conditioning, not payload integrity
	rep.solver_residual = relative_residual(abs_res, w);
	rep.logo = unreshape_logo(p1, logo_rows, logo_cols);
	rep.recovered_host_region = s1;
	fill_integrity(rep, tail, known_last_rows);
	return rep;
}

DetectedRegion estimate_logo_size(const Matrix& watermarked, const Matrix& host) {
	check_pair(watermarked, host);
	const std::size_t order = host.rows;
	std::vector<char> eq(order * order);
	for (std::size_t i = 0; i < order * order; ++i)
		eq[i] = watermarked.a[i] == host.a[i];

	std::size_t tail_rows = 0;
	for (std::size_t i = order; i-- > 0;) {
		bool full = true;
		for (std::size_t j = 0; j < order; ++j)
			if (!eq[i * order + j]) {
				full = false;
				break;
			}
		if (!full)
			break;
		++tail_rows;
	}
	DetectedRegion out;
	if (tail_rows > 0 && tail_rows < order) {
		out.bottom_rows = true;
		out.r = tail_rows;
		out.row = order - tail_rows;
		out.col = 0;
		out.height = tail_rows;
		out.width = order;
		return out;
	}

	// largest all-equal rectangle via the histogram-of-heights scan
	std::vector<std::size_t> height(order, 0);
	std::size_t best_area = 0;
	for (std::size_t i = 0; i < order; ++i) {
		for (std::size_t j = 0; j < order; ++j)
			height[j] = eq[i * order + j] ? height[j] + 1 : 0;
		std::vector<std::size_t> stack;
		for (std::size_t j = 0; j <= order; ++j) {
			std::size_t h = j < order ? height[j] : 0;
			while (!stack.empty() && height[stack.back()] >= h) {
				std::size_t hh = height[stack.back()];
				stack.pop_back();
				std::size_t left = stack.empty() ? 0 : stack.back() + 1;
				std::size_t area = hh * (j - left);
				if (area > best_area) {
					best_area = area;
					out.row = i + 1 - hh;
					out.col = left;
					out.height = hh;
					out.width = j - left;
				}
			}
			stack.push_back(j);
		}
	}
	if (best_area == 0)
		fail_numerical("detection failure: no exactly matching region (image likely attacked)");
	return out;
}

} // namespace npt
