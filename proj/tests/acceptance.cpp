// acceptance gate: one line per criterion, nonzero exit when any fails
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "npt/attacks.hpp"
#include "npt/embed.hpp"
#include "npt/extract.hpp"
#include "npt/face.hpp"
#include "npt/matrix.hpp"
#include "npt/metrics.hpp"
#include "npt/pgm_io.hpp"
#include "npt/transforms.hpp"

#include "testutil.hpp"

using namespace npt;

namespace {

int failures = 0;

double now_s() {
	using clock = std::chrono::steady_clock;
	static const clock::time_point t0 = clock::now();
	return std::chrono::duration<double>(clock::now() - t0).count();
}

void report(int num, bool ok, const std::string& what, const std::string& detail) {
	std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", num, what.c_str(),
	            detail.c_str());
	if (!ok)
		++failures;
}

std::string fmtd(const char* spec, double v) {
	char buf[64];
	std::snprintf(buf, sizeof buf, spec, v);
	return buf;
}

Matrix uniform_image(std::size_t n, std::uint64_t seed) {
	std::mt19937_64 gen(seed);
	Matrix x(n, n);
	for (double& v : x.a)
		v = tu::urand(gen);
	return x;
}

double fro(const Matrix& x) {
	double s = 0.0;
	for (double v : x.a)
		s += v * v;
	return std::sqrt(s);
}

void criterion_involution() {
	double t0 = now_s();
	double worst = 0.0;
	for (std::size_t n : {2u, 4u, 8u, 16u, 64u, 128u, 256u}) {
		Matrix h = npt_operator_unchecked(n, 1.0).hartley;
		Matrix hh = tu::naive_matmul(h, h);
		worst = std::max(worst, max_abs(sub(hh, identity(n))));
	}
	double el = now_s() - t0;
	report(1, worst <= 1e-10 && el < 5.0, "Hartley matrix squares to the identity",
	       "worst " + fmtd("%.3g", worst) + ", " + fmtd("%.2f", el) + " s");
}

void criterion_round_trip() {
	double t0 = now_s();
	double worst = 0.0;
	std::uint64_t seed = 11;
	for (double alpha : {0.8, 0.9, 0.991}) {
		NptOperator op = npt_operator(128, alpha);
		Matrix x = uniform_image(128, seed++);
		Matrix back = npt_inverse_direct(op, npt_forward(op, x));
		worst = std::max(worst, fro(sub(back, x)) / fro(x));
	}
	double el = now_s() - t0;
	report(2, worst <= 1e-8 && el < 5.0, "forward transform then direct inverse round-trips",
	       "worst rel " + fmtd("%.3g", worst) + ", " + fmtd("%.2f", el) + " s");
}

void criterion_series() {
	double t0 = now_s();
	NptOperator op = npt_operator(128, 0.991);
	Matrix x = uniform_image(128, 29);
	Matrix fwd = npt_forward(op, x);
	Matrix direct = npt_inverse_direct(op, fwd);
	SeriesResult sr = npt_inverse_series(op, fwd, 1e-12, 200);
	double diff = max_abs(sub(sr.image, direct));
	double el = now_s() - t0;
	report(3, diff <= 1e-10 && sr.iterations_used <= 10 && el < 2.0,
	       "series inverse matches the direct inverse quickly",
	       "diff " + fmtd("%.3g", diff) + ", " + std::to_string(sr.iterations_used) +
	           " terms, " + fmtd("%.2f", el) + " s");
}

double g_measured_psnr = 0.0;

void criterion_camera_experiment() {
	double t0 = now_s();
	bool ok = true;
	std::string detail;
	for (std::uint64_t seed : {42ull, 43ull}) {
		Matrix host = tu::quantize_8bit(tu::camera_like(256, seed));
		Matrix logo = tu::quantize_8bit(tu::logo_pattern(32, 32, seed + 100));
		EmbedResult emb = embed_bottom(host, logo, 0.991);
		ExtractionReport rep =
		    extract_nonblind_bottom(emb.watermarked, host, 0.991, emb.placement);
		double nc = ncorr(logo, rep.logo);
		double ps = psnr(host, emb.watermarked);
		if (seed == 42)
			g_measured_psnr = ps;
		if (std::fabs(nc - 1.0) > 1e-6 || ps < 30.0 || ps > 45.0)
			ok = false;
		detail += fmtd("ncorr %.8f ", nc) + fmtd("psnr %.2f; ", ps);
	}
	double el = now_s() - t0;
	report(4, ok && el < 30.0,
	       "256x256 hosts with 32x32 bottom logos extract perfectly at alpha 0.991",
	       detail + fmtd("%.2f", el) + " s");
}

void criterion_psnr_prediction() {
	double pred = 20.0 * std::log10(0.991 / (1.0 - 0.991));
	bool formula_ok = std::fabs(pred - 40.84) <= 0.01;
	bool range_ok = std::fabs(g_measured_psnr - pred) <= 10.0;
	report(5, formula_ok && range_ok, "transparency prediction 20*log10(a/(1-a)) holds",
	       "predicted " + fmtd("%.4f", pred) + " dB, measured " +
	           fmtd("%.2f", g_measured_psnr) + " dB");
}

void criterion_quasi_blind() {
	double t0 = now_s();
	bool ok = true;
	std::string detail;
	for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
		Matrix host = tu::quasi_host(64, seed);
		Matrix logo = tu::logo_pattern(16, 8, seed + 40);
		EmbedResult emb = embed_bottom(host, logo, 0.991);
		Matrix known = submatrix(host, 62, 0, 2, 64);
		ExtractionReport rep =
		    extract_quasiblind_bottom(emb.watermarked, known, 0.991, 16, 8);
		double nc = ncorr(logo, rep.logo);
		double ps = psnr(submatrix(host, 0, 0, 62, 64), rep.recovered_host_region);
		if (nc < 0.99 || ps < 35.0)
			ok = false;
		detail += fmtd("ncorr %.4f ", nc) + fmtd("psnr %.1f; ", ps);
	}
	NptOperator op = npt_operator(64, 0.991);
	PsiPartition part = partition_psi(op.psi, 2);
	NullProjector proj = build_null_projector(part);
	double annihilation = max_abs(matmul(transpose(proj.l), part.psi12));
	double ortho = max_abs(sub(matmul(transpose(proj.l), proj.l), identity(60)));
	bool proj_ok = annihilation <= 1e-9 && proj.l.cols == 60 && ortho <= 1e-10;
	double el = now_s() - t0;
	report(6, ok && proj_ok && el < 10.0,
	       "quasi-blind recovery succeeds and the projector has the stated rank",
	       detail + "annihilation " + fmtd("%.2g", annihilation) + ", " + fmtd("%.2f", el) +
	           " s");
}

void criterion_oracle_equivalence() {
	double t0 = now_s();
	double worst = 0.0;
	int instances = 0;

	for (int t = 0; t < 10; ++t) {
		const std::size_t n = 32;
		const double alpha = t % 2 ? 0.991 : 0.9;
		const std::size_t lr = t % 2 ? 16 : 8, lc = t % 2 ? 8 : 4;
		Matrix host = tu::smooth_host(n, 1000 + t);
		Matrix logo = tu::logo_pattern(lr, lc, 2000 + t);
		EmbedResult emb = embed_bottom(host, logo, alpha);
		const std::size_t r = emb.placement.r;
		std::vector<std::pair<std::size_t, std::size_t>> cells;
		for (std::size_t u = 0; u < r; ++u)
			for (std::size_t v = 0; v < n; ++v)
				cells.emplace_back(n - r + u, v);
		std::vector<double> want =
		    tu::oracle_extract_cells(emb.watermarked, host, alpha, cells);
		ExtractionReport rep =
		    extract_nonblind_bottom(emb.watermarked, host, alpha, emb.placement);
		for (std::size_t k = 0; k < cells.size(); ++k)
			worst = std::max(worst, std::fabs(want[k] - rep.logo(k / lc, k % lc)));
		++instances;
	}

	for (int t = 0; t < 10; ++t) {
		const std::size_t n = 32;
		const std::size_t m = t % 2 ? 8 : 4;
		const double alpha = t % 3 == 0 ? 0.8 : 0.991;
		const std::size_t r0 = t % (n - m), c0 = (3 * t) % (n - m);
		Matrix host = tu::smooth_host(n, 3000 + t);
		Matrix block = tu::logo_pattern(m, m, 4000 + t);
		EmbedResult emb = embed_block_at(host, block, alpha, r0, c0, PlacementKind::optimum);
		std::vector<std::pair<std::size_t, std::size_t>> cells;
		for (std::size_t u = 0; u < m; ++u)
			for (std::size_t v = 0; v < m; ++v)
				cells.emplace_back(r0 + u, c0 + v);
		std::vector<double> want =
		    tu::oracle_extract_cells(emb.watermarked, host, alpha, cells);
		ExtractionReport rep =
		    extract_nonblind_block(emb.watermarked, host, alpha, emb.placement);
		for (std::size_t k = 0; k < cells.size(); ++k)
			worst = std::max(worst, std::fabs(want[k] - rep.logo(k / m, k % m)));
		++instances;
	}

	double el = now_s() - t0;
	report(7, worst <= 1e-8 && instances >= 20 && el < 60.0,
	       "both extractors match the dense least-squares oracle",
	       std::to_string(instances) + " instances, worst " + fmtd("%.3g", worst) + ", " +
	           fmtd("%.2f", el) + " s");
}

void criterion_robustness() {
	double t0 = now_s();
	const double alpha = 0.96;

	// noise: per-trial ncorr must not rise with sigma, small violation budget
	const std::vector<double> sigmas = {0.0, 0.01, 0.05};
	int violations = 0;
	std::vector<double> means(3, 0.0);
	const int trials = 30;
	for (int t = 0; t < trials; ++t) {
		Matrix host = tu::margin_host(128, 20 + t);
		Matrix logo = tu::logo_pattern(16, 16, 120 + t);
		EmbedResult emb = embed_bottom(host, logo, alpha);
		std::vector<double> nc(3);
		for (std::size_t s = 0; s < sigmas.size(); ++s) {
			Matrix attacked = sigmas[s] == 0.0
			                      ? emb.watermarked
			                      : attack_noise(emb.watermarked, sigmas[s], 777 + t);
			ExtractionReport rep =
			    extract_nonblind_bottom(attacked, host, alpha, emb.placement);
			nc[s] = ncorr(logo, rep.logo);
			means[s] += nc[s] / trials;
		}
		if (nc[1] > nc[0] + 1e-9)
			++violations;
		if (nc[2] > nc[1] + 1e-9)
			++violations;
	}
	bool noise_ok = violations <= 2 && means[0] >= means[1] && means[1] >= means[2];

	// 5% corner crop away from a top-left block payload
	double crop_min = 1.0;
	for (int t = 0; t < 10; ++t) {
		Matrix host = tu::margin_host(128, 50 + t);
		Matrix block = tu::logo_pattern(16, 16, 150 + t);
		EmbedResult emb = embed_topleft(host, block, alpha);
		AttackSpec spec;
		spec.kind = AttackSpec::Kind::crop;
		spec.area_fraction = 0.05;
		spec.fill = CropFill::mean;
		Matrix attacked = apply_attack(emb.watermarked, spec);
		ExtractionReport rep =
		    extract_nonblind_block(attacked, host, alpha, emb.placement);
		crop_min = std::min(crop_min, ncorr(block, rep.logo));
	}

	// mild block-cosine compression of a bottom payload
	double comp_min = 1.0;
	for (int t = 0; t < 10; ++t) {
		Matrix host = tu::margin_host(128, 70 + t);
		Matrix logo = tu::logo_pattern(16, 16, 170 + t);
		EmbedResult emb = embed_bottom(host, logo, alpha);
		Matrix attacked = attack_compress(emb.watermarked, 90);
		ExtractionReport rep =
		    extract_nonblind_bottom(attacked, host, alpha, emb.placement);
		comp_min = std::min(comp_min, ncorr(logo, rep.logo));
	}

	double el = now_s() - t0;
	report(8,
	       noise_ok && crop_min >= 0.9 && comp_min >= 0.95 && el < 120.0,
	       "recovery degrades gracefully under noise, corner crop, and compression",
	       "noise means " + fmtd("%.4f/", means[0]) + fmtd("%.4f/", means[1]) +
	           fmtd("%.4f", means[2]) + " violations " + std::to_string(violations) +
	           ", crop min " + fmtd("%.4f", crop_min) + ", compress min " +
	           fmtd("%.4f", comp_min) + ", " + fmtd("%.1f", el) + " s");
}

void criterion_face() {
	double t0 = now_s();

	tu::Gauss rng(900);
	std::vector<Matrix> ids;
	for (int i = 0; i < 3; ++i)
		ids.push_back(tu::face_identity(rng));
	Gallery g;
	g.corner = 8;
	for (int i = 0; i < 3; ++i)
		g.entries.push_back({"id" + std::to_string(i), extract_features(ids[i], 8)});
	MatchResult m = match_face(extract_features(ids[1], 8), g);
	bool self_ok = m.distance == 0.0 && m.label == "id1";

	// the test set carries the same images as the trainee set
	std::vector<LabeledImage> data;
	std::set<std::string> dup_ids;
	tu::Gauss rng2(901);
	for (int i = 0; i < 4; ++i) {
		LabeledImage item;
		item.id = "img" + std::to_string(i) + "_t";
		item.label = "p" + std::to_string(i / 2);
		item.image = tu::face_identity(rng2);
		LabeledImage twin = item;
		twin.id = "img" + std::to_string(i) + "_q";
		data.push_back(std::move(item));
		data.push_back(std::move(twin));
		dup_ids.insert("img" + std::to_string(i) + "_q");
	}
	auto acc = evaluate_split(data, dup_ids, {4, 8, 16, 64});
	bool resub_ok = true;
	for (const auto& [s, v] : acc)
		if (v != 1.0)
			resub_ok = false;

	CountedTransform ct = dht_apply_2d_counted(tu::smooth_host(64, 3));
	const std::uint64_t n = 64;
	bool count_ok = ct.mults == 2 * n * n * n && ct.adds == 2 * n * n * (n - 1) &&
	                max_abs(sub(ct.data, dht_apply_2d(tu::smooth_host(64, 3)))) <= 1e-12;

	double texp0 = now_s();
	std::vector<double> mean_acc(3, 0.0);
	const std::vector<std::size_t> sizes = {4, 8, 16};
	for (int rep = 0; rep < 10; ++rep) {
		tu::Gauss frng(4000 + rep);
		std::vector<LabeledImage> exp_data;
		std::set<std::string> test_ids;
		for (int p = 0; p < 10; ++p) {
			Matrix identity_img = tu::face_identity(frng);
			LabeledImage train;
			train.id = "p" + std::to_string(p) + "_train";
			train.label = "p" + std::to_string(p);
			train.image = identity_img;
			exp_data.push_back(std::move(train));
			LabeledImage query;
			query.id = "p" + std::to_string(p) + "_query";
			query.label = "p" + std::to_string(p);
			query.image = tu::face_disturb(identity_img, frng, 0.10, 0.03);
			exp_data.push_back(std::move(query));
			test_ids.insert("p" + std::to_string(p) + "_query");
		}
		auto a = evaluate_split(exp_data, test_ids, sizes);
		for (std::size_t s = 0; s < sizes.size(); ++s)
			mean_acc[s] += a.at(sizes[s]) / 10.0;
	}
	double texp = now_s() - texp0;
	bool exp_ok = mean_acc[0] <= mean_acc[1] + 1e-12 && mean_acc[1] <= mean_acc[2] + 1e-12 &&
	              mean_acc[2] >= 0.9 && texp < 30.0;

	double el = now_s() - t0;
	report(9, self_ok && resub_ok && count_ok && exp_ok,
	       "face matching is exact on enrollees and scales with feature size",
	       "self distance " + fmtd("%.1g", m.distance) + ", experiment means " +
	           fmtd("%.2f/", mean_acc[0]) + fmtd("%.2f/", mean_acc[1]) +
	           fmtd("%.2f", mean_acc[2]) + ", " + fmtd("%.1f", el) + " s");
}

void criterion_cli_determinism() {
	if (tu::cli_binary().empty()) {
		report(10, false, "command-line runs are byte-for-byte reproducible",
		       "NPTWM_BIN not set");
		return;
	}
	tu::TempDir dir;
	std::string host = dir.file("host.pgm"), logo = dir.file("logo.pgm");
	save_gray_pgm(tu::margin_host(64, 31), host);
	save_gray_pgm(tu::logo_pattern(8, 8, 32), logo);

	bool ok = true;
	auto twice = [&](const std::string& args_tpl, const std::string& f1,
	                 const std::string& f2) {
		std::string a1 = args_tpl, a2 = args_tpl;
		a1.replace(a1.find("%OUT"), 4, f1);
		a2.replace(a2.find("%OUT"), 4, f2);
		if (tu::run_cli(a1) != 0 || tu::run_cli(a2) != 0)
			ok = false;
		else if (tu::read_file(f1) != tu::read_file(f2) || tu::read_file(f1).empty())
			ok = false;
	};

	twice("embed --host " + host + " --logo " + logo +
	          " --alpha 0.96 --placement optimum --stride 2 --out %OUT",
	      dir.file("w1.pgm"), dir.file("w2.pgm"));
	twice("embed --host " + host + " --logo " + logo +
	          " --alpha 0.991 --placement bottom --out %OUT",
	      dir.file("b1.pgm"), dir.file("b2.pgm"));
	twice("attack --in " + host + " --kind noise --sigma 0.03 --seed 12 --out %OUT",
	      dir.file("n1.pgm"), dir.file("n2.pgm"));
	twice("attack --in " + host + " --kind compress --quality 70 --out %OUT",
	      dir.file("c1.pgm"), dir.file("c2.pgm"));

	std::string cfg = dir.file("sweep.cfg");
	{
		std::ofstream out(cfg, std::ios::binary);
		out << "placement bottom\nplacement optimum\n"
		       "attack noise 0.01 3\nattack crop 0.05 mean\nattack compress 85\n";
	}
	twice("sweep --host " + host + " --logo " + logo + " --alpha 0.96 --config " + cfg +
	          " --out-csv %OUT",
	      dir.file("s1.csv"), dir.file("s2.csv"));

	report(10, ok, "command-line runs are byte-for-byte reproducible",
	       ok ? "embed, attack, and sweep outputs identical across reruns"
	          : "a rerun differed or a command failed");
}

} // namespace

int main() {
	criterion_involution();
	criterion_round_trip();
	criterion_series();
	criterion_camera_experiment();
	criterion_psnr_prediction();
	criterion_quasi_blind();
	criterion_oracle_equivalence();
	criterion_robustness();
	criterion_face();
	criterion_cli_determinism();
	if (failures)
		std::printf("%d criterion(s) failed\n", failures);
	else
		std::printf("all criteria satisfied\n");
	return failures;
}
