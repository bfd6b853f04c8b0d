#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "npt/attacks.hpp"
#include "npt/embed.hpp"
#include "npt/errors.hpp"
#include "npt/extract.hpp"
#include "npt/face.hpp"
#include "npt/metrics.hpp"
#include "npt/pgm_io.hpp"

namespace fs = std::filesystem;
using namespace npt;

namespace {

std::string fmt(const char* spec, double v) {
	char buf[64];
	std::snprintf(buf, sizeof buf, spec, v);
	return buf;
}

PlacementKind parse_placement(const std::string& name) {
	if (name == "bottom")
		return PlacementKind::bottom;
	if (name == "topleft")
		return PlacementKind::top_left;
	if (name == "optimum")
		return PlacementKind::optimum;
	fail_usage("unknown placement '" + name + "'");
}

std::size_t parse_size_field(const std::map<std::string, std::string>& kv,
                             const std::string& key, const std::string& path) {
	auto it = kv.find(key);
	if (it == kv.end())
		fail_usage(path + ": missing key '" + key + "'");
	try {
		return static_cast<std::size_t>(std::stoull(it->second));
	} catch (...) {
		fail_usage(path + ": bad value for '" + key + "'");
	}
}

struct EmbedArgs {
	std::string host, logo, placement, out, meta;
	double alpha = 0.0;
	std::size_t stride = 0;
};

void run_embed(const EmbedArgs& a) {
	Matrix host = load_gray(a.host);
	Matrix logo = load_gray(a.logo);
	PlacementKind pk = parse_placement(a.placement);
	EmbedResult emb;
	if (pk == PlacementKind::bottom) {
		emb = embed_bottom(host, logo, a.alpha);
	} else {
		Matrix block = squarify_logo(logo);
		std::size_t stride = a.stride ? a.stride : default_stride(host.rows);
		emb = pk == PlacementKind::top_left ? embed_topleft(host, block, a.alpha)
		                                    : embed_optimum(host, block, a.alpha, stride);
	}
	save_gray_pgm(emb.watermarked, a.out);
	if (!a.meta.empty()) {
		std::vector<std::pair<std::string, std::string>> kv;
		kv.emplace_back("placement", a.placement);
		kv.emplace_back("alpha", fmt("%.17g", a.alpha));
		kv.emplace_back("order", std::to_string(host.rows));
		kv.emplace_back("logo_rows", std::to_string(logo.rows));
		kv.emplace_back("logo_cols", std::to_string(logo.cols));
		if (pk == PlacementKind::bottom) {
			kv.emplace_back("r", std::to_string(emb.placement.r));
		} else {
			kv.emplace_back("block", std::to_string(emb.placement.block));
			kv.emplace_back("offset_row", std::to_string(emb.placement.offset_row));
			kv.emplace_back("offset_col", std::to_string(emb.placement.offset_col));
		}
		kv.emplace_back("host_digest", digest_hex(image_digest(host)));
		write_kv_file(a.meta, kv);
	}
}

struct ExtractArgs {
	std::string watermarked, mode, host, known_rows, meta, out_logo, out_host, report;
	std::string placement;
	double alpha = 0.0;
	std::optional<std::size_t> logo_rows, logo_cols, offset_row, offset_col;
};

void run_extract(const ExtractArgs& a) {
	Matrix wm = load_gray(a.watermarked);
	const std::size_t order = wm.rows;

	std::string placement = a.placement;
	std::optional<std::size_t> logo_rows = a.logo_rows, logo_cols = a.logo_cols;
	std::optional<std::size_t> off_r = a.offset_row, off_c = a.offset_col;
	std::optional<std::string> meta_digest;
	if (!a.meta.empty()) {
		auto kv = read_kv_file(a.meta);
		if (placement.empty() && kv.count("placement"))
			placement = kv.at("placement");
		if (!logo_rows && kv.count("logo_rows"))
			logo_rows = parse_size_field(kv, "logo_rows", a.meta);
		if (!logo_cols && kv.count("logo_cols"))
			logo_cols = parse_size_field(kv, "logo_cols", a.meta);
		if (!off_r && kv.count("offset_row"))
			off_r = parse_size_field(kv, "offset_row", a.meta);
		if (!off_c && kv.count("offset_col"))
			off_c = parse_size_field(kv, "offset_col", a.meta);
		if (kv.count("host_digest"))
			meta_digest = kv.at("host_digest");
	}
	if (!logo_rows || !logo_cols)
		fail_usage("logo dimensions unknown: pass --meta or --logo-rows/--logo-cols");

	ExtractionReport rep;
	if (a.mode == "nonblind") {
		if (a.host.empty())
			fail_usage("non-blind extraction needs --host");
		if (placement.empty())
			fail_usage("placement unknown: pass --meta or --placement");
		Matrix host = load_gray(a.host);
		if (meta_digest && *meta_digest != digest_hex(image_digest(host)))
			fail_usage("supplied host does not match the digest recorded at embed time");
		PlacementKind pk = parse_placement(placement);
		Placement pl;
		pl.kind = pk;
		pl.logo_rows = *logo_rows;
		pl.logo_cols = *logo_cols;
		if (pk == PlacementKind::bottom) {
			const std::size_t count = *logo_rows * *logo_cols;
			if (order == 0 || count % order != 0)
				fail_usage("logo pixel count is not divisible by the host side");
			pl.r = count / order;
			rep = extract_nonblind_bottom(wm, host, a.alpha, pl);
		} else {
			pl.block = std::max(*logo_rows, *logo_cols);
			if (pk == PlacementKind::optimum) {
				if (!off_r || !off_c)
					fail_usage("optimum placement needs --offset-row/--offset-col or --meta");
				pl.offset_row = *off_r;
				pl.offset_col = *off_c;
			}
			rep = extract_nonblind_block(wm, host, a.alpha, pl);
		}
	} else if (a.mode == "quasiblind") {
		if (a.known_rows.empty())
			fail_usage("quasi-blind extraction needs --known-rows");
		Matrix known = load_gray(a.known_rows);
		rep = extract_quasiblind_bottom(wm, known, a.alpha, *logo_rows, *logo_cols);
		placement = "bottom";
	} else {
		fail_usage("mode must be nonblind or quasiblind");
	}

	save_gray_pgm(rep.logo, a.out_logo);
	if (!a.out_host.empty()) {
		if (rep.recovered_host_region.empty())
			fail_usage("--out-host applies to quasi-blind extraction only");
		save_gray_pgm(rep.recovered_host_region, a.out_host);
	}
	if (!a.report.empty()) {
		std::vector<std::pair<std::string, std::string>> kv;
		kv.emplace_back("mode", a.mode);
		kv.emplace_back("placement", placement);
		kv.emplace_back("alpha", fmt("%.17g", a.alpha));
		kv.emplace_back("logo_rows", std::to_string(*logo_rows));
		kv.emplace_back("logo_cols", std::to_string(*logo_cols));
		kv.emplace_back("ncorr", fmt("%.6f", rep.ncorr));
		kv.emplace_back("psnr_db", fmt("%.6f", rep.psnr_db));
		kv.emplace_back("solver_residual", fmt("%.6g", rep.solver_residual));
		kv.emplace_back("degenerate", rep.degenerate ? "1" : "0");
		write_kv_file(a.report, kv);
	}
}

struct AttackArgs {
	std::string in, kind, rect, fill = "zero", out;
	std::optional<double> sigma;
	std::optional<int> quality;
	std::uint64_t seed = 0;
};

void run_attack(const AttackArgs& a) {
	Matrix img = load_gray(a.in);
	Matrix out;
	if (a.kind == "noise") {
		if (!a.sigma)
			fail_usage("noise attack needs --sigma");
		if (!a.rect.empty() || a.quality)
			fail_usage("noise attack takes only --sigma and --seed");
		out = attack_noise(img, *a.sigma, a.seed);
	} else if (a.kind == "crop") {
		if (a.rect.empty())
			fail_usage("crop attack needs --rect r,c,h,w");
		if (a.sigma || a.quality)
			fail_usage("crop attack takes only --rect and --fill");
		Rect rect;
		unsigned long long r = 0, c = 0, h = 0, w = 0;
		if (std::sscanf(a.rect.c_str(), "%llu,%llu,%llu,%llu", &r, &c, &h, &w) != 4)
			fail_usage("--rect wants four comma-separated integers r,c,h,w");
		rect.row = r;
		rect.col = c;
		rect.height = h;
		rect.width = w;
		CropFill fill;
		if (a.fill == "zero")
			fill = CropFill::zero;
		else if (a.fill == "mean")
			fill = CropFill::mean;
		else
			fail_usage("--fill must be zero or mean");
		out = attack_crop(img, rect, fill);
	} else if (a.kind == "compress") {
		if (!a.quality)
			fail_usage("compress attack needs --quality");
		if (a.sigma || !a.rect.empty())
			fail_usage("compress attack takes only --quality");
		out = attack_compress(img, *a.quality);
	} else {
		fail_usage("attack kind must be noise, crop, or compress");
	}
	save_gray_pgm(out, a.out);
}

struct SweepArgs {
	std::string host, logo, config, out_csv;
	double alpha = 0.0;
};

void run_sweep(const SweepArgs& a) {
	Matrix host = load_gray(a.host);
	Matrix logo = load_gray(a.logo);
	std::ifstream cfg_in(a.config);
	if (!cfg_in)
		fail_usage("cannot open sweep config " + a.config);
	SweepConfig cfg = parse_sweep_config(cfg_in);
	std::vector<RobustnessRow> rows = robustness_sweep(host, logo, a.alpha, cfg);
	std::ostringstream csv;
	write_sweep_csv(csv, rows);
	write_text_file_atomic(a.out_csv, csv.str());
}

bool is_image_file(const fs::path& p) {
	std::string ext = p.extension().string();
	return ext == ".pgm" || ext == ".png";
}

struct EnrollArgs {
	std::string dir, gallery;
	std::size_t corner = 0;
};

void run_enroll(const EnrollArgs& a) {
	std::vector<fs::path> files;
	if (!fs::is_directory(a.dir))
		fail_usage(a.dir + " is not a directory");
	for (const auto& entry : fs::directory_iterator(a.dir))
		if (entry.is_regular_file() && is_image_file(entry.path()))
			files.push_back(entry.path());
	if (files.empty())
		fail_usage("no .pgm or .png images in " + a.dir);
	std::sort(files.begin(), files.end());
	Gallery g;
	g.corner = a.corner;
	for (const fs::path& f : files) {
		Matrix img = preprocess_face(load_gray(f.string()));
		g.entries.push_back({f.stem().string(), extract_features(img, a.corner)});
	}
	save_gallery(g, a.gallery);
}

struct MatchArgs {
	std::string image, gallery;
};

void run_match(const MatchArgs& a) {
	Gallery g = load_gallery(a.gallery);
	Matrix img = preprocess_face(load_gray(a.image));
	MatchResult m = match_face(extract_features(img, g.corner), g);
	std::printf("label=%s\ndistance=%.6g\n", m.label.c_str(), m.distance);
}

struct EvalArgs {
	std::string dir, split, sizes;
};

void run_eval(const EvalArgs& a) {
	std::ifstream split_in(a.split);
	if (!split_in)
		fail_usage("cannot open split file " + a.split);
	std::vector<LabeledImage> data;
	std::set<std::string> test_ids;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(split_in, line)) {
		++lineno;
		if (line.empty() || line[0] == '#')
			continue;
		std::istringstream ls(line);
		std::string fname, role;
		if (!(ls >> fname >> role) || (role != "train" && role != "test"))
			fail_usage(a.split + " line " + std::to_string(lineno) +
			           ": want '<file> train|test'");
		LabeledImage item;
		item.id = fname;
		std::string stem = fs::path(fname).stem().string();
		item.label = stem.substr(0, stem.find('_'));
		item.image = load_gray((fs::path(a.dir) / fname).string());
		data.push_back(std::move(item));
		if (role == "test")
			test_ids.insert(fname);
	}
	std::vector<std::size_t> sizes;
	std::istringstream ss(a.sizes);
	std::string tok;
	while (std::getline(ss, tok, ','))
		if (!tok.empty())
			sizes.push_back(static_cast<std::size_t>(std::stoull(tok)));
	if (sizes.empty())
		fail_usage("--sizes wants a comma-separated list of corner sizes");
	auto acc = evaluate_split(data, test_ids, sizes);
	for (const auto& [s, v] : acc)
		std::printf("s=%zu accuracy=%.6f\n", s, v);
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"NPT grayscale watermarking and Hartley-feature face recognition"};
	app.require_subcommand(1);

	EmbedArgs ea;
	CLI::App* embed = app.add_subcommand("embed", "hide a logo in a host image");
	embed->add_option("--host", ea.host)->required();
	embed->add_option("--logo", ea.logo)->required();
	embed->add_option("--alpha", ea.alpha)->required();
	embed->add_option("--placement", ea.placement)->required();
	embed->add_option("--stride", ea.stride);
	embed->add_option("--out", ea.out)->required();
	embed->add_option("--meta", ea.meta);
	embed->callback([&] { run_embed(ea); });

	ExtractArgs xa;
	CLI::App* extract = app.add_subcommand("extract", "recover the hidden logo");
	extract->add_option("--watermarked", xa.watermarked)->required();
	extract->add_option("--alpha", xa.alpha)->required();
	extract->add_option("--mode", xa.mode)->required();
	extract->add_option("--host", xa.host);
	extract->add_option("--known-rows", xa.known_rows);
	extract->add_option("--meta", xa.meta);
	extract->add_option("--placement", xa.placement);
	extract->add_option("--logo-rows", xa.logo_rows);
	extract->add_option("--logo-cols", xa.logo_cols);
	extract->add_option("--offset-row", xa.offset_row);
	extract->add_option("--offset-col", xa.offset_col);
	extract->add_option("--out-logo", xa.out_logo)->required();
	extract->add_option("--out-host", xa.out_host);
	extract->add_option("--report", xa.report);
	extract->callback([&] { run_extract(xa); });

	AttackArgs aa;
	CLI::App* attack = app.add_subcommand("attack", "degrade an image");
	attack->add_option("--in", aa.in)->required();
	attack->add_option("--kind", aa.kind)->required();
	attack->add_option("--sigma", aa.sigma);
	attack->add_option("--rect", aa.rect);
	attack->add_option("--fill", aa.fill);
	attack->add_option("--quality", aa.quality);
	attack->add_option("--seed", aa.seed);
	attack->add_option("--out", aa.out)->required();
	attack->callback([&] { run_attack(aa); });

	SweepArgs sa;
	CLI::App* sweep = app.add_subcommand("sweep", "robustness table over placements and attacks");
	sweep->add_option("--host", sa.host)->required();
	sweep->add_option("--logo", sa.logo)->required();
	sweep->add_option("--alpha", sa.alpha)->required();
	sweep->add_option("--config", sa.config)->required();
	sweep->add_option("--out-csv", sa.out_csv)->required();
	sweep->callback([&] { run_sweep(sa); });

	CLI::App* rec = app.add_subcommand("recognize", "transform-domain face recognition");
	rec->require_subcommand(1);

	EnrollArgs ra;
	CLI::App* enroll = rec->add_subcommand("enroll", "build a gallery from a directory");
	enroll->add_option("--dir", ra.dir)->required();
	enroll->add_option("--corner-size", ra.corner)->required();
	enroll->add_option("--gallery", ra.gallery)->required();
	enroll->callback([&] { run_enroll(ra); });

	MatchArgs ma;
	CLI::App* match = rec->add_subcommand("match", "match one image against a gallery");
	match->add_option("--image", ma.image)->required();
	match->add_option("--gallery", ma.gallery)->required();
	match->callback([&] { run_match(ma); });

	EvalArgs va;
	CLI::App* eval = rec->add_subcommand("eval", "accuracy over a train/test split");
	eval->add_option("--dir", va.dir)->required();
	eval->add_option("--split", va.split)->required();
	eval->add_option("--sizes", va.sizes)->required();
	eval->callback([&] { run_eval(va); });

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		int rc = app.exit(e);
		// CLI11 exit codes vary by error class; the contract wants plain 2
		return rc == 0 ? 0 : 2;
	} catch (const error& e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return static_cast<int>(e.code);
	} catch (const std::exception& e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return 3;
	}
	return 0;
}
