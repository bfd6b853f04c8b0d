#include "npt/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "npt/errors.hpp"
#include "npt/extract.hpp"
#include "npt/metrics.hpp"

namespace npt {

namespace {

double clamp01(double v) {
	return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

// 53-bit uniform in [0,1)
double uniform53(std::mt19937_64& gen) {
	return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

Matrix attack_noise(const Matrix& img, double sigma, std::uint64_t seed) {
	if (sigma < 0.0)
		fail_usage("noise sigma must be non-negative");
	if (sigma == 0.0)
		return img;
	std::mt19937_64 gen(seed);
	Matrix out = img;
	double spare = 0.0;
	bool have_spare = false;
	for (double& v : out.a) {
		double z;
		if (have_spare) {
			z = spare;
			have_spare = false;
		} else {
			double u1 = 1.0 - uniform53(gen); // (0,1], keeps the log finite
			double u2 = uniform53(gen);
			double rad = std::sqrt(-2.0 * std::log(u1));
			double ang = 2.0 * std::numbers::pi * u2;
			z = rad * std::cos(ang);
			spare = rad * std::sin(ang);
			have_spare = true;
		}
		v = clamp01(v + sigma * z);
	}
	return out;
}

Matrix attack_crop(const Matrix& img, const Rect& rect, CropFill fill) {
	if (rect.row + rect.height > img.rows || rect.col + rect.width > img.cols)
		fail_usage("crop rectangle is out of bounds");
	Matrix out = img;
	if (rect.height == 0 || rect.width == 0)
		return out;
	double value = 0.0;
	if (fill == CropFill::mean) {
		for (double v : img.a)
			value += v;
		value /= static_cast<double>(img.a.size());
	}
	for (std::size_t i = 0; i < rect.height; ++i)
		for (std::size_t j = 0; j < rect.width; ++j)
			out(rect.row + i, rect.col + j) = value;
	return out;
}

namespace {

// 8x8 orthonormal cosine transform matrix
const double* dct8() {
	static double d[64];
	static bool ready = false;
	if (!ready) {
		for (int k = 0; k < 8; ++k) {
			double c = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
			for (int j = 0; j < 8; ++j)
				d[k * 8 + j] = c * std::cos((2 * j + 1) * k * std::numbers::pi / 16.0);
		}
		ready = true;
	}
	return d;
}

} // namespace

Matrix attack_compress(const Matrix& img, int quality) {
	if (quality < 1 || quality > 100)
		fail_usage("compression quality must lie in 1..100");
	const std::size_t rows = img.rows, cols = img.cols;
	const std::size_t prows = (rows + 7) / 8 * 8, pcols = (cols + 7) / 8 * 8;
	Matrix padded(prows, pcols);
	for (std::size_t i = 0; i < prows; ++i) {
		std::size_t si = i < rows ? i : 2 * rows - 1 - i; // mirror with edge repeat
		for (std::size_t j = 0; j < pcols; ++j) {
			std::size_t sj = j < cols ? j : 2 * cols - 1 - j;
			padded(i, j) = img(si, sj);
		}
	}
	const double* d = dct8();
	const double step = static_cast<double>(101 - quality) / 1024.0;
	Matrix out(rows, cols);
	double blk[64], tmp[64];
	for (std::size_t bi = 0; bi < prows; bi += 8) {
		for (std::size_t bj = 0; bj < pcols; bj += 8) {
			// forward: D * B * D^T
			for (int i = 0; i < 8; ++i)
				for (int j = 0; j < 8; ++j) {
					double s = 0.0;
					for (int k = 0; k < 8; ++k)
						s += d[i * 8 + k] * padded(bi + k, bj + j);
					tmp[i * 8 + j] = s;
				}
			for (int i = 0; i < 8; ++i)
				for (int j = 0; j < 8; ++j) {
					double s = 0.0;
					for (int k = 0; k < 8; ++k)
						s += tmp[i * 8 + k] * d[j * 8 + k];
					// uniform quantizer, round half away from zero
					blk[i * 8 + j] = std::round(s / step) * step;
				}
			// inverse: D^T * C * D
			for (int i = 0; i < 8; ++i)
				for (int j = 0; j < 8; ++j) {
					double s = 0.0;
					for (int k = 0; k < 8; ++k)
						s += d[k * 8 + i] * blk[k * 8 + j];
					tmp[i * 8 + j] = s;
				}
			for (int i = 0; i < 8; ++i)
				for (int j = 0; j < 8; ++j) {
					if (bi + i >= rows || bj + j >= cols)
						continue;
					double s = 0.0;
					for (int k = 0; k < 8; ++k)
						s += tmp[i * 8 + k] * d[k * 8 + j];
					out(bi + i, bj + j) = clamp01(s);
				}
		}
	}
	return out;
}

Matrix apply_attack(const Matrix& img, const AttackSpec& spec) {
	switch (spec.kind) {
	case AttackSpec::Kind::none:
		return img;
	case AttackSpec::Kind::gaussian_noise:
		return attack_noise(img, spec.sigma, spec.seed);
	case AttackSpec::Kind::crop: {
		if (spec.area_fraction < 0.0 || spec.area_fraction > 1.0)
			fail_usage("crop fraction must lie in [0,1]");
		std::size_t side = static_cast<std::size_t>(
		    std::lround(std::sqrt(spec.area_fraction) * static_cast<double>(img.rows)));
		side = std::min(side, std::min(img.rows, img.cols));
		Rect rect{img.rows - side, img.cols - side, side, side};
		return attack_crop(img, rect, spec.fill);
	}
	case AttackSpec::Kind::compress:
		return attack_compress(img, spec.quality);
	}
	fail_usage("unknown attack kind");
}

const char* placement_name(PlacementKind kind) {
	switch (kind) {
	case PlacementKind::bottom:
		return "bottom";
	case PlacementKind::top_left:
		return "topleft";
	case PlacementKind::optimum:
		return "optimum";
	}
	return "?";
}

SweepConfig parse_sweep_config(std::istream& in) {
	SweepConfig cfg;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		std::size_t hash = line.find('#');
		if (hash != std::string::npos)
			line.resize(hash);
		std::istringstream ls(line);
		std::string word;
		if (!(ls >> word))
			continue;
		auto bad = [&](const std::string& why) {
			fail_usage("sweep config line " + std::to_string(lineno) + ": " + why);
		};
		if (word == "placement") {
			std::string name;
			if (!(ls >> name))
				bad("missing placement name");
			if (name == "bottom")
				cfg.placements.push_back(PlacementKind::bottom);
			else if (name == "topleft")
				cfg.placements.push_back(PlacementKind::top_left);
			else if (name == "optimum")
				cfg.placements.push_back(PlacementKind::optimum);
			else
				bad("unknown placement '" + name + "'");
		} else if (word == "attack") {
			std::string kind;
			if (!(ls >> kind))
				bad("missing attack kind");
			AttackSpec spec;
			if (kind == "none") {
				spec.kind = AttackSpec::Kind::none;
			} else if (kind == "noise") {
				spec.kind = AttackSpec::Kind::gaussian_noise;
				if (!(ls >> spec.sigma))
					bad("noise needs a sigma");
				std::uint64_t seed;
				if (ls >> seed)
					spec.seed = seed;
			} else if (kind == "crop") {
				spec.kind = AttackSpec::Kind::crop;
				if (!(ls >> spec.area_fraction))
					bad("crop needs an area fraction");
				std::string fill;
				if (ls >> fill) {
					if (fill == "zero")
						spec.fill = CropFill::zero;
					else if (fill == "mean")
						spec.fill = CropFill::mean;
					else
						bad("crop fill must be zero or mean");
				}
			} else if (kind == "compress") {
				spec.kind = AttackSpec::Kind::compress;
				if (!(ls >> spec.quality))
					bad("compress needs a quality");
			} else {
				bad("unknown attack '" + kind + "'");
			}
			cfg.attacks.push_back(spec);
		} else if (word == "stride") {
			if (!(ls >> cfg.stride) || cfg.stride == 0)
				bad("stride needs a positive integer");
		} else {
			bad("unknown directive '" + word + "'");
		}
	}
	if (cfg.placements.empty())
		fail_usage("sweep config lists no placements");
	if (cfg.attacks.empty())
		cfg.attacks.push_back(AttackSpec{}); // clean baseline only
	return cfg;
}

namespace {

double attack_intensity(const AttackSpec& s) {
	switch (s.kind) {
	case AttackSpec::Kind::none:
		return 0.0;
	case AttackSpec::Kind::gaussian_noise:
		return s.sigma;
	case AttackSpec::Kind::crop:
		return s.area_fraction;
	case AttackSpec::Kind::compress:
		return static_cast<double>(101 - s.quality);
	}
	return 0.0;
}

double attack_param(const AttackSpec& s) {
	switch (s.kind) {
	case AttackSpec::Kind::none:
		return 0.0;
	case AttackSpec::Kind::gaussian_noise:
		return s.sigma;
	case AttackSpec::Kind::crop:
		return s.area_fraction;
	case AttackSpec::Kind::compress:
		return static_cast<double>(s.quality);
	}
	return 0.0;
}

const char* attack_name(AttackSpec::Kind k) {
	switch (k) {
	case AttackSpec::Kind::none:
		return "none";
	case AttackSpec::Kind::gaussian_noise:
		return "noise";
	case AttackSpec::Kind::crop:
		return "crop";
	case AttackSpec::Kind::compress:
		return "compress";
	}
	return "?";
}

} // namespace

std::vector<RobustnessRow> robustness_sweep(const Matrix& host, const Matrix& logo,
                                            double alpha, const SweepConfig& cfg) {
	std::vector<RobustnessRow> rows;
	const std::size_t stride = cfg.stride ? cfg.stride : default_stride(host.rows);
	for (PlacementKind pk : cfg.placements) {
		bool embedded = false;
		EmbedResult emb;
		Matrix true_logo;
		std::string embed_err;
		try {
			if (pk == PlacementKind::bottom) {
				emb = embed_bottom(host, logo, alpha);
				true_logo = logo;
			} else {
				Matrix block = squarify_logo(logo);
				emb = pk == PlacementKind::top_left
				          ? embed_topleft(host, block, alpha)
				          : embed_optimum(host, block, alpha, stride);
				true_logo = block;
			}
			embedded = true;
		} catch (const error& e) {
			embed_err = e.what();
		}
		for (const AttackSpec& spec : cfg.attacks) {
			RobustnessRow row;
			row.placement = pk;
			row.attack = spec;
			if (!embedded) {
				row.failed = true;
				row.error_note = embed_err;
				rows.push_back(std::move(row));
				continue;
			}
			try {
				Matrix attacked = apply_attack(emb.watermarked, spec);
				row.psnr_after_db = psnr(emb.watermarked, attacked);
				ExtractionReport rep =
				    pk == PlacementKind::bottom
				        ? extract_nonblind_bottom(attacked, host, alpha, emb.placement)
				        : extract_nonblind_block(attacked, host, alpha, emb.placement);
				row.ncorr_after = ncorr(true_logo, rep.logo);
			} catch (const error& e) {
				row.failed = true;
				row.error_note = e.what();
			}
			rows.push_back(std::move(row));
		}
	}
	std::stable_sort(rows.begin(), rows.end(),
	                 [](const RobustnessRow& a, const RobustnessRow& b) {
		                 if (a.placement != b.placement)
			                 return static_cast<int>(a.placement) < static_cast<int>(b.placement);
		                 if (a.attack.kind != b.attack.kind)
			                 return static_cast<int>(a.attack.kind) < static_cast<int>(b.attack.kind);
		                 if (attack_intensity(a.attack) != attack_intensity(b.attack))
			                 return attack_intensity(a.attack) < attack_intensity(b.attack);
		                 return a.attack.seed < b.attack.seed;
	                 });
	return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<RobustnessRow>& rows) {
	char buf[64];
	out << "placement,attack,param,seed,ncorr,psnr_db\n";
	for (const RobustnessRow& row : rows) {
		out << placement_name(row.placement) << ',' << attack_name(row.attack.kind) << ',';
		std::snprintf(buf, sizeof buf, "%.6g", attack_param(row.attack));
		out << buf << ',' << row.attack.seed << ',';
		if (row.failed) {
			out << "error,error\n";
			continue;
		}
		std::snprintf(buf, sizeof buf, "%.6g", row.ncorr_after);
		out << buf << ',';
		std::snprintf(buf, sizeof buf, "%.6g", row.psnr_after_db);
		out << buf << '\n';
	}
}

} // namespace npt
