#include "npt/face.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "npt/errors.hpp"
#include "npt/transforms.hpp"

namespace fs = std::filesystem;

namespace npt {

namespace {

constexpr std::size_t kFaceSide = 128;

} // namespace

Matrix resize_bilinear(const Matrix& img, std::size_t out_rows, std::size_t out_cols) {
	if (img.empty())
		fail_usage("cannot resize an empty image");
	if (out_rows == 0 || out_cols == 0)
		fail_usage("target size must be positive");
	if (img.rows == out_rows && img.cols == out_cols)
		return img;
	Matrix out(out_rows, out_cols);
	const double sy = static_cast<double>(img.rows) / static_cast<double>(out_rows);
	const double sx = static_cast<double>(img.cols) / static_cast<double>(out_cols);
	for (std::size_t i = 0; i < out_rows; ++i) {
		double y = (static_cast<double>(i) + 0.5) * sy - 0.5;
		y = std::clamp(y, 0.0, static_cast<double>(img.rows - 1));
		std::size_t y0 = static_cast<std::size_t>(y);
		std::size_t y1 = std::min(y0 + 1, img.rows - 1);
		double fy = y - static_cast<double>(y0);
		for (std::size_t j = 0; j < out_cols; ++j) {
			double x = (static_cast<double>(j) + 0.5) * sx - 0.5;
			x = std::clamp(x, 0.0, static_cast<double>(img.cols - 1));
			std::size_t x0 = static_cast<std::size_t>(x);
			std::size_t x1 = std::min(x0 + 1, img.cols - 1);
			double fx = x - static_cast<double>(x0);
			double top = img(y0, x0) * (1.0 - fx) + img(y0, x1) * fx;
			double bot = img(y1, x0) * (1.0 - fx) + img(y1, x1) * fx;
			out(i, j) = top * (1.0 - fy) + bot * fy;
		}
	}
	return out;
}

Matrix preprocess_face(const Matrix& img) {
	return resize_bilinear(img, kFaceSide, kFaceSide);
}

FaceFeature extract_features(const Matrix& img128, std::size_t corner, FeatureTransform tf,
                             double alpha) {
	if (img128.rows != kFaceSide || img128.cols != kFaceSide)
		fail_usage("feature extraction expects the canonical face size");
	if (corner < 1 || corner > kFaceSide / 2)
		fail_usage("corner size must lie in 1..64");
	Matrix t;
	if (tf == FeatureTransform::hartley) {
		t = dht_apply_2d(img128);
	} else {
		NptOperator op = npt_operator(kFaceSide, alpha);
		t = npt_forward(op, img128);
	}
	FaceFeature f;
	f.corner = corner;
	f.v.reserve(4 * corner * corner);
	const std::size_t n = kFaceSide, s = corner;
	const std::size_t corners[4][2] = {{0, 0}, {0, n - s}, {n - s, 0}, {n - s, n - s}};
	for (const auto& c : corners)
		for (std::size_t i = 0; i < s; ++i)
			for (std::size_t j = 0; j < s; ++j)
				f.v.push_back(t(c[0] + i, c[1] + j));
	return f;
}

double feature_distance(const FaceFeature& a, const FaceFeature& b) {
	if (a.corner != b.corner || a.v.size() != b.v.size())
		fail_usage("feature size mismatch");
	double s = 0.0;
	for (std::size_t i = 0; i < a.v.size(); ++i) {
		double d = a.v[i] - b.v[i];
		s += d * d;
	}
	return std::sqrt(s);
}

MatchResult match_face(const FaceFeature& query, const Gallery& gallery) {
	if (gallery.entries.empty())
		fail_usage("gallery is empty");
	MatchResult best;
	bool first = true;
	for (std::size_t i = 0; i < gallery.entries.size(); ++i) {
		double d = feature_distance(query, gallery.entries[i].feature);
		if (first || d < best.distance) {
			best.label = gallery.entries[i].label;
			best.distance = d;
			best.index = i;
			first = false;
		}
	}
	return best;
}

std::map<std::size_t, double> evaluate_split(const std::vector<LabeledImage>& data,
                                             const std::set<std::string>& test_ids,
                                             const std::vector<std::size_t>& corner_sizes,
                                             FeatureTransform tf, double alpha) {
	std::vector<const LabeledImage*> train, test;
	for (const LabeledImage& item : data)
		(test_ids.count(item.id) ? test : train).push_back(&item);
	if (test.empty())
		fail_usage("split holds out no test images");
	for (const LabeledImage* q : test) {
		bool covered = false;
		for (const LabeledImage* t : train)
			if (t->label == q->label) {
				covered = true;
				break;
			}
		if (!covered)
			fail_usage("test identity '" + q->label + "' has no trainee image");
	}
	std::map<std::size_t, double> acc;
	for (std::size_t s : corner_sizes) {
		Gallery g;
		g.corner = s;
		for (const LabeledImage* t : train)
			g.entries.push_back({t->label, extract_features(preprocess_face(t->image), s, tf, alpha)});
		std::size_t hit = 0;
		for (const LabeledImage* q : test) {
			MatchResult m = match_face(extract_features(preprocess_face(q->image), s, tf, alpha), g);
			if (m.label == q->label)
				++hit;
		}
		acc[s] = static_cast<double>(hit) / static_cast<double>(test.size());
	}
	return acc;
}

namespace {

void put_u32_le(std::string& out, std::uint32_t v) {
	for (int i = 0; i < 4; ++i)
		out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64_le(std::string& out, double v) {
	std::uint64_t bits;
	static_assert(sizeof bits == sizeof v);
	std::memcpy(&bits, &v, sizeof bits);
	for (int i = 0; i < 8; ++i)
		out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32_le(const std::string& in, std::size_t off) {
	std::uint32_t v = 0;
	for (int i = 0; i < 4; ++i)
		v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
	return v;
}

double get_f64_le(const std::string& in, std::size_t off) {
	std::uint64_t bits = 0;
	for (int i = 0; i < 8; ++i)
		bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
	double v;
	std::memcpy(&v, &bits, sizeof v);
	return v;
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
	fs::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
			fail_usage("cannot write " + tmp.string());
		out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
		if (!out)
			fail_usage("short write to " + tmp.string());
	}
	fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		fail_usage("cannot read " + path.string());
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

} // namespace

void save_gallery(const Gallery& gallery, const std::string& dir) {
	if (gallery.entries.empty())
		fail_usage("refusing to save an empty gallery");
	fs::create_directories(dir);
	std::string manifest;
	for (std::size_t i = 0; i < gallery.entries.size(); ++i) {
		const GalleryEntry& e = gallery.entries[i];
		if (e.label.empty() || e.label.find_first_of(" \t\n") != std::string::npos)
			fail_usage("gallery label '" + e.label + "' is empty or holds whitespace");
		char name[32];
		std::snprintf(name, sizeof name, "feat%04zu.bin", i);
		std::string bytes;
		put_u32_le(bytes, static_cast<std::uint32_t>(e.feature.v.size()));
		for (double v : e.feature.v)
			put_f64_le(bytes, v);
		write_file_atomic(fs::path(dir) / name, bytes);
		manifest += e.label;
		manifest += ' ';
		manifest += name;
		manifest += ' ';
		manifest += std::to_string(gallery.corner);
		manifest += ' ';
		manifest += std::to_string(e.feature.v.size());
		manifest += '\n';
	}
	write_file_atomic(fs::path(dir) / "manifest.txt", manifest);
}

Gallery load_gallery(const std::string& dir) {
	std::istringstream manifest(read_file(fs::path(dir) / "manifest.txt"));
	Gallery g;
	std::string line;
	while (std::getline(manifest, line)) {
		if (line.empty())
			continue;
		std::istringstream ls(line);
		std::string label, file;
		std::size_t s = 0, len = 0;
		if (!(ls >> label >> file >> s >> len))
			fail_usage("malformed gallery manifest line: " + line);
		if (g.entries.empty())
			g.corner = s;
		else if (g.corner != s)
			fail_usage("gallery mixes corner sizes");
		if (len != 4 * s * s)
			fail_usage("manifest length disagrees with corner size");
		std::string bytes = read_file(fs::path(dir) / file);
		if (bytes.size() != 4 + 8 * len || get_u32_le(bytes, 0) != len)
			fail_usage("feature file " + file + " is malformed");
		GalleryEntry e;
		e.label = label;
		e.feature.corner = s;
		e.feature.v.resize(len);
		for (std::size_t i = 0; i < len; ++i)
			e.feature.v[i] = get_f64_le(bytes, 4 + 8 * i);
		g.entries.push_back(std::move(e));
	}
	if (g.entries.empty())
		fail_usage("gallery manifest is empty");
	return g;
}

} // namespace npt
