#include "npt/pgm_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <png.h>

#include "npt/errors.hpp"

namespace fs = std::filesystem;

namespace npt {

namespace {

unsigned char quantize8(double v) {
	long q = std::lround(255.0 * v);
	if (q < 0)
		q = 0;
	if (q > 255)
		q = 255;
	return static_cast<unsigned char>(q);
}

std::string read_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		fail_usage("cannot open " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

// PNM header token scanner: skips whitespace and '#' comment lines
bool next_token(const std::string& data, std::size_t& pos, std::string& tok) {
	while (pos < data.size()) {
		char ch = data[pos];
		if (ch == '#') {
			while (pos < data.size() && data[pos] != '\n')
				++pos;
		} else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
			++pos;
		} else {
			break;
		}
	}
	if (pos >= data.size())
		return false;
	std::size_t start = pos;
	while (pos < data.size() && data[pos] != ' ' && data[pos] != '\t' && data[pos] != '\r' &&
	       data[pos] != '\n' && data[pos] != '#')
		++pos;
	tok = data.substr(start, pos - start);
	return true;
}

GrayImage load_pgm(const std::string& path, const std::string& data) {
	std::size_t pos = 2; // past "P5"
	std::string wtok, htok, mtok;
	if (!next_token(data, pos, wtok) || !next_token(data, pos, htok) ||
	    !next_token(data, pos, mtok))
		fail_usage(path + ": truncated PGM header");
	long w = 0, h = 0, maxval = 0;
	try {
		w = std::stol(wtok);
		h = std::stol(htok);
		maxval = std::stol(mtok);
	} catch (...) {
		fail_usage(path + ": malformed PGM header");
	}
	if (w <= 0 || h <= 0)
		fail_usage(path + ": non-positive PGM dimensions");
	if (maxval != 255)
		fail_usage(path + ": only maxval 255 is supported, got " + mtok);
	if (pos >= data.size() || (data[pos] != '\n' && data[pos] != ' ' && data[pos] != '\t' &&
	                           data[pos] != '\r'))
		fail_usage(path + ": missing whitespace before PGM raster");
	++pos; // exactly one whitespace byte separates header and raster
	const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
	if (data.size() - pos != need)
		fail_usage(path + ": raster holds " + std::to_string(data.size() - pos) +
		           " bytes, expected " + std::to_string(need));
	GrayImage img(static_cast<std::size_t>(h), static_cast<std::size_t>(w));
	for (std::size_t i = 0; i < need; ++i)
		img.a[i] = static_cast<double>(static_cast<unsigned char>(data[pos + i])) / 255.0;
	return img;
}

struct PngReadCtx {
	const std::string* data;
	std::size_t pos;
};

void png_read_from_string(png_structp png, png_bytep out, png_size_t count) {
	auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
	if (ctx->pos + count > ctx->data->size())
		png_error(png, "unexpected end of PNG data");
	std::memcpy(out, ctx->data->data() + ctx->pos, count);
	ctx->pos += count;
}

GrayImage load_png(const std::string& path, const std::string& data) {
	png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
	if (!png)
		fail_numerical("png reader allocation failed");
	png_infop info = png_create_info_struct(png);
	if (!info) {
		png_destroy_read_struct(&png, nullptr, nullptr);
		fail_numerical("png reader allocation failed");
	}
	std::vector<png_byte> pixels;
	std::vector<png_bytep> rowptrs;
	png_uint_32 w = 0, h = 0;
	int channels = 0;
	if (setjmp(png_jmpbuf(png))) {
		png_destroy_read_struct(&png, &info, nullptr);
		fail_usage(path + ": malformed PNG");
	}
	PngReadCtx ctx{&data, 0};
	png_set_read_fn(png, &ctx, png_read_from_string);
	png_read_info(png, info);
	int bit_depth = png_get_bit_depth(png, info);
	int color_type = png_get_color_type(png, info);
	if (bit_depth == 16) {
		png_destroy_read_struct(&png, &info, nullptr);
		fail_usage(path + ": 16-bit PNG is unsupported");
	}
	if (color_type == PNG_COLOR_TYPE_PALETTE)
		png_set_palette_to_rgb(png);
	if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
		png_set_expand_gray_1_2_4_to_8(png);
	if (png_get_valid(png, info, PNG_INFO_tRNS))
		png_set_tRNS_to_alpha(png);
	png_set_strip_alpha(png);
	png_read_update_info(png, info);
	w = png_get_image_width(png, info);
	h = png_get_image_height(png, info);
	channels = png_get_channels(png, info);
	if (w == 0 || h == 0 || (channels != 1 && channels != 3)) {
		png_destroy_read_struct(&png, &info, nullptr);
		fail_usage(path + ": unsupported PNG layout");
	}
	const std::size_t stride = static_cast<std::size_t>(w) * static_cast<std::size_t>(channels);
	pixels.resize(stride * h);
	rowptrs.resize(h);
	for (png_uint_32 i = 0; i < h; ++i)
		rowptrs[i] = pixels.data() + static_cast<std::size_t>(i) * stride;
	png_read_image(png, rowptrs.data());
	png_read_end(png, nullptr);
	png_destroy_read_struct(&png, &info, nullptr);

	GrayImage img(h, w);
	for (std::size_t i = 0; i < h; ++i) {
		for (std::size_t j = 0; j < w; ++j) {
			const png_byte* px = &pixels[i * stride + j * channels];
			double v;
			if (channels == 1)
				v = static_cast<double>(px[0]);
			else
				v = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
			img(i, j) = v / 255.0;
		}
	}
	return img;
}

} // namespace

GrayImage load_gray(const std::string& path) {
	std::string data = read_file(path);
	if (data.size() >= 2 && data[0] == 'P' && data[1] == '5')
		return load_pgm(path, data);
	static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
	if (data.size() >= 8 && std::memcmp(data.data(), png_sig, 8) == 0)
		return load_png(path, data);
	fail_usage(path + ": unsupported image format (need binary PGM P5 or PNG)");
}

void write_text_file_atomic(const std::string& path, const std::string& text) {
	fs::path target(path);
	fs::path tmp = target;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
			fail_usage("cannot write " + tmp.string());
		out.write(text.data(), static_cast<std::streamsize>(text.size()));
		if (!out)
			fail_usage("short write to " + tmp.string());
	}
	fs::rename(tmp, target);
}

void save_gray_pgm(const Matrix& img, const std::string& path) {
	if (img.empty())
		fail_usage("refusing to save an empty image");
	std::string bytes = "P5\n" + std::to_string(img.cols) + " " + std::to_string(img.rows) +
	                    "\n255\n";
	bytes.reserve(bytes.size() + img.a.size());
	for (double v : img.a)
		bytes.push_back(static_cast<char>(quantize8(v)));
	write_text_file_atomic(path, bytes);
}

std::uint64_t image_digest(const Matrix& img) {
	std::uint64_t h = 1469598103934665603ull; // FNV-1a 64 offset basis
	auto mix = [&h](unsigned char byte) {
		h ^= byte;
		h *= 1099511628211ull;
	};
	for (int k = 0; k < 8; ++k)
		mix(static_cast<unsigned char>((static_cast<std::uint64_t>(img.rows) >> (8 * k)) & 0xff));
	for (int k = 0; k < 8; ++k)
		mix(static_cast<unsigned char>((static_cast<std::uint64_t>(img.cols) >> (8 * k)) & 0xff));
	for (double v : img.a)
		mix(quantize8(v));
	return h;
}

std::string digest_hex(std::uint64_t digest) {
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
	return buf;
}

void write_kv_file(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
	std::string text;
	for (const auto& [k, v] : kv) {
		text += k;
		text += '=';
		text += v;
		text += '\n';
	}
	write_text_file_atomic(path, text);
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
	std::istringstream in(read_file(path));
	std::map<std::string, std::string> kv;
	std::string line;
	while (std::getline(in, line)) {
		if (line.empty())
			continue;
		std::size_t eq = line.find('=');
		if (eq == std::string::npos)
			fail_usage(path + ": malformed key=value line: " + line);
		kv[line.substr(0, eq)] = line.substr(eq + 1);
	}
	return kv;
}

} // namespace npt
