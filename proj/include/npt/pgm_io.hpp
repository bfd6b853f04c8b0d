#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "npt/matrix.hpp"

namespace npt {

// binary PGM (P5, maxval 255) or 8-bit PNG (grayscale direct, color via the
// 0.299/0.587/0.114 luma weights); pixels map to v/255
GrayImage load_gray(const std::string& path);

// canonical P5 writer: round(255*v) clamped, header "P5\n<w> <h>\n255\n";
// written to a temp file and renamed so failures leave nothing behind
void save_gray_pgm(const Matrix& img, const std::string& path);

// FNV-1a 64 over dims and the 8-bit quantized pixels
std::uint64_t image_digest(const Matrix& img);
std::string digest_hex(std::uint64_t digest);

// ordered key=value lines; same atomic write discipline
void write_kv_file(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv);
std::map<std::string, std::string> read_kv_file(const std::string& path);

void write_text_file_atomic(const std::string& path, const std::string& text);

} // namespace npt
