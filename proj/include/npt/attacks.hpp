#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "npt/embed.hpp"

namespace npt {

struct Rect {
	std::size_t row = 0, col = 0, height = 0, width = 0;
};

enum class CropFill { zero, mean };

struct AttackSpec {
	enum class Kind { none, gaussian_noise, crop, compress };
	Kind kind = Kind::none;
	double sigma = 0.0;         // gaussian_noise
	double area_fraction = 0.0; // crop: square of side round(sqrt(frac)*N), bottom-right corner
	CropFill fill = CropFill::zero;
	int quality = 100;          // compress, 1..100
	std::uint64_t seed = 0;     // gaussian_noise
};

// zero-mean Gaussian noise, clamped to [0,1]; mt19937_64 seeded directly plus
// an explicit Box-Muller pair transform so runs reproduce across toolchains
Matrix attack_noise(const Matrix& img, double sigma, std::uint64_t seed);

// pixels inside rect replaced by 0 or by the pre-crop image mean
Matrix attack_crop(const Matrix& img, const Rect& rect, CropFill fill);

// 8x8 orthonormal block-cosine transform, uniform quantization with step
// (101-quality)/1024, inverse, clamp; sides not divisible by 8 are mirrored
// out and cropped back
Matrix attack_compress(const Matrix& img, int quality);

Matrix apply_attack(const Matrix& img, const AttackSpec& spec);

struct RobustnessRow {
	PlacementKind placement = PlacementKind::bottom;
	AttackSpec attack;
	bool failed = false;
	std::string error_note;
	double ncorr_after = 0.0;     // true logo vs extracted
	double psnr_after_db = 0.0;   // watermarked before vs after the attack
};

struct SweepConfig {
	std::vector<PlacementKind> placements;
	std::vector<AttackSpec> attacks;
	std::size_t stride = 0; // 0 = per-size default for the optimum scan
};

// line-oriented config: 'placement bottom|topleft|optimum',
// 'attack none|noise <sigma> [seed]|crop <frac> [zero|mean]|compress <q>',
// 'stride <k>'; '#' starts a comment
SweepConfig parse_sweep_config(std::istream& in);

// embed once per placement, attack, extract non-blind, score; rows come back
// sorted by placement, attack kind, then intensity
std::vector<RobustnessRow> robustness_sweep(const Matrix& host, const Matrix& logo,
                                            double alpha, const SweepConfig& cfg);

// header placement,attack,param,seed,ncorr,psnr_db; 6 significant digits, LF;
// failed rows carry the marker 'error' in the two value columns
void write_sweep_csv(std::ostream& out, const std::vector<RobustnessRow>& rows);

const char* placement_name(PlacementKind kind);

} // namespace npt
