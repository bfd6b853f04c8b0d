#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "npt/matrix.hpp"

namespace npt {

// bilinear resize with pixel-center sampling
Matrix resize_bilinear(const Matrix& img, std::size_t out_rows, std::size_t out_cols);

// canonical face size for feature extraction
Matrix preprocess_face(const Matrix& img);

struct FaceFeature {
	std::size_t corner = 0;
	std::vector<double> v; // four s x s corner blocks, TL TR BL BR, each row-major
};

enum class FeatureTransform { hartley, npt };

// applies the 2-d transform to the 128x128 image and packs the four corner
// squares; the npt variant substitutes the blended operator at the given alpha
FaceFeature extract_features(const Matrix& img128, std::size_t corner,
                             FeatureTransform tf = FeatureTransform::hartley,
                             double alpha = 0.991);

struct GalleryEntry {
	std::string label;
	FaceFeature feature;
};

struct Gallery {
	std::size_t corner = 0;
	std::vector<GalleryEntry> entries;
};

double feature_distance(const FaceFeature& a, const FaceFeature& b);

struct MatchResult {
	std::string label;
	double distance = 0.0;
	std::size_t index = 0;
};

// nearest enrolled feature by Euclidean distance; ties go to the first
// enrolled entry
MatchResult match_face(const FaceFeature& query, const Gallery& gallery);

struct LabeledImage {
	std::string id;
	std::string label;
	Matrix image;
};

// per-corner-size rank-1 accuracy with the given ids held out as queries;
// every test label must have at least one trainee image
std::map<std::size_t, double> evaluate_split(const std::vector<LabeledImage>& data,
                                             const std::set<std::string>& test_ids,
                                             const std::vector<std::size_t>& corner_sizes,
                                             FeatureTransform tf = FeatureTransform::hartley,
                                             double alpha = 0.991);

// directory of length-prefixed little-endian float64 feature files plus a
// line-oriented manifest (label file s length)
void save_gallery(const Gallery& gallery, const std::string& dir);
Gallery load_gallery(const std::string& dir);

} // namespace npt
