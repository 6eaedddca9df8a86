#pragma once

#include <cstdint>
#include <vector>

namespace rx {

// Row-major RGB triples, values 0..255.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3
};

// Row-major intensity, values 0..255.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height
};

// Row-major intensity in [0, 1]. Ink is dark (near 0), background 1.
struct NormImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    NormImage() = default;
    NormImage(int w, int h, double fill = 0.0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct EdgeMap {
    int width = 0;
    int height = 0;
    double threshold = 0.0;
    std::vector<double> magnitude;
    std::vector<std::uint8_t> binary;  // 1 where magnitude >= threshold, borders 0
};

// Inclusive-exclusive pixel bounding box plus the standardizable crop.
struct WordSegment {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    NormImage image;
};

struct AugmentSpec {
    double rotate_deg = 0.0;
    double shear_x = 0.0;
    int crop_margin = 0;
    bool flip_h = false;
    bool flip_v = false;
    std::uint64_t seed = 0;  // reserved for corpus-side jitter sampling
};

// ITU-R BT.601 luma: round(0.299 r + 0.587 g + 0.114 b).
GrayImage to_grayscale(const RasterImage& img);

// 1 - v per pixel. The recognizer trains on ink intensity (1 = ink), while
// the preprocessing chain keeps the dark-on-light page convention.
NormImage invert(const NormImage& img);

// Divides every intensity by 255.
NormImage normalize(const GrayImage& img);

// Box filter of side 2*radius+1 with edge-clamped borders; radius 0 is identity.
NormImage smooth(const NormImage& img, int radius);

// 3x3 Sobel magnitude on interior pixels; borders are zero and never binary.
// Throws InvalidArgument when the image is smaller than 3x3.
EdgeMap detect_edges(const NormImage& img, double threshold);

// Projection-profile segmentation: line bands from the horizontal ink
// profile, words split at >= min_gap consecutive ink-free columns.
// Boxes tightly bound the ink; reading order (top-to-bottom, left-to-right).
std::vector<WordSegment> segment_words(const NormImage& img, double ink_threshold,
                                       int min_gap);

// Aspect-preserving bilinear scale into out_h x out_w, right/bottom padded
// with background 1.0.
NormImage standardize(const NormImage& seg, int out_h, int out_w);

// Crops to the tight ink bounding box (values < ink_threshold) and adds a
// proportional background margin on all sides. The renderer and the
// recognizer frame word crops through this one path so their scale
// statistics match. Returns the input unchanged when it holds no ink.
NormImage frame_ink(const NormImage& img, double ink_threshold, double pad_ratio);

// Crop, then rotate about center, then shear, then flips; bilinear sampling,
// out-of-frame fill 1.0; output has the input's dimensions.
// Throws InvalidArgument when crop_margin >= min(width, height) / 4.
NormImage augment(const NormImage& img, const AugmentSpec& spec);

}  // namespace rx
