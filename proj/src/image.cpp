#include "rx/image.hpp"

#include <algorithm>
#include <cmath>

#include "rx/error.hpp"

namespace rx {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Bilinear sample with out-of-frame fill.
double sample_bilinear(const NormImage& img, double x, double y, double fill) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    auto pick = [&](int xi, int yi) {
        if (xi < 0 || yi < 0 || xi >= img.width || yi >= img.height) return fill;
        return img.at(xi, yi);
    };
    const double top = pick(x0, y0) * (1.0 - fx) + pick(x0 + 1, y0) * fx;
    const double bot = pick(x0, y0 + 1) * (1.0 - fx) + pick(x0 + 1, y0 + 1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

// Bilinear sample with edge clamping, for resampling where the frame edge
// is content, not background.
double sample_bilinear_clamped(const NormImage& img, double x, double y) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    auto pick = [&](int xi, int yi) {
        return img.at(clampi(xi, 0, img.width - 1), clampi(yi, 0, img.height - 1));
    };
    const double top = pick(x0, y0) * (1.0 - fx) + pick(x0 + 1, y0) * fx;
    const double bot = pick(x0, y0 + 1) * (1.0 - fx) + pick(x0 + 1, y0 + 1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

}  // namespace

GrayImage to_grayscale(const RasterImage& img) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const double r = img.pixels[i * 3 + 0];
        const double g = img.pixels[i * 3 + 1];
        const double b = img.pixels[i * 3 + 2];
        const double v = std::round(0.299 * r + 0.587 * g + 0.114 * b);
        out.pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return out;
}

NormImage normalize(const GrayImage& img) {
    NormImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = img.pixels[i] / 255.0;
    return out;
}

NormImage invert(const NormImage& img) {
    NormImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = 1.0 - img.pixels[i];
    return out;
}

NormImage smooth(const NormImage& img, int radius) {
    if (radius < 0) throw InvalidArgument("smooth: radius must be >= 0");
    if (radius == 0) return img;
    NormImage out(img.width, img.height);
    const double inv = 1.0 / ((2 * radius + 1) * (2 * radius + 1));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = clampi(y + dy, 0, img.height - 1);
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = clampi(x + dx, 0, img.width - 1);
                    acc += img.at(xx, yy);
                }
            }
            out.at(x, y) = acc * inv;
        }
    }
    return out;
}

EdgeMap detect_edges(const NormImage& img, double threshold) {
    if (img.width < 3 || img.height < 3)
        throw InvalidArgument("detect_edges: image smaller than 3x3");
    if (threshold < 0) throw InvalidArgument("detect_edges: threshold must be >= 0");
    EdgeMap out;
    out.width = img.width;
    out.height = img.height;
    out.threshold = threshold;
    out.magnitude.assign(static_cast<std::size_t>(img.width) * img.height, 0.0);
    out.binary.assign(out.magnitude.size(), 0);
    for (int y = 1; y + 1 < img.height; ++y) {
        for (int x = 1; x + 1 < img.width; ++x) {
            // Grouped per column/row so constant regions cancel exactly.
            const double right = img.at(x + 1, y - 1) + 2 * img.at(x + 1, y) +
                                 img.at(x + 1, y + 1);
            const double left = img.at(x - 1, y - 1) + 2 * img.at(x - 1, y) +
                                img.at(x - 1, y + 1);
            const double bottom = img.at(x - 1, y + 1) + 2 * img.at(x, y + 1) +
                                  img.at(x + 1, y + 1);
            const double top = img.at(x - 1, y - 1) + 2 * img.at(x, y - 1) +
                               img.at(x + 1, y - 1);
            const double gx = right - left;
            const double gy = bottom - top;
            const double mag = std::sqrt(gx * gx + gy * gy);
            const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
            out.magnitude[i] = mag;
            out.binary[i] = mag >= threshold ? 1 : 0;
        }
    }
    return out;
}

std::vector<WordSegment> segment_words(const NormImage& img, double ink_threshold,
                                       int min_gap) {
    if (!(ink_threshold > 0.0 && ink_threshold < 1.0))
        throw InvalidArgument("segment_words: ink_threshold must be in (0,1)");
    if (min_gap < 1) throw InvalidArgument("segment_words: min_gap must be >= 1");

    const auto is_ink = [&](int x, int y) { return img.at(x, y) < ink_threshold; };

    // Horizontal projection: rows containing any ink form line bands.
    std::vector<int> row_ink(img.height, 0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (is_ink(x, y)) ++row_ink[y];

    std::vector<WordSegment> segments;
    int y = 0;
    while (y < img.height) {
        if (row_ink[y] == 0) {
            ++y;
            continue;
        }
        int band_y0 = y;
        while (y < img.height && row_ink[y] > 0) ++y;
        int band_y1 = y;  // exclusive

        // Column ink counts within the band.
        std::vector<int> col_ink(img.width, 0);
        for (int x = 0; x < img.width; ++x)
            for (int yy = band_y0; yy < band_y1; ++yy)
                if (is_ink(x, yy)) ++col_ink[x];

        // Split the band at runs of >= min_gap empty columns.
        int x = 0;
        while (x < img.width) {
            if (col_ink[x] == 0) {
                ++x;
                continue;
            }
            const int word_x0 = x;
            int word_x1 = x;
            while (x < img.width) {
                if (col_ink[x] > 0) {
                    word_x1 = x + 1;
                    ++x;
                    continue;
                }
                int gap = 0;
                while (x + gap < img.width && col_ink[x + gap] == 0) ++gap;
                if (gap >= min_gap || x + gap >= img.width) break;
                x += gap;
            }

            // Tight box of the ink inside [word_x0, word_x1) x band.
            int bx0 = word_x1, bx1 = word_x0, by0 = band_y1, by1 = band_y0;
            for (int xx = word_x0; xx < word_x1; ++xx) {
                for (int yy = band_y0; yy < band_y1; ++yy) {
                    if (!is_ink(xx, yy)) continue;
                    bx0 = std::min(bx0, xx);
                    bx1 = std::max(bx1, xx + 1);
                    by0 = std::min(by0, yy);
                    by1 = std::max(by1, yy + 1);
                }
            }
            if (bx0 < bx1 && by0 < by1) {
                WordSegment seg;
                seg.x0 = bx0;
                seg.y0 = by0;
                seg.x1 = bx1;
                seg.y1 = by1;
                seg.image = NormImage(bx1 - bx0, by1 - by0);
                for (int yy = by0; yy < by1; ++yy)
                    for (int xx = bx0; xx < bx1; ++xx)
                        seg.image.at(xx - bx0, yy - by0) = img.at(xx, yy);
                segments.push_back(std::move(seg));
            }
        }
    }
    return segments;
}

NormImage standardize(const NormImage& seg, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1)
        throw InvalidArgument("standardize: output size must be >= 1");
    const double scale =
        std::min(static_cast<double>(out_h) / seg.height,
                 static_cast<double>(out_w) / seg.width);
    const int content_w = std::max(1, static_cast<int>(std::lround(seg.width * scale)));
    const int content_h = std::max(1, static_cast<int>(std::lround(seg.height * scale)));

    NormImage out(out_w, out_h, 1.0);
    const double sx = static_cast<double>(seg.width) / content_w;
    const double sy = static_cast<double>(seg.height) / content_h;
    for (int y = 0; y < content_h; ++y) {
        for (int x = 0; x < content_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            const double src_y = (y + 0.5) * sy - 0.5;
            out.at(x, y) = std::clamp(sample_bilinear_clamped(seg, src_x, src_y), 0.0, 1.0);
        }
    }
    return out;
}

NormImage frame_ink(const NormImage& img, double ink_threshold, double pad_ratio) {
    int x0 = img.width, x1 = 0, y0 = img.height, y1 = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y) < ink_threshold) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x + 1);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y + 1);
            }
    if (x0 >= x1 || y0 >= y1) return img;
    const int pad = std::max(2, static_cast<int>(std::lround(pad_ratio * (y1 - y0))));
    NormImage out(x1 - x0 + 2 * pad, y1 - y0 + 2 * pad, 1.0);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) out.at(x - x0 + pad, y - y0 + pad) = img.at(x, y);
    return out;
}

NormImage augment(const NormImage& img, const AugmentSpec& spec) {
    if (spec.crop_margin < 0 ||
        (spec.crop_margin > 0 &&
         spec.crop_margin >= std::min(img.width, img.height) / 4))
        throw InvalidArgument("augment: crop_margin too large");

    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    const double theta = spec.rotate_deg * 3.14159265358979323846 / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);

    // Crop maps the full frame back into the margin box; margin 0 is the
    // exact identity (scale factor 1.0).
    const double crop_sx =
        (img.width - 2.0 * spec.crop_margin) / static_cast<double>(img.width);
    const double crop_sy =
        (img.height - 2.0 * spec.crop_margin) / static_cast<double>(img.height);

    NormImage out(img.width, img.height, 1.0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // Inverse of flips -> shear -> rotation -> crop.
            double u = spec.flip_h ? (img.width - 1.0 - x) : x;
            double v = spec.flip_v ? (img.height - 1.0 - y) : y;
            // Forward shear is u' = u + shear_x * (v - cy).
            u -= spec.shear_x * (v - cy);
            const double du = u - cx;
            const double dv = v - cy;
            double ru = cos_t * du + sin_t * dv + cx;
            double rv = -sin_t * du + cos_t * dv + cy;
            ru = spec.crop_margin + ru * crop_sx;
            rv = spec.crop_margin + rv * crop_sy;
            out.at(x, y) = std::clamp(sample_bilinear(img, ru, rv, 1.0), 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace rx
