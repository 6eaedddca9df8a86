#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "rx/error.hpp"
#include "rx/image.hpp"
#include "rx/netpbm.hpp"
#include "rx/rng.hpp"

using namespace rx;

namespace {

RasterImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RasterImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (int i = 0; i < w * h; ++i) {
        img.pixels[i * 3 + 0] = r;
        img.pixels[i * 3 + 1] = g;
        img.pixels[i * 3 + 2] = b;
    }
    return img;
}

NormImage random_norm(int w, int h, std::uint64_t seed) {
    NormImage img(w, h);
    Rng rng(seed);
    for (auto& v : img.pixels) v = rng.uniform();
    return img;
}

}  // namespace

TEST_CASE("grayscale weights") {
    CHECK(to_grayscale(solid(2, 2, 0, 0, 0)).pixels[0] == 0);
    CHECK(to_grayscale(solid(2, 2, 255, 255, 255)).pixels[0] == 255);
    // 0.299 * 255 = 76.245 -> 76
    CHECK(to_grayscale(solid(1, 1, 255, 0, 0)).pixels[0] == 76);
    CHECK(to_grayscale(solid(1, 1, 0, 255, 0)).pixels[0] == 150);
    CHECK(to_grayscale(solid(1, 1, 0, 0, 255)).pixels[0] == 29);
}

TEST_CASE("grayscale is exact on gray inputs") {
    for (int g = 0; g <= 255; ++g)
        CHECK(to_grayscale(solid(1, 1, static_cast<std::uint8_t>(g),
                                 static_cast<std::uint8_t>(g),
                                 static_cast<std::uint8_t>(g)))
                  .pixels[0] == g);
}

TEST_CASE("normalize divides by 255") {
    GrayImage g;
    g.width = 3;
    g.height = 1;
    g.pixels = {0, 128, 255};
    const NormImage n = normalize(g);
    CHECK(n.pixels[0] == 0.0);
    CHECK(n.pixels[1] == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
    CHECK(n.pixels[2] == 1.0);
}

TEST_CASE("smooth radius 0 is identity, constants are fixed points") {
    const NormImage img = random_norm(9, 5, 7);
    const NormImage same = smooth(img, 0);
    CHECK(same.pixels == img.pixels);

    NormImage flat(6, 6, 0.37);
    const NormImage blurred = smooth(flat, 2);
    for (double v : blurred.pixels) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("smooth matches hand-evaluated clamped box filter") {
    NormImage img(3, 1);
    img.pixels = {0.0, 1.0, 0.0};
    const NormImage out = smooth(img, 1);
    // Clamped horizontally, the vertical dimension clamps to itself.
    CHECK(out.pixels[0] == doctest::Approx(1.0 / 3.0));
    CHECK(out.pixels[1] == doctest::Approx(1.0 / 3.0));
    CHECK(out.pixels[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("smooth keeps the unit range") {
    const NormImage img = random_norm(16, 11, 99);
    for (int r : {1, 2, 3}) {
        const NormImage out = smooth(img, r);
        for (double v : out.pixels) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("sobel on a constant image is zero") {
    NormImage flat(5, 4, 0.8);
    const EdgeMap e = detect_edges(flat, 0.1);
    for (double m : e.magnitude) CHECK(m == 0.0);
    for (auto b : e.binary) CHECK(b == 0);
}

TEST_CASE("sobel column step has magnitude 4 at the center") {
    NormImage img(3, 3);
    for (int y = 0; y < 3; ++y) {
        img.at(0, y) = 0.0;
        img.at(1, y) = 0.0;
        img.at(2, y) = 1.0;
    }
    const EdgeMap e = detect_edges(img, 0.5);
    CHECK(e.magnitude[4] == doctest::Approx(4.0));
    CHECK(e.binary[4] == 1);
}

TEST_CASE("sobel borders stay off even at threshold 0") {
    const NormImage img = random_norm(6, 5, 3);
    const EdgeMap e = detect_edges(img, 0.0);
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x) {
            const bool border = x == 0 || y == 0 || x == e.width - 1 || y == e.height - 1;
            const bool lit = e.binary[static_cast<std::size_t>(y) * e.width + x] != 0;
            CHECK(lit == !border);
        }
}

TEST_CASE("sobel rejects tiny images") {
    NormImage tiny(2, 5, 0.0);
    CHECK_THROWS_AS(detect_edges(tiny, 0.5), InvalidArgument);
}

TEST_CASE("sobel magnitude is translation equivariant in the interior") {
    // A blob stamped at two offsets; magnitudes must match shifted.
    auto stamp = [](int ox, int oy) {
        NormImage img(16, 12, 1.0);
        for (int dy = 0; dy < 3; ++dy)
            for (int dx = 0; dx < 3; ++dx) img.at(ox + dx, oy + dy) = 0.0;
        return img;
    };
    const EdgeMap a = detect_edges(stamp(4, 4), 0.5);
    const EdgeMap b = detect_edges(stamp(6, 5), 0.5);
    for (int y = 2; y < 9; ++y)
        for (int x = 2; x < 9; ++x)
            CHECK(a.magnitude[static_cast<std::size_t>(y) * 16 + x] ==
                  doctest::Approx(
                      b.magnitude[static_cast<std::size_t>(y + 1) * 16 + x + 2]));
}

TEST_CASE("segment_words on blank and single-blob images") {
    NormImage blank(40, 20, 1.0);
    CHECK(segment_words(blank, 0.5, 3).empty());

    NormImage one(40, 20, 1.0);
    for (int y = 5; y < 9; ++y)
        for (int x = 10; x < 17; ++x) one.at(x, y) = 0.1;
    const auto segs = segment_words(one, 0.5, 3);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].x0 == 10);
    CHECK(segs[0].x1 == 17);
    CHECK(segs[0].y0 == 5);
    CHECK(segs[0].y1 == 9);
    CHECK(segs[0].image.width == 7);
    CHECK(segs[0].image.height == 4);
}

TEST_CASE("segment_words splits on min_gap blank columns") {
    const int min_gap = 4;
    NormImage img(40, 10, 1.0);
    // Two blobs on one line, separated by min_gap + 2 = 6 blank columns.
    for (int y = 2; y < 7; ++y) {
        for (int x = 3; x < 9; ++x) img.at(x, y) = 0.0;
        for (int x = 15; x < 20; ++x) img.at(x, y) = 0.0;
    }
    const auto segs = segment_words(img, 0.5, min_gap);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].x0 == 3);   // left one first
    CHECK(segs[0].x1 == 9);
    CHECK(segs[1].x0 == 15);
    CHECK(segs[1].x1 == 20);

    // A gap shorter than min_gap does not split.
    NormImage joined(40, 10, 1.0);
    for (int y = 2; y < 7; ++y) {
        for (int x = 3; x < 9; ++x) joined.at(x, y) = 0.0;
        for (int x = 11; x < 16; ++x) joined.at(x, y) = 0.0;
    }
    CHECK(segment_words(joined, 0.5, min_gap).size() == 1);
}

TEST_CASE("segment_words returns reading order across lines") {
    NormImage img(30, 24, 1.0);
    auto blob = [&](int x0, int y0) {
        for (int y = y0; y < y0 + 4; ++y)
            for (int x = x0; x < x0 + 4; ++x) img.at(x, y) = 0.0;
    };
    blob(20, 2);   // first line, right word
    blob(2, 2);    // first line, left word
    blob(5, 14);   // second line
    const auto segs = segment_words(img, 0.5, 3);
    REQUIRE(segs.size() == 3);
    CHECK(segs[0].x0 == 2);
    CHECK(segs[1].x0 == 20);
    CHECK(segs[2].y0 == 14);
    // Boxes in one line never overlap.
    CHECK(segs[0].x1 <= segs[1].x0);
}

TEST_CASE("segment boxes cover all ink") {
    const NormImage img = [] {
        NormImage im(48, 16, 1.0);
        Rng rng(11);
        for (int blobs = 0; blobs < 3; ++blobs) {
            const int x0 = static_cast<int>(rng.uniform_int(1, 40));
            const int y0 = static_cast<int>(rng.uniform_int(1, 8));
            for (int y = y0; y < y0 + 5; ++y)
                for (int x = x0; x < x0 + 5; ++x) im.at(x, y) = 0.2;
        }
        return im;
    }();
    const auto segs = segment_words(img, 0.5, 2);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y) >= 0.5) continue;
            bool covered = false;
            for (const auto& s : segs)
                covered |= x >= s.x0 && x < s.x1 && y >= s.y0 && y < s.y1;
            CHECK(covered);
        }
}

TEST_CASE("standardize identity, exact fit and padding") {
    const NormImage img = random_norm(128, 32, 5);
    const NormImage same = standardize(img, 32, 128);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        CHECK(same.pixels[i] == doctest::Approx(img.pixels[i]).epsilon(1e-12));

    // 16x64 doubles to fill the frame exactly: no padding column remains 1.0
    // on the left portion... scaled content spans the whole 32x128.
    NormImage half(64, 16, 0.25);
    const NormImage doubled = standardize(half, 32, 128);
    CHECK(doubled.width == 128);
    CHECK(doubled.height == 32);
    for (double v : doubled.pixels) CHECK(v == doctest::Approx(0.25));

    // A 32x32 square keeps its scale and pads columns 32.. with background.
    NormImage square(32, 32, 0.0);
    const NormImage padded = standardize(square, 32, 128);
    CHECK(padded.at(10, 10) == doctest::Approx(0.0));
    for (int x = 32; x < 128; ++x) CHECK(padded.at(x, 16) == 1.0);
}

TEST_CASE("standardize preserves aspect ratio within a pixel") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = static_cast<int>(rng.uniform_int(4, 200));
        const int h = static_cast<int>(rng.uniform_int(4, 80));
        NormImage img(w, h, 0.0);
        const NormImage out = standardize(img, 32, 128);
        const double scale = std::min(32.0 / h, 128.0 / w);
        // Content dims the implementation must have used; both sides use the
        // same scale factor, so each is within half a pixel of the exact
        // aspect-preserving size.
        const int cw = std::max(1, static_cast<int>(std::lround(w * scale)));
        const int ch = std::max(1, static_cast<int>(std::lround(h * scale)));
        CHECK(std::abs(cw - w * scale) <= 0.5 + 1e-9);
        CHECK(std::abs(ch - h * scale) <= 0.5 + 1e-9);
        // Everything right of the content is background.
        if (cw < 128) CHECK(out.at(cw, ch / 2) == 1.0);
    }
}

TEST_CASE("augment identity and flip involution") {
    const NormImage img = random_norm(20, 12, 23);
    const NormImage same = augment(img, {});
    CHECK(same.pixels == img.pixels);

    AugmentSpec flip;
    flip.flip_h = true;
    const NormImage once = augment(img, flip);
    const NormImage twice = augment(once, flip);
    CHECK(twice.pixels == img.pixels);

    AugmentSpec vflip;
    vflip.flip_v = true;
    CHECK(augment(augment(img, vflip), vflip).pixels == img.pixels);
}

TEST_CASE("augment rotate 90 permutes pixels per the rotation matrix") {
    NormImage img(3, 3, 1.0);
    img.at(0, 0) = 0.0;  // asymmetric marker
    img.at(2, 1) = 0.5;
    AugmentSpec spec;
    spec.rotate_deg = 90.0;
    const NormImage out = augment(img, spec);
    // Inverse mapping: src_x = cx + (x-cx)cos + (y-cy)sin,
    //                  src_y = cy - (x-cx)sin + (y-cy)cos.
    // At 90 degrees on a 3x3 grid: out(x, y) = in(y, 2 - x).
    CHECK(out.at(1, 2) == doctest::Approx(0.5).epsilon(1e-9));  // from (2,1)
    CHECK(out.at(2, 0) == doctest::Approx(0.0).epsilon(1e-9));  // from (0,0)
    CHECK(out.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("augment rejects oversized crops") {
    NormImage img(20, 20, 1.0);
    AugmentSpec spec;
    spec.crop_margin = 5;  // min(20,20)/4 = 5 is already too much
    CHECK_THROWS_AS(augment(img, spec), InvalidArgument);
    spec.crop_margin = 4;
    CHECK_NOTHROW(augment(img, spec));
}

TEST_CASE("augment keeps the unit range") {
    const NormImage img = random_norm(24, 16, 31);
    AugmentSpec spec;
    spec.rotate_deg = 11.0;
    spec.shear_x = 0.2;
    spec.crop_margin = 2;
    const NormImage out = augment(img, spec);
    CHECK(out.width == img.width);
    CHECK(out.height == img.height);
    for (double v : out.pixels) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("pgm round trip is bit exact") {
    const auto dir = std::filesystem::temp_directory_path() / "rx_netpbm_test";
    std::filesystem::create_directories(dir);
    GrayImage g;
    g.width = 7;
    g.height = 3;
    Rng rng(41);
    g.pixels.resize(21);
    for (auto& p : g.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    const auto path = (dir / "t.pgm").string();
    save_pgm(path, g);
    const GrayImage back = load_pgm(path);
    CHECK(back.width == g.width);
    CHECK(back.height == g.height);
    CHECK(back.pixels == g.pixels);

    RasterImage c;
    c.width = 4;
    c.height = 5;
    c.pixels.resize(60);
    for (auto& p : c.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    const auto cpath = (dir / "t.ppm").string();
    save_ppm(cpath, c);
    const RasterImage cback = load_ppm(cpath);
    CHECK(cback.pixels == c.pixels);

    // load_image dispatches on magic and grayscales P6.
    CHECK(load_image(cpath).pixels == to_grayscale(c).pixels);
    CHECK_THROWS_AS(load_pgm(cpath), ParseError);
    CHECK_THROWS_AS(load_pgm((dir / "absent.pgm").string()), IoError);
}
