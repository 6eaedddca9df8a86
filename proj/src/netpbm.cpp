#include "rx/netpbm.hpp"

#include <cmath>
#include <fstream>

#include "rx/error.hpp"

namespace rx {

namespace {

// Reads the next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok += static_cast<char>(c);
    }
    if (tok.empty()) throw ParseError("netpbm: truncated header");
    return tok;
}

struct Header {
    std::string magic;
    int width;
    int height;
    int maxval;
};

Header read_header(std::istream& in) {
    Header h;
    h.magic = next_token(in);
    h.width = std::stoi(next_token(in));
    h.height = std::stoi(next_token(in));
    h.maxval = std::stoi(next_token(in));
    if (h.width < 1 || h.height < 1)
        throw ParseError("netpbm: bad dimensions");
    if (h.maxval != 255) throw ParseError("netpbm: only maxval 255 supported");
    return h;
}

std::ifstream open_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
    auto in = open_binary(path);
    const Header h = read_header(in);
    if (h.magic != "P5") throw ParseError("netpbm: expected P5, got " + h.magic);
    GrayImage img;
    img.width = h.width;
    img.height = h.height;
    img.pixels.resize(static_cast<std::size_t>(h.width) * h.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
        throw ParseError("netpbm: truncated pixel data in " + path);
    return img;
}

RasterImage load_ppm(const std::string& path) {
    auto in = open_binary(path);
    const Header h = read_header(in);
    if (h.magic != "P6") throw ParseError("netpbm: expected P6, got " + h.magic);
    RasterImage img;
    img.width = h.width;
    img.height = h.height;
    img.pixels.resize(static_cast<std::size_t>(h.width) * h.height * 3);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
        throw ParseError("netpbm: truncated pixel data in " + path);
    return img;
}

GrayImage load_image(const std::string& path) {
    auto in = open_binary(path);
    std::string magic = next_token(in);
    in.close();
    if (magic == "P5") return load_pgm(path);
    if (magic == "P6") return to_grayscale(load_ppm(path));
    throw ParseError("netpbm: unsupported magic " + magic + " in " + path);
}

void save_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw IoError("write failed: " + path);
}

void save_ppm(const std::string& path, const RasterImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw IoError("write failed: " + path);
}

GrayImage to_gray(const NormImage& img) {
    GrayImage g;
    g.width = img.width;
    g.height = img.height;
    g.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const double v = std::round(img.pixels[i] * 255.0);
        g.pixels[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
    return g;
}

void save_pgm(const std::string& path, const NormImage& img) {
    save_pgm(path, to_gray(img));
}

}  // namespace rx
