#pragma once

#include <string>

#include "rx/image.hpp"

namespace rx {

// Binary Netpbm, maxval 255. load_image accepts both P5 and P6 and
// converts color to grayscale via to_grayscale.
GrayImage load_pgm(const std::string& path);
RasterImage load_ppm(const std::string& path);
GrayImage load_image(const std::string& path);

void save_pgm(const std::string& path, const GrayImage& img);
void save_ppm(const std::string& path, const RasterImage& img);

// Rounds [0,1] intensities back to 0..255.
void save_pgm(const std::string& path, const NormImage& img);
GrayImage to_gray(const NormImage& img);

}  // namespace rx
