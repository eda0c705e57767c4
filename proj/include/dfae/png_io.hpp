#pragma once

#include <filesystem>

#include "dfae/image.hpp"

namespace dfae {

/// Reads an 8-bit PNG as grayscale (1 channel) or RGB (3 channels).
/// Palette images are expanded; 16-bit depth and alpha are reduced.
Image read_png(const std::filesystem::path& path);

/// Writes 8-bit grayscale or RGB PNG; intensities are clamped to [0,1]
/// and rounded to bytes.
void write_png(const std::filesystem::path& path, const Image& img);

}  // namespace dfae
