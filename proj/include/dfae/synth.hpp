#pragma once

#include <cstdint>
#include <filesystem>

#include "dfae/datasets.hpp"

namespace dfae::synth {

/// Deterministic 28x28 grayscale digit corpus: glyphs from a 5x7 font,
/// scaled, jittered in position, thickness and intensity. Labels are the
/// digit indices.
Dataset digits(std::size_t count, std::uint64_t seed);

/// Deterministic 32x32 natural-style corpus: smooth multi-frequency
/// luminance fields with soft-edged objects, colored through a per-image
/// palette phase that cancels exactly under channel averaging, so the
/// palette is observable only where color survives. Labels bucket the
/// palette phase.
Dataset natural(std::size_t count, std::uint64_t seed,
                ColorMode mode = ColorMode::Color);

/// Writes a grayscale dataset as an IDX image/label file pair.
void write_idx(const Dataset& ds, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

/// Writes a 32x32 color dataset as a CIFAR-100 style binary file.
void write_cifar(const Dataset& ds, const std::filesystem::path& path);

}  // namespace dfae::synth
