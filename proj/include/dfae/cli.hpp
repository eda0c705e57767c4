#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dfae/config.hpp"

namespace dfae {

/// Trains per the config and writes exactly {config.txt, checkpoint.dfae,
/// metrics.csv} into the output directory.
void cmd_train(const std::filesystem::path& config_path);

/// Prints the checkpoint's test MSE (and percent form) on the configured
/// test split.
void cmd_evaluate(const std::filesystem::path& config_path,
                  const std::filesystem::path& checkpoint_path);

/// Per-algorithm reconstruction MSE table over downsample factors, written
/// to baseline.csv. Requires a downsample foveation; the optional
/// checkpoint adds a dfae row at its own factor.
void cmd_baseline(const std::filesystem::path& config_path,
                  const std::filesystem::path& checkpoint_path = {});

/// Writes preview.png: the original next to its foveated rendering.
/// input_png overrides the dataset image at `index`.
void cmd_foveate(const std::filesystem::path& config_path,
                 const std::filesystem::path& input_png, std::size_t index);

/// Writes filters.png: first-layer weights mapped back to image geometry.
void cmd_filters(const std::filesystem::path& config_path,
                 const std::filesystem::path& checkpoint_path);

/// Writes reconstruction.png: original / foveated / (bilinear) / network
/// rows for the requested test images.
void cmd_reconstruct(const std::filesystem::path& config_path,
                     const std::filesystem::path& checkpoint_path,
                     const std::vector<std::size_t>& indices);

/// 0 on success, 1 for usage/config problems, 2 for data problems.
int exit_code_for(const std::exception& error);

/// Full argument parsing + dispatch; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace dfae
