#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dfae/datasets.hpp"
#include "dfae/foveation.hpp"
#include "dfae/trainer.hpp"

namespace dfae {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetConfig {
  std::string name;  // mnist | cifar100
  std::string images;
  std::string labels;
  std::string test_images;
  std::string test_labels;
  ColorMode color_mode = ColorMode::Grayscale;
  std::size_t subsample = 0;  // 0 keeps the full split
  std::size_t test_subsample = 0;
  std::uint64_t seed = 0;

  bool operator==(const DatasetConfig&) const = default;
};

struct ModelConfig {
  std::vector<int> hidden;

  bool operator==(const ModelConfig&) const = default;
};

/// One experiment: dataset, foveation, model, training, output directory.
/// The network's size chain [m, hidden..., n] is computed from the dataset
/// geometry and the foveation, never user-supplied.
struct ExperimentConfig {
  DatasetConfig dataset;
  FoveationSpec foveation;
  ModelConfig model;
  TrainConfig train;
  std::string output_dir;
  std::vector<int> baseline_factors;  // empty = derive from image size

  bool operator==(const ExperimentConfig&) const;
};

/// Parses the flat section/key format. Dataset paths are validated and
/// resolved (relative paths fall back to $DFAE_DATA_DIR); diagnostics name
/// the offending section.key.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes a snapshot that load_config reads back to an equal configuration.
void save_config(const std::filesystem::path& path,
                 const ExperimentConfig& cfg);

bool operator==(const FoveationSpec& a, const FoveationSpec& b);
bool operator==(const TrainConfig& a, const TrainConfig& b);

/// Loads the configured train/test splits (subsampled when requested).
std::pair<Dataset, Dataset> load_config_datasets(const ExperimentConfig& cfg);

}  // namespace dfae
