#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dfae/image.hpp"

namespace dfae {

enum class Split { Train, Test };
enum class ColorMode { Color, Grayscale };

struct Dataset {
  std::string name;
  Split split = Split::Train;
  int channels = 1;
  std::vector<Image> images;
  std::vector<int> labels;  // parsed and kept, unused by training

  std::size_t size() const { return images.size(); }
};

/// One training example: the centered network input and the flat original
/// image the network must reproduce.
struct ExamplePair {
  Eigen::VectorXd input;   // zero-centered foveated vector
  Eigen::VectorXd target;  // flattened original intensities in [0,1]
};

/// MNIST IDX pair (big-endian headers, magic 2051/2049). Intensities are
/// scaled byte/255.
Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path, Split split);

/// CIFAR-100 binary: records of [coarse label, fine label, 3072 bytes of
/// planar RGB]. Grayscale mode averages the channels after decode.
Dataset load_cifar100(const std::filesystem::path& path, Split split,
                      ColorMode mode);

/// Splits an image into (centered input, unchanged target) flat vectors.
/// Centering subtracts the image's own mean; targets stay in [0,1].
std::pair<std::vector<double>, std::vector<double>> preprocess(
    const Image& img);

/// Subtracts the vector's mean from each component.
Eigen::VectorXd center(const Eigen::VectorXd& v);

/// Deterministic pseudorandom subset of n images (a permutation when
/// n == ds.size()), stable across platforms.
Dataset subsample(const Dataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace dfae
