#include "dfae/datasets.hpp"

#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "dfae/errors.hpp"
#include "dfae/rng.hpp"

namespace dfae {

namespace {

constexpr std::uint32_t kIdxImageMagic = 2051;
constexpr std::uint32_t kIdxLabelMagic = 2049;
constexpr std::size_t kCifarRecordBytes = 2 + 3 * 32 * 32;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open file: " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes,
                        std::size_t offset, const std::string& what) {
  if (offset + 4 > bytes.size()) {
    throw ParseError("truncated " + what + " at offset " +
                     std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) |
         (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) |
         std::uint32_t{bytes[offset + 3]};
}

}  // namespace

Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path, Split split) {
  const auto image_bytes = read_file(images_path);
  const auto label_bytes = read_file(labels_path);

  const std::uint32_t image_magic = read_be32(image_bytes, 0, "IDX header");
  if (image_magic != kIdxImageMagic) {
    throw ParseError("bad IDX image magic " + std::to_string(image_magic) +
                     " at offset 0 in " + images_path.string());
  }
  const std::uint32_t count = read_be32(image_bytes, 4, "IDX header");
  const std::uint32_t rows = read_be32(image_bytes, 8, "IDX header");
  const std::uint32_t cols = read_be32(image_bytes, 12, "IDX header");
  const std::size_t expected = 16 + std::size_t{count} * rows * cols;
  if (image_bytes.size() != expected) {
    throw ParseError("IDX image file length " +
                     std::to_string(image_bytes.size()) + " != expected " +
                     std::to_string(expected) + " (data begins at offset 16)");
  }

  const std::uint32_t label_magic = read_be32(label_bytes, 0, "IDX header");
  if (label_magic != kIdxLabelMagic) {
    throw ParseError("bad IDX label magic " + std::to_string(label_magic) +
                     " at offset 0 in " + labels_path.string());
  }
  const std::uint32_t label_count = read_be32(label_bytes, 4, "IDX header");
  if (label_bytes.size() != 8 + std::size_t{label_count}) {
    throw ParseError("IDX label file length " +
                     std::to_string(label_bytes.size()) + " != expected " +
                     std::to_string(8 + std::size_t{label_count}));
  }
  if (label_count != count) {
    throw ParseError("IDX image/label count mismatch: " +
                     std::to_string(count) + " vs " +
                     std::to_string(label_count));
  }

  Dataset ds;
  ds.name = "mnist";
  ds.split = split;
  ds.channels = 1;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  std::size_t offset = 16;
  for (std::uint32_t i = 0; i < count; ++i) {
    Image img(static_cast<int>(rows), static_cast<int>(cols), 1);
    for (std::size_t p = 0; p < std::size_t{rows} * cols; ++p) {
      img.data[p] = image_bytes[offset + p] / 255.0;
    }
    offset += std::size_t{rows} * cols;
    ds.images.push_back(std::move(img));
    ds.labels.push_back(label_bytes[8 + i]);
  }
  return ds;
}

Dataset load_cifar100(const std::filesystem::path& path, Split split,
                      ColorMode mode) {
  const auto bytes = read_file(path);
  if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
    const std::size_t whole = bytes.size() / kCifarRecordBytes;
    throw ParseError("CIFAR-100 file length " + std::to_string(bytes.size()) +
                     " is not a multiple of " +
                     std::to_string(kCifarRecordBytes) +
                     "; record " + std::to_string(whole) + " is truncated");
  }

  Dataset ds;
  ds.name = "cifar100";
  ds.split = split;
  ds.channels = mode == ColorMode::Color ? 3 : 1;
  const std::size_t count = bytes.size() / kCifarRecordBytes;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t base = i * kCifarRecordBytes;
    ds.labels.push_back(bytes[base + 1]);  // fine label; coarse is byte 0
    Image img(32, 32, 3);
    for (int ch = 0; ch < 3; ++ch) {
      const std::size_t plane = base + 2 + static_cast<std::size_t>(ch) * 1024;
      for (int p = 0; p < 1024; ++p) {
        img.data[static_cast<std::size_t>(p) * 3 + ch] =
            bytes[plane + p] / 255.0;
      }
    }
    ds.images.push_back(mode == ColorMode::Color ? std::move(img)
                                                 : to_grayscale(img));
  }
  return ds;
}

std::pair<std::vector<double>, std::vector<double>> preprocess(
    const Image& img) {
  std::vector<double> target = img.data;
  const double mean =
      std::accumulate(target.begin(), target.end(), 0.0) /
      static_cast<double>(target.size());
  std::vector<double> centered(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    centered[i] = target[i] - mean;
  }
  return {std::move(centered), std::move(target)};
}

Eigen::VectorXd center(const Eigen::VectorXd& v) {
  return v.array() - v.mean();
}

Dataset subsample(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  if (n > ds.size()) {
    throw std::invalid_argument("subsample size " + std::to_string(n) +
                                " exceeds dataset size " +
                                std::to_string(ds.size()));
  }
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  Dataset out;
  out.name = ds.name;
  out.split = ds.split;
  out.channels = ds.channels;
  out.images.reserve(n);
  out.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.images.push_back(ds.images[order[i]]);
    out.labels.push_back(ds.labels[order[i]]);
  }
  return out;
}

}  // namespace dfae
