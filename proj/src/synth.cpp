#include "dfae/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "dfae/rng.hpp"

namespace dfae::synth {

namespace {

// 5x7 digit glyphs, row strings top to bottom.
constexpr std::array<std::array<const char*, 7>, 10> kGlyphs = {{
    {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."},
    {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."},
    {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"},
    {".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."},
    {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."},
    {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."},
    {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."},
    {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."},
    {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."},
    {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."},
}};

constexpr double kTau = 6.283185307179586;

}  // namespace

Dataset digits(std::size_t count, std::uint64_t seed) {
  Dataset ds;
  ds.name = "mnist";
  ds.channels = 1;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed, i));
    const int digit = static_cast<int>(rng.index(10));
    const int scale = 3;                                  // 15x21 glyph
    const int dx = 2 + static_cast<int>(rng.index(10));   // fits 28 wide
    const int dy = 1 + static_cast<int>(rng.index(6));    // fits 28 tall
    const double ink = rng.uniform(0.75, 1.0);
    const bool thick = rng.index(2) == 0;

    Image img(28, 28, 1);
    for (int gr = 0; gr < 7; ++gr) {
      for (int gc = 0; gc < 5; ++gc) {
        if (kGlyphs[static_cast<std::size_t>(digit)][static_cast<std::size_t>(
                gr)][gc] != '#') {
          continue;
        }
        const int extent = scale + (thick ? 1 : 0);
        for (int r = 0; r < extent; ++r) {
          for (int c = 0; c < extent; ++c) {
            const int row = dy + gr * scale + r;
            const int col = dx + gc * scale + c;
            if (row < 28 && col < 28) img.at(row, col) = ink;
          }
        }
      }
    }
    ds.images.push_back(std::move(img));
    ds.labels.push_back(digit);
  }
  return ds;
}

Dataset natural(std::size_t count, std::uint64_t seed, ColorMode mode) {
  Dataset ds;
  ds.name = "cifar100";
  ds.channels = mode == ColorMode::Color ? 3 : 1;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  constexpr int kSide = 32;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed, i));

    // Luminance: a gradient, three low-frequency waves, and two
    // mid-frequency texture waves that do not survive d=4 sampling.
    const double grad = rng.uniform(-0.25, 0.25);
    struct Wave {
      double fx, fy, phase, amp;
    };
    std::array<Wave, 5> waves;
    for (std::size_t w = 0; w < waves.size(); ++w) {
      if (w < 3) {
        waves[w].fx = static_cast<double>(rng.index(3));
        waves[w].fy = waves[w].fx == 0.0
                          ? 1.0 + static_cast<double>(rng.index(2))
                          : static_cast<double>(rng.index(3));
        waves[w].amp = rng.uniform(0.04, 0.10);
      } else {
        waves[w].fx = 3.0 + static_cast<double>(rng.index(5));
        waves[w].fy = 3.0 + static_cast<double>(rng.index(5));
        waves[w].amp = rng.uniform(0.03, 0.06);
      }
      waves[w].phase = rng.uniform(0.0, kTau);
    }

    // One or two soft-edged elliptical objects.
    const int object_count = 1 + static_cast<int>(rng.index(2));
    struct Object {
      double cy, cx, ry, rx, delta;
    };
    std::array<Object, 2> objects;
    for (int k = 0; k < object_count; ++k) {
      objects[static_cast<std::size_t>(k)] = Object{
          rng.uniform(6.0, 26.0), rng.uniform(6.0, 26.0),
          rng.uniform(3.5, 9.0), rng.uniform(3.5, 9.0),
          rng.uniform(0.12, 0.28) * (rng.index(2) == 0 ? 1.0 : -1.0)};
    }

    // Fine-grained luminance detail: an i.i.d. field blurred by a 3x3
    // binomial kernel, so the image manifold is genuinely high-dimensional
    // and coarse sampling loses information.
    std::array<double, kSide * kSide> raw{};
    for (double& v : raw) v = rng.uniform(-0.2, 0.2);
    std::array<double, kSide * kSide> detail{};
    for (int r = 0; r < kSide; ++r) {
      for (int c = 0; c < kSide; ++c) {
        double acc = 0.0;
        double norm = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr;
            const int cc = c + dc;
            if (rr < 0 || rr >= kSide || cc < 0 || cc >= kSide) continue;
            const double wgt = (2 - std::abs(dr)) * (2 - std::abs(dc));
            acc += wgt * raw[static_cast<std::size_t>(rr) * kSide + cc];
            norm += wgt;
          }
        }
        detail[static_cast<std::size_t>(r) * kSide + c] = acc / norm;
      }
    }

    // Palette phase (8 levels) and chroma; the three channel offsets are
    // 120 degrees apart, so their mean is identically zero and grayscale
    // images carry no trace of the phase.
    const int palette = static_cast<int>(rng.index(8));
    const double theta = kTau * palette / 8.0;
    const double chroma = rng.uniform(0.10, 0.15);

    Image img(kSide, kSide, 3);
    for (int r = 0; r < kSide; ++r) {
      for (int c = 0; c < kSide; ++c) {
        double base = 0.5 + grad * (r / 31.0 - 0.5);
        for (const Wave& w : waves) {
          base += w.amp * std::cos(kTau * (w.fx * c + w.fy * r) / kSide +
                                   w.phase);
        }
        for (int k = 0; k < object_count; ++k) {
          const Object& o = objects[static_cast<std::size_t>(k)];
          const double dr = (r - o.cy) / o.ry;
          const double dc = (c - o.cx) / o.rx;
          const double dist = std::sqrt(dr * dr + dc * dc);
          if (dist < 1.25) {
            const double edge =
                std::clamp((1.25 - dist) / 0.25, 0.0, 1.0);
            base += o.delta * edge;
          }
        }
        base += detail[static_cast<std::size_t>(r) * kSide + c];
        base = std::clamp(base, 0.20, 0.80);
        for (int ch = 0; ch < 3; ++ch) {
          img.at(r, c, ch) = base + chroma * std::cos(theta + kTau * ch / 3.0);
        }
      }
    }
    ds.images.push_back(mode == ColorMode::Color ? std::move(img)
                                                 : to_grayscale(img));
    ds.labels.push_back(palette);
  }
  return ds;
}

namespace {

void write_be32(std::ofstream& out, std::uint32_t v) {
  char bytes[4] = {static_cast<char>((v >> 24) & 0xff),
                   static_cast<char>((v >> 16) & 0xff),
                   static_cast<char>((v >> 8) & 0xff),
                   static_cast<char>(v & 0xff)};
  out.write(bytes, 4);
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(
      std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

void write_idx(const Dataset& ds, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
  if (ds.channels != 1) {
    throw std::invalid_argument("IDX export expects grayscale images");
  }
  std::ofstream images(images_path, std::ios::binary | std::ios::trunc);
  std::ofstream labels(labels_path, std::ios::binary | std::ios::trunc);
  if (!images || !labels) {
    throw std::runtime_error("cannot open IDX output files");
  }
  const Image& first = ds.images.front();
  write_be32(images, 2051);
  write_be32(images, static_cast<std::uint32_t>(ds.size()));
  write_be32(images, static_cast<std::uint32_t>(first.height));
  write_be32(images, static_cast<std::uint32_t>(first.width));
  write_be32(labels, 2049);
  write_be32(labels, static_cast<std::uint32_t>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.images[i].data) {
      const char byte = static_cast<char>(to_byte(v));
      images.write(&byte, 1);
    }
    const char label = static_cast<char>(ds.labels[i]);
    labels.write(&label, 1);
  }
}

void write_cifar(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open CIFAR output file: " +
                             path.string());
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Image& img = ds.images[i];
    if (img.height != 32 || img.width != 32 || img.channels != 3) {
      throw std::invalid_argument("CIFAR export expects 32x32 color images");
    }
    const char coarse = static_cast<char>(ds.labels[i] / 5);
    const char fine = static_cast<char>(ds.labels[i]);
    out.write(&coarse, 1);
    out.write(&fine, 1);
    for (int ch = 0; ch < 3; ++ch) {
      for (int p = 0; p < 1024; ++p) {
        const char byte = static_cast<char>(
            to_byte(img.data[static_cast<std::size_t>(p) * 3 + ch]));
        out.write(&byte, 1);
      }
    }
  }
}

}  // namespace dfae::synth
