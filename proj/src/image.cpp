#include "dfae/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dfae/errors.hpp"

namespace dfae {

Image downsample_nearest(const Image& img, int factor) {
  if (factor < 1) {
    throw std::invalid_argument("downsample factor must be >= 1, got " +
                                std::to_string(factor));
  }
  if (img.height % factor != 0 || img.width % factor != 0) {
    throw DimensionError("downsample factor " + std::to_string(factor) +
                         " does not divide " + std::to_string(img.height) +
                         "x" + std::to_string(img.width));
  }
  Image out(img.height / factor, img.width / factor, img.channels);
  for (int r = 0; r < out.height; ++r) {
    for (int c = 0; c < out.width; ++c) {
      for (int ch = 0; ch < out.channels; ++ch) {
        // Top-left sample of each factor x factor block.
        out.at(r, c, ch) = img.at(r * factor, c * factor, ch);
      }
    }
  }
  return out;
}

Image upsample_nearest(const Image& img, int target_height, int target_width) {
  if (target_height < img.height || target_width < img.width) {
    throw std::invalid_argument("upsample target must not shrink the image");
  }
  Image out(target_height, target_width, img.channels);
  for (int r = 0; r < out.height; ++r) {
    const int sr = static_cast<int>(static_cast<long long>(r) * img.height /
                                    target_height);
    for (int c = 0; c < out.width; ++c) {
      const int sc = static_cast<int>(static_cast<long long>(c) * img.width /
                                      target_width);
      for (int ch = 0; ch < out.channels; ++ch) {
        out.at(r, c, ch) = img.at(sr, sc, ch);
      }
    }
  }
  return out;
}

namespace {

// Align-corners source coordinate: endpoints map to endpoints exactly.
double source_coord(int dst, int src_size, int dst_size) {
  if (dst_size <= 1) return 0.0;
  return static_cast<double>(dst) * (src_size - 1) / (dst_size - 1);
}

}  // namespace

Image upsample_bilinear(const Image& img, int target_height, int target_width) {
  if (target_height < img.height || target_width < img.width) {
    throw std::invalid_argument("upsample target must not shrink the image");
  }
  Image out(target_height, target_width, img.channels);
  for (int r = 0; r < out.height; ++r) {
    const double sy = source_coord(r, img.height, target_height);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fy = sy - y0;
    for (int c = 0; c < out.width; ++c) {
      const double sx = source_coord(c, img.width, target_width);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double fx = sx - x0;
      for (int ch = 0; ch < out.channels; ++ch) {
        const double top =
            img.at(y0, x0, ch) * (1.0 - fx) + img.at(y0, x1, ch) * fx;
        const double bottom =
            img.at(y1, x0, ch) * (1.0 - fx) + img.at(y1, x1, ch) * fx;
        const double v = top * (1.0 - fy) + bottom * fy;
        out.at(r, c, ch) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return out;
}

Image to_grayscale(const Image& img) {
  if (img.channels != 3) {
    throw std::invalid_argument("to_grayscale expects 3 channels, got " +
                                std::to_string(img.channels));
  }
  Image out(img.height, img.width, 1);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      out.at(r, c) =
          (img.at(r, c, 0) + img.at(r, c, 1) + img.at(r, c, 2)) / 3.0;
    }
  }
  return out;
}

double mse(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("mse operands differ in length: " +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  if (x.empty()) {
    throw DimensionError("mse of empty vectors is undefined");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double mse(const Image& x, const Image& y) {
  if (!x.same_shape(y)) {
    throw DimensionError("mse operands differ in shape");
  }
  return mse(std::span<const double>(x.data), std::span<const double>(y.data));
}

double psnr_from_mse(double mse_value) {
  return std::log10(1.0 / std::sqrt(std::max(mse_value, kPsnrEpsilon)));
}

Metric measure(std::span<const double> x, std::span<const double> y) {
  const double m = mse(x, y);
  return Metric{m, psnr_from_mse(m)};
}

Metric measure(const Image& x, const Image& y) {
  return measure(std::span<const double>(x.data),
                 std::span<const double>(y.data));
}

double psnr(std::span<const double> x, std::span<const double> y) {
  return psnr_from_mse(mse(x, y));
}

double psnr(const Image& x, const Image& y) {
  return psnr_from_mse(mse(x, y));
}

}  // namespace dfae
