#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dfae {

/// H x W x C raster of intensities in [0,1], row-major and
/// channel-interleaved: data[(r*width + c)*channels + ch].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> data;

  Image() = default;
  Image(int h, int w, int c, double fill = 0.0)
      : height(h),
        width(w),
        channels(c),
        data(static_cast<std::size_t>(h) * w * c, fill) {}

  double& at(int r, int c, int ch = 0) {
    return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }
  double at(int r, int c, int ch = 0) const {
    return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }

  int pixel_count() const { return height * width; }
  int value_count() const { return height * width * channels; }
  bool same_shape(const Image& other) const {
    return height == other.height && width == other.width &&
           channels == other.channels;
  }
};

/// Floor of the mean squared error before PSNR's log, so a perfect
/// reconstruction stays finite.
inline constexpr double kPsnrEpsilon = 1e-12;

/// Reconstruction quality pair: mse >= 0 and the matching
/// psnr = log10(1/sqrt(max(mse, kPsnrEpsilon))).
struct Metric {
  double mse = 0.0;
  double psnr = 0.0;
};

Metric measure(std::span<const double> x, std::span<const double> y);
Metric measure(const Image& x, const Image& y);

Image downsample_nearest(const Image& img, int factor);
Image upsample_nearest(const Image& img, int target_height, int target_width);
Image upsample_bilinear(const Image& img, int target_height, int target_width);
Image to_grayscale(const Image& img);

double mse(std::span<const double> x, std::span<const double> y);
double mse(const Image& x, const Image& y);

/// log10(1/sqrt(max(mse, kPsnrEpsilon))): higher is better, 0 at mse = 1.
double psnr_from_mse(double mse_value);
double psnr(std::span<const double> x, std::span<const double> y);
double psnr(const Image& x, const Image& y);

}  // namespace dfae
