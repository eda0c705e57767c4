#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dfae/datasets.hpp"
#include "dfae/image.hpp"
#include "dfae/rng.hpp"

namespace dfae {

enum class FoveationKind {
  Downsample,       // whole image nearest-downsampled by d
  Scotoma,          // region intensities set to 0, full resolution kept
  Fovea,            // full-res region, d-downsampled periphery
  Achromatic,       // color kept in region, channel-mean periphery
  FoveaAchromatic,  // color fovea, grayscale d-downsampled periphery
};

enum class LocationKind { Centered, Quadrant, RandomQuadrant };

struct Location {
  LocationKind kind = LocationKind::Centered;
  int quadrant = 0;  // 0..3 raster order, used by Quadrant only
};

/// Declarative description of one foveation function.
struct FoveationSpec {
  FoveationKind kind = FoveationKind::Downsample;
  double region_fraction = 0.0;  // fraction of image area in [0,1]
  int factor = 1;                // downsample factor, must divide H and W
  Location location;
};

/// Half-open pixel rectangle [top, top+height) x [left, left+width).
struct Rect {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;

  bool empty() const { return height <= 0 || width <= 0; }
  bool contains(int r, int c) const {
    return r >= top && r < top + height && c >= left && c < left + width;
  }
  bool contains(const Rect& other) const {
    return other.top >= top && other.left >= left &&
           other.top + other.height <= top + height &&
           other.left + other.width <= left + width;
  }
};

/// How one layout slot turns source pixels into vector values.
enum class SlotMode {
  FullPixels,  // every pixel, every channel: rows*cols*C values
  SampleRgb,   // top-left pixel of the block, all channels: C values
  SampleGray,  // channel mean of the top-left pixel: 1 value
  GrayPixel,   // channel mean of a single pixel: 1 value
  Zeroed,      // rows*cols*C stored zeros
};

struct Slot {
  int top = 0;
  int left = 0;
  int rows = 1;
  int cols = 1;
  SlotMode mode = SlotMode::FullPixels;
};

/// Maps each vector position to its source pixels. Slot sources are
/// disjoint and cover the image exactly once.
struct Layout {
  int image_height = 0;
  int image_width = 0;
  int image_channels = 1;
  std::vector<Slot> slots;
  int total_len = 0;

  static int slot_len(const Slot& slot, int channels);
};

struct FoveatedInput {
  std::vector<double> values;  // pre-centering intensities in [0,1]
  Layout layout;
  FoveationSpec spec;
};

/// Realizes the spec's region on an image of the given size. Random
/// quadrants draw from the supplied generator.
Rect resolve_location(const FoveationSpec& spec, int height, int width,
                      Rng& rng);

/// Builds the slot layout for a resolved region.
Layout make_layout(const FoveationSpec& spec, int height, int width,
                   int channels, const Rect& region);

/// Applies the foveation with an explicitly resolved region.
FoveatedInput foveate_at(const Image& img, const FoveationSpec& spec,
                         const Rect& region);

/// Resolves the region and applies the foveation.
FoveatedInput foveate(const Image& img, const FoveationSpec& spec, Rng& rng);

/// Paints arbitrary per-slot values back onto image geometry (block samples
/// replicated, gray broadcast across channels). No range clamping.
Image render_slots(const Layout& layout, std::span<const double> values);

/// Renders a foveated input back to an image for inspection; the exact
/// inverse of foveate for Scotoma.
Image render_foveated(const FoveatedInput& fi, int target_height,
                      int target_width);

/// Foveates every image of a dataset; example i draws its randomness from
/// mix_seed(seed, i), so results do not depend on iteration order.
struct FoveatedDataset {
  std::vector<ExamplePair> pairs;
  Layout layout;  // layout of example 0
  int image_height = 0;
  int image_width = 0;
  int image_channels = 1;
};
FoveatedDataset foveate_dataset(const Dataset& ds, const FoveationSpec& spec,
                                std::uint64_t seed);

std::string to_string(FoveationKind kind);

}  // namespace dfae
