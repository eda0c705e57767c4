#include "dfae/foveation.hpp"

#include <cmath>
#include <stdexcept>

#include "dfae/errors.hpp"

namespace dfae {

namespace {

bool uses_blocks(FoveationKind kind) {
  return kind == FoveationKind::Downsample || kind == FoveationKind::Fovea ||
         kind == FoveationKind::FoveaAchromatic;
}

void validate_spec(const FoveationSpec& spec, int height, int width) {
  if (spec.factor < 1) {
    throw std::invalid_argument("foveation factor must be >= 1, got " +
                                std::to_string(spec.factor));
  }
  if (spec.region_fraction < 0.0 || spec.region_fraction > 1.0) {
    throw SpecError("region fraction must lie in [0,1], got " +
                    std::to_string(spec.region_fraction));
  }
  if (uses_blocks(spec.kind) &&
      (height % spec.factor != 0 || width % spec.factor != 0)) {
    throw DimensionError("factor " + std::to_string(spec.factor) +
                         " does not divide " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
}

// Nearest multiple of step, clamped to [0, limit].
int snap(double value, int step, int limit) {
  const int v = step * static_cast<int>(std::lround(value / step));
  return std::min(std::max(v, 0), limit);
}

int region_side(const FoveationSpec& spec, int height, int width) {
  const int bound = std::min(height, width);
  const double raw = std::sqrt(spec.region_fraction) * bound;
  if (uses_blocks(spec.kind)) {
    // Side on the block grid so blocks are never split.
    return snap(raw, spec.factor, bound - bound % spec.factor);
  }
  return std::min(static_cast<int>(std::lround(raw)), bound);
}

}  // namespace

int Layout::slot_len(const Slot& slot, int channels) {
  switch (slot.mode) {
    case SlotMode::FullPixels:
    case SlotMode::Zeroed:
      return slot.rows * slot.cols * channels;
    case SlotMode::SampleRgb:
      return channels;
    case SlotMode::SampleGray:
    case SlotMode::GrayPixel:
      return 1;
  }
  return 0;
}

Rect resolve_location(const FoveationSpec& spec, int height, int width,
                      Rng& rng) {
  validate_spec(spec, height, width);
  if (spec.region_fraction >= 1.0) {
    return Rect{0, 0, height, width};  // whole image regardless of location
  }

  Location loc = spec.location;
  if (loc.kind == LocationKind::RandomQuadrant) {
    loc = Location{LocationKind::Quadrant, static_cast<int>(rng.index(4))};
  }

  // Pixel-granular kinds realize r = 1/2 in a quadrant location as a half
  // image: a pair of horizontally adjacent quadrants picked by the draw.
  if (!uses_blocks(spec.kind) && loc.kind == LocationKind::Quadrant &&
      spec.region_fraction == 0.5 && height % 2 == 0) {
    const int top = loc.quadrant < 2 ? 0 : height / 2;
    return Rect{top, 0, height / 2, width};
  }

  const int side = region_side(spec, height, width);
  if (side <= 0) return Rect{};
  if (side > height || side > width) {
    throw SpecError("fovea side " + std::to_string(side) +
                    " exceeds image bounds " + std::to_string(height) + "x" +
                    std::to_string(width));
  }

  int top = 0;
  int left = 0;
  switch (loc.kind) {
    case LocationKind::Centered:
      if (uses_blocks(spec.kind)) {
        top = snap((height - side) / 2.0, spec.factor, height - side);
        left = snap((width - side) / 2.0, spec.factor, width - side);
      } else {
        top = (height - side) / 2;
        left = (width - side) / 2;
      }
      break;
    case LocationKind::Quadrant:
      if (loc.quadrant < 0 || loc.quadrant > 3) {
        throw SpecError("quadrant index must be 0..3, got " +
                        std::to_string(loc.quadrant));
      }
      top = loc.quadrant < 2 ? 0 : height - side;
      left = loc.quadrant % 2 == 0 ? 0 : width - side;
      break;
    case LocationKind::RandomQuadrant:
      break;  // already replaced above
  }
  return Rect{top, left, side, side};
}

Layout make_layout(const FoveationSpec& spec, int height, int width,
                   int channels, const Rect& region) {
  validate_spec(spec, height, width);
  if (!region.empty() &&
      !(Rect{0, 0, height, width}.contains(region))) {
    throw SpecError("region exceeds image bounds");
  }

  const int d = spec.factor;
  if (uses_blocks(spec.kind) && !region.empty() &&
      (region.top % d != 0 || region.left % d != 0 ||
       region.height % d != 0 || region.width % d != 0)) {
    throw SpecError("fovea region is not aligned to the " + std::to_string(d) +
                    "-pixel block grid");
  }

  Layout layout;
  layout.image_height = height;
  layout.image_width = width;
  layout.image_channels = channels;
  const auto block_grid = [&](auto&& classify) {
    layout.slots.reserve(static_cast<std::size_t>(height / d) * (width / d));
    for (int br = 0; br < height / d; ++br) {
      for (int bc = 0; bc < width / d; ++bc) {
        Slot slot{br * d, bc * d, d, d, SlotMode::SampleRgb};
        slot.mode = classify(slot);
        layout.slots.push_back(slot);
      }
    }
  };
  const auto pixel_grid = [&](auto&& classify) {
    layout.slots.reserve(static_cast<std::size_t>(height) * width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        Slot slot{r, c, 1, 1, SlotMode::FullPixels};
        slot.mode = classify(r, c);
        layout.slots.push_back(slot);
      }
    }
  };

  switch (spec.kind) {
    case FoveationKind::Downsample:
      block_grid([](const Slot&) { return SlotMode::SampleRgb; });
      break;
    case FoveationKind::Scotoma:
      pixel_grid([&](int r, int c) {
        return region.contains(r, c) ? SlotMode::Zeroed : SlotMode::FullPixels;
      });
      break;
    case FoveationKind::Fovea:
      block_grid([&](const Slot& s) {
        const Rect block{s.top, s.left, s.rows, s.cols};
        return region.contains(block) ? SlotMode::FullPixels
                                      : SlotMode::SampleRgb;
      });
      break;
    case FoveationKind::Achromatic:
      pixel_grid([&](int r, int c) {
        return region.contains(r, c) ? SlotMode::FullPixels
                                     : SlotMode::GrayPixel;
      });
      break;
    case FoveationKind::FoveaAchromatic:
      block_grid([&](const Slot& s) {
        const Rect block{s.top, s.left, s.rows, s.cols};
        return region.contains(block) ? SlotMode::FullPixels
                                      : SlotMode::SampleGray;
      });
      break;
  }

  layout.total_len = 0;
  for (const Slot& slot : layout.slots) {
    layout.total_len += Layout::slot_len(slot, channels);
  }
  return layout;
}

FoveatedInput foveate_at(const Image& img, const FoveationSpec& spec,
                         const Rect& region) {
  FoveatedInput fi;
  fi.spec = spec;
  fi.layout = make_layout(spec, img.height, img.width, img.channels, region);
  fi.values.reserve(static_cast<std::size_t>(fi.layout.total_len));

  const int C = img.channels;
  for (const Slot& slot : fi.layout.slots) {
    switch (slot.mode) {
      case SlotMode::FullPixels:
        for (int r = slot.top; r < slot.top + slot.rows; ++r) {
          for (int c = slot.left; c < slot.left + slot.cols; ++c) {
            for (int ch = 0; ch < C; ++ch) {
              fi.values.push_back(img.at(r, c, ch));
            }
          }
        }
        break;
      case SlotMode::SampleRgb:
        for (int ch = 0; ch < C; ++ch) {
          fi.values.push_back(img.at(slot.top, slot.left, ch));
        }
        break;
      case SlotMode::SampleGray: {
        double sum = 0.0;
        for (int ch = 0; ch < C; ++ch) sum += img.at(slot.top, slot.left, ch);
        fi.values.push_back(sum / C);
        break;
      }
      case SlotMode::GrayPixel: {
        double sum = 0.0;
        for (int ch = 0; ch < C; ++ch) sum += img.at(slot.top, slot.left, ch);
        fi.values.push_back(sum / C);
        break;
      }
      case SlotMode::Zeroed:
        fi.values.insert(fi.values.end(),
                         static_cast<std::size_t>(slot.rows) * slot.cols * C,
                         0.0);
        break;
    }
  }
  return fi;
}

FoveatedInput foveate(const Image& img, const FoveationSpec& spec, Rng& rng) {
  return foveate_at(img, spec,
                    resolve_location(spec, img.height, img.width, rng));
}

Image render_slots(const Layout& layout, std::span<const double> values) {
  if (static_cast<int>(values.size()) != layout.total_len) {
    throw DimensionError("value count " + std::to_string(values.size()) +
                         " does not match layout length " +
                         std::to_string(layout.total_len));
  }
  Image out(layout.image_height, layout.image_width, layout.image_channels);
  const int C = layout.image_channels;
  std::size_t pos = 0;
  for (const Slot& slot : layout.slots) {
    switch (slot.mode) {
      case SlotMode::FullPixels:
      case SlotMode::Zeroed:
        for (int r = slot.top; r < slot.top + slot.rows; ++r) {
          for (int c = slot.left; c < slot.left + slot.cols; ++c) {
            for (int ch = 0; ch < C; ++ch) {
              out.at(r, c, ch) = values[pos++];
            }
          }
        }
        break;
      case SlotMode::SampleRgb:
        for (int r = slot.top; r < slot.top + slot.rows; ++r) {
          for (int c = slot.left; c < slot.left + slot.cols; ++c) {
            for (int ch = 0; ch < C; ++ch) {
              out.at(r, c, ch) = values[pos + static_cast<std::size_t>(ch)];
            }
          }
        }
        pos += static_cast<std::size_t>(C);
        break;
      case SlotMode::SampleGray:
      case SlotMode::GrayPixel:
        for (int r = slot.top; r < slot.top + slot.rows; ++r) {
          for (int c = slot.left; c < slot.left + slot.cols; ++c) {
            for (int ch = 0; ch < C; ++ch) {
              out.at(r, c, ch) = values[pos];
            }
          }
        }
        pos += 1;
        break;
    }
  }
  return out;
}

Image render_foveated(const FoveatedInput& fi, int target_height,
                      int target_width) {
  if (fi.layout.image_height != target_height ||
      fi.layout.image_width != target_width) {
    throw DimensionError("layout covers " +
                         std::to_string(fi.layout.image_height) + "x" +
                         std::to_string(fi.layout.image_width) +
                         ", not the requested " +
                         std::to_string(target_height) + "x" +
                         std::to_string(target_width));
  }
  return render_slots(fi.layout, fi.values);
}

FoveatedDataset foveate_dataset(const Dataset& ds, const FoveationSpec& spec,
                                std::uint64_t seed) {
  if (ds.images.empty()) {
    throw std::invalid_argument("cannot foveate an empty dataset");
  }
  FoveatedDataset out;
  out.image_height = ds.images.front().height;
  out.image_width = ds.images.front().width;
  out.image_channels = ds.images.front().channels;
  out.pairs.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    Rng rng(mix_seed(seed, i));
    FoveatedInput fi = foveate(ds.images[i], spec, rng);
    ExamplePair pair;
    pair.input = center(Eigen::Map<const Eigen::VectorXd>(
        fi.values.data(), static_cast<Eigen::Index>(fi.values.size())));
    pair.target = Eigen::Map<const Eigen::VectorXd>(
        ds.images[i].data.data(),
        static_cast<Eigen::Index>(ds.images[i].data.size()));
    out.pairs.push_back(std::move(pair));
    if (i == 0) out.layout = std::move(fi.layout);
  }
  return out;
}

std::string to_string(FoveationKind kind) {
  switch (kind) {
    case FoveationKind::Downsample: return "downsample";
    case FoveationKind::Scotoma: return "scotoma";
    case FoveationKind::Fovea: return "fovea";
    case FoveationKind::Achromatic: return "achromatic";
    case FoveationKind::FoveaAchromatic: return "fovea-achromatic";
  }
  return "unknown";
}

}  // namespace dfae
