#pragma once

#include <vector>

#include "dfae/foveation.hpp"
#include "dfae/image.hpp"
#include "dfae/network.hpp"

namespace dfae {

/// Tiles equally-sized cells into a grid with 1-px separators, row-major.
/// Missing trailing cells stay at the separator value.
Image tile_grid(const std::vector<Image>& cells, int columns,
                double separator_value = 0.0);

/// Min-max normalizes values to [0,1]; zero-range inputs map to mid-gray.
Image normalize_filter(const Image& img);

/// First-layer weight rows painted back onto image geometry through the
/// layout, normalized per filter, tiled ceil(sqrt(F)) columns wide.
Image filter_grid(const NetworkParams& params, const Layout& layout);

/// Horizontal concatenation with a 1-px separator column.
Image side_by_side(const Image& left, const Image& right,
                   double separator_value = 0.0);

}  // namespace dfae
