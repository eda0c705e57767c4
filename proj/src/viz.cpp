#include "dfae/viz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfae/errors.hpp"

namespace dfae {

Image tile_grid(const std::vector<Image>& cells, int columns,
                double separator_value) {
  if (cells.empty()) throw std::invalid_argument("tile_grid needs cells");
  if (columns < 1) throw std::invalid_argument("tile_grid needs columns >= 1");
  const Image& first = cells.front();
  for (const Image& cell : cells) {
    if (!cell.same_shape(first)) {
      throw DimensionError("tile_grid cells differ in shape");
    }
  }
  const int rows =
      (static_cast<int>(cells.size()) + columns - 1) / columns;
  Image out(rows * first.height + (rows - 1),
            columns * first.width + (columns - 1), first.channels,
            separator_value);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int gr = static_cast<int>(i) / columns;
    const int gc = static_cast<int>(i) % columns;
    const int top = gr * (first.height + 1);
    const int left = gc * (first.width + 1);
    for (int r = 0; r < first.height; ++r) {
      for (int c = 0; c < first.width; ++c) {
        for (int ch = 0; ch < first.channels; ++ch) {
          out.at(top + r, left + c, ch) = cells[i].at(r, c, ch);
        }
      }
    }
  }
  return out;
}

Image normalize_filter(const Image& img) {
  const auto [lo_it, hi_it] =
      std::minmax_element(img.data.begin(), img.data.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Image out(img.height, img.width, img.channels);
  if (hi - lo <= 0.0) {
    std::fill(out.data.begin(), out.data.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    out.data[i] = (img.data[i] - lo) / (hi - lo);
  }
  return out;
}

Image filter_grid(const NetworkParams& params, const Layout& layout) {
  if (params.layers.empty()) {
    throw std::invalid_argument("filter_grid needs a non-empty network");
  }
  const Eigen::MatrixXd& weights = params.layers.front().weights;
  if (static_cast<int>(weights.cols()) != layout.total_len) {
    throw DimensionError("first-layer input " +
                         std::to_string(weights.cols()) +
                         " does not match layout length " +
                         std::to_string(layout.total_len));
  }
  std::vector<Image> cells;
  cells.reserve(static_cast<std::size_t>(weights.rows()));
  std::vector<double> row(static_cast<std::size_t>(layout.total_len));
  for (Eigen::Index f = 0; f < weights.rows(); ++f) {
    for (Eigen::Index i = 0; i < weights.cols(); ++i) {
      row[static_cast<std::size_t>(i)] = weights(f, i);
    }
    cells.push_back(normalize_filter(render_slots(layout, row)));
  }
  const int columns = static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(cells.size()))));
  return tile_grid(cells, columns);
}

Image side_by_side(const Image& left, const Image& right,
                   double separator_value) {
  if (left.height != right.height || left.channels != right.channels) {
    throw DimensionError("side_by_side operands differ in shape");
  }
  Image out(left.height, left.width + 1 + right.width, left.channels,
            separator_value);
  for (int r = 0; r < left.height; ++r) {
    for (int c = 0; c < left.width; ++c) {
      for (int ch = 0; ch < left.channels; ++ch) {
        out.at(r, c, ch) = left.at(r, c, ch);
      }
    }
    for (int c = 0; c < right.width; ++c) {
      for (int ch = 0; ch < right.channels; ++ch) {
        out.at(r, left.width + 1 + c, ch) = right.at(r, c, ch);
      }
    }
  }
  return out;
}

}  // namespace dfae
