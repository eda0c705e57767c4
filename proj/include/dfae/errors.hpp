#pragma once

#include <stdexcept>
#include <string>

namespace dfae {

// Shape disagreement between rasters/vectors (non-divisible downsample
// factor, mismatched metric operands, stale traces).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A foveation spec that cannot be realized on the given image.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed bytes in a dataset file or checkpoint. Messages name the
// offending offset or record index.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dfae
