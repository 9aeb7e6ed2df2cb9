#pragma once

#include <cstdint>
#include <vector>

#include "tncode/composition.hpp"

namespace tncode {

// Layer census of the radius-R heptagon tiling.
struct TilingCensus {
  size_t radius = 0;
  std::vector<size_t> tiles_per_layer;  // index r-1 = tiles in layer r
  std::vector<size_t> one_in_per_layer;
  std::vector<size_t> two_in_per_layer;
  size_t total_tiles = 0;     // k of the resulting code
  size_t boundary_legs = 0;   // n of the resulting code
  double growth_ratio = 0.0;  // tiles in last layer / tiles in previous layer
};

// Tile adjacency and contraction schedule for the {7,4} tiling truncated at
// the given radius. Guard: 1 <= radius <= 8.
TilingInfo build_tiling(size_t radius);

TilingCensus census(size_t radius);

// Contracts one 7-leg tensor per tile, layer by layer. Guard: radius <= 6
// unless max_radius raises the limit.
TensorNetworkCode build_code(size_t radius, size_t max_radius = 6);

}  // namespace tncode
