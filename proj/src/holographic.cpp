#include "tncode/holographic.hpp"

#include <stdexcept>

namespace tncode {

namespace {

// Slot roles of the 7-leg tile, 0-based. The root uses all slots for edge
// children; a 1-in tile enters through slot 0; a 2-in tile enters through
// slots 5 (ring-successor-side parent) and 6 (ring-predecessor-side parent).
// Flank slots host the shared vertex children, edge-child slots the rest;
// both flanks sit next to the in-legs so closed vertices have degree 4.
constexpr int kOneInVslotL = 1, kOneInVslotR = 6;
constexpr int kTwoInVslotL = 0, kTwoInVslotR = 4;
constexpr int kTwoInRight = 5, kTwoInLeft = 6;

std::vector<int> ec_slots(const TileInfo& t) {
  if (t.in_degree == 0) return {0, 1, 2, 3, 4, 5, 6};
  if (t.in_degree == 1) return {2, 3, 4, 5};
  return {1, 2, 3};
}

}  // namespace

TilingInfo build_tiling(size_t radius) {
  if (radius < 1) throw std::invalid_argument("build_tiling: radius must be >= 1");
  if (radius > 8) throw ResourceError("build_tiling: radius > 8");

  TilingInfo info;
  info.radius = radius;
  info.tiles.push_back(TileInfo{});  // root: layer 1, in_degree 0
  info.rings.push_back({0});

  for (size_t r = 2; r <= radius; ++r) {
    const std::vector<size_t>& prev = info.rings.back();
    std::vector<size_t> ring;
    for (size_t idx = 0; idx < prev.size(); ++idx) {
      size_t w = prev[idx];
      size_t w_prev = prev[(idx + prev.size() - 1) % prev.size()];
      if (r > 2) {
        // Vertex child shared by the ring-predecessor and this tile.
        TileInfo v;
        v.layer = static_cast<int>(r);
        v.in_degree = 2;
        v.parent_left = w_prev;
        v.parent_right = w;
        v.parent_right_slot = info.tiles[w].vslot_l;
        v.vslot_l = kTwoInVslotL;
        v.vslot_r = kTwoInVslotR;
        size_t vid = info.tiles.size();
        info.tiles.push_back(std::move(v));
        info.tiles[w].left_vchild = vid;
        ring.push_back(vid);
      }
      for (int slot : ec_slots(info.tiles[w])) {
        TileInfo e;
        e.layer = static_cast<int>(r);
        e.in_degree = 1;
        e.parent_right = w;
        e.parent_right_slot = slot;
        e.vslot_l = kOneInVslotL;
        e.vslot_r = kOneInVslotR;
        size_t eid = info.tiles.size();
        info.tiles.push_back(std::move(e));
        info.tiles[w].ec_children.emplace_back(slot, eid);
        ring.push_back(eid);
      }
      if (r > 2) info.tiles[w].flank_open = true;
    }
    info.rings.push_back(std::move(ring));
  }
  return info;
}

TilingCensus census(size_t radius) {
  TilingInfo info = build_tiling(radius);
  TilingCensus out;
  out.radius = radius;
  for (const auto& ring : info.rings) {
    size_t ones = 0, twos = 0, legs = 0;
    for (size_t id : ring) {
      const TileInfo& t = info.tiles[id];
      if (t.in_degree == 1) ++ones;
      if (t.in_degree == 2) ++twos;
      if (static_cast<size_t>(t.layer) == radius)
        legs += 7 - static_cast<size_t>(t.in_degree);
    }
    out.tiles_per_layer.push_back(ring.size());
    out.one_in_per_layer.push_back(ones);
    out.two_in_per_layer.push_back(twos);
    out.total_tiles += ring.size();
    out.boundary_legs += legs;
  }
  if (radius >= 2) {
    size_t last = out.tiles_per_layer[radius - 1];
    size_t before = out.tiles_per_layer[radius - 2];
    out.growth_ratio = static_cast<double>(last) / static_cast<double>(before);
  }
  return out;
}

TensorNetworkCode build_code(size_t radius, size_t max_radius) {
  if (radius < 1) throw std::invalid_argument("build_code: radius must be >= 1");
  if (radius > max_radius) throw ResourceError("build_code: radius exceeds limit");

  TilingInfo info = build_tiling(radius);
  TensorNetworkCode net;
  CodeTensor base = steane_tensor();
  for (size_t id = 0; id < info.tiles.size(); ++id) {
    const TileInfo& t = info.tiles[id];
    std::vector<std::pair<size_t, NodeLeg>> pairings;
    if (t.in_degree == 1) {
      pairings.emplace_back(0, NodeLeg{t.parent_right,
                                       static_cast<size_t>(t.parent_right_slot)});
    } else if (t.in_degree == 2) {
      const TileInfo& pl = info.tiles[t.parent_left];
      pairings.emplace_back(static_cast<size_t>(kTwoInLeft),
                            NodeLeg{t.parent_left, static_cast<size_t>(pl.vslot_r)});
      pairings.emplace_back(static_cast<size_t>(kTwoInRight),
                            NodeLeg{t.parent_right,
                                    static_cast<size_t>(t.parent_right_slot)});
    }
    size_t got = net.add_node(base, pairings);
    if (got != id) throw std::logic_error("build_code: node id mismatch");
  }
  net.set_tiling(std::move(info));
  return net;
}

}  // namespace tncode
