#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "delamseg/raster.hpp"

namespace delamseg {

enum class Connectivity { Four = 4, Eight = 8 };

struct Offset {
  int dx = 0;
  int dy = 0;
  bool operator==(const Offset&) const = default;
};

/// Neighbor offsets (origin excluded) in scan order.
std::span<const Offset> neighbor_offsets(Connectivity connectivity) noexcept;

/// Parses "4" or "8".
Connectivity connectivity_from_int(int value);

struct Region {
  int id = 0;
  std::size_t area = 0;
  /// Pixel indices in raster scan order.
  std::vector<std::size_t> pixels;
  /// Pixels with at least one in-bounds neighbor outside the region.
  std::vector<std::size_t> inner_boundary;
};

/// Labeled connected regions. label_map holds 0 for background and 1..K.
struct RegionSet {
  int width = 0;
  int height = 0;
  Connectivity connectivity = Connectivity::Eight;
  std::vector<int> label_map;
  std::vector<Region> regions;

  bool empty() const noexcept { return regions.empty(); }
  std::size_t labeled_area() const noexcept;
  BinaryMask to_mask() const;
};

/// Maximal connected groups of set pixels, labeled in raster scan order of
/// their first pixel.
RegionSet connected_components(const BinaryMask& mask,
                               Connectivity connectivity = Connectivity::Eight);

/// Builds a RegionSet from an existing label image (labels 1..K, each label
/// assumed connected). Used by operations that label with a custom predicate.
RegionSet regions_from_labels(int width, int height, std::vector<int> label_map,
                              int label_count, Connectivity connectivity);

/// Keeps only the regions whose ids satisfy `keep`, relabeling to 1..K'.
template <typename Pred>
RegionSet filter_regions(const RegionSet& set, Pred keep) {
  std::vector<int> remap(set.regions.size() + 1, 0);
  int next = 0;
  for (const auto& r : set.regions) {
    if (keep(r)) remap[r.id] = ++next;
  }
  std::vector<int> labels(set.label_map.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = remap[set.label_map[i]];
  RegionSet out;
  out.width = set.width;
  out.height = set.height;
  out.connectivity = set.connectivity;
  out.label_map = std::move(labels);
  for (const auto& r : set.regions) {
    if (remap[r.id] == 0) continue;
    Region copy = r;
    copy.id = remap[r.id];
    out.regions.push_back(std::move(copy));
  }
  return out;
}

}  // namespace delamseg
