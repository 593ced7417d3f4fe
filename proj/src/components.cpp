#include "delamseg/components.hpp"

#include <string>

namespace delamseg {

namespace {

constexpr std::array<Offset, 4> kFour{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
constexpr std::array<Offset, 8> kEight{
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

}  // namespace

std::span<const Offset> neighbor_offsets(Connectivity connectivity) noexcept {
  if (connectivity == Connectivity::Four) return kFour;
  return kEight;
}

Connectivity connectivity_from_int(int value) {
  if (value == 4) return Connectivity::Four;
  if (value == 8) return Connectivity::Eight;
  throw ParameterError("connectivity must be 4 or 8, got " + std::to_string(value));
}

std::size_t RegionSet::labeled_area() const noexcept {
  std::size_t total = 0;
  for (const auto& r : regions) total += r.area;
  return total;
}

BinaryMask RegionSet::to_mask() const {
  BinaryMask mask(width, height);
  for (std::size_t i = 0; i < label_map.size(); ++i) mask.set(i, label_map[i] != 0);
  return mask;
}

RegionSet regions_from_labels(int width, int height, std::vector<int> label_map,
                              int label_count, Connectivity connectivity) {
  RegionSet set;
  set.width = width;
  set.height = height;
  set.connectivity = connectivity;
  set.regions.resize(static_cast<std::size_t>(label_count));
  for (int k = 0; k < label_count; ++k) set.regions[k].id = k + 1;

  const auto offsets = neighbor_offsets(connectivity);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const int label = label_map[i];
      if (label == 0) continue;
      Region& region = set.regions[label - 1];
      region.pixels.push_back(i);
      ++region.area;
      for (const auto& o : offsets) {
        const int nx = x + o.dx;
        const int ny = y + o.dy;
        if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
        if (label_map[static_cast<std::size_t>(ny) * width + nx] != label) {
          region.inner_boundary.push_back(i);
          break;
        }
      }
    }
  }
  set.label_map = std::move(label_map);
  return set;
}

RegionSet connected_components(const BinaryMask& mask, Connectivity connectivity) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> labels(mask.size(), 0);
  std::vector<std::size_t> stack;
  const auto offsets = neighbor_offsets(connectivity);
  int next = 0;
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask.test(seed) || labels[seed] != 0) continue;
    labels[seed] = ++next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      for (const auto& o : offsets) {
        const int nx = x + o.dx;
        const int ny = y + o.dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
        if (mask.test(q) && labels[q] == 0) {
          labels[q] = next;
          stack.push_back(q);
        }
      }
    }
  }
  return regions_from_labels(w, h, std::move(labels), next, connectivity);
}

}  // namespace delamseg
