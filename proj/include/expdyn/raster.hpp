#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "expdyn/rect.hpp"

namespace expdyn {

/// Boolean raster over a window. Pixel (i, j) has its center at
/// (re_min + (i + 0.5) dx, im_min + (j + 0.5) dy); row j = 0 is the bottom.
struct GridMask {
  Rect window;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> bits;  // row-major, index j * nx + i

  double dx() const { return window.width() / nx; }
  double dy() const { return window.height() / ny; }
  std::complex<double> center(int i, int j) const {
    return {window.re_min + (i + 0.5) * dx(), window.im_min + (j + 0.5) * dy()};
  }
  bool at(int i, int j) const { return bits[static_cast<std::size_t>(j) * nx + i] != 0; }
};

inline constexpr int kMinRasterSide = 8;

/// Evaluates `predicate` at every pixel center, row-parallel.
/// Throws std::invalid_argument when nx or ny is below kMinRasterSide.
GridMask make_mask(const Rect& window, int nx, int ny,
                   const std::function<bool(std::complex<double>)>& predicate);

enum Edge { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

struct PixelBox {
  int i_min = 0;
  int i_max = 0;
  int j_min = 0;
  int j_max = 0;

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct Component {
  int id = 0;
  std::size_t pixel_count = 0;
  std::array<bool, 4> touches_frame{};  // indexed by Edge
  PixelBox bbox;

  int edges_touched() const {
    return touches_frame[0] + touches_frame[1] + touches_frame[2] + touches_frame[3];
  }
  bool touches_any() const { return edges_touched() > 0; }
  /// At least `margin` pixels of clearance from every frame edge.
  bool interior(int nx, int ny, int margin) const {
    return bbox.i_min >= margin && bbox.j_min >= margin && bbox.i_max < nx - margin &&
           bbox.j_max < ny - margin;
  }
};

struct ComponentCensus {
  int nx = 0;
  int ny = 0;
  std::vector<int> labels;  // -1 outside the target set
  std::vector<Component> components;
};

/// 4-connected labeling of the pixels whose bit equals `target`. The raster
/// is split into `strips` horizontal bands labeled independently and then
/// merged; ids are assigned in order of each component's first pixel in
/// raster order, so the result never depends on `strips`. 0 picks one strip
/// per worker.
ComponentCensus component_census(const GridMask& mask, bool target, std::size_t strips = 0);

}  // namespace expdyn
