#include "expdyn/raster.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "expdyn/parallel.hpp"

namespace expdyn {
namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  // Smaller index becomes the root; keeps roots inside the strip being merged.
  if (a < b) {
    parent[b] = a;
  } else {
    parent[a] = b;
  }
}

}  // namespace

GridMask make_mask(const Rect& window, int nx, int ny,
                   const std::function<bool(std::complex<double>)>& predicate) {
  if (nx < kMinRasterSide || ny < kMinRasterSide) {
    throw std::invalid_argument("raster sides must be at least 8 pixels");
  }
  GridMask mask{window, nx, ny, std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny)};
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    for (int i = 0; i < nx; ++i) {
      mask.bits[j * nx + i] = predicate(mask.center(i, static_cast<int>(j))) ? 1 : 0;
    }
  });
  return mask;
}

ComponentCensus component_census(const GridMask& mask, bool target, std::size_t strips) {
  const int nx = mask.nx;
  const int ny = mask.ny;
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  const std::uint8_t want = target ? 1 : 0;
  auto in_set = [&](std::size_t idx) { return mask.bits[idx] == want; };

  if (strips == 0) strips = thread_count();
  strips = std::clamp<std::size_t>(strips, 1, static_cast<std::size_t>(std::max(ny, 1)));

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> strip_begin(strips + 1);
  for (std::size_t s = 0; s <= strips; ++s) strip_begin[s] = static_cast<int>(s * ny / strips);

  // Unions inside a strip only touch indices of that strip.
  parallel_for(strips, [&](std::size_t s) {
    for (int j = strip_begin[s]; j < strip_begin[s + 1]; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
        if (!in_set(idx)) continue;
        if (i > 0 && in_set(idx - 1)) unite(parent, static_cast<int>(idx), static_cast<int>(idx - 1));
        if (j > strip_begin[s] && in_set(idx - nx)) {
          unite(parent, static_cast<int>(idx), static_cast<int>(idx - nx));
        }
      }
    }
  });
  for (std::size_t s = 1; s < strips; ++s) {
    const int j = strip_begin[s];
    if (j == 0 || j >= ny) continue;
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      if (in_set(idx) && in_set(idx - nx)) unite(parent, static_cast<int>(idx), static_cast<int>(idx - nx));
    }
  }

  ComponentCensus census{nx, ny, std::vector<int>(n, -1), {}};
  std::vector<int> id_of_root(n, -1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      if (!in_set(idx)) continue;
      const int root = find_root(parent, static_cast<int>(idx));
      int& id = id_of_root[root];
      if (id < 0) {
        id = static_cast<int>(census.components.size());
        Component c;
        c.id = id;
        c.bbox = {i, i, j, j};
        census.components.push_back(c);
      }
      census.labels[idx] = id;
      Component& c = census.components[id];
      ++c.pixel_count;
      c.bbox.i_min = std::min(c.bbox.i_min, i);
      c.bbox.i_max = std::max(c.bbox.i_max, i);
      c.bbox.j_min = std::min(c.bbox.j_min, j);
      c.bbox.j_max = std::max(c.bbox.j_max, j);
      if (i == 0) c.touches_frame[kLeft] = true;
      if (i == nx - 1) c.touches_frame[kRight] = true;
      if (j == 0) c.touches_frame[kBottom] = true;
      if (j == ny - 1) c.touches_frame[kTop] = true;
    }
  }
  return census;
}

}  // namespace expdyn
