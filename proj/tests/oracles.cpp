#include "oracles.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace oracle {

cplx lambert_w(cplx x, int k) {
  const cplx two_pi_i{0.0, 2.0 * std::numbers::pi};
  const cplx rhs = std::log(x) + two_pi_i * static_cast<double>(k);
  // Asymptotic start w ~ L1 - log L1.
  cplx w = rhs - std::log(rhs);
  if (k == 0 && std::abs(x) < 1.0) w = x;
  for (int it = 0; it < 100; ++it) {
    const cplx g = w + std::log(w) - rhs;
    const cplx step = g / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

cplx central_difference(const std::function<cplx(cplx)>& f, cplx z, double h) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

cplx naive_poly(const std::vector<cplx>& coeffs, cplx z) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) sum += coeffs[i] * std::pow(z, static_cast<int>(i));
  return sum;
}

FloodResult flood_fill(const std::vector<std::uint8_t>& bits, int nx, int ny, bool target) {
  FloodResult r;
  r.labels.assign(bits.size(), -1);
  std::deque<int> queue;
  for (int start = 0; start < nx * ny; ++start) {
    if ((bits[start] != 0) != target || r.labels[start] >= 0) continue;
    const int id = r.count++;
    r.labels[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const int p = queue.front();
      queue.pop_front();
      const int i = p % nx;
      const int j = p / nx;
      const int nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nbr) {
        if (q[0] < 0 || q[0] >= nx || q[1] < 0 || q[1] >= ny) continue;
        const int idx = q[1] * nx + q[0];
        if ((bits[idx] != 0) != target || r.labels[idx] >= 0) continue;
        r.labels[idx] = id;
        queue.push_back(idx);
      }
    }
  }
  return r;
}

std::vector<cplx> odd_pi_multiples(double re_min, double re_max, double im_min, double im_max) {
  std::vector<cplx> out;
  if (re_min > 0.0 || re_max < 0.0) return out;
  for (int k = -100000; k <= 100000; ++k) {
    const double y = (2 * k + 1) * std::numbers::pi;
    if (y >= im_min && y <= im_max) out.push_back({0.0, y});
  }
  return out;
}

PnmHeader parse_pnm_header(const std::string& bytes) {
  PnmHeader h;
  std::istringstream in(bytes);
  in >> h.magic >> h.width >> h.height;
  if (h.magic == "P6" || h.magic == "P5") in >> h.maxval;
  if (!in) throw std::runtime_error("malformed PNM header");
  in.get();  // single whitespace byte before the raster
  h.data_offset = static_cast<std::size_t>(in.tellg());
  return h;
}

}  // namespace oracle
