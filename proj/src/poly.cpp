#include "expdyn/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace expdyn {

Poly::Poly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("Poly: empty coefficient list");
  if (coeffs_.size() > 1 && coeffs_.back() == cplx{}) {
    throw std::invalid_argument("Poly: leading coefficient must be nonzero");
  }
}

Poly Poly::derivative() const {
  if (coeffs_.size() == 1) return Poly({cplx{}});
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Poly(std::move(d));
}

cplx eval_poly(const Poly& p, cplx z) {
  const auto& a = p.coeffs();
  cplx acc = a.back();
  for (std::size_t i = a.size() - 1; i-- > 0;) acc = acc * z + a[i];
  return acc;
}

cplx eval_poly_derivative(const Poly& p, cplx z) {
  const auto& a = p.coeffs();
  const std::size_t d = a.size() - 1;
  if (d == 0) return {};
  cplx acc = static_cast<double>(d) * a[d];
  for (std::size_t i = d - 1; i >= 1; --i) acc = acc * z + static_cast<double>(i) * a[i];
  return acc;
}

cplx eval_poly_second_derivative(const Poly& p, cplx z) {
  const auto& a = p.coeffs();
  const std::size_t d = a.size() - 1;
  if (d < 2) return {};
  cplx acc = static_cast<double>(d * (d - 1)) * a[d];
  for (std::size_t i = d - 1; i >= 2; --i) acc = acc * z + static_cast<double>(i * (i - 1)) * a[i];
  return acc;
}

double PolyBounds::lower(double r) const {
  const std::size_t d = moduli.size() - 1;
  double sum = 0.0;
  double power = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    sum += moduli[i] * power;
    power *= r;
  }
  return sum / static_cast<double>(d);
}

double PolyBounds::upper(double r) const {
  double total = 0.0;
  for (double m : moduli) total += m;
  return total * std::pow(r, static_cast<double>(moduli.size() - 1));
}

PolyBounds poly_bounds(const Poly& p) {
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("poly_bounds: polynomial must be non-constant");
  PolyBounds b;
  b.moduli.reserve(p.coeffs().size());
  for (cplx a : p.coeffs()) b.moduli.push_back(std::abs(a));
  const double lead = b.moduli.back();
  // |a_d| |z|^d >= (d+1) |a_i| |z|^i for every i < d, and |z| >= 1.
  double radius = 1.0;
  for (int i = 0; i < d; ++i) {
    if (b.moduli[i] == 0.0) continue;
    const double r = std::pow((d + 1) * b.moduli[i] / lead, 1.0 / (d - i));
    radius = std::max(radius, r);
  }
  b.threshold_radius = radius + kThresholdGuard;
  return b;
}

std::vector<cplx> poly_roots(const Poly& p) {
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("poly_roots: polynomial must be non-constant");
  const auto& a = p.coeffs();
  if (d == 1) return {-a[0] / a[1]};

  // Cauchy bound for the initial circle.
  double bound = 0.0;
  for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(a[i] / a[d]));
  bound = 1.0 + bound;
  const Poly dp = p.derivative();

  std::vector<cplx> z(d);
  for (int i = 0; i < d; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i + 0.25) / d + 0.4;
    z[i] = std::polar(0.5 * bound, angle);
  }
  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (int i = 0; i < d; ++i) {
      const cplx pv = eval_poly(p, z[i]);
      if (pv == cplx{}) continue;
      const cplx ratio = pv / eval_poly(dp, z[i]);
      cplx repulsion{};
      for (int j = 0; j < d; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (max_step < 1e-15) break;
  }
  return z;
}

}  // namespace expdyn
