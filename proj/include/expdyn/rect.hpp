#pragma once

#include <complex>

namespace expdyn {

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max] in the plane.
struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  static Rect centered(double half_width) { return {-half_width, half_width, -half_width, half_width}; }
  static Rect centered(double half_width, double half_height) {
    return {-half_width, half_width, -half_height, half_height};
  }

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double area() const { return width() * height(); }
  std::complex<double> center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }

  bool contains(std::complex<double> z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  /// True when `inner` lies in the open interior of this rectangle.
  bool strictly_contains(const Rect& inner) const {
    return inner.re_min > re_min && inner.re_max < re_max && inner.im_min > im_min &&
           inner.im_max < im_max;
  }
  Rect translated(std::complex<double> shift) const {
    return {re_min + shift.real(), re_max + shift.real(), im_min + shift.imag(), im_max + shift.imag()};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace expdyn
