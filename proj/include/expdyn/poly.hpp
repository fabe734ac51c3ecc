#pragma once

#include <complex>
#include <vector>

namespace expdyn {

using cplx = std::complex<double>;

/// Polynomial a_0 + a_1 z + ... + a_d z^d with a nonzero leading
/// coefficient whenever d >= 1.
class Poly {
 public:
  /// Throws std::invalid_argument for an empty coefficient list or a zero
  /// leading coefficient above degree 0.
  explicit Poly(std::vector<cplx> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx leading() const { return coeffs_.back(); }

  /// Formal derivative; the derivative of a constant is the zero constant.
  Poly derivative() const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<cplx> coeffs_;
};

/// Horner evaluation from a_d downward.
cplx eval_poly(const Poly& p, cplx z);

/// P'(z) and P''(z) by Horner on the differentiated coefficients, without
/// materialising the derivative polynomial.
cplx eval_poly_derivative(const Poly& p, cplx z);
cplx eval_poly_second_derivative(const Poly& p, cplx z);

/// Explicit-radius form of the two polynomial growth bounds: for every
/// |z| >= threshold_radius,
///   (1/d) * sum_{i<d} |a_i| |z|^i  <=  |P(z)|  <=  (sum_i |a_i|) |z|^d.
struct PolyBounds {
  double threshold_radius = 0.0;
  std::vector<double> moduli;  // |a_0| .. |a_d|

  double lower(double r) const;
  double upper(double r) const;
};

/// Guard added to the threshold radius so samples exactly on the boundary
/// are never compared at equality.
inline constexpr double kThresholdGuard = 1e-9;

/// Throws std::invalid_argument for constant polynomials.
PolyBounds poly_bounds(const Poly& p);

/// All d complex roots of p (Aberth-Ehrlich iteration). Requires degree >= 1.
std::vector<cplx> poly_roots(const Poly& p);

}  // namespace expdyn
