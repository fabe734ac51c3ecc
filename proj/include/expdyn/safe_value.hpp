#pragma once

#include <complex>
#include <limits>

namespace expdyn {

using cplx = std::complex<double>;

/// Moduli above this leave the Finite representation. Squares of Finite
/// values stay representable as doubles.
inline constexpr double kOverflowCap = 1e150;
inline constexpr double kLogOverflowCap = 345.38776394910684;  // ln(1e150)

/// Summands smaller by more than this many nats are dropped when added to a
/// LogPolar value.
inline constexpr double kAbsorbMargin = 40.0;

/// Sentinel logmag carried by saturated values.
inline constexpr double kSaturatedLogMag = std::numeric_limits<double>::max();

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// ln|z| without intermediate overflow.
double log_abs(cplx z);

/// A complex number that switches to log-polar form once its modulus
/// exceeds kOverflowCap. A saturated value stands for "larger than anything
/// representable"; downstream code treats it as escaped.
class SafeValue {
 public:
  enum class Kind { Finite, LogPolar };

  SafeValue() = default;

  static SafeValue from_complex(cplx z);
  static SafeValue from_log_polar(double logmag, double arg);
  static SafeValue saturated();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_saturated() const { return saturated_; }

  /// The complex value. Throws std::domain_error for LogPolar values.
  cplx value() const;

  /// Natural log of the modulus: -inf for zero, kSaturatedLogMag when
  /// saturated.
  double log_abs() const;

  /// Modulus, +inf for LogPolar values.
  double abs() const;

  /// Principal argument in (-pi, pi].
  double arg() const;

  SafeValue operator-() const;

  friend bool operator==(const SafeValue&, const SafeValue&) = default;

 private:
  Kind kind_ = Kind::Finite;
  cplx z_{0.0, 0.0};
  double logmag_ = 0.0;
  double arg_ = 0.0;
  bool saturated_ = false;
};

/// Three-way modulus comparison: negative, zero or positive as |a| is
/// smaller than, equal to or larger than |b|.
int compare_modulus(const SafeValue& a, const SafeValue& b);

inline bool modulus_less(const SafeValue& a, const SafeValue& b) {
  return compare_modulus(a, b) < 0;
}

/// |v| > radius. Saturated values exceed every radius.
bool exceeds(const SafeValue& v, double radius);

SafeValue operator*(const SafeValue& a, const SafeValue& b);
SafeValue operator/(const SafeValue& a, const SafeValue& b);
SafeValue operator+(const SafeValue& a, const SafeValue& b);
SafeValue operator-(const SafeValue& a, const SafeValue& b);

inline SafeValue operator*(cplx a, const SafeValue& b) {
  return SafeValue::from_complex(a) * b;
}
inline SafeValue operator+(const SafeValue& a, cplx b) {
  return a + SafeValue::from_complex(b);
}
inline SafeValue operator-(const SafeValue& a, cplx b) {
  return a + SafeValue::from_complex(-b);
}

/// e^v. A LogPolar argument whose real part cannot be formed as a double
/// saturates (or underflows to zero when it points left).
SafeValue exp(const SafeValue& v);

/// Relative distance |a - b| / max(1, |b|), evaluated in log-polar form so
/// it stays meaningful past the overflow cap. Returns +inf when only one of
/// the operands is saturated and NaN when both are.
double relative_distance(const SafeValue& a, const SafeValue& b);

}  // namespace expdyn
