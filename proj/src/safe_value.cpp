#include "expdyn/safe_value.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace expdyn {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxExpArg = 709.782712893384;  // ln(DBL_MAX)

}  // namespace

double wrap_angle(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double log_abs(cplx z) {
  const double a = std::abs(z.real());
  const double b = std::abs(z.imag());
  const double hi = std::max(a, b);
  if (hi == 0.0) return -std::numeric_limits<double>::infinity();
  const double lo = std::min(a, b);
  const double ratio = lo / hi;
  return std::log(hi) + 0.5 * std::log1p(ratio * ratio);
}

SafeValue SafeValue::from_complex(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return saturated();
  SafeValue v;
  if (std::abs(z) <= kOverflowCap) {
    v.z_ = z;
    return v;
  }
  v.kind_ = Kind::LogPolar;
  v.logmag_ = expdyn::log_abs(z);
  v.arg_ = std::arg(z);
  return v;
}

SafeValue SafeValue::from_log_polar(double logmag, double arg) {
  if (std::isnan(logmag) || logmag >= kSaturatedLogMag) return saturated();
  if (logmag <= kLogOverflowCap) {
    if (std::isnan(arg)) return saturated();
    SafeValue v;
    v.z_ = std::polar(std::exp(logmag), arg);
    return v;
  }
  if (std::isnan(arg)) arg = 0.0;
  SafeValue v;
  v.kind_ = Kind::LogPolar;
  v.logmag_ = logmag;
  v.arg_ = wrap_angle(arg);
  return v;
}

SafeValue SafeValue::saturated() {
  SafeValue v;
  v.kind_ = Kind::LogPolar;
  v.logmag_ = kSaturatedLogMag;
  v.arg_ = 0.0;
  v.saturated_ = true;
  return v;
}

cplx SafeValue::value() const {
  if (kind_ != Kind::Finite) throw std::domain_error("SafeValue: value exceeds the overflow cap");
  return z_;
}

double SafeValue::log_abs() const {
  return kind_ == Kind::Finite ? expdyn::log_abs(z_) : logmag_;
}

double SafeValue::abs() const {
  return kind_ == Kind::Finite ? std::abs(z_) : std::numeric_limits<double>::infinity();
}

double SafeValue::arg() const { return kind_ == Kind::Finite ? std::arg(z_) : arg_; }

SafeValue SafeValue::operator-() const {
  if (saturated_) return *this;
  if (kind_ == Kind::Finite) return from_complex(-z_);
  return from_log_polar(logmag_, arg_ + kPi);
}

int compare_modulus(const SafeValue& a, const SafeValue& b) {
  if (a.is_finite() && b.is_finite()) {
    const double x = std::abs(a.value());
    const double y = std::abs(b.value());
    return (x > y) - (x < y);
  }
  const double x = a.log_abs();
  const double y = b.log_abs();
  return (x > y) - (x < y);
}

bool exceeds(const SafeValue& v, double radius) {
  if (v.is_saturated()) return true;
  if (v.is_finite()) return std::abs(v.value()) > radius;
  return v.log_abs() > std::log(radius);
}

SafeValue operator*(const SafeValue& a, const SafeValue& b) {
  if (a.is_finite() && b.is_finite()) return SafeValue::from_complex(a.value() * b.value());
  if (a.is_saturated() || b.is_saturated()) return SafeValue::saturated();
  if ((a.is_finite() && a.value() == cplx{}) || (b.is_finite() && b.value() == cplx{})) {
    return SafeValue{};
  }
  return SafeValue::from_log_polar(a.log_abs() + b.log_abs(), a.arg() + b.arg());
}

SafeValue operator/(const SafeValue& a, const SafeValue& b) {
  if (b.is_finite() && b.value() == cplx{}) return SafeValue::saturated();
  if (a.is_saturated()) return SafeValue::saturated();
  if (b.is_saturated()) return SafeValue{};
  if (a.is_finite() && a.value() == cplx{}) return SafeValue{};
  if (a.is_finite() && b.is_finite()) {
    const cplx q = a.value() / b.value();
    if (std::isfinite(q.real()) && std::isfinite(q.imag())) return SafeValue::from_complex(q);
  }
  return SafeValue::from_log_polar(a.log_abs() - b.log_abs(), a.arg() - b.arg());
}

SafeValue operator+(const SafeValue& a, const SafeValue& b) {
  if (a.is_saturated() || b.is_saturated()) return SafeValue::saturated();
  if (a.is_finite() && b.is_finite()) return SafeValue::from_complex(a.value() + b.value());
  const bool a_big = compare_modulus(a, b) >= 0;
  const SafeValue& big = a_big ? a : b;
  const SafeValue& small = a_big ? b : a;
  const double gap = big.log_abs() - small.log_abs();
  if (gap > kAbsorbMargin) return big;
  const double scale = big.log_abs();
  const cplx sum = std::polar(1.0, big.arg()) + std::polar(std::exp(-gap), small.arg());
  if (sum == cplx{}) return SafeValue{};
  return SafeValue::from_log_polar(scale + expdyn::log_abs(sum), std::arg(sum));
}

SafeValue operator-(const SafeValue& a, const SafeValue& b) { return a + (-b); }

SafeValue exp(const SafeValue& v) {
  if (v.is_saturated()) return SafeValue::saturated();
  if (v.is_finite()) {
    const cplx w = v.value();
    if (w.real() <= kLogOverflowCap) return SafeValue::from_complex(std::exp(w));
    return SafeValue::from_log_polar(w.real(), w.imag());
  }
  // v = e^L e^{i theta}; e^v has logmag Re v and arg Im v.
  const double logmag = v.log_abs();
  const double c = std::cos(v.arg());
  const double s = std::sin(v.arg());
  if (logmag > kMaxExpArg) {
    if (c > 0.0) return SafeValue::saturated();
    return SafeValue{};
  }
  const double r = std::exp(logmag);
  return SafeValue::from_log_polar(r * c, r * s);
}

double relative_distance(const SafeValue& a, const SafeValue& b) {
  if (a.is_saturated() && b.is_saturated()) return std::numeric_limits<double>::quiet_NaN();
  if (a.is_saturated() || b.is_saturated()) return std::numeric_limits<double>::infinity();
  if (a.is_finite() && b.is_finite()) {
    return std::abs(a.value() - b.value()) / std::max(1.0, std::abs(b.value()));
  }
  // |a - b| / |b| = |a/b - 1| once |b| > 1.
  const double dl = a.log_abs() - b.log_abs();
  const double dt = a.arg() - b.arg();
  if (dl > kMaxExpArg) return std::numeric_limits<double>::infinity();
  const cplx ratio = std::polar(std::exp(dl), dt);
  const double rel = std::abs(ratio - 1.0);
  if (b.is_finite()) {
    // b is within range but a is not: scale back by |b| when |b| < 1.
    return rel * std::min(1.0, std::abs(b.value()));
  }
  return rel;
}

}  // namespace expdyn
