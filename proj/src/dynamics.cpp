#include "expdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "expdyn/parallel.hpp"

namespace expdyn {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI{0.0, 2.0 * kPi};

constexpr const char* kAnchorH2 = "h^2(x) < x for x in (-1, 0)";
constexpr const char* kAnchorPhi = "phi(x) = 2 + x + x e^{lambda (x + 1)} > 0 on (-1, 0), phi(-1) = 0";
constexpr const char* kAnchorHPositive = "h(x) > x and h'(x) > 0 for x > 0";
constexpr const char* kAnchorEq3 = "E^2(-r) - r - beta < R";
constexpr const char* kAnchorEq4 = "E^2(-R) - R - beta > -R";
constexpr const char* kAnchorInterval = "f maps (-R, -r) into (-R, R)";
constexpr const char* kAnchorMonotone = "f is real on the real line and strictly increasing";

std::string format(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

void snap(const MapSpec& m, cplx z, OrbitResult& r) {
  if (const auto lam = m.f_lambda_parameter()) {
    const int k = static_cast<int>(std::lround((z.imag() / kPi - 1.0) / 2.0));
    const cplx fp{0.0, (2.0 * k + 1.0) * kPi};
    if (std::abs(z - fp) < kSnapDistance) {
      r.verdict = Verdict::Converged;
      r.fixed_point = fp;
      r.k_index = k;
    }
    return;
  }
  if (m.is_h_lambda()) {
    const cplx fp = std::abs(z + 1.0) <= std::abs(z) ? cplx{-1.0} : cplx{0.0};
    if (std::abs(z - fp) < kSnapDistance) {
      r.verdict = Verdict::Converged;
      r.fixed_point = fp;
      r.k_index = static_cast<int>(fp.real());
    }
    return;
  }
  r.verdict = Verdict::Converged;
  r.fixed_point = z;
  r.k_index = 0;
}

bool escaped(const SafeValue& v) { return !v.is_finite() || std::abs(v.value()) > kEscapeRadius; }

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "converged";
    case Verdict::Escaped:
      return "escaped";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

OrbitResult iterate(const MapSpec& m, cplx z0, int max_iter, bool keep_points) {
  if (max_iter < 1) throw std::invalid_argument("iterate: max_iter must be at least 1");
  OrbitResult r;
  const SafeValue start = SafeValue::from_complex(z0);
  r.points.push_back(start);
  if (escaped(start)) {
    r.verdict = Verdict::Escaped;
    r.escaped_at = 0;
    return r;
  }
  cplx z = z0;
  int quiet = 0;
  for (int n = 1; n <= max_iter; ++n) {
    const SafeValue next = eval_map(m, z);
    r.steps_used = n;
    if (keep_points) {
      r.points.push_back(next);
    } else {
      r.points.back() = next;
    }
    if (escaped(next)) {
      r.verdict = Verdict::Escaped;
      r.escaped_at = n;
      return r;
    }
    const cplx zn = next.value();
    quiet = std::abs(zn - z) < kConvTol ? quiet + 1 : 0;
    z = zn;
    if (quiet >= 2) {
      // Tiny steps near a repelling fixed point (for instance after underflow
      // towards 0 for h_lambda) are not convergence.
      const SafeValue d = eval_derivative(m, z);
      if (!d.is_finite() || !(std::abs(d.value()) < 1.0)) {
        quiet = 0;
        continue;
      }
      snap(m, z, r);
      if (r.verdict == Verdict::Converged) {
        r.settled_at = n;
        if (keep_points) {
          for (int s = 0; s <= n; ++s) {
            if (std::abs(r.points[s].value() - r.fixed_point) < kConvTol) {
              r.settled_at = s;
              break;
            }
          }
        }
      }
      return r;
    }
  }
  return r;
}

cplx fixed_point_multiplier(const MapSpec& m, cplx z) {
  const SafeValue fz = eval_map(m, z);
  if (!fz.is_finite() || !(std::abs(fz.value() - z) < kConvTol)) {
    throw std::invalid_argument("fixed_point_multiplier: point is not numerically fixed");
  }
  return eval_derivative(m, z).value();
}

GridClassification classify_grid(const MapSpec& m, const Rect& window, int nx, int ny, int max_iter) {
  if (!m.is_h_lambda() && !m.f_lambda_parameter()) {
    throw std::invalid_argument("classify_grid: requires lambda e^z + z + lambda or h_lambda");
  }
  if (nx < 1 || ny < 1) throw std::invalid_argument("classify_grid: raster must be nonempty");
  GridClassification g{window, nx, ny, std::vector<int>(static_cast<std::size_t>(nx) * ny),
                       std::vector<int>(static_cast<std::size_t>(nx) * ny)};
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    for (int i = 0; i < nx; ++i) {
      const OrbitResult r = iterate(m, g.center(i, static_cast<int>(j)), max_iter, false);
      const std::size_t idx = j * nx + i;
      g.iterations[idx] = r.steps_used;
      switch (r.verdict) {
        case Verdict::Converged:
          g.labels[idx] = encode_basin(r.k_index);
          break;
        case Verdict::Escaped:
          g.labels[idx] = kLabelEscaped;
          break;
        case Verdict::Undecided:
          g.labels[idx] = kLabelUndecided;
          break;
      }
    }
  });
  return g;
}

std::optional<double> semiconjugacy_residual(double lambda, cplx z) {
  const MapSpec f = MapSpec::f_lambda(lambda);
  const MapSpec h = MapSpec::h_lambda(lambda);
  const SafeValue ez = exp(SafeValue::from_complex(z));
  SafeValue lhs;
  if (ez.is_finite()) {
    lhs = eval_map(h, ez.value());
  } else {
    lhs = ez * exp(cplx{lambda} * (ez + cplx{1.0}));
  }
  const SafeValue rhs = exp(eval_map(f, z));
  if (lhs.is_saturated() && rhs.is_saturated()) return std::nullopt;
  return relative_distance(lhs, rhs);
}

Fragment h_real_line_checks(double lambda, int samples) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw std::invalid_argument("h_real_line_checks: lambda must lie in (0, 2)");
  if (samples < 1000) throw std::invalid_argument("h_real_line_checks: at least 1000 samples required");
  auto h = [lambda](double x) { return x * std::exp(lambda * (x + 1.0)); };
  auto dh = [lambda](double x) { return std::exp(lambda * (x + 1.0)) * (1.0 + lambda * x); };
  auto phi = [lambda](double x) { return 2.0 + x + x * std::exp(lambda * (x + 1.0)); };
  auto sample = [samples](double lo, double hi, int s) { return lo + (hi - lo) * s / (samples - 1); };

  Check h2{"h.second_iterate", kAnchorH2, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
  Check ph{"h.phi", kAnchorPhi, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
  Check pos{"h.positive_axis", kAnchorHPositive, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
  std::size_t bad_h2 = 0, bad_phi = 0, bad_pos = 0;
  double min_gap_h2 = std::numeric_limits<double>::infinity();
  double min_phi = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double x = sample(-0.999, -0.001, s);
    const double gap = x - h(h(x));
    min_gap_h2 = std::min(min_gap_h2, gap);
    if (!(gap > 0.0)) {
      ++bad_h2;
      if (h2.data.size() < 20) h2.data.push_back(x);
    }
    const double p = phi(x);
    min_phi = std::min(min_phi, p);
    if (!(p > 0.0)) {
      ++bad_phi;
      if (ph.data.size() < 20) ph.data.push_back(x);
    }
    const double y = sample(0.001, 10.0, s);
    if (!(h(y) > y) || !(dh(y) > 0.0)) {
      ++bad_pos;
      if (pos.data.size() < 20) pos.data.push_back(y);
    }
  }
  const double phi_at_minus_one = std::abs(phi(-1.0));
  h2.residual = min_gap_h2;
  h2.details = std::to_string(samples) + " samples on (-0.999, -0.001), " + std::to_string(bad_h2) + " violations";
  if (bad_h2) h2.status = Status::Fail;
  ph.residual = phi_at_minus_one;
  ph.details = std::to_string(bad_phi) + " nonpositive samples" + format("; |phi(-1)| = %.3g", phi_at_minus_one);
  if (bad_phi || !(phi_at_minus_one <= 1e-12)) ph.status = Status::Fail;
  pos.details = std::to_string(samples) + " samples on (0.001, 10), " + std::to_string(bad_pos) + " violations";
  if (bad_pos) pos.status = Status::Fail;
  return {h2, ph, pos};
}

std::vector<double> translation_residuals(const MapSpec& m, cplx z, int n_max) {
  std::vector<double> out;
  cplx a = z;
  cplx b = z + kTwoPiI;
  double scale = 1.0 + std::abs(z);
  for (int n = 1; n <= n_max; ++n) {
    const SafeValue fa = eval_map(m, a);
    const SafeValue fb = eval_map(m, b);
    if (!fa.is_finite() || !fb.is_finite()) break;
    a = fa.value();
    b = fb.value();
    scale = std::max(scale, 1.0 + std::abs(a));
    out.push_back(std::abs(b - (a + kTwoPiI)) / scale);
  }
  return out;
}

WanderingTrack wandering_tracker(double lambda, cplx z0, int n_steps) {
  const MapSpec F = MapSpec::F_lambda(lambda);
  const MapSpec f = MapSpec::f_lambda(lambda);
  WanderingTrack t;
  t.orbit.push_back(SafeValue::from_complex(z0));
  cplx big = z0;
  cplx small = z0;
  bool tracking = true;
  int settled_since = -1;
  for (int n = 1; n <= n_steps; ++n) {
    const SafeValue next = eval_map(F, big);
    t.orbit.push_back(next);
    if (!next.is_finite()) break;
    big = next.value();
    if (tracking) {
      const SafeValue fs = eval_map(f, small);
      if (!fs.is_finite()) {
        tracking = false;
      } else {
        const cplx prev = small;
        small = fs.value();
        if (std::abs(small - prev) < kConvTol) {
          if (settled_since < 0) settled_since = n;
        } else {
          settled_since = -1;
        }
        t.translation_residuals.push_back(std::abs(big - (small + static_cast<double>(n) * kTwoPiI)));
        t.depth = n;
      }
    }
  }
  const std::size_t N = t.orbit.size();
  bool rising = N >= 6;
  for (std::size_t s = N >= 6 ? N - 5 : N; rising && s < N; ++s) {
    rising = t.orbit[s].is_finite() && t.orbit[s - 1].is_finite() &&
             t.orbit[s].value().imag() > t.orbit[s - 1].value().imag();
  }
  const bool far = !t.orbit.back().is_finite() || std::abs(t.orbit.back().value()) > kEscapeRadius;
  const bool settled = tracking && settled_since > 0 && t.depth == n_steps;
  t.escape_confirmed = rising && (far || settled);
  return t;
}

Fragment example41_check(double beta, double r, double R, int samples) {
  if (!(beta < 1.0)) throw std::invalid_argument("example41_check: beta must be below 1");
  if (!(R > r)) throw std::invalid_argument("example41_check: requires R > r");
  if (!(r > (std::numbers::e - beta) / 2.0)) throw std::invalid_argument("example41_check: requires r > (e - beta)/2");
  if (samples < 2) throw std::invalid_argument("example41_check: at least 2 samples required");
  const MapSpec m = MapSpec::f2_beta(beta);
  const std::string tag = format("[beta=%g r=%g R=%g]", beta, r, R);
  auto real_value = [&](double x) { return eval_map(m, cplx{x, 0.0}); };

  Fragment out;
  {
    const double lhs = exp_tower(2, cplx{-r, 0.0}).value().real() - r - beta;
    Check c{"example41.upper" + tag, kAnchorEq3, lhs < R ? Status::Pass : Status::Fail, R - lhs,
            format("E^2(-r) - r - beta = %.17g", lhs), {}};
    out.push_back(std::move(c));
  }
  {
    const double lhs = exp_tower(2, cplx{-R, 0.0}).value().real() - R - beta;
    Check c{"example41.lower" + tag, kAnchorEq4, lhs > -R ? Status::Pass : Status::Fail, lhs + R,
            format("E^2(-R) - R - beta = %.17g", lhs), {}};
    out.push_back(std::move(c));
  }
  {
    Check c{"example41.interval" + tag, kAnchorInterval, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
    std::size_t bad = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      const double x = -R + (R - r) * (s + 0.5) / samples;
      const cplx y = real_value(x).value();
      margin = std::min(margin, R - std::abs(y.real()));
      if (!(y.real() > -R && y.real() < R) || y.imag() != 0.0) {
        ++bad;
        if (c.data.size() < 20) c.data.push_back(x);
      }
    }
    c.residual = margin;
    c.details = std::to_string(samples) + " points of (-R, -r), " + std::to_string(bad) + " mapped outside (-R, R)";
    if (bad) c.status = Status::Fail;
    out.push_back(std::move(c));
  }
  {
    Check c{"example41.monotone" + tag, kAnchorMonotone, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
    std::size_t bad = 0;
    const int n = 4 * samples;
    SafeValue prev;
    for (int s = 0; s < n; ++s) {
      const double x = -R + 2.0 * R * (s + 0.5) / n;
      const SafeValue y = real_value(x);
      const bool real = y.is_finite() ? y.value().imag() == 0.0 : y.arg() == 0.0;
      bool increasing = true;
      if (s > 0) {
        if (prev.is_finite() && y.is_finite()) {
          increasing = y.value().real() > prev.value().real();
        } else if (prev.is_finite()) {
          increasing = y.arg() == 0.0;  // past the cap on the positive axis
        } else {
          increasing = !y.is_finite() && (y.is_saturated() || y.log_abs() > prev.log_abs());
        }
      }
      if (!real || !increasing) {
        ++bad;
        if (c.data.size() < 20) c.data.push_back(x);
      }
      prev = y;
    }
    c.details = std::to_string(n) + " ordered samples of (-R, R), " + std::to_string(bad) + " violations";
    if (bad) c.status = Status::Fail;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace expdyn
