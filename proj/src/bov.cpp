#include "expdyn/bov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "expdyn/random.hpp"

namespace expdyn {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kAnchorBounded = "every boundary component of f^{-1}({|w| > R}) is bounded";
constexpr const char* kAnchorCase1 = "|f(z)| >= (1/d) sum_{i<d} |a_i| |z|^i - |c| E^k(M0) for Re z < M0";
constexpr const char* kAnchorCase2a =
    "|f(z)| > |c| e^{Re z} - (sum |a_i|) (1 + tan^2 alpha)^{d/2} |Re z|^d in |Arg z| < alpha";
constexpr const char* kAnchorTower =
    "|f(z)| > |c| K1^{k-1} e^{Re z} - (sum |a_i|) (1 + tan^2 alpha)^{d/2} |Re z|^d";
// Rounding allowance when a bound is attained with equality.
constexpr double kBoundSlack = 1e-12;

std::string format(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

struct PhysicalBox {
  double re_min, re_max, im_min, im_max;
};

PhysicalBox physical_box(const GridMask& mask, const PixelBox& b) {
  const cplx lo = mask.center(b.i_min, b.j_min);
  const cplx hi = mask.center(b.i_max, b.j_max);
  return {lo.real(), hi.real(), lo.imag(), hi.imag()};
}

nlohmann::json box_json(const PhysicalBox& b) {
  return {{"re_min", b.re_min}, {"re_max", b.re_max}, {"im_min", b.im_min}, {"im_max", b.im_max}};
}

}  // namespace

GridMask superlevel_mask(const Evaluator& f, double R, const Rect& window, int nx, int ny) {
  if (!(R > 0.0)) throw std::invalid_argument("superlevel_mask: R must be positive");
  return make_mask(window, nx, ny, [&](cplx z) { return exceeds(f(z), R); });
}

GridMask superlevel_mask(const MapSpec& m, double R, const Rect& window, int nx, int ny) {
  return superlevel_mask(evaluator(m), R, window, nx, ny);
}

Fragment bov_evidence(const Evaluator& f, double R, const std::vector<Rect>& windows, int resolution,
                      std::vector<WindowCensus>* censuses) {
  Fragment out;
  if (windows.size() < 3) {
    out.push_back({"bov.windows", kAnchorBounded, Status::Inconclusive, std::nullopt,
                   "insufficient windows: at least 3 nested windows are required", {}});
    return out;
  }
  for (std::size_t j = 1; j < windows.size(); ++j) {
    if (!windows[j].strictly_contains(windows[j - 1])) {
      out.push_back({"bov.windows", kAnchorBounded, Status::Fail, std::nullopt,
                     "windows are not strictly nested", {}});
      return out;
    }
  }

  std::vector<GridMask> masks;
  std::vector<ComponentCensus> all;
  std::vector<WindowCensus> summary;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    masks.push_back(superlevel_mask(f, R, windows[w], resolution, resolution));
    all.push_back(component_census(masks.back(), false));
    const auto& census = all.back();

    WindowCensus s{windows[w]};
    s.components = census.components.size();
    std::size_t sub_pixels = 0;
    std::size_t near_frame = 0;
    for (const auto& c : census.components) {
      s.max_edges_touched = std::max(s.max_edges_touched, c.edges_touched());
      if (c.interior(resolution, resolution, kFrameMargin)) ++s.interior;
      sub_pixels += c.pixel_count;
    }
    for (int j = 0; j < resolution; ++j) {
      for (int i = 0; i < resolution; ++i) {
        const bool margin = i < kFrameMargin || j < kFrameMargin || i >= resolution - kFrameMargin ||
                            j >= resolution - kFrameMargin;
        if (margin && !masks.back().at(i, j)) ++near_frame;
      }
    }
    s.clipped_fraction = sub_pixels ? static_cast<double>(near_frame) / static_cast<double>(sub_pixels) : 0.0;
    summary.push_back(s);

    Check c{"bov.frame[" + std::to_string(w) + "]", kAnchorBounded, Status::Pass, std::nullopt, {}, {}};
    c.data = {{"components", s.components},
              {"interior_components", s.interior},
              {"max_edges_touched", s.max_edges_touched},
              {"clipped_fraction", s.clipped_fraction},
              {"half_width", 0.5 * windows[w].width()}};
    c.details = std::to_string(s.components) + " sublevel components, " + std::to_string(s.interior) +
                " interior; widest frame contact " + std::to_string(s.max_edges_touched) + " edges";
    if (s.max_edges_touched >= 3) {
      c.status = Status::Fail;
      c.details += "; a sublevel component spans the window";
    } else if (s.clipped_fraction > kClippedFraction) {
      c.status = Status::Inconclusive;
      c.details += format("; %.1f%% of sublevel pixels lie within the frame margin", 100.0 * s.clipped_fraction);
    }
    out.push_back(std::move(c));
  }

  // Interior components of the second-largest window must reappear in the
  // largest one with the same extent, up to one coarse pixel pitch.
  {
    const std::size_t a = windows.size() - 2;
    const std::size_t b = windows.size() - 1;
    const double pitch = std::max({masks[a].dx(), masks[a].dy(), masks[b].dx(), masks[b].dy()});
    const double tol = pitch * (1.0 + 1e-9);
    std::vector<PhysicalBox> larger;
    for (const auto& c : all[b].components) larger.push_back(physical_box(masks[b], c.bbox));
    Check c{"bov.stability", kAnchorBounded, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
    std::size_t checked = 0;
    std::size_t unresolved = 0;
    std::size_t unmatched = 0;
    double worst = 0.0;
    for (const auto& comp : all[a].components) {
      if (!comp.interior(resolution, resolution, kFrameMargin)) continue;
      const PhysicalBox box = physical_box(masks[a], comp.bbox);
      const double extent = std::max(box.re_max - box.re_min + masks[a].dx(), box.im_max - box.im_min + masks[a].dy());
      if (extent < kResolvedPitches * pitch) {
        ++unresolved;
        continue;
      }
      ++checked;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& other : larger) {
        const double gap = std::max({std::abs(box.re_min - other.re_min), std::abs(box.re_max - other.re_max),
                                     std::abs(box.im_min - other.im_min), std::abs(box.im_max - other.im_max)});
        best = std::min(best, gap);
      }
      worst = std::max(worst, best);
      if (!(best <= tol)) {
        ++unmatched;
        if (c.data.size() < 20) c.data.push_back(box_json(box));
      }
    }
    c.residual = checked ? worst / pitch : 0.0;
    c.details = std::to_string(checked) + " interior components compared, " + std::to_string(unmatched) +
                " changed extent by more than one pixel pitch; " + std::to_string(unresolved) +
                " smaller than " + format("%g", kResolvedPitches) + " coarse pixels not compared";
    if (unmatched > 0) c.status = Status::Fail;
    if (checked == 0) {
      c.status = Status::Inconclusive;
      c.details = "no interior components to compare";
    }
    out.push_back(std::move(c));
  }

  {
    Check c{"bov.count_growth", kAnchorBounded, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
    for (std::size_t w = 0; w < summary.size(); ++w) {
      c.data.push_back(summary[w].interior);
      if (w > 0 && !(summary[w].interior > summary[w - 1].interior)) c.status = Status::Fail;
    }
    c.details = "interior sublevel component counts per window";
    out.push_back(std::move(c));
  }

  if (censuses) *censuses = std::move(summary);
  return out;
}

Fragment bov_evidence(const MapSpec& m, double R, const std::vector<Rect>& windows, int resolution,
                      std::vector<WindowCensus>* censuses) {
  return bov_evidence(evaluator(m), R, windows, resolution, censuses);
}

CurveSpec CurveSpec::sector_ray(double theta, double t0, double t1) {
  if (!(theta > -kPi / 2 && theta < kPi / 2)) throw std::invalid_argument("sector ray angle must lie in (-pi/2, pi/2)");
  CurveSpec c{CurveKind::SectorRay, t0, t1};
  c.theta = theta;
  return c;
}

CurveSpec CurveSpec::vertical_zigzag(double beta, double t0, double t1) {
  if (!(beta > 0.0 && beta < kPi / 2)) throw std::invalid_argument("zigzag angle must lie in (0, pi/2)");
  CurveSpec c{CurveKind::VerticalZigzag, t0, t1};
  c.beta = beta;
  return c;
}

CurveSpec CurveSpec::log_spiral(double a, double b, double t0, double t1) {
  CurveSpec c{CurveKind::LogSpiral, t0, t1};
  c.a = a;
  c.b = b;
  return c;
}

cplx CurveSpec::point(double t) const {
  switch (kind) {
    case CurveKind::LeftRay:
      return {-t, 0.0};
    case CurveKind::SectorRay:
      return std::polar(t, theta);
    case CurveKind::VerticalZigzag: {
      const double phase = std::log10(std::max(t, 1e-300));
      const double sweep = 0.5 * (1.0 - std::cos(2.0 * kPi * phase));
      return std::polar(t, beta + (kPi / 2 - beta) * sweep);
    }
    case CurveKind::LogSpiral:
      return std::polar(t, a + b * std::log(std::max(t, 1e-300)));
  }
  return {};
}

std::string CurveSpec::name() const {
  switch (kind) {
    case CurveKind::LeftRay:
      return "left_ray";
    case CurveKind::SectorRay:
      return "sector_ray";
    case CurveKind::VerticalZigzag:
      return "vertical_zigzag";
    case CurveKind::LogSpiral:
      return "log_spiral";
  }
  return "unknown";
}

double zigzag_beta(int degree) {
  if (degree < 1) throw std::invalid_argument("zigzag_beta: degree must be positive");
  return kPi / 2 - kPi / (4.0 * degree);
}

CurveGrowth curve_growth(const Evaluator& f, const CurveSpec& curve, int samples) {
  if (samples < 64) throw std::invalid_argument("curve_growth: at least 64 samples required");
  if (!(curve.t0 > 0.0) || !(curve.t1 > curve.t0)) {
    throw std::invalid_argument("curve_growth: requires 0 < t0 < t1");
  }
  CurveGrowth out;
  out.trace.resize(samples);
  const double l0 = std::log10(curve.t0);
  const double l1 = std::log10(curve.t1);
  for (int s = 0; s < samples; ++s) {
    const double t = std::pow(10.0, l0 + (l1 - l0) * s / (samples - 1));
    const cplx z = curve.point(t);
    out.trace[s] = {t, z, f(z)};
  }
  // Decades [10^m, 10^{m+1}) anchored at t0.
  const int decades = std::max(1, static_cast<int>(std::ceil(l1 - l0 - 1e-12)));
  out.decade_start.resize(decades);
  out.decade_min_log_modulus.assign(decades, std::numeric_limits<double>::infinity());
  for (int d = 0; d < decades; ++d) out.decade_start[d] = std::pow(10.0, l0 + d);
  for (const auto& s : out.trace) {
    const int d = std::min(decades - 1, static_cast<int>(std::floor(std::log10(s.t) - l0 + 1e-12)));
    out.decade_min_log_modulus[d] = std::min(out.decade_min_log_modulus[d], s.value.log_abs());
  }
  for (double l : out.decade_min_log_modulus) {
    out.decade_min_modulus.push_back(l > kLogOverflowCap ? std::numeric_limits<double>::infinity() : std::exp(l));
  }
  for (int d = decades - 1; d > 0; --d) {
    if (out.decade_min_log_modulus[d] > out.decade_min_log_modulus[d - 1]) {
      ++out.tail_increasing_run;
    } else {
      break;
    }
  }
  return out;
}

CurveGrowth curve_growth(const MapSpec& m, const CurveSpec& curve, int samples) {
  return curve_growth(evaluator(m), curve, samples);
}

std::string to_string(BoundCase c) {
  switch (c) {
    case BoundCase::Case1:
      return "case1";
    case BoundCase::Case2a:
      return "case2a";
    case BoundCase::Tower:
      return "tower";
  }
  return "unknown";
}

Fragment case_bound_check(const MapSpec& m, BoundCase which, const std::vector<cplx>& samples,
                          const BoundOptions& opt) {
  if (!m.is_tower()) throw std::invalid_argument("case_bound_check: tower map required");
  const TowerPoly& t = m.as_tower();
  if (which == BoundCase::Case2a && t.k != 1) {
    throw std::invalid_argument("case_bound_check: case 2a applies to k = 1 only");
  }
  const std::string id = "bound." + to_string(which);
  const char* anchor = which == BoundCase::Case1 ? kAnchorCase1 : which == BoundCase::Case2a ? kAnchorCase2a : kAnchorTower;
  Check c{id, anchor, Status::Pass, std::nullopt, {}, nlohmann::json::array()};
  if (samples.empty()) {
    c.details = "no samples: vacuous pass";
    return {c};
  }

  const PolyBounds bounds = poly_bounds(t.p);
  const int d = t.p.degree();
  double coeff_sum = 0.0;
  for (double a : bounds.moduli) coeff_sum += a;
  const double log_c = std::log(std::abs(t.c));

  std::size_t skipped = 0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t positive = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // ln|f| - ln(bound)

  auto record_violation = [&](cplx z, double lhs, double rhs) {
    ++violations;
    if (c.data.size() < 20) c.data.push_back({{"z", to_json(z)}, {"log_modulus", lhs}, {"log_bound", rhs}});
  };

  if (which == BoundCase::Case1) {
    double m0 = -std::numeric_limits<double>::infinity();
    for (cplx z : samples) m0 = std::max(m0, z.real());
    if (opt.m0) m0 = *opt.m0;
    const SafeValue tower_m0 = exp_tower(t.k, cplx{m0, 0.0});
    const double cap = tower_m0.is_finite() ? std::abs(t.c) * tower_m0.abs() : std::numeric_limits<double>::infinity();
    for (cplx z : samples) {
      const bool in_region = opt.m0 ? z.real() < m0 : z.real() <= m0;
      if (!in_region || std::abs(z) < bounds.threshold_radius) {
        ++skipped;
        continue;
      }
      ++checked;
      const double bound = bounds.lower(std::abs(z)) - cap;
      if (!(bound > 0.0)) continue;
      ++positive;
      const double lhs = eval_map(m, z).log_abs();
      const double rhs = std::log(bound);
      worst_margin = std::min(worst_margin, lhs - rhs);
      if (lhs < rhs - kBoundSlack) record_violation(z, lhs, rhs);
    }
    c.details = format("M0 = %.6g; ", m0);
  } else {
    double alpha = 0.0;
    for (cplx z : samples) alpha = std::max(alpha, std::abs(std::arg(z)));
    alpha = opt.alpha ? *opt.alpha : std::nextafter(alpha, kPi);
    double k1 = 1.0;
    if (which == BoundCase::Tower) {
      for (cplx z : samples) {
        for (int l = 0; l + 1 < t.k; ++l) {
          const SafeValue e = l == 0 ? SafeValue::from_complex(z) : exp_tower(l, z);
          // Im of a log-polar value is not resolvable; no usable K1 then.
          k1 = std::min(k1, e.is_finite() ? std::cos(e.value().imag()) : -1.0);
        }
      }
      if (!(k1 > 0.0)) {
        c.status = Status::Inconclusive;
        c.details = format("estimated K1 = %.6g is not positive; bound undefined", k1);
        return {c};
      }
    }
    if (!(alpha < kPi / 2)) {
      c.status = Status::Inconclusive;
      c.details = "samples are not confined to a right sector |Arg z| < pi/2";
      return {c};
    }
    const double tan_a = std::tan(alpha);
    const double log_a = std::log(coeff_sum) + 0.5 * d * std::log1p(tan_a * tan_a);
    for (cplx z : samples) {
      if (std::abs(std::arg(z)) >= alpha || std::abs(z) < bounds.threshold_radius || !(z.real() > 0.0)) {
        ++skipped;
        continue;
      }
      ++checked;
      const double la = log_c + (t.k - 1) * std::log(k1) + z.real();
      const double lb = log_a + d * std::log(z.real());
      if (!(la > lb)) continue;
      ++positive;
      const double rhs = la + std::log1p(-std::exp(lb - la));
      const double lhs = eval_map(m, z).log_abs();
      worst_margin = std::min(worst_margin, lhs - rhs);
      if (lhs < rhs - kBoundSlack) record_violation(z, lhs, rhs);
    }
    c.details = format("alpha = %.6g; ", alpha);
    if (which == BoundCase::Tower) c.details += format("K1 = %.6g (estimated from the samples); ", k1);
  }
  c.details += std::to_string(checked) + " samples checked, " + std::to_string(positive) + " with a positive bound, " +
               std::to_string(skipped) + " outside the case region, " + std::to_string(violations) + " violations";
  if (std::isfinite(worst_margin)) c.residual = worst_margin;
  if (violations > 0) c.status = Status::Fail;
  if (checked == 0) {
    c.status = Status::Skipped;
    c.details = "no samples inside the case region";
  }
  return {c};
}

bool Sector::contains(cplx z) const {
  const cplx w = z - vertex;
  if (!(std::abs(w) < radius) || w == cplx{0.0}) return false;
  return std::abs(wrap_angle(std::arg(w) - direction)) < half_angle;
}

std::optional<Collision> injectivity_falsifier(const Poly& p, const Sector& sector, int trials, std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("injectivity_falsifier: at least 1000 trials required");
  if (p.degree() < 1) throw std::invalid_argument("injectivity_falsifier: polynomial must be non-constant");
  Rng rng(seed);
  auto draw = [&] {
    // Area-uniform in the disk sector.
    const double r = sector.radius * std::sqrt(rng.uniform());
    const double phi = sector.direction + sector.half_angle * (2.0 * rng.uniform() - 1.0);
    return sector.vertex + std::polar(r, phi);
  };
  auto collide = [&](cplx z1, cplx z2) {
    if (!sector.contains(z1) || !sector.contains(z2)) return false;
    if (!(std::abs(z1 - z2) > kDedupRadius)) return false;
    const cplx w1 = eval_poly(p, z1);
    return std::abs(w1 - eval_poly(p, z2)) < kCollideTol * (1.0 + std::abs(w1));
  };
  for (int trial = 0; trial < trials; ++trial) {
    const cplx z1 = draw();
    const cplx z2 = draw();
    if (collide(z1, z2)) return Collision{z1, z2};
    if (p.degree() == 1) continue;
    std::vector<cplx> shifted = p.coeffs();
    shifted[0] -= eval_poly(p, z1);
    for (cplx root : poly_roots(Poly(std::move(shifted)))) {
      if (collide(z1, root)) return Collision{z1, root};
    }
  }
  return std::nullopt;
}

std::size_t preimage_count(const MapSpec& m, cplx w, const Rect& window, double seed_density) {
  const Evaluator g = [&m, w](cplx z) { return eval_map(m, z) - w; };
  const Evaluator dg = [&m](cplx z) { return eval_derivative(m, z); };
  return find_roots(g, dg, window, seed_density).roots.size();
}

}  // namespace expdyn
