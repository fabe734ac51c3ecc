#include "expdyn/singular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace expdyn {
namespace {

constexpr const char* kAnchorCritical = "critical points of c E^k + P are the zeros of c (E^k)' + P'";
constexpr const char* kAnchorIdentity = "for e^z + P, w_n = f(z_n) = P(z_n) - P'(z_n)";
constexpr const char* kAnchorAccumulation = "the only limit point of the critical values of e^z + P is infinity";

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double inradius(const Rect& w) {
  const cplx c = w.center();
  return std::min({c.real() - w.re_min, w.re_max - c.real(), c.imag() - w.im_min, w.im_max - c.imag()});
}

double distance(const SafeValue& a, const SafeValue& b) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value());
  // Beyond the cap only relative agreement is meaningful.
  return relative_distance(a, b);
}

/// Centers (as values) of clusters of at least kClusterMin values within
/// kClusterRadius.
std::vector<cplx> cluster_centers(const std::vector<CriticalDatum>& data) {
  std::vector<cplx> finite;
  for (const auto& d : data) {
    if (d.value && d.value->is_finite()) finite.push_back(d.value->value());
  }
  std::vector<cplx> centers;
  for (cplx w : finite) {
    int near = 0;
    for (cplx u : finite) near += std::abs(u - w) <= kClusterRadius;
    if (near >= kClusterMin) centers.push_back(w);
  }
  return centers;
}

}  // namespace

CriticalSearch critical_points(const MapSpec& m, const Rect& window, double seed_density,
                               int window_id) {
  if (!m.is_tower()) throw std::invalid_argument("critical_points: tower map required");
  if (!(window.area() > 0.0)) throw std::invalid_argument("critical_points: window must have positive area");
  const Evaluator g = [&m](cplx z) { return eval_derivative(m, z); };
  const Evaluator dg = [&m](cplx z) { return eval_second_derivative(m, z); };
  const RootSearch search = find_roots(g, dg, window, seed_density);
  CriticalSearch out;
  out.seeds = search.seeds;
  out.diverged = search.diverged;
  out.exited = search.exited;
  out.points.reserve(search.roots.size());
  for (const auto& r : search.roots) {
    CriticalDatum d;
    d.point = r.point;
    d.residual = r.residual;
    d.window_id = window_id;
    out.points.push_back(d);
  }
  return out;
}

std::vector<CriticalDatum> critical_values(const MapSpec& m, std::vector<CriticalDatum> points) {
  const bool identity = m.is_tower() && m.as_tower().k == 1 && m.as_tower().c == cplx{1.0};
  for (auto& d : points) {
    d.value = eval_map(m, d.point);
    if (identity) {
      const Poly& p = m.as_tower().p;
      const SafeValue via_identity =
          SafeValue::from_complex(eval_poly(p, d.point) - eval_poly_derivative(p, d.point));
      d.identity_gap = distance(*d.value, via_identity);
    }
  }
  return points;
}

std::vector<std::size_t> crosscheck_failures(const std::vector<CriticalDatum>& data) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].identity_gap && !(*data[i].identity_gap <= kCrosscheckTol)) bad.push_back(i);
  }
  return bad;
}

nlohmann::json to_json(const CriticalDatum& d) {
  nlohmann::json j;
  j["point"] = to_json(d.point);
  j["value"] = d.value ? to_json(*d.value) : nlohmann::json(nullptr);
  j["residual"] = d.residual;
  j["window_id"] = d.window_id;
  return j;
}

Fragment accumulation_report(const MapSpec& m, const std::vector<Rect>& windows, double seed_density,
                             std::vector<std::vector<CriticalDatum>>* per_window_out) {
  Fragment out;
  if (windows.size() < 3) {
    out.push_back({"critical.accumulation", kAnchorAccumulation, Status::Inconclusive, std::nullopt,
                   "insufficient windows: at least 3 nested windows are required", {}});
    return out;
  }
  for (std::size_t j = 1; j < windows.size(); ++j) {
    if (!windows[j].strictly_contains(windows[j - 1])) {
      out.push_back({"critical.accumulation", kAnchorAccumulation, Status::Fail, std::nullopt,
                     "windows are not strictly nested", {}});
      return out;
    }
  }

  std::vector<std::vector<CriticalDatum>> per_window;
  for (std::size_t j = 0; j < windows.size(); ++j) {
    CriticalSearch search = critical_points(m, windows[j], seed_density, static_cast<int>(j));
    per_window.push_back(critical_values(m, std::move(search.points)));
    const auto& data = per_window.back();

    Check census{"critical.census[" + std::to_string(j) + "]", kAnchorCritical, Status::Pass,
                 std::nullopt, {}, {}};
    double worst = 0.0;
    for (const auto& d : data) worst = std::max(worst, d.residual);
    census.residual = worst;
    census.details = std::to_string(data.size()) + " critical points in window; " +
                     std::to_string(search.diverged) + " seeds diverged, " +
                     std::to_string(search.exited) + " left the window (evidence, not enumeration)";
    census.data = nlohmann::json::array();
    for (const auto& d : data) census.data.push_back(to_json(d));
    if (worst > kNewtonTol) census.status = Status::Fail;
    out.push_back(std::move(census));

    if (m.as_tower().k == 1 && m.as_tower().c == cplx{1.0}) {
      Check identity{"critical.identity[" + std::to_string(j) + "]", kAnchorIdentity, Status::Pass,
                     0.0, {}, {}};
      for (const auto& d : data) identity.residual = std::max(*identity.residual, *d.identity_gap);
      const auto bad = crosscheck_failures(data);
      identity.details = std::to_string(bad.size()) + " of " + std::to_string(data.size()) +
                         " values disagree beyond " + fmt("%.1e", kCrosscheckTol);
      if (!bad.empty()) identity.status = Status::Fail;
      out.push_back(std::move(identity));
    }
  }

  // Smaller-window value sets reappear in every larger window.
  {
    Check c{"critical.containment", kAnchorAccumulation, Status::Pass, std::nullopt, {}, {}};
    std::size_t missing = 0;
    for (std::size_t j = 0; j + 1 < per_window.size(); ++j) {
      for (const auto& d : per_window[j]) {
        const bool found = std::any_of(per_window[j + 1].begin(), per_window[j + 1].end(),
                                       [&](const CriticalDatum& e) {
                                         return std::abs(e.point - d.point) <= kDedupRadius &&
                                                distance(*e.value, *d.value) <= kDedupRadius;
                                       });
        missing += !found;
      }
    }
    c.details = std::to_string(missing) + " critical values missing from the next larger window";
    if (missing > 0) c.status = Status::Fail;
    out.push_back(std::move(c));
  }

  // Moduli in the largest window: beyond the 5 smallest, equal moduli occur
  // only for conjugate pairs, and the least modulus of values whose critical
  // points lie outside radius rho strictly grows with rho.
  {
    const auto& data = per_window.back();
    std::vector<std::pair<double, std::size_t>> moduli;
    for (std::size_t i = 0; i < data.size(); ++i) moduli.emplace_back(data[i].value->log_abs(), i);
    std::sort(moduli.begin(), moduli.end());
    Check order{"critical.sorted_moduli", kAnchorAccumulation, Status::Pass, std::nullopt, {}, {}};
    std::size_t bad_ties = 0;
    for (std::size_t i = 5; i < moduli.size();) {
      std::size_t end = i + 1;
      while (end < moduli.size() && moduli[end].first - moduli[i].first <= 1e-12 * std::max(1.0, std::abs(moduli[i].first))) {
        ++end;
      }
      const std::size_t group = end - i;
      if (group > 2) {
        bad_ties += group;
      } else if (group == 2) {
        const SafeValue& a = *data[moduli[i].second].value;
        const SafeValue& b = *data[moduli[i + 1].second].value;
        const bool conjugate = a.is_finite() && b.is_finite() &&
                               std::abs(a.value() - std::conj(b.value())) <= kDedupRadius;
        if (!conjugate) bad_ties += 2;
      }
      i = end;
    }
    order.details = std::to_string(moduli.size()) + " values; " + std::to_string(bad_ties) +
                    " non-conjugate ties beyond the 5 smallest moduli";
    if (bad_ties > 0) order.status = Status::Fail;
    out.push_back(std::move(order));

    Check growth{"critical.tail_growth", kAnchorAccumulation, Status::Pass, std::nullopt, {}, {}};
    std::vector<double> radii;
    const double outer = inradius(windows.back());
    for (int s = 4; s >= 1; --s) radii.push_back(outer / std::pow(2.0, s));
    for (std::size_t j = 0; j + 1 < windows.size(); ++j) radii.push_back(inradius(windows[j]));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    growth.data = nlohmann::json::array();
    double previous = -std::numeric_limits<double>::infinity();
    double first = previous;
    std::size_t compared = 0;
    for (double rho : radii) {
      double least = std::numeric_limits<double>::infinity();
      for (const auto& d : data) {
        if (std::abs(d.point) > rho) least = std::min(least, d.value->log_abs());
      }
      if (!std::isfinite(least)) continue;
      growth.data.push_back({{"rho", rho}, {"min_log_modulus", least}});
      if (!(least >= previous)) growth.status = Status::Fail;
      if (compared == 0) first = least;
      previous = least;
      ++compared;
    }
    if (compared >= 2 && !(previous > first)) growth.status = Status::Fail;
    if (compared < 2) growth.status = Status::Inconclusive;
    growth.details = "least |w| over critical points outside radius rho is nondecreasing and grows across " +
                     std::to_string(compared) + " radii";
    out.push_back(std::move(growth));
  }

  // A finite cluster present in every window would be a finite limit point.
  {
    Check c{"critical.no_finite_cluster", kAnchorAccumulation, Status::Pass, std::nullopt, {}, {}};
    std::vector<cplx> persistent = cluster_centers(per_window.front());
    for (std::size_t j = 1; j < per_window.size() && !persistent.empty(); ++j) {
      const auto centers = cluster_centers(per_window[j]);
      std::erase_if(persistent, [&](cplx p) {
        return std::none_of(centers.begin(), centers.end(),
                            [&](cplx q) { return std::abs(p - q) <= kClusterRadius; });
      });
    }
    c.details = std::to_string(persistent.size()) + " clusters of >= 3 values within radius 1 persist across windows";
    if (!persistent.empty()) c.status = Status::Fail;
    out.push_back(std::move(c));
  }
  if (per_window_out) *per_window_out = std::move(per_window);
  return out;
}

RayLimit ray_limit(const Evaluator& f, double theta, double t_max, int samples) {
  if (samples < 16) throw std::invalid_argument("ray_limit: at least 16 samples required");
  if (!(t_max > 1.0)) throw std::invalid_argument("ray_limit: t_max must exceed 1");
  std::vector<SafeValue> values(samples);
  const double log_span = std::log(t_max);
  for (int i = 0; i < samples; ++i) {
    const double t = std::exp(log_span * i / (samples - 1));
    values[i] = f(std::polar(t, theta));
  }
  const int tail_begin = samples - samples / 4;
  RayLimit out;
  out.tail_min_log_modulus = std::numeric_limits<double>::infinity();
  bool all_finite = true;
  for (int i = tail_begin; i < samples; ++i) {
    out.tail_min_log_modulus = std::min(out.tail_min_log_modulus, values[i].log_abs());
    all_finite = all_finite && values[i].is_finite();
  }
  out.tail_min_modulus = std::exp(out.tail_min_log_modulus);
  if (all_finite) {
    double diameter = 0.0;
    for (int i = tail_begin; i < samples; ++i) {
      for (int j = i + 1; j < samples; ++j) {
        diameter = std::max(diameter, std::abs(values[i].value() - values[j].value()));
      }
    }
    if (diameter < kLimitTol) out.finite_limit = values.back().value();
  }
  return out;
}

RayLimit ray_limit(const MapSpec& m, double theta, double t_max, int samples) {
  return ray_limit(evaluator(m), theta, t_max, samples);
}

}  // namespace expdyn
