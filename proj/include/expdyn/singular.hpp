#pragma once

#include <optional>
#include <vector>

#include "expdyn/map_spec.hpp"
#include "expdyn/newton.hpp"
#include "expdyn/rect.hpp"
#include "expdyn/report.hpp"

namespace expdyn {

inline constexpr double kCrosscheckTol = 1e-8;
inline constexpr double kLimitTol = 1e-6;
inline constexpr int kClusterMin = 3;
inline constexpr double kClusterRadius = 1.0;

/// A critical point z_n with its critical value w_n = f(z_n).
struct CriticalDatum {
  cplx point;
  std::optional<SafeValue> value;
  double residual = 0.0;  // |f'(point)|
  int window_id = 0;
  /// |f(z_n) - (P(z_n) - P'(z_n))|, filled for e^z + P maps.
  std::optional<double> identity_gap;
};

struct CriticalSearch {
  std::vector<CriticalDatum> points;
  std::size_t seeds = 0;
  std::size_t diverged = 0;
  std::size_t exited = 0;
};

/// Zeros of f' inside `window` by multi-start damped Newton, deduplicated
/// and sorted by (Im, Re). Requires a tower map and a window of positive
/// area (std::invalid_argument otherwise).
CriticalSearch critical_points(const MapSpec& m, const Rect& window,
                               double seed_density = kDefaultSeedDensity, int window_id = 0);

/// Fills `value` by direct evaluation. For k = 1, c = 1 also evaluates
/// P(z) - P'(z) and stores the discrepancy in `identity_gap`.
std::vector<CriticalDatum> critical_values(const MapSpec& m, std::vector<CriticalDatum> points);

/// Indices whose identity_gap exceeds kCrosscheckTol.
std::vector<std::size_t> crosscheck_failures(const std::vector<CriticalDatum>& data);

nlohmann::json to_json(const CriticalDatum& d);

/// Evidence that critical values accumulate only at infinity, gathered over
/// at least three nested windows. The per-window critical data are stored
/// in `per_window` when given.
Fragment accumulation_report(const MapSpec& m, const std::vector<Rect>& windows,
                             double seed_density = kDefaultSeedDensity,
                             std::vector<std::vector<CriticalDatum>>* per_window = nullptr);

struct RayLimit {
  std::optional<cplx> finite_limit;
  double tail_min_modulus = 0.0;
  double tail_min_log_modulus = 0.0;
};

/// Samples f(t e^{i theta}) at `samples` log-spaced t in [1, t_max].
/// Reports a finite limit when the last quartile has diameter below
/// kLimitTol, and the minimum modulus over that quartile either way.
/// Requires samples >= 16.
RayLimit ray_limit(const Evaluator& f, double theta, double t_max, int samples);
RayLimit ray_limit(const MapSpec& m, double theta, double t_max, int samples);

}  // namespace expdyn
