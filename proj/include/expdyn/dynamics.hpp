#pragma once

#include <optional>
#include <vector>

#include "expdyn/map_spec.hpp"
#include "expdyn/rect.hpp"
#include "expdyn/report.hpp"

namespace expdyn {

inline constexpr double kConvTol = 1e-9;
inline constexpr double kEscapeRadius = 1e8;
inline constexpr int kDefaultMaxIter = 512;
inline constexpr double kSnapDistance = 0.5;

enum class Verdict { Converged, Escaped, Undecided };

std::string_view to_string(Verdict v);

struct OrbitResult {
  std::vector<SafeValue> points;  // z_0 .. z_N
  Verdict verdict = Verdict::Undecided;
  cplx fixed_point{0.0, 0.0};  // Converged only
  int k_index = 0;             // Converged only: fixed point (2k+1) pi i, or 0 / -1 for h
  int escaped_at = -1;         // Escaped only
  int settled_at = -1;         // first n with |z_n - fixed_point| < kConvTol
  int steps_used = 0;
};

/// Iterates the map from z0. Stops when two consecutive steps move less
/// than kConvTol at a point where |f'| < 1 (then snaps to the nearest admissible fixed point: (2k+1) pi i
/// for lambda e^z + z + lambda, -1 or 0 for h_lambda, the limit itself for
/// other maps), when |z| > kEscapeRadius or the value leaves the finite
/// range, or after max_iter steps. With keep_points false only the last
/// point is retained.
OrbitResult iterate(const MapSpec& m, cplx z0, int max_iter = kDefaultMaxIter, bool keep_points = true);

/// f'(z) at a numerical fixed point. Throws std::invalid_argument unless
/// |f(z) - z| < kConvTol.
cplx fixed_point_multiplier(const MapSpec& m, cplx z);

inline constexpr int kLabelEscaped = -1;
inline constexpr int kLabelUndecided = -2;

/// Basin index k (any integer) to a nonnegative label: 2k for k >= 0,
/// -2k - 1 for k < 0.
constexpr int encode_basin(int k) { return k >= 0 ? 2 * k : -2 * k - 1; }
constexpr int decode_basin(int label) { return label % 2 == 0 ? label / 2 : -(label + 1) / 2; }

struct GridClassification {
  Rect window;
  int nx = 0;
  int ny = 0;
  std::vector<int> labels;      // row-major, row 0 = bottom (min Im)
  std::vector<int> iterations;  // steps used per pixel

  cplx center(int i, int j) const {
    return {window.re_min + (i + 0.5) * window.width() / nx, window.im_min + (j + 0.5) * window.height() / ny};
  }
  int label(int i, int j) const { return labels[static_cast<std::size_t>(j) * nx + i]; }
};

/// Per-pixel orbit verdicts, row-parallel. Requires lambda e^z + z + lambda
/// or h_lambda (std::invalid_argument otherwise) and nx, ny >= 1.
GridClassification classify_grid(const MapSpec& m, const Rect& window, int nx, int ny,
                                 int max_iter = kDefaultMaxIter);

/// |h(e^z) - e^{f(z)}| / max(1, |e^{f(z)}|) for f = lambda e^z + z + lambda
/// and h = h_lambda. Nothing when both sides saturate.
std::optional<double> semiconjugacy_residual(double lambda, cplx z);

/// Real-line facts for h_lambda on (-1, 0) and (0, infinity), sampled on
/// (-0.999, -0.001) and (0.001, 10). Requires samples >= 1000.
Fragment h_real_line_checks(double lambda, int samples);

/// Residuals |f^n(z + 2 pi i) - (f^n(z) + 2 pi i)| / (1 + max_{m<=n} |f^m(z)|)
/// for n = 1..n_max, stopping at the first non-finite iterate.
std::vector<double> translation_residuals(const MapSpec& m, cplx z, int n_max);

struct WanderingTrack {
  std::vector<SafeValue> orbit;  // F^0 .. F^N
  std::vector<double> translation_residuals;  // n = 1 .. depth
  int depth = 0;
  bool escape_confirmed = false;
};

/// Iterates F = f + 2 pi i and f independently and compares F^n(z0) with
/// f^n(z0) + 2 n pi i. Escape is confirmed when |F^n| > kEscapeRadius, or
/// when the f-orbit has settled on a fixed point and Im F^n increased
/// strictly over the last 5 steps.
WanderingTrack wandering_tracker(double lambda, cplx z0, int n_steps);

/// Interval inequalities for E^2(z) + z - beta on the real line. Requires
/// beta < 1 and R > r > (e - beta)/2 (std::invalid_argument otherwise).
Fragment example41_check(double beta, double r, double R, int samples);

}  // namespace expdyn
