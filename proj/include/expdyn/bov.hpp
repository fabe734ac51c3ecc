#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expdyn/map_spec.hpp"
#include "expdyn/newton.hpp"
#include "expdyn/raster.hpp"
#include "expdyn/report.hpp"

namespace expdyn {

inline constexpr double kCollideTol = 1e-9;
inline constexpr int kFrameMargin = 2;
inline constexpr double kClippedFraction = 0.2;
/// Components narrower than this many pixels of the coarser raster cannot
/// be tracked across windows and are left out of the stability comparison.
inline constexpr double kResolvedPitches = 2.0;

/// Pixels where |f| > R. Saturated values count as exceeding R.
GridMask superlevel_mask(const Evaluator& f, double R, const Rect& window, int nx, int ny);
GridMask superlevel_mask(const MapSpec& m, double R, const Rect& window, int nx, int ny);

/// Per-window census counts, exposed for reporting and tests.
struct WindowCensus {
  Rect window;
  std::size_t components = 0;
  std::size_t interior = 0;
  int max_edges_touched = 0;
  double clipped_fraction = 0.0;  // sublevel pixels within the frame margin
};

/// Window-relative evidence that every sublevel component of {|f| <= R} is
/// bounded: per-window frame contact, stability of interior components
/// between the two largest windows, and growth of the interior count.
/// Windows must be strictly nested (else a failing check is emitted).
Fragment bov_evidence(const Evaluator& f, double R, const std::vector<Rect>& windows, int resolution,
                      std::vector<WindowCensus>* censuses = nullptr);
Fragment bov_evidence(const MapSpec& m, double R, const std::vector<Rect>& windows, int resolution,
                      std::vector<WindowCensus>* censuses = nullptr);

enum class CurveKind { LeftRay, SectorRay, VerticalZigzag, LogSpiral };

/// Unbounded test curves parameterized by t:
///   LeftRay         z = -t
///   SectorRay       z = t e^{i theta}
///   VerticalZigzag  z = t e^{i b(t)}, b(t) sweeping [beta, pi/2] once per
///                   decade of t
///   LogSpiral       z = t e^{i (a + b ln t)}
struct CurveSpec {
  CurveKind kind = CurveKind::LeftRay;
  double t0 = 1.0;
  double t1 = 1e4;
  double theta = 0.0;  // SectorRay
  double beta = 0.0;   // VerticalZigzag
  double a = 0.0;      // LogSpiral
  double b = 1.0;      // LogSpiral

  static CurveSpec left_ray(double t0, double t1) { return {CurveKind::LeftRay, t0, t1}; }
  static CurveSpec sector_ray(double theta, double t0, double t1);
  static CurveSpec vertical_zigzag(double beta, double t0, double t1);
  static CurveSpec log_spiral(double a, double b, double t0, double t1);

  cplx point(double t) const;
  std::string name() const;
};

/// A zigzag angle inside (pi/2 - pi/(2d), pi/2) for degree-d maps.
double zigzag_beta(int degree);

struct CurveSample {
  double t = 0.0;
  cplx z;
  SafeValue value;
};

struct CurveGrowth {
  std::vector<double> decade_start;
  /// Per-decade minimum of ln|f|; log form keeps saturated values ordered.
  std::vector<double> decade_min_log_modulus;
  std::vector<double> decade_min_modulus;  // +inf beyond the overflow cap
  std::vector<CurveSample> trace;
  /// Length of the run of strict increases at the tail of the minima.
  int tail_increasing_run = 0;
  bool unbounded_evidence(int required_run = 3) const { return tail_increasing_run >= required_run; }
};

/// Evaluates f at `samples` log-spaced parameters of the curve and reduces
/// them to per-decade minima of |f|. Requires samples >= 64 and t0 > 0.
CurveGrowth curve_growth(const Evaluator& f, const CurveSpec& curve, int samples);
CurveGrowth curve_growth(const MapSpec& m, const CurveSpec& curve, int samples);

enum class BoundCase { Case1, Case2a, Tower };

std::string to_string(BoundCase c);

struct BoundOptions {
  /// Left boundary for Case 1; defaults to the largest sampled Re z.
  std::optional<double> m0;
  /// Sector half-angle for Case 2a and Tower; defaults to the largest
  /// sampled |Arg z|.
  std::optional<double> alpha;
};

/// Checks the lower bound of the chosen case at each sample:
///   Case1: |f| >= (1/d) sum_{i<d} |a_i| |z|^i - |c| E^k(M0)
///   Case2a (k = 1): |f| >= |c| e^{Re z} - A (1 + tan^2 alpha)^{d/2} |Re z|^d
///   Tower: |f| >= |c| K1^{k-1} e^{Re z} - A (1 + tan^2 alpha)^{d/2} |Re z|^d
/// with A = sum |a_i| and K1 = min over samples and l < k-1 of cos Im E^l(z).
/// Samples outside the case's region (|z| < rho*, Re z >= M0, |Arg z| >= alpha)
/// are counted and skipped.
Fragment case_bound_check(const MapSpec& m, BoundCase which, const std::vector<cplx>& samples,
                          const BoundOptions& opt = {});

/// Sector {z : |Arg(z - vertex) - direction| < half_angle, |z - vertex| < radius}.
struct Sector {
  cplx vertex{0.0, 0.0};
  double half_angle = 0.0;
  double direction = 0.0;
  double radius = 10.0;

  bool contains(cplx z) const;
};

struct Collision {
  cplx z1;
  cplx z2;
};

/// Draws z1 uniformly from the sector and pairs it with a second random
/// sector point and with every other root of P(z) - P(z1) lying in the
/// sector. Reports the first pair with |P(z1) - P(z2)| < kCollideTol (1 + |P(z1)|)
/// and |z1 - z2| > kDedupRadius. Requires trials >= 1000.
std::optional<Collision> injectivity_falsifier(const Poly& p, const Sector& sector, int trials,
                                               std::uint64_t seed = 0);

/// Number of distinct solutions of f(z) = w in the window found by
/// multi-start Newton.
std::size_t preimage_count(const MapSpec& m, cplx w, const Rect& window,
                           double seed_density = kDefaultSeedDensity);

}  // namespace expdyn
