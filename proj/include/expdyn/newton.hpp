#pragma once

#include <cstddef>
#include <vector>

#include "expdyn/map_spec.hpp"
#include "expdyn/rect.hpp"

namespace expdyn {

inline constexpr double kNewtonTol = 1e-10;
inline constexpr double kDedupRadius = 1e-6;
inline constexpr double kDefaultSeedDensity = 4.0;

struct NewtonOptions {
  double tolerance = kNewtonTol;
  int max_iterations = 80;
  int max_halvings = 20;
  int polish_steps = 3;
};

struct NewtonRoot {
  cplx point;
  double residual = 0.0;
};

/// Outcome of a multi-start search. Roots are inside the window,
/// deduplicated within kDedupRadius and sorted by (Im, Re).
struct RootSearch {
  std::vector<NewtonRoot> roots;
  std::size_t seeds = 0;
  std::size_t diverged = 0;
  std::size_t exited = 0;
};

/// Damped Newton from a single start. Returns the converged point and its
/// residual |g|, or nothing when the iteration stalls, leaves the search
/// region, or runs out of iterations.
std::optional<NewtonRoot> damped_newton(const Evaluator& g, const Evaluator& dg, cplx start,
                                        const Rect& region, const NewtonOptions& opt = {});

/// Multi-start damped Newton for zeros of g in `window`, seeded from the
/// lattice window.re_min + i / seed_density, window.im_min + j / seed_density
/// covering the window. Doubling the density keeps every previous seed, so
/// the roots found never shrink. A window of zero area yields no seeds and
/// no roots.
RootSearch find_roots(const Evaluator& g, const Evaluator& dg, const Rect& window,
                      double seed_density, const NewtonOptions& opt = {});

}  // namespace expdyn
