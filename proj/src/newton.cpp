#include "expdyn/newton.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "expdyn/parallel.hpp"

namespace expdyn {
namespace {

struct SeedOutcome {
  enum class Kind { Root, Diverged, Exited } kind = Kind::Diverged;
  NewtonRoot root;
};

bool inside(const Rect& r, cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) && r.contains(z);
}

}  // namespace

std::optional<NewtonRoot> damped_newton(const Evaluator& g, const Evaluator& dg, cplx start,
                                        const Rect& region, const NewtonOptions& opt) {
  cplx z = start;
  SafeValue gz = g(z);
  bool converged = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (gz.is_finite() && std::abs(gz.value()) <= opt.tolerance) {
      converged = true;
      break;
    }
    const SafeValue step = gz / dg(z);
    if (!step.is_finite()) return std::nullopt;
    const cplx delta = step.value();
    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h) {
      const cplx trial = z - scale * delta;
      if (!inside(region, trial)) {
        scale *= 0.5;
        continue;
      }
      const SafeValue gt = g(trial);
      if (compare_modulus(gt, gz) < 0) {
        z = trial;
        gz = gt;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) return std::nullopt;
  }
  if (!converged) {
    if (!(gz.is_finite() && std::abs(gz.value()) <= opt.tolerance)) return std::nullopt;
  }
  // Polish with full steps while the residual keeps shrinking.
  for (int p = 0; p < opt.polish_steps; ++p) {
    const SafeValue step = gz / dg(z);
    if (!step.is_finite()) break;
    const cplx trial = z - step.value();
    const SafeValue gt = g(trial);
    if (compare_modulus(gt, gz) >= 0) break;
    z = trial;
    gz = gt;
  }
  return NewtonRoot{z, std::abs(gz.value())};
}

RootSearch find_roots(const Evaluator& g, const Evaluator& dg, const Rect& window,
                      double seed_density, const NewtonOptions& opt) {
  RootSearch out;
  if (!(window.width() > 0.0) || !(window.height() > 0.0) || !(seed_density > 0.0)) return out;
  // Corner-anchored lattice with spacing 1/density: doubling the density
  // reproduces every previous seed bit-for-bit, so no root is lost.
  const double h = 1.0 / seed_density;
  const auto nx = static_cast<std::size_t>(std::floor(window.width() / h)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor(window.height() / h)) + 1;
  // Iterates may wander a full window size beyond the frame before giving up.
  const Rect region{window.re_min - window.width(), window.re_max + window.width(),
                    window.im_min - window.height(), window.im_max + window.height()};

  std::vector<SeedOutcome> outcomes(nx * ny);
  parallel_for(ny, [&](std::size_t j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const cplx seed{window.re_min + static_cast<double>(i) * h, window.im_min + static_cast<double>(j) * h};
      SeedOutcome& o = outcomes[j * nx + i];
      const auto root = damped_newton(g, dg, seed, region, opt);
      if (!root) {
        o.kind = SeedOutcome::Kind::Diverged;
      } else if (!window.contains(root->point)) {
        o.kind = SeedOutcome::Kind::Exited;
      } else {
        o.kind = SeedOutcome::Kind::Root;
        o.root = *root;
      }
    }
  });

  out.seeds = outcomes.size();
  std::vector<NewtonRoot> candidates;
  for (const auto& o : outcomes) {
    switch (o.kind) {
      case SeedOutcome::Kind::Root: candidates.push_back(o.root); break;
      case SeedOutcome::Kind::Diverged: ++out.diverged; break;
      case SeedOutcome::Kind::Exited: ++out.exited; break;
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const NewtonRoot& a, const NewtonRoot& b) {
    if (a.point.imag() != b.point.imag()) return a.point.imag() < b.point.imag();
    return a.point.real() < b.point.real();
  });
  for (const auto& c : candidates) {
    bool duplicate = false;
    for (auto it = out.roots.rbegin(); it != out.roots.rend(); ++it) {
      if (c.point.imag() - it->point.imag() > kDedupRadius) break;
      if (std::abs(c.point - it->point) < kDedupRadius) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.roots.push_back(c);
  }
  return out;
}

}  // namespace expdyn
