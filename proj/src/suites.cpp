#include "expdyn/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

#include "expdyn/bov.hpp"
#include "expdyn/dynamics.hpp"
#include "expdyn/random.hpp"
#include "expdyn/singular.hpp"

namespace expdyn {
namespace {

constexpr double kPi = std::numbers::pi;

std::string format(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Check make_check(std::string id, std::string anchor, bool ok, std::string details,
                 std::optional<double> residual = std::nullopt) {
  return {std::move(id), std::move(anchor), ok ? Status::Pass : Status::Fail, residual, std::move(details), {}};
}

/// Uniform point in the disk of radius r.
cplx disk_point(Rng& rng, double r) {
  const double rho = r * std::sqrt(rng.uniform());
  return std::polar(rho, rng.uniform(-kPi, kPi));
}

// ---------------------------------------------------------------- lemma23

void suite_lemma23(const SuiteConfig& cfg, SuiteOutput& out) {
  constexpr const char* anchor = "(1/d) sum_{i<d} |a_i| |z|^i <= |P(z)| <= (sum_i |a_i|) |z|^d for |z| >= rho*";
  Rng rng(cfg.seed);
  for (int n = 0; n < 20; ++n) {
    const int d = rng.uniform_int(1, 5);
    std::vector<cplx> coeffs(d + 1);
    for (auto& a : coeffs) a = disk_point(rng, 10.0);
    while (std::abs(coeffs.back()) < 1e-3) coeffs.back() = disk_point(rng, 10.0);
    const Poly p(coeffs);
    const PolyBounds b = poly_bounds(p);
    std::size_t lower_bad = 0;
    std::size_t upper_bad = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    const double r_max = std::max(30.0, 2.0 * b.threshold_radius);
    for (int s = 0; s < 10000; ++s) {
      const cplx z = std::polar(rng.uniform(b.threshold_radius, r_max), rng.uniform(-kPi, kPi));
      const double r = std::abs(z);
      if (r < b.threshold_radius) continue;
      const double v = std::abs(eval_poly(p, z));
      lower_bad += !(b.lower(r) <= v);
      upper_bad += !(v <= b.upper(r));
      min_slack = std::min({min_slack, v - b.lower(r), b.upper(r) - v});
    }
    Check c = make_check("lemma23.poly[" + std::to_string(n) + "]", anchor, lower_bad + upper_bad == 0,
                         "degree " + std::to_string(d) + format(", rho* = %.6g, ", b.threshold_radius) +
                             std::to_string(lower_bad) + " lower and " + std::to_string(upper_bad) +
                             " upper violations in 10000 samples",
                         min_slack);
    c.data = {{"coefficients", nlohmann::json::array()}, {"threshold_radius", b.threshold_radius}};
    for (cplx a : coeffs) c.data["coefficients"].push_back(to_json(a));
    out.report.checks.push_back(std::move(c));
  }
}

// ------------------------------------------------------------ corollary13

/// Critical points of e^z + P for P = z (closed form) or P = z^2
/// (z = -W_k(1/2)), restricted to the window.
std::vector<cplx> closed_form_critical(int degree, const Rect& w) {
  std::vector<cplx> out;
  const int span = static_cast<int>(std::max(w.height(), w.width()) / (2.0 * kPi)) + 4;
  for (int k = -span; k <= span; ++k) {
    const cplx z = degree == 1 ? cplx{0.0, (2.0 * k + 1.0) * kPi} : -lambert_w(cplx{0.5}, k);
    if (w.contains(z)) out.push_back(z);
  }
  return out;
}

double distance_to_frame(const Rect& w, cplx z) {
  return std::min({z.real() - w.re_min, w.re_max - z.real(), z.imag() - w.im_min, w.im_max - z.imag()});
}

void suite_corollary13(const SuiteConfig&, SuiteOutput& out) {
  constexpr const char* anchor = "critical points of e^z + P solve e^z = -P'(z)";
  const std::vector<Rect> windows{Rect::centered(20), Rect::centered(40), Rect::centered(80)};
  for (int degree : {1, 2}) {
    std::vector<cplx> coeffs(degree + 1, cplx{0.0});
    coeffs.back() = 1.0;
    const MapSpec m = MapSpec::exp_plus(Poly(coeffs));
    const std::string tag = degree == 1 ? "[P=z]" : "[P=z^2]";
    std::vector<std::vector<CriticalDatum>> per_window;
    Fragment acc = accumulation_report(m, windows, kDefaultSeedDensity, &per_window);
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const auto& found = per_window.empty() ? std::vector<CriticalDatum>{} : per_window[w];
      const auto expected = closed_form_critical(degree, windows[w]);
      std::size_t missing = 0;
      std::size_t extra = 0;
      double worst = 0.0;
      for (cplx e : expected) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : found) best = std::min(best, std::abs(f.point - e));
        if (best <= 1e-8) {
          worst = std::max(worst, best);
        } else if (distance_to_frame(windows[w], e) > kDedupRadius) {
          ++missing;
        }
      }
      for (const auto& f : found) {
        double best = std::numeric_limits<double>::infinity();
        for (cplx e : expected) best = std::min(best, std::abs(f.point - e));
        if (best > 1e-8 && distance_to_frame(windows[w], f.point) > kDedupRadius) ++extra;
      }
      out.report.checks.push_back(make_check(
          "corollary13.oracle" + tag + "[" + std::to_string(w) + "]", anchor, missing + extra == 0,
          std::to_string(found.size()) + " found, " + std::to_string(expected.size()) + " expected, " +
              std::to_string(missing) + " missing, " + std::to_string(extra) + " unexpected",
          worst));
    }
    for (auto& c : acc) c.id += tag;
    append(out.report.checks, std::move(acc));
  }
}

// --------------------------------------------------------------- bovsuite

std::vector<Rect> nested(std::initializer_list<double> half_widths) {
  std::vector<Rect> out;
  for (double h : half_widths) out.push_back(Rect::centered(h));
  return out;
}

void suite_bov(const SuiteConfig& cfg, SuiteOutput& out) {
  const MapSpec ez_z = MapSpec::exp_plus(Poly({0.0, 1.0}));
  const MapSpec ez_z2 = MapSpec::exp_plus(Poly({0.0, 0.0, 1.0}));
  const MapSpec f2 = MapSpec::f2_beta(0.0);
  const int res = cfg.resolution;

  // Positive controls.
  {
    Fragment f = bov_evidence(ez_z, 10.0, nested({20, 40, 80}), res);
    for (auto& c : f) c.id += "[e^z+z,R=10]";
    append(out.report.checks, std::move(f));
    out.artifacts.emplace_back("bov_exp_plus_z.pbm", emit_ppm(superlevel_mask(ez_z, 10.0, Rect::centered(40), res, res)));
  }
  {
    // The central sublevel component of E^2(z) + z - beta is roughly the disk
    // |z + 1 - beta| <= R, so the smallest window must be wider than R + 1;
    // beyond |z| ~ 35 the tower islands shrink below the 1024^2 pixel pitch.
    Fragment f = bov_evidence(f2, 20.0, nested({25, 30, 35}), res);
    for (auto& c : f) c.id += "[E^2+z,R=20]";
    append(out.report.checks, std::move(f));
  }

  // Negative control: plain e^z must fail in every window.
  {
    constexpr const char* anchor = "0 is an omitted asymptotic value of e^z, so {|e^z| <= R} is a half-plane";
    const Evaluator e = reference_exponential();
    std::vector<WindowCensus> census;
    const Fragment f = bov_evidence(e, 10.0, nested({20, 40, 80}), res, &census);
    std::size_t failing = 0;
    for (const auto& w : census) failing += w.max_edges_touched >= 3;
    out.report.checks.push_back(make_check("bov.negative_control[e^z]", anchor, failing == census.size(),
                                           std::to_string(failing) + " of " + std::to_string(census.size()) +
                                               " windows have a sublevel component touching >= 3 frame edges"));
    const CurveGrowth g = curve_growth(e, CurveSpec::left_ray(1.0, 1e4), 4096);
    const double last = g.decade_min_modulus.back();
    // Strictly decreasing until the minima underflow to 0.
    bool decreasing = true;
    for (std::size_t d = 1; d < g.decade_min_modulus.size(); ++d) {
      const double prev = g.decade_min_modulus[d - 1];
      decreasing = decreasing && (g.decade_min_modulus[d] < prev || (prev == 0.0 && g.decade_min_modulus[d] == 0.0));
    }
    Check c = make_check("curve.negative_control[e^z,left_ray]", anchor, decreasing && last < 1e-3,
                         format("per-decade minima decrease to %.3g", last), last);
    out.report.checks.push_back(std::move(c));
  }

  // Unbounded images of unbounded curves.
  {
    constexpr const char* anchor = "f(gamma) is unbounded for every unbounded curve gamma";
    const std::vector<std::pair<std::string, MapSpec>> maps{{"e^z+z", ez_z}, {"e^z+z^2", ez_z2}};
    for (const auto& [name, m] : maps) {
      const int d = m.as_tower().p.degree();
      const std::vector<CurveSpec> curves{CurveSpec::left_ray(1.0, 1e4), CurveSpec::sector_ray(kPi / 6, 1.0, 1e4),
                                          CurveSpec::vertical_zigzag(zigzag_beta(d), 1.0, 1e4),
                                          CurveSpec::log_spiral(0.0, 1.0, 1.0, 1e4)};
      for (const auto& curve : curves) {
        const CurveGrowth g = curve_growth(m, curve, 4096);
        Check c = make_check("curve." + curve.name() + "[" + name + "]", anchor, g.unbounded_evidence(3),
                             std::to_string(g.tail_increasing_run) + " strictly increasing decades at the tail");
        c.data = nlohmann::json::array();
        for (double v : g.decade_min_log_modulus) c.data.push_back(v);
        out.report.checks.push_back(std::move(c));
      }
    }
  }

  // Case lower bounds.
  {
    Rng rng(cfg.seed ^ 0x5bd1e995ULL);
    const PolyBounds b = poly_bounds(ez_z2.as_tower().p);
    std::vector<cplx> left;
    while (left.size() < 1000) {
      const cplx z{rng.uniform(-60.0, -0.5), rng.uniform(-60.0, 60.0)};
      if (std::abs(z) >= b.threshold_radius) left.push_back(z);
    }
    auto tagged = [&](Fragment f, const std::string& tag) {
      for (auto& c : f) c.id += "[" + tag + "]";
      append(out.report.checks, std::move(f));
    };
    BoundOptions o1;
    o1.m0 = 0.0;
    // The bound for z^2 alone is identically zero; the second map has a
    // positive one.
    tagged(case_bound_check(ez_z2, BoundCase::Case1, left, o1), "e^z+z^2");
    const MapSpec ez_q = MapSpec::exp_plus(Poly({5.0, 3.0, 1.0}));
    const PolyBounds bq = poly_bounds(ez_q.as_tower().p);
    std::vector<cplx> left_q;
    while (left_q.size() < 1000) {
      const cplx z{rng.uniform(-60.0, -0.5), rng.uniform(-60.0, 60.0)};
      if (std::abs(z) >= bq.threshold_radius) left_q.push_back(z);
    }
    tagged(case_bound_check(ez_q, BoundCase::Case1, left_q, o1), "e^z+z^2+3z+5");
    std::vector<cplx> sector;
    for (int s = 0; s < 1000; ++s) {
      const double x = rng.uniform(20.0, 40.0);
      sector.push_back({x, x * std::tan(kPi / 6) * rng.uniform(-0.999, 0.999)});
    }
    BoundOptions o2;
    o2.alpha = kPi / 6;
    tagged(case_bound_check(ez_z2, BoundCase::Case2a, sector, o2), "e^z+z^2");
    std::vector<cplx> tower;
    for (int s = 0; s < 1000; ++s) tower.push_back({rng.uniform(3.0, 6.0), rng.uniform(-0.5, 0.5)});
    tagged(case_bound_check(f2, BoundCase::Tower, tower), "E^2+z");
  }

  // Sector injectivity.
  {
    constexpr const char* anchor = "P is injective in a sector of opening 2 pi / d free of critical points";
    const Poly z2({0.0, 0.0, 1.0});
    const auto half_plane = injectivity_falsifier(z2, Sector{0.0, kPi / 2 - 0.01, 0.0, 10.0}, 10000, cfg.seed);
    out.report.checks.push_back(make_check("injectivity.half_plane[z^2]", anchor, !half_plane,
                                           half_plane ? "collision found" : "no collision in 10000 trials"));
    const auto plane = injectivity_falsifier(z2, Sector{0.0, kPi, 0.0, 10.0}, 1000, cfg.seed);
    out.report.checks.push_back(make_check("injectivity.full_plane[z^2]", "z^2 is even, so z and -z collide",
                                           plane.has_value(), plane ? "collision found" : "no collision found"));
  }

  // Preimages of 0 for e^z + z grow with the window.
  {
    constexpr const char* anchor = "every finite point has infinitely many preimages";
    const std::size_t small = preimage_count(ez_z, 0.0, Rect{-20, 20, -100, 100});
    const std::size_t large = preimage_count(ez_z, 0.0, Rect{-20, 20, -400, 400});
    const double ratio = small ? static_cast<double>(large) / static_cast<double>(small) : 0.0;
    Check c = make_check("preimages.growth[e^z+z,w=0]", anchor,
                         small >= 28 && small <= 34 && std::abs(ratio - 4.0) <= 0.4,
                         std::to_string(small) + " preimages for |Im| <= 100, " + std::to_string(large) +
                             " for |Im| <= 400",
                         ratio);
    out.report.checks.push_back(std::move(c));
  }
}

// -------------------------------------------------------------- example41

void suite_example41(const SuiteConfig& cfg, SuiteOutput& out) {
  std::vector<double> betas{-1.0, 0.0, 0.9};
  if (cfg.beta) betas = {*cfg.beta};
  for (double beta : betas) {
    for (auto [r, R] : {std::pair{2.0, 10.0}, std::pair{5.0, 25.0}}) {
      append(out.report.checks, example41_check(beta, r, R, 1000));
    }
  }
}

// -------------------------------------------------------------- example42

void suite_example42(const SuiteConfig& cfg, SuiteOutput& out) {
  std::vector<double> lambdas{0.5, 1.0, 1.5};
  if (cfg.lambda) lambdas = {*cfg.lambda};
  for (double lambda : lambdas) {
    const std::string tag = format("[lambda=%g]", lambda);
    const MapSpec f = MapSpec::f_lambda(lambda);

    for (int k : {0, 1}) {
      const cplx z{0.0, (2.0 * k + 1.0) * kPi};
      std::optional<double> err;
      std::string details;
      try {
        const cplx mult = fixed_point_multiplier(f, z);
        err = std::abs(mult - cplx{1.0 - lambda});
        details = format("multiplier %.17g%+.17gi", mult.real(), mult.imag());
      } catch (const std::invalid_argument& e) {
        details = e.what();
      }
      out.report.checks.push_back(make_check("example42.multiplier" + tag + "[k=" + std::to_string(k) + "]",
                                             "the multiplier of each fixed point (2k+1) pi i is 1 - lambda",
                                             err && *err <= 1e-9, details, err));
    }

    {
      Rng rng(cfg.seed + static_cast<std::uint64_t>(lambda * 1000));
      double worst = 0.0;
      std::size_t skipped = 0;
      for (int s = 0; s < 1000; ++s) {
        const cplx z{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        if (const auto r = semiconjugacy_residual(lambda, z)) {
          worst = std::max(worst, *r);
        } else {
          ++skipped;
        }
      }
      out.report.checks.push_back(make_check("example42.semiconjugacy" + tag, "h o exp = exp o f",
                                             worst < 1e-10,
                                             "1000 points in [-5,5]^2 (relative residual), " +
                                                 std::to_string(skipped) + " saturated on both sides",
                                             worst));
    }

    {
      Fragment h = h_real_line_checks(lambda, 10000);
      for (auto& c : h) c.id += tag;
      append(out.report.checks, std::move(h));
    }

    {
      std::size_t converged = 0;
      std::size_t escaped = 0;
      for (int s = 0; s < 100; ++s) {
        const double x = -6.0 + 12.0 * (s + 0.5) / 100.0;
        const OrbitResult a = iterate(f, {x, kPi}, cfg.max_iter, false);
        converged += a.verdict == Verdict::Converged && a.k_index == 0;
        const OrbitResult b = iterate(f, {x, 0.0}, cfg.max_iter, false);
        escaped += b.verdict == Verdict::Escaped;
      }
      out.report.checks.push_back(make_check("example42.line_pi" + tag, "the line Im z = pi lies in the basin of pi i",
                                             converged == 100, std::to_string(converged) + " of 100 converge to pi i"));
      out.report.checks.push_back(make_check("example42.real_axis" + tag, "real orbits of f tend to infinity",
                                             escaped == 100, std::to_string(escaped) + " of 100 escape"));
    }

    {
      Rng rng(cfg.seed + 7 + static_cast<std::uint64_t>(lambda * 1000));
      double worst = 0.0;
      int shallow = 8;
      for (int s = 0; s < 1000; ++s) {
        const cplx z{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        const auto res = translation_residuals(f, z, 8);
        shallow = std::min(shallow, static_cast<int>(res.size()));
        for (double r : res) worst = std::max(worst, r);
      }
      out.report.checks.push_back(make_check(
          "example42.translation" + tag, "f^n(z + 2 pi i) = f^n(z) + 2 pi i", worst < 1e-8,
          "1000 points, n <= 8 before saturation (residual relative to 1 + max |f^m(z)|); shallowest depth " +
              std::to_string(shallow),
          worst));
    }

    const GridClassification grid = classify_grid(f, Rect{-6.0, 6.0, -kPi, 3.0 * kPi}, 192, 192, cfg.max_iter);
    out.artifacts.emplace_back(format("basins_lambda_%g.ppm", lambda), emit_ppm(grid));
  }
}

// -------------------------------------------------------------- example43

void suite_example43(const SuiteConfig& cfg, SuiteOutput& out) {
  std::vector<double> lambdas{1.0, 1.5};
  if (cfg.lambda) lambdas = {*cfg.lambda};
  constexpr const char* anchor = "F^n(z) = f^n(z) + 2 n pi i for F = f + 2 pi i";
  for (double lambda : lambdas) {
    const std::string tag = format("[lambda=%g]", lambda);
    for (cplx z0 : {cplx{0.0, kPi}, cplx{-2.0, kPi}}) {
      const WanderingTrack t = wandering_tracker(lambda, z0, 64);
      double worst = 0.0;
      for (double r : t.translation_residuals) worst = std::max(worst, r);
      const std::string where = format("[z0=%g%+gi]", z0.real(), z0.imag());
      out.report.checks.push_back(make_check("example43.translation" + tag + where, anchor,
                                             worst < 1e-8 && t.depth >= 5,
                                             "depth " + std::to_string(t.depth), worst));
      out.report.checks.push_back(make_check("example43.escape" + tag + where,
                                             "orbits in the wandering domains tend to infinity", t.escape_confirmed,
                                             t.escape_confirmed ? "escape confirmed" : "escape not confirmed"));
    }
  }
  {
    const MapSpec F = MapSpec::F_lambda(1.0);
    cplx z{0.0, kPi};
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
      z = eval_map(F, z).value();
      worst = std::max(worst, std::abs(z - cplx{0.0, (2.0 * n + 1.0) * kPi}));
    }
    out.report.checks.push_back(make_check("example43.orbit_pi[lambda=1]", "F^n(pi i) = (2n+1) pi i",
                                           worst <= 1e-10, "n <= 20", worst));
  }
}

using SuiteFn = std::function<void(const SuiteConfig&, SuiteOutput&)>;

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r{{"lemma23", suite_lemma23},     {"corollary13", suite_corollary13},
                                                {"bovsuite", suite_bov},         {"example41", suite_example41},
                                                {"example42", suite_example42}, {"example43", suite_example43}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma23",   "corollary13", "bovsuite", "example41",
                                              "example42", "example43",   "all"};
  return names;
}

SuiteOutput run_suite(const std::string& name, const SuiteConfig& config) {
  SuiteOutput out;
  out.report.suite_name = name;
  out.report.tool_version = std::string(kToolVersion);
  out.report.timestamp = report_timestamp();
  char buf[256];
  std::snprintf(buf, sizeof buf, "suite=%s seed=%llu resolution=%d max_iter=%d", name.c_str(),
                static_cast<unsigned long long>(config.seed), config.resolution, config.max_iter);
  std::string digest_input = buf;
  if (config.lambda) digest_input += format(" lambda=%.17g", *config.lambda);
  if (config.beta) digest_input += format(" beta=%.17g", *config.beta);
  out.report.input_digest = fnv1a_hex(digest_input);

  if (name == "all") {
    for (const auto& [suite, fn] : registry()) {
      SuiteOutput part;
      fn(config, part);
      for (auto& c : part.report.checks) c.id = suite + "/" + c.id;
      append(out.report.checks, std::move(part.report.checks));
      for (auto& a : part.artifacts) out.artifacts.push_back(std::move(a));
    }
    return out;
  }
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite: " + name);
  it->second(config, out);
  return out;
}

cplx lambert_w(cplx x, int k) {
  cplx w;
  if (k == 0 && std::abs(x) < 1.0) {
    w = x * (1.0 - x);
  } else {
    const cplx l1 = std::log(x) + cplx{0.0, 2.0 * kPi * k};
    const cplx l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < 100; ++it) {
    const cplx ew = std::exp(w);
    const cplx g = w * ew - x;
    const cplx dg = ew * (w + 1.0);
    const cplx step = g / (dg - (w + 2.0) * g / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace expdyn
