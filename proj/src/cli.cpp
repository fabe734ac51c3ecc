#include "expdyn/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "expdyn/bov.hpp"
#include "expdyn/dynamics.hpp"
#include "expdyn/parallel.hpp"
#include "expdyn/singular.hpp"
#include "expdyn/suites.hpp"

namespace expdyn {
namespace {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

int exit_code(Status s) {
  switch (s) {
    case Status::Pass:
    case Status::Skipped:
      return kExitPass;
    case Status::Fail:
      return kExitFail;
    case Status::Inconclusive:
      return kExitInconclusive;
  }
  return kExitFail;
}

MapSpec resolve_map(const RunConfig& c) {
  if (!c.map.empty()) return MapSpec::parse(c.map);
  if (c.beta) return MapSpec::tower(c.k.value_or(2), 1.0, Poly({-*c.beta, 1.0}));
  if (c.lambda) return MapSpec::f_lambda(*c.lambda);
  return MapSpec::tower(c.k.value_or(1), 1.0, Poly({0.0, 1.0}));
}

std::vector<Rect> resolve_windows(const RunConfig& c) {
  std::vector<double> hw = c.windows.empty() ? std::vector<double>{20, 40, 80} : c.windows;
  std::vector<Rect> out;
  for (double h : hw) {
    if (!(h > 0.0)) throw std::invalid_argument("window half-widths must be positive");
    out.push_back(Rect::centered(h));
  }
  return out;
}

VerificationReport new_report(const std::string& name, const RunConfig& c, const std::string& map_text) {
  VerificationReport r;
  r.suite_name = name;
  r.tool_version = std::string(kToolVersion);
  r.timestamp = report_timestamp();
  std::string digest = name + " map=" + map_text + " R=" + std::to_string(c.R) +
                       " resolution=" + std::to_string(c.resolution) + " seed=" + std::to_string(c.seed) + " windows=";
  for (double h : c.windows) digest += std::to_string(h) + ",";
  r.input_digest = fnv1a_hex(digest);
  return r;
}

void print_summary(const VerificationReport& r) {
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& c : r.checks) ++counts[static_cast<int>(c.status)];
  std::cout << r.suite_name << ": " << to_string(r.overall()) << " (" << counts[0] << " pass, " << counts[1]
            << " fail, " << counts[2] << " inconclusive, " << counts[3] << " skipped)\n";
  for (const auto& c : r.checks) {
    if (c.status == Status::Fail || c.status == Status::Inconclusive) {
      std::cout << "  " << to_string(c.status) << ": " << c.id << ": " << c.details << "\n";
    }
  }
}

int cmd_critical(const RunConfig& c, const fs::path& out) {
  const MapSpec m = resolve_map(c);
  const auto windows = resolve_windows(c);
  VerificationReport r = new_report("critical", c, m.to_string());
  if (windows.size() >= 3) {
    r.checks = accumulation_report(m, windows);
  } else {
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const CriticalSearch s = critical_points(m, windows[w], kDefaultSeedDensity, static_cast<int>(w));
      const auto data = critical_values(m, s.points);
      Check ch{"critical.census[" + std::to_string(w) + "]", "critical points are the zeros of f'", Status::Pass,
               std::nullopt, std::to_string(data.size()) + " critical points in window", nlohmann::json::array()};
      for (const auto& d : data) ch.data.push_back(to_json(d));
      if (!crosscheck_failures(data).empty()) ch.status = Status::Fail;
      r.checks.push_back(std::move(ch));
    }
  }
  write_atomic(out / "critical.json", emit_json(r));
  print_summary(r);
  return exit_code(r.overall());
}

int cmd_bov(const RunConfig& c, const fs::path& out) {
  const MapSpec m = resolve_map(c);
  const auto windows = resolve_windows(c);
  VerificationReport r = new_report("bov", c, m.to_string());
  r.checks = bov_evidence(m, c.R, windows, c.resolution);
  write_atomic(out / "bov.json", emit_json(r));
  if (c.format == "ppm") {
    for (std::size_t w = 0; w < windows.size(); ++w) {
      write_atomic(out / ("bov_window" + std::to_string(w) + ".pbm"),
                   emit_ppm(superlevel_mask(m, c.R, windows[w], c.resolution, c.resolution)));
    }
  }
  print_summary(r);
  return exit_code(r.overall());
}

CurveSpec resolve_curve(const RunConfig& c, const MapSpec& m) {
  if (!(c.t_max > 1.0)) throw std::invalid_argument("--t-max must exceed 1");
  if (c.curve == "left_ray") return CurveSpec::left_ray(1.0, c.t_max);
  if (c.curve == "sector_ray") return CurveSpec::sector_ray(c.theta, 1.0, c.t_max);
  if (c.curve == "vertical_zigzag") {
    const int d = m.is_tower() ? m.as_tower().p.degree() : 1;
    return CurveSpec::vertical_zigzag(c.beta.value_or(zigzag_beta(d)), 1.0, c.t_max);
  }
  if (c.curve == "log_spiral") return CurveSpec::log_spiral(c.theta, 1.0, 1.0, c.t_max);
  throw std::invalid_argument("unknown curve kind: " + c.curve);
}

int cmd_curve(const RunConfig& c, const fs::path& out) {
  RunConfig cc = c;
  std::optional<double> zigzag_beta_value = c.curve == "vertical_zigzag" ? c.beta : std::nullopt;
  if (c.curve == "vertical_zigzag") cc.beta.reset();
  const MapSpec m = resolve_map(cc);
  cc.beta = zigzag_beta_value;
  const CurveSpec curve = resolve_curve(cc, m);
  const CurveGrowth g = curve_growth(m, curve, 4096);
  VerificationReport r = new_report("curve", c, m.to_string() + " curve=" + curve.name());
  Check ch{"curve." + curve.name(), "f(gamma) is unbounded for every unbounded curve gamma",
           g.unbounded_evidence(3) ? Status::Pass : Status::Fail, std::nullopt,
           std::to_string(g.tail_increasing_run) + " strictly increasing decades at the tail", nlohmann::json::array()};
  for (std::size_t d = 0; d < g.decade_start.size(); ++d) {
    ch.data.push_back({{"decade_start", g.decade_start[d]}, {"min_log_modulus", g.decade_min_log_modulus[d]}});
  }
  r.checks.push_back(std::move(ch));
  if (c.format == "csv") {
    write_atomic(out / "curve.csv", curve_csv(g));
  } else {
    write_atomic(out / "curve.json", emit_json(r));
  }
  print_summary(r);
  return exit_code(r.overall());
}

int cmd_basin(const RunConfig& c, const fs::path& out) {
  const MapSpec m = c.map.empty() ? MapSpec::f_lambda(c.lambda.value_or(1.0)) : MapSpec::parse(c.map);
  Rect w{-6.0, 6.0, -std::numbers::pi, 3.0 * std::numbers::pi};
  if (!c.window.empty()) {
    if (c.window.size() != 4) throw std::invalid_argument("--window takes re_min,re_max,im_min,im_max");
    w = {c.window[0], c.window[1], c.window[2], c.window[3]};
    if (!(w.area() > 0.0)) throw std::invalid_argument("--window must have positive area");
  }
  const GridClassification g = classify_grid(m, w, c.resolution, c.resolution, c.max_iter);
  if (c.format == "ppm") {
    write_atomic(out / "basins.ppm", emit_ppm(g));
  } else if (c.format == "csv") {
    write_atomic(out / "basins.csv", labels_csv(g));
  } else {
    std::map<int, std::size_t> counts;
    for (int l : g.labels) ++counts[l];
    nlohmann::json j;
    j["map"] = m.to_string();
    j["window"] = {w.re_min, w.re_max, w.im_min, w.im_max};
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["label_counts"] = nlohmann::json::object();
    for (auto [label, n] : counts) j["label_counts"][std::to_string(label)] = n;
    write_atomic(out / "basins.json", canonical_json(j));
  }
  std::cout << "basin grid " << g.nx << "x" << g.ny << " written to " << out.string() << "\n";
  return kExitPass;
}

int cmd_orbit(const RunConfig& c, const fs::path& out) {
  const MapSpec m = resolve_map(c);
  const OrbitResult o = iterate(m, parse_complex(c.z0), c.max_iter);
  if (c.format == "csv") {
    write_atomic(out / "orbit.csv", orbit_csv(o));
  } else {
    nlohmann::json j;
    j["map"] = m.to_string();
    j["verdict"] = std::string(to_string(o.verdict));
    j["steps_used"] = o.steps_used;
    if (o.verdict == Verdict::Converged) {
      j["fixed_point"] = to_json(o.fixed_point);
      j["k_index"] = o.k_index;
      j["settled_at"] = o.settled_at;
    }
    if (o.verdict == Verdict::Escaped) j["escaped_at"] = o.escaped_at;
    j["points"] = nlohmann::json::array();
    for (const auto& p : o.points) j["points"].push_back(to_json(p));
    write_atomic(out / "orbit.json", canonical_json(j));
  }
  std::cout << "orbit: " << to_string(o.verdict) << " after " << o.steps_used << " steps\n";
  return kExitPass;
}

int cmd_verify(const RunConfig& c, const fs::path& out) {
  SuiteConfig s;
  s.seed = c.seed;
  s.lambda = c.lambda;
  s.beta = c.beta;
  s.resolution = c.resolution;
  s.max_iter = c.max_iter;
  if (s.resolution < kMinRasterSide) throw std::invalid_argument("--resolution must be at least 8");
  const SuiteOutput result = run_suite(c.suite, s);
  write_atomic(out / ("verify_" + c.suite + ".json"), emit_json(result.report));
  for (const auto& [name, bytes] : result.artifacts) write_atomic(out / name, bytes);
  print_summary(result.report);
  return exit_code(result.report.overall());
}

}  // namespace

int run(const RunConfig& c) {
  try {
    if (c.format != "json" && c.format != "ppm" && c.format != "csv") {
      throw std::invalid_argument("--format must be json, ppm or csv");
    }
    if (c.max_iter < 1) throw std::invalid_argument("--max-iter must be positive");
    if (c.resolution < 1) throw std::invalid_argument("--resolution must be positive");
    if (!(c.R > 0.0)) throw std::invalid_argument("--R must be positive");
    set_thread_count(c.threads);
    const fs::path out(c.out);
    if (c.subcommand == "critical") return cmd_critical(c, out);
    if (c.subcommand == "bov") return cmd_bov(c, out);
    if (c.subcommand == "curve") return cmd_curve(c, out);
    if (c.subcommand == "basin") return cmd_basin(c, out);
    if (c.subcommand == "orbit") return cmd_orbit(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out);
    throw std::invalid_argument("unknown subcommand: " + c.subcommand);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Numerical evidence for omitted values and dynamics of c E^k(z) + P(z)"};
  app.require_subcommand(1);
  RunConfig c;
  double lambda = 0.0, beta = 0.0;
  int k = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "Worker threads (0 = machine parallelism)");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "ppm", "csv"}));
    sub->add_option("--seed", c.seed, "Seed for all random sampling");
    sub->add_option("--max-iter", c.max_iter, "Iteration limit for orbits");
    sub->add_option("--resolution", c.resolution, "Raster side in pixels");
  };
  auto add_map = [&](CLI::App* sub) {
    sub->add_option("--map", c.map, "Map spec, e.g. \"kind=tower k=1 c=1+0i poly=[0,1]\"");
    sub->add_option("--lambda", lambda, "lambda for lambda e^z + z + lambda");
    sub->add_option("--beta", beta, "beta for E^k(z) + z - beta");
    sub->add_option("--k", k, "Tower height");
    sub->add_option("--R", c.R, "Radius of the disk around infinity");
    sub->add_option("--windows", c.windows, "Comma-separated window half-widths")->delimiter(',');
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"critical", "Critical points and values"},
                      {"bov", "Sublevel-set census across nested windows"},
                      {"curve", "Growth of |f| along an unbounded curve"},
                      {"basin", "Basin classification raster"},
                      {"orbit", "Single orbit"},
                      {"verify", "Run a named verification suite"}};
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    add_map(sub);
    apps.push_back(sub);
  }
  apps[2]->add_option("--curve", c.curve, "left_ray, sector_ray, vertical_zigzag or log_spiral");
  apps[2]->add_option("--theta", c.theta, "Angle of the sector ray / phase of the spiral");
  apps[2]->add_option("--t-max", c.t_max, "Largest curve parameter");
  apps[3]->add_option("--window", c.window, "re_min,re_max,im_min,im_max")->delimiter(',');
  apps[4]->add_option("--z0", c.z0, "Starting point, e.g. 0+3.14159i");
  apps[5]->add_option("--suite", c.suite, "Suite name")->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  for (CLI::App* sub : apps) {
    if (sub->parsed()) {
      c.subcommand = sub->get_name();
      if (sub->count("--lambda")) c.lambda = lambda;
      if (sub->count("--beta")) c.beta = beta;
      if (sub->count("--k")) c.k = k;
    }
  }
  return run(c);
}

}  // namespace expdyn
