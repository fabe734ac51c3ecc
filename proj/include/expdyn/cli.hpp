#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace expdyn {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconclusive = 3;

struct RunConfig {
  std::string subcommand;  // critical, bov, curve, basin, orbit, verify
  std::string map;         // map spec text; empty picks the subcommand default
  std::optional<double> lambda;
  std::optional<double> beta;
  std::optional<int> k;
  double R = 10.0;
  std::vector<double> windows;  // half-widths
  std::vector<double> window;   // re_min, re_max, im_min, im_max (basin)
  int resolution = 1024;
  int max_iter = 512;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = machine parallelism
  std::string out = ".";
  std::string format = "json";
  std::string suite = "all";
  std::string curve = "left_ray";
  double theta = 0.0;
  double t_max = 1e4;
  std::string z0 = "0";
};

/// Executes one subcommand and writes its outputs into `out`. Returns
/// kExitPass, kExitFail, kExitInconclusive, or kExitUsage for invalid input.
int run(const RunConfig& config);

/// Parses command-line arguments into a RunConfig and runs it.
int run_cli(int argc, const char* const* argv);

}  // namespace expdyn
