#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expdyn/report.hpp"

namespace expdyn {

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::optional<double> lambda;  // restricts example42 / example43 to one parameter
  std::optional<double> beta;    // restricts example41 to one parameter
  int resolution = 1024;         // raster side for bov evidence
  int max_iter = 512;
};

/// A named output file and its bytes.
using Artifact = std::pair<std::string, std::string>;

struct SuiteOutput {
  VerificationReport report;
  std::vector<Artifact> artifacts;
};

/// lemma23, corollary13, bovsuite, example41, example42, example43, all.
const std::vector<std::string>& suite_names();

/// Runs a named suite. Throws std::invalid_argument for unknown names.
SuiteOutput run_suite(const std::string& name, const SuiteConfig& config);

/// Principal-or-other branch k of the Lambert W function: w e^w = x.
cplx lambert_w(cplx x, int k);

}  // namespace expdyn
