#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "expdyn/safe_value.hpp"

namespace expdyn {

struct GridMask;
struct GridClassification;
struct OrbitResult;
struct CurveGrowth;

enum class Status { Pass, Fail, Inconclusive, Skipped };

std::string_view to_string(Status s);

/// One verified fact. `anchor` names the mathematical statement being
/// checked; `data` carries optional structured payload (counts, point lists).
struct Check {
  std::string id;
  std::string anchor;
  Status status = Status::Pass;
  std::optional<double> residual;
  std::string details;
  nlohmann::json data;
};

using Fragment = std::vector<Check>;

inline void append(Fragment& into, Fragment from) {
  for (auto& c : from) into.push_back(std::move(c));
}

/// fail if any check fails; otherwise inconclusive if any check is
/// inconclusive; otherwise pass. Skipped checks never change the outcome.
Status overall_status(const Fragment& checks);

struct VerificationReport {
  std::string suite_name;
  Fragment checks;
  std::string tool_version;
  std::string timestamp;
  std::string input_digest;

  Status overall() const { return overall_status(checks); }
};

inline constexpr std::string_view kToolVersion = "expdyn 1.0.0";

/// Canonical JSON: sorted keys, two-space indentation, doubles printed with
/// 17 significant digits, non-finite doubles as null. Byte-stable for
/// identical inputs.
std::string canonical_json(const nlohmann::json& j);

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const VerificationReport& r);
std::string emit_json(const VerificationReport& r);

/// [re, im] for Finite values, {logmag, arg, saturated} otherwise.
nlohmann::json to_json(const SafeValue& v);
nlohmann::json to_json(cplx z);

/// 64-bit FNV-1a digest of `text` as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// ISO-8601 UTC time taken from SOURCE_DATE_EPOCH when set, else the epoch,
/// so repeated runs stay byte-identical.
std::string report_timestamp();

/// Colors for basin labels, cycled by basin index k (mod 12).
inline constexpr unsigned char kBasinPalette[12][3] = {
    {230, 25, 75},  {60, 180, 75},  {255, 225, 25}, {0, 130, 200},  {245, 130, 48}, {145, 30, 180},
    {70, 240, 240}, {240, 50, 230}, {210, 245, 60}, {250, 190, 190}, {0, 128, 128}, {170, 110, 40}};
inline constexpr unsigned char kEscapedColor[3] = {0, 0, 0};
inline constexpr unsigned char kUndecidedColor[3] = {255, 255, 255};

/// Binary PPM (P6), top row = largest Im.
std::string emit_ppm(const GridClassification& grid);
/// Binary PBM (P4), 1 (black) where the mask bit is set, top row = largest Im.
std::string emit_ppm(const GridMask& mask);

/// Label raster as CSV, one line per pixel row from the top (largest Im).
std::string labels_csv(const GridClassification& grid);
/// Columns n,re,im,logmag,arg; re and im are empty past the overflow cap.
std::string orbit_csv(const OrbitResult& orbit);
/// Columns t,re,im,modulus where re, im locate the curve point z(t).
std::string curve_csv(const CurveGrowth& growth);

}  // namespace expdyn
