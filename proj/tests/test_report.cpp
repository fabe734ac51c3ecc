#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "expdyn/bov.hpp"
#include "expdyn/dynamics.hpp"
#include "expdyn/raster.hpp"
#include "expdyn/report.hpp"
#include "oracles.hpp"

using namespace expdyn;

namespace {

VerificationReport make_report(Fragment checks) {
  return {"unit", std::move(checks), std::string(kToolVersion), "1970-01-01T00:00:00Z", "0123456789abcdef"};
}

Check check(std::string id, Status s) { return {std::move(id), "x = x", s, 0.5, "details", {}}; }

}  // namespace

TEST_CASE("empty report is valid JSON with an empty check list") {
  const std::string text = emit_json(make_report({}));
  const auto j = nlohmann::json::parse(text);
  CHECK(j["checks"].is_array());
  CHECK(j["checks"].empty());
  CHECK(j["status"] == "pass");
  CHECK(text.find("\"checks\": []") != std::string::npos);
}

TEST_CASE("status aggregation") {
  const auto single = nlohmann::json::parse(emit_json(make_report({check("a", Status::Pass)})));
  CHECK(single["status"] == "pass");
  CHECK(single["checks"][0]["status"] == "pass");
  CHECK(overall_status({check("a", Status::Pass), check("b", Status::Fail), check("c", Status::Pass)}) == Status::Fail);
  CHECK(overall_status({check("a", Status::Pass), check("b", Status::Inconclusive)}) == Status::Inconclusive);
  CHECK(overall_status({check("a", Status::Inconclusive), check("b", Status::Fail)}) == Status::Fail);
  CHECK(overall_status({check("a", Status::Pass), check("b", Status::Skipped)}) == Status::Pass);
  CHECK(overall_status({}) == Status::Pass);
}

TEST_CASE("canonical JSON is byte-stable with sorted keys and full-precision doubles") {
  Check c = check("a", Status::Pass);
  c.residual = 0.1;
  c.data = {{"zeta", 1}, {"alpha", {1.0 / 3.0, NAN}}, {"mid", "text"}};
  const VerificationReport r = make_report({c});
  const std::string first = emit_json(r);
  CHECK(first == emit_json(r));
  CHECK(first == emit_json(make_report({c})));
  CHECK(first.find("0.10000000000000001") != std::string::npos);
  CHECK(first.find("0.33333333333333331") != std::string::npos);
  CHECK(first.find("null") != std::string::npos);
  CHECK(first.find("\"alpha\"") < first.find("\"mid\""));
  CHECK(first.find("\"mid\"") < first.find("\"zeta\""));
  CHECK(first.back() == '\n');
  const auto j = nlohmann::json::parse(first);
  CHECK(j["checks"][0]["anchor"] == "x = x");
  CHECK(j["tool_version"] == std::string(kToolVersion));
  CHECK(canonical_json(j) == first);
}

TEST_CASE("value serialization") {
  CHECK(to_json(cplx{1.0, -2.0}) == nlohmann::json::array({1.0, -2.0}));
  const auto big = to_json(SafeValue::from_log_polar(1000.0, 0.5));
  CHECK(big["logmag"] == 1000.0);
  CHECK(big["saturated"] == false);
  CHECK(to_json(SafeValue::saturated())["saturated"] == true);
}

TEST_CASE("digest and timestamp") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(report_timestamp() == "1970-01-01T00:00:00Z");
  setenv("SOURCE_DATE_EPOCH", "86401", 1);
  CHECK(report_timestamp() == "1970-01-02T00:00:01Z");
  setenv("SOURCE_DATE_EPOCH", "junk", 1);
  CHECK(report_timestamp() == "1970-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("all-escaped grid renders black") {
  GridClassification g{Rect::centered(1.0), 8, 8, std::vector<int>(64, kLabelEscaped), std::vector<int>(64, 1)};
  const std::string ppm = emit_ppm(g);
  const auto h = oracle::parse_pnm_header(ppm);
  CHECK(h.magic == "P6");
  CHECK(h.width == 8);
  CHECK(h.height == 8);
  CHECK(h.maxval == 255);
  REQUIRE(ppm.size() == h.data_offset + 192);
  for (std::size_t p = h.data_offset; p < ppm.size(); ++p) CHECK(ppm[p] == '\0');
}

TEST_CASE("basin colors and orientation") {
  // 3 x 2 grid: bottom row basin 0, top row basin 1 except one undecided.
  GridClassification g{Rect::centered(1.0), 3, 2, {0, 0, 0, 2, 2, kLabelUndecided}, std::vector<int>(6, 1)};
  const std::string ppm = emit_ppm(g);
  CHECK(ppm == emit_ppm(g));
  const auto h = oracle::parse_pnm_header(ppm);
  CHECK(h.width == 3);
  CHECK(h.height == 2);
  auto pixel = [&](int i, int row) {
    const std::size_t o = h.data_offset + 3 * (static_cast<std::size_t>(row) * 3 + i);
    return std::vector<unsigned char>(ppm.begin() + o, ppm.begin() + o + 3);
  };
  // Top row of the image is the largest Im, i.e. basin 1.
  CHECK(pixel(0, 0) == std::vector<unsigned char>(kBasinPalette[1], kBasinPalette[1] + 3));
  CHECK(pixel(2, 0) == std::vector<unsigned char>{255, 255, 255});
  CHECK(pixel(0, 1) == std::vector<unsigned char>(kBasinPalette[0], kBasinPalette[0] + 3));
  CHECK(pixel(0, 0) != pixel(0, 1));
  // Negative basin indices map into the palette as well.
  GridClassification neg{Rect::centered(1.0), 1, 1, {encode_basin(-1)}, {1}};
  const std::string n = emit_ppm(neg);
  CHECK(static_cast<unsigned char>(n[n.size() - 3]) == kBasinPalette[11][0]);

  CHECK(labels_csv(g) == "2,2,-2\n0,0,0\n");
}

TEST_CASE("mask images") {
  GridMask m{Rect::centered(1.0), 8, 8, std::vector<std::uint8_t>(64)};
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) m.bits[j * 8 + i] = (i + j) % 2 == 0;
  const std::string pbm = emit_ppm(m);
  const auto h = oracle::parse_pnm_header(pbm);
  CHECK(h.magic == "P4");
  REQUIRE(pbm.size() == h.data_offset + 8);
  for (int row = 0; row < 8; ++row) {
    const auto byte = static_cast<unsigned char>(pbm[h.data_offset + row]);
    CHECK(byte == (row % 2 == 0 ? 0x55 : 0xAA));
  }
  GridMask wide{Rect::centered(1.0), 13, 9, std::vector<std::uint8_t>(13 * 9, 1)};
  const std::string w = emit_ppm(wide);
  const auto wh = oracle::parse_pnm_header(w);
  CHECK(wh.width == 13);
  CHECK(wh.height == 9);
  CHECK(w.size() == wh.data_offset + 2 * 9);
}

TEST_CASE("csv outputs") {
  OrbitResult o;
  o.points = {SafeValue::from_complex({1.0, 2.0}), SafeValue::from_log_polar(500.0, 0.25)};
  std::istringstream in(orbit_csv(o));
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,re,im,logmag,arg");
  std::getline(in, line);
  CHECK(line.rfind("0,1,2,", 0) == 0);
  std::getline(in, line);
  CHECK(line == "1,,,500,0.25");

  const CurveGrowth g = curve_growth(reference_exponential(), CurveSpec::left_ray(1.0, 100.0), 64);
  const std::string csv = curve_csv(g);
  CHECK(csv.rfind("t,re,im,modulus\n1,-1,0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
}
