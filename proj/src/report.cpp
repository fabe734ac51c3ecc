#include "expdyn/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>

#include "expdyn/bov.hpp"
#include "expdyn/dynamics.hpp"
#include "expdyn/raster.hpp"

namespace expdyn {
namespace {

void write_string(std::string& out, const std::string& s) {
  out += nlohmann::json(s).dump();
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const nlohmann::json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann's default object type is an ordered std::map, so keys are sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        write_string(out, it.key());
        out += ": ";
        write(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

void put_pixel(std::string& out, const unsigned char* rgb) {
  out.push_back(static_cast<char>(rgb[0]));
  out.push_back(static_cast<char>(rgb[1]));
  out.push_back(static_cast<char>(rgb[2]));
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
    case Status::Skipped:
      return "skipped";
  }
  return "fail";
}

Status overall_status(const Fragment& checks) {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return Status::Fail;
    if (c.status == Status::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Status::Inconclusive : Status::Pass;
}

std::string canonical_json(const nlohmann::json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

nlohmann::json to_json(const Check& c) {
  nlohmann::json j;
  j["id"] = c.id;
  j["anchor"] = c.anchor;
  j["status"] = std::string(to_string(c.status));
  j["residual"] = c.residual ? nlohmann::json(*c.residual) : nlohmann::json(nullptr);
  j["details"] = c.details;
  if (!c.data.is_null()) j["data"] = c.data;
  return j;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["suite_name"] = r.suite_name;
  j["status"] = std::string(to_string(r.overall()));
  j["tool_version"] = r.tool_version;
  j["timestamp"] = r.timestamp;
  j["input_digest"] = r.input_digest;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

std::string emit_json(const VerificationReport& r) { return canonical_json(to_json(r)); }

nlohmann::json to_json(const SafeValue& v) {
  if (v.is_finite()) return to_json(v.value());
  return {{"logmag", v.log_abs()}, {"arg", v.arg()}, {"saturated", v.is_saturated()}};
}

nlohmann::json to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string report_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string emit_ppm(const GridClassification& grid) {
  std::string out = "P6\n" + std::to_string(grid.nx) + " " + std::to_string(grid.ny) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(grid.nx) * grid.ny * 3);
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int label = grid.label(i, j);
      if (label == kLabelEscaped) {
        put_pixel(out, kEscapedColor);
      } else if (label < 0) {
        put_pixel(out, kUndecidedColor);
      } else {
        const int k = decode_basin(label);
        put_pixel(out, kBasinPalette[((k % 12) + 12) % 12]);
      }
    }
  }
  return out;
}

std::string emit_ppm(const GridMask& mask) {
  std::string out = "P4\n" + std::to_string(mask.nx) + " " + std::to_string(mask.ny) + "\n";
  const int row_bytes = (mask.nx + 7) / 8;
  for (int j = mask.ny - 1; j >= 0; --j) {
    std::string row(static_cast<std::size_t>(row_bytes), '\0');
    for (int i = 0; i < mask.nx; ++i) {
      if (mask.at(i, j)) row[i / 8] = static_cast<char>(row[i / 8] | (0x80 >> (i % 8)));
    }
    out += row;
  }
  return out;
}

std::string labels_csv(const GridClassification& grid) {
  std::string out;
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (i) out += ',';
      out += std::to_string(grid.label(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string orbit_csv(const OrbitResult& orbit) {
  std::string out = "n,re,im,logmag,arg\n";
  char buf[160];
  for (std::size_t n = 0; n < orbit.points.size(); ++n) {
    const SafeValue& v = orbit.points[n];
    if (v.is_finite()) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", n, v.value().real(), v.value().imag(),
                    v.log_abs(), v.arg());
    } else {
      std::snprintf(buf, sizeof buf, "%zu,,,%.17g,%.17g\n", n, v.log_abs(), v.arg());
    }
    out += buf;
  }
  return out;
}

std::string curve_csv(const CurveGrowth& growth) {
  std::string out = "t,re,im,modulus\n";
  char buf[160];
  for (const auto& s : growth.trace) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.z.real(), s.z.imag(), s.value.abs());
    out += buf;
  }
  return out;
}

}  // namespace expdyn
