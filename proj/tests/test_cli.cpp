#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "expdyn/cli.hpp"
#include "oracles.hpp"

using namespace expdyn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("expdyn_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"expdyn"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

bool has_check_prefix(const nlohmann::json& report, const std::string& prefix) {
  for (const auto& c : report["checks"]) {
    if (c["id"].get<std::string>().rfind(prefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("invalid input exits with the usage code") {
  const fs::path out = scratch("usage");
  CHECK(cli({"critical", "--map", "kind=tower k=1 c=1+0i poly=[]", "--out", out.string()}) == kExitUsage);
  CHECK(cli({"critical", "--map", "kind=nothing", "--out", out.string()}) == kExitUsage);
  CHECK(cli({"bov", "--R", "-1", "--out", out.string()}) == kExitUsage);
  CHECK(cli({"orbit", "--format", "xml"}) == kExitUsage);
  CHECK(cli({"verify", "--suite", "nonexistent"}) == kExitUsage);
  CHECK(cli({"frobnicate"}) == kExitUsage);
  CHECK(cli({}) == kExitUsage);
  CHECK(cli({"basin", "--window", "1,2,3", "--out", out.string()}) == kExitUsage);
  CHECK(cli({"curve", "--curve", "helix", "--out", out.string()}) == kExitUsage);
  CHECK(fs::is_empty(out));
}

TEST_CASE("critical points report") {
  const fs::path out = scratch("critical");
  CHECK(cli({"critical", "--map", "kind=tower k=1 c=1+0i poly=[0,1]", "--windows", "10", "--out", out.string()}) ==
        kExitPass);
  const auto j = nlohmann::json::parse(slurp(out / "critical.json"));
  CHECK(j["status"] == "pass");
  CHECK(j["checks"][0]["data"].size() == 4);
  for (const auto& entry : fs::directory_iterator(out)) CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("bov evidence for e^z + z exits with success") {
  const fs::path out = scratch("bov");
  CHECK(cli({"bov", "--map", "kind=tower k=1 c=1+0i poly=[0,1]", "--R", "10", "--windows", "20,40,80", "--out",
             out.string()}) == kExitPass);
  CHECK(nlohmann::json::parse(slurp(out / "bov.json"))["status"] == "pass");
  // The exponential-like negative case: a half-plane sublevel set fails.
  CHECK(cli({"bov", "--map", "kind=tower k=1 c=1e-300+0i poly=[0,1e-300]", "--R", "10", "--windows", "20,40,80",
             "--resolution", "64", "--out", out.string()}) == kExitFail);
}

TEST_CASE("verify example42 at lambda = 1") {
  const fs::path out = scratch("verify42");
  CHECK(cli({"verify", "--suite", "example42", "--lambda", "1.0", "--out", out.string()}) == kExitPass);
  const auto j = nlohmann::json::parse(slurp(out / "verify_example42.json"));
  CHECK(j["status"] == "pass");
  CHECK(has_check_prefix(j, "example42.multiplier"));
  CHECK(has_check_prefix(j, "example42.semiconjugacy"));
  CHECK(has_check_prefix(j, "example42.line_pi"));
  bool image = false;
  for (const auto& entry : fs::directory_iterator(out)) image = image || entry.path().extension() == ".ppm";
  CHECK(image);
}

TEST_CASE("outputs do not depend on the thread count") {
  const fs::path a = scratch("threads_a");
  const fs::path b = scratch("threads_b");
  for (const auto& [dir, threads] : {std::pair{a, "1"}, std::pair{b, "3"}}) {
    CHECK(cli({"basin", "--lambda", "0.5", "--resolution", "48", "--format", "ppm", "--threads", threads, "--out",
               dir.string()}) == kExitPass);
    CHECK(cli({"bov", "--resolution", "96", "--format", "ppm", "--threads", threads, "--out", dir.string()}) !=
          kExitUsage);
    CHECK(cli({"verify", "--suite", "example41", "--threads", threads, "--out", dir.string()}) == kExitPass);
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
  CHECK(files >= 6);
  const auto h = oracle::parse_pnm_header(slurp(a / "basins.ppm"));
  CHECK(h.width == 48);
  CHECK(h.height == 48);
}

TEST_CASE("orbit, curve and basin formats") {
  const fs::path out = scratch("formats");
  CHECK(cli({"orbit", "--lambda", "1", "--z0", "-5+3.141592653589793i", "--out", out.string()}) == kExitPass);
  const auto orbit = nlohmann::json::parse(slurp(out / "orbit.json"));
  CHECK(orbit["verdict"] == "converged");
  CHECK(orbit["k_index"] == 0);
  CHECK(cli({"orbit", "--lambda", "1", "--z0", "0", "--format", "csv", "--out", out.string()}) == kExitPass);
  CHECK(slurp(out / "orbit.csv").rfind("n,re,im,logmag,arg\n0,0,0,", 0) == 0);

  CHECK(cli({"curve", "--map", "kind=tower poly=[0,0,1]", "--curve", "vertical_zigzag", "--out", out.string()}) ==
        kExitPass);
  CHECK(nlohmann::json::parse(slurp(out / "curve.json"))["checks"][0]["id"] == "curve.vertical_zigzag");
  CHECK(cli({"curve", "--curve", "sector_ray", "--theta", "0.5", "--format", "csv", "--out", out.string()}) ==
        kExitPass);
  CHECK(slurp(out / "curve.csv").rfind("t,re,im,modulus\n", 0) == 0);

  CHECK(cli({"basin", "--lambda", "1", "--resolution", "16", "--format", "csv", "--window",
             "-6,6,0,6.283185307179586", "--out", out.string()}) == kExitPass);
  const std::string csv = slurp(out / "basins.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
  CHECK(cli({"basin", "--lambda", "1", "--resolution", "16", "--out", out.string()}) == kExitPass);
  const auto basins = nlohmann::json::parse(slurp(out / "basins.json"));
  CHECK(basins["nx"] == 16);
  CHECK(basins["label_counts"].contains("0"));
}
