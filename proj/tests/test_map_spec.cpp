#include <doctest.h>

#include <cmath>
#include <numbers>

#include "expdyn/map_spec.hpp"
#include "expdyn/random.hpp"
#include "oracles.hpp"

using namespace expdyn;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
}  // namespace

TEST_CASE("text form round-trips") {
  const std::vector<MapSpec> maps = {MapSpec::f_lambda(1.5), MapSpec::F_lambda(0.5), MapSpec::f2_beta(0.9),
                                     MapSpec::h_lambda(1.0), MapSpec::tower(3, {2.0, -1.0}, Poly({1.0, {0.0, 2.0}, 3.0}))};
  for (const auto& m : maps) {
    CAPTURE(m.to_string());
    CHECK(MapSpec::parse(m.to_string()) == m);
  }
  const MapSpec m = MapSpec::parse("kind=tower k=2 c=1+0i poly=[-0.5,1]");
  CHECK(m == MapSpec::f2_beta(0.5));
  CHECK(MapSpec::parse("kind=f_lambda lambda=1.5").f_lambda_parameter() == 1.5);
  CHECK_FALSE(MapSpec::f2_beta(0.0).f_lambda_parameter().has_value());
}

TEST_CASE("invalid specs are rejected") {
  for (const char* bad : {"kind=tower k=1 c=1+0i poly=[]", "kind=tower k=0 poly=[0,1]", "kind=tower c=0 poly=[0,1]",
                          "kind=tower poly=[5]", "kind=hlambda lambda=2", "kind=hlambda lambda=0", "kind=what",
                          "k=1 poly=[0,1]", "kind=tower poly=[0,1] extra=3", "kind=tower poly=[0,1x]"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(MapSpec::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("1") == cplx{1.0, 0.0});
  CHECK(parse_complex("-2.5i") == cplx{0.0, -2.5});
  CHECK(parse_complex("1e-3-4i") == cplx{1e-3, -4.0});
  CHECK(parse_complex("0+1i") == cplx{0.0, 1.0});
  const cplx z{0.1, -1.0 / 3.0};
  CHECK(parse_complex(format_complex(z)) == z);
  CHECK_THROWS_AS(parse_complex("1+"), std::invalid_argument);
}

TEST_CASE("evaluation examples") {
  CHECK(std::abs(eval_map(MapSpec::f_lambda(1.0), 0.0).value() - 2.0) < 1e-15);
  CHECK(std::abs(eval_map(MapSpec::f2_beta(0.0), 0.0).value() - std::numbers::e) < 1e-15);
  CHECK(std::abs(eval_map(MapSpec::h_lambda(1.5), -1.0).value() + 1.0) < 1e-15);
  CHECK(std::abs(eval_derivative(MapSpec::f_lambda(1.0), kPi * kI).value()) < 1e-15);
  CHECK(std::abs(eval_derivative(MapSpec::h_lambda(1.5), -1.0 / 1.5).value()) < 1e-15);
  CHECK(std::abs(eval_derivative(MapSpec::f_lambda(0.5), kPi * kI).value() - 0.5) < 1e-15);
  CHECK(std::abs(eval_derivative(MapSpec::f_lambda(1.5), 3.0 * kPi * kI).value() + 0.5) < 1e-14);
  CHECK(std::abs(eval_derivative(MapSpec::h_lambda(1.5), 0.0).value() - std::exp(1.5)) < 1e-14);
}

TEST_CASE("derivatives agree with central differences") {
  const std::vector<MapSpec> maps = {MapSpec::f_lambda(0.7), MapSpec::f2_beta(-1.0), MapSpec::h_lambda(1.3),
                                     MapSpec::tower(1, {0.5, 2.0}, Poly({1.0, -2.0, 0.0, 1.0})),
                                     MapSpec::tower(2, {1.0, -1.0}, Poly({0.0, {0.0, 1.0}, 1.0}))};
  Rng rng(31);
  for (const auto& m : maps) {
    CAPTURE(m.to_string());
    int tested = 0;
    for (int s = 0; s < 1000; ++s) {
      const cplx z = std::polar(5.0 * std::sqrt(rng.uniform()), rng.uniform(-kPi, kPi));
      auto f = [&](cplx w) { return eval_map(m, w).value(); };
      const SafeValue d = eval_derivative(m, z);
      const SafeValue dd = eval_second_derivative(m, z);
      if (!d.is_finite() || !dd.is_finite() || !eval_map(m, z + 1e-6).is_finite() ||
          std::abs(d.value()) > 1e8) {
        continue;
      }
      ++tested;
      const cplx fd = oracle::central_difference(f, z);
      CHECK(std::abs(d.value() - fd) <= 1e-5 * std::max(1.0, std::abs(d.value())));
      auto fp = [&](cplx w) { return eval_derivative(m, w).value(); };
      const cplx fdd = oracle::central_difference(fp, z);
      CHECK(std::abs(dd.value() - fdd) <= 1e-5 * std::max(1.0, std::abs(dd.value())));
    }
    CHECK(tested > 500);
  }
}

TEST_CASE("f_lambda commutes with translation by 2 pi i") {
  Rng rng(4);
  for (double lambda : {0.5, 1.0, 1.5}) {
    const MapSpec m = MapSpec::f_lambda(lambda);
    for (int s = 0; s < 1000; ++s) {
      const cplx z = std::polar(10.0 * std::sqrt(rng.uniform()), rng.uniform(-kPi, kPi));
      const cplx a = eval_map(m, z + 2.0 * kPi * kI).value();
      const cplx b = eval_map(m, z).value() + 2.0 * kPi * kI;
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("evaluation past the overflow cap") {
  const SafeValue v = eval_map(MapSpec::f2_beta(0.0), 7.0);
  CHECK(v.kind() == SafeValue::Kind::LogPolar);
  CHECK(v.log_abs() == doctest::Approx(std::exp(7.0)).epsilon(1e-14));
  CHECK(eval_map(MapSpec::tower(3, 1.0, Poly({0.0, 1.0})), 10.0).is_saturated());
  CHECK(std::abs(reference_exponential()(cplx{-3.0, 1.0}).value() - std::exp(cplx{-3.0, 1.0})) < 1e-16);
}
