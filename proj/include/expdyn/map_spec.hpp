#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "expdyn/poly.hpp"
#include "expdyn/safe_value.hpp"

namespace expdyn {

/// c * E^k(z) + P(z), where E^k is the k-fold composition of exp.
struct TowerPoly {
  int k = 1;
  cplx c{1.0, 0.0};
  Poly p{{cplx{0.0}, cplx{1.0}}};

  friend bool operator==(const TowerPoly&, const TowerPoly&) = default;
};

/// z * e^{lambda (z + 1)}, the exp-conjugate of lambda e^z + z + lambda.
struct HLambda {
  double lambda = 1.0;

  friend bool operator==(const HLambda&, const HLambda&) = default;
};

class MapSpec {
 public:
  /// Throws std::invalid_argument unless k >= 1, c != 0 and deg P >= 1.
  static MapSpec tower(int k, cplx c, Poly p);
  /// Throws std::invalid_argument unless 0 < lambda < 2.
  static MapSpec h_lambda(double lambda);

  /// lambda e^z + z + lambda.
  static MapSpec f_lambda(double lambda);
  /// lambda e^z + z + lambda + 2 pi i.
  static MapSpec F_lambda(double lambda);
  /// E^2(z) + z - beta.
  static MapSpec f2_beta(double beta);
  /// e^z + P(z).
  static MapSpec exp_plus(Poly p) { return tower(1, 1.0, std::move(p)); }

  bool is_tower() const { return std::holds_alternative<TowerPoly>(v_); }
  bool is_h_lambda() const { return std::holds_alternative<HLambda>(v_); }
  const TowerPoly& as_tower() const { return std::get<TowerPoly>(v_); }
  const HLambda& as_h_lambda() const { return std::get<HLambda>(v_); }

  /// lambda when this map is exactly lambda e^z + z + lambda with
  /// 0 < lambda < 2.
  std::optional<double> f_lambda_parameter() const;

  /// Canonical text form, e.g. "kind=tower k=2 c=1+0i poly=[-0.5+0i,1+0i]".
  std::string to_string() const;

  /// Parses the key-value text form. Throws std::invalid_argument with a
  /// diagnostic on malformed input or violated invariants.
  static MapSpec parse(std::string_view text);

  friend bool operator==(const MapSpec&, const MapSpec&) = default;

 private:
  explicit MapSpec(std::variant<TowerPoly, HLambda> v) : v_(std::move(v)) {}
  std::variant<TowerPoly, HLambda> v_;
};

/// Parses "re+imi" style literals: "1", "-2.5i", "1e-3-4i", "0+1i".
cplx parse_complex(std::string_view text);
/// Round-trippable "re+imi" form with 17 significant digits.
std::string format_complex(cplx z);

/// E^k(z). Total: intermediates beyond the cap move to log-polar form and
/// saturate when even the logmag cannot be formed.
SafeValue exp_tower(int k, cplx z);

SafeValue eval_map(const MapSpec& m, cplx z);
SafeValue eval_derivative(const MapSpec& m, cplx z);
SafeValue eval_second_derivative(const MapSpec& m, cplx z);

/// Any entire function evaluated in SafeValue form.
using Evaluator = std::function<SafeValue(cplx)>;

Evaluator evaluator(const MapSpec& m);

/// Plain e^z, the omitted-value negative control. Not expressible as a
/// MapSpec because its polynomial part is constant.
Evaluator reference_exponential();

}  // namespace expdyn
