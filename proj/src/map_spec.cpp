#include "expdyn/map_spec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

namespace expdyn {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double parse_real(std::string_view text, std::string_view what) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return x;
}

int parse_int(std::string_view text, std::string_view what) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return x;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<cplx> parse_coeff_list(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw std::invalid_argument("poly must be a bracketed list, e.g. poly=[-0.5,1]");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<cplx> out;
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_complex(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

cplx parse_complex(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty complex literal");
  if (text.back() != 'i') return {parse_real(text, "complex literal"), 0.0};
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s, "imaginary part");
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body)};
  return {parse_real(body.substr(0, split), "real part"), imag_part(body.substr(split))};
}

std::string format_complex(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

MapSpec MapSpec::tower(int k, cplx c, Poly p) {
  if (k < 1) throw std::invalid_argument("tower height k must be >= 1");
  if (c == cplx{}) throw std::invalid_argument("coefficient c must be nonzero");
  if (p.degree() < 1) throw std::invalid_argument("polynomial part must be non-constant");
  return MapSpec(TowerPoly{k, c, std::move(p)});
}

MapSpec MapSpec::h_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw std::invalid_argument("lambda must lie in (0, 2)");
  return MapSpec(HLambda{lambda});
}

MapSpec MapSpec::f_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw std::invalid_argument("lambda must lie in (0, 2)");
  return tower(1, lambda, Poly({lambda, 1.0}));
}

MapSpec MapSpec::F_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw std::invalid_argument("lambda must lie in (0, 2)");
  return tower(1, lambda, Poly({cplx{lambda, kTwoPi}, 1.0}));
}

MapSpec MapSpec::f2_beta(double beta) { return tower(2, 1.0, Poly({-beta, 1.0})); }

std::optional<double> MapSpec::f_lambda_parameter() const {
  if (!is_tower()) return std::nullopt;
  const TowerPoly& t = as_tower();
  if (t.k != 1 || t.c.imag() != 0.0) return std::nullopt;
  const double lambda = t.c.real();
  if (!(lambda > 0.0 && lambda < 2.0)) return std::nullopt;
  const auto& a = t.p.coeffs();
  if (a.size() != 2 || a[0] != cplx{lambda} || a[1] != cplx{1.0}) return std::nullopt;
  return lambda;
}

std::string MapSpec::to_string() const {
  if (is_h_lambda()) return "kind=hlambda lambda=" + format_real(as_h_lambda().lambda);
  const TowerPoly& t = as_tower();
  std::string s = "kind=tower k=" + std::to_string(t.k) + " c=" + format_complex(t.c) + " poly=[";
  for (std::size_t i = 0; i < t.p.coeffs().size(); ++i) {
    if (i) s += ',';
    s += format_complex(t.p.coeffs()[i]);
  }
  return s + "]";
}

MapSpec MapSpec::parse(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    const auto eq = text.find('=', pos);
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected key=value, got '" + std::string(text.substr(pos)) + "'");
    }
    std::string key(trim(text.substr(pos, eq - pos)));
    std::size_t end = eq + 1;
    if (end < text.size() && text[end] == '[') {
      end = text.find(']', end);
      if (end == std::string_view::npos) throw std::invalid_argument("unterminated '[' in map spec");
      ++end;
    } else {
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    }
    std::string value(text.substr(eq + 1, end - eq - 1));
    if (!fields.emplace(key, value).second) throw std::invalid_argument("duplicate key '" + key + "'");
    pos = end;
  }

  auto take = [&](std::string_view key) -> std::optional<std::string> {
    auto it = fields.find(key);
    if (it == fields.end()) return std::nullopt;
    std::string v = it->second;
    fields.erase(it);
    return v;
  };
  auto require = [&](std::string_view key) {
    auto v = take(key);
    if (!v) throw std::invalid_argument("missing key '" + std::string(key) + "'");
    return *v;
  };

  const std::string kind = require("kind");
  std::optional<MapSpec> out;
  if (kind == "tower") {
    const auto k = take("k");
    const auto c = take("c");
    const auto coeffs = parse_coeff_list(require("poly"));
    if (coeffs.empty()) throw std::invalid_argument("polynomial part must be non-constant (poly=[])");
    out = tower(k ? parse_int(*k, "k") : 1, c ? parse_complex(*c) : cplx{1.0}, Poly(coeffs));
  } else if (kind == "hlambda") {
    out = h_lambda(parse_real(require("lambda"), "lambda"));
  } else if (kind == "f_lambda") {
    out = f_lambda(parse_real(require("lambda"), "lambda"));
  } else if (kind == "F_lambda") {
    out = F_lambda(parse_real(require("lambda"), "lambda"));
  } else if (kind == "f2beta") {
    out = f2_beta(parse_real(require("beta"), "beta"));
  } else {
    throw std::invalid_argument("unknown kind '" + kind + "'");
  }
  if (!fields.empty()) throw std::invalid_argument("unexpected key '" + fields.begin()->first + "'");
  return *out;
}

SafeValue exp_tower(int k, cplx z) {
  SafeValue v = SafeValue::from_complex(z);
  for (int j = 0; j < k; ++j) v = exp(v);
  return v;
}

SafeValue eval_map(const MapSpec& m, cplx z) {
  if (m.is_h_lambda()) {
    const double lambda = m.as_h_lambda().lambda;
    return SafeValue::from_complex(z) * exp(SafeValue::from_complex(lambda * (z + 1.0)));
  }
  const TowerPoly& t = m.as_tower();
  return t.c * exp_tower(t.k, z) + eval_poly(t.p, z);
}

SafeValue eval_derivative(const MapSpec& m, cplx z) {
  if (m.is_h_lambda()) {
    const double lambda = m.as_h_lambda().lambda;
    return exp(SafeValue::from_complex(lambda * (z + 1.0))) * SafeValue::from_complex(1.0 + lambda * z);
  }
  const TowerPoly& t = m.as_tower();
  // (E^k)' = E^1 E^2 ... E^k.
  SafeValue level = SafeValue::from_complex(z);
  SafeValue product = SafeValue::from_complex(1.0);
  for (int j = 0; j < t.k; ++j) {
    level = exp(level);
    product = product * level;
  }
  return t.c * product + eval_poly_derivative(t.p, z);
}

SafeValue eval_second_derivative(const MapSpec& m, cplx z) {
  if (m.is_h_lambda()) {
    const double lambda = m.as_h_lambda().lambda;
    return exp(SafeValue::from_complex(lambda * (z + 1.0))) *
           SafeValue::from_complex(lambda * (2.0 + lambda * z));
  }
  const TowerPoly& t = m.as_tower();
  // With D_j = E^1 ... E^j: (D_k)' = D_k * (D_0 + D_1 + ... + D_{k-1}).
  SafeValue level = SafeValue::from_complex(z);
  SafeValue product = SafeValue::from_complex(1.0);
  SafeValue partial_sum{};
  for (int j = 0; j < t.k; ++j) {
    partial_sum = partial_sum + product;
    level = exp(level);
    product = product * level;
  }
  return t.c * (product * partial_sum) + eval_poly_second_derivative(t.p, z);
}

Evaluator evaluator(const MapSpec& m) {
  return [m](cplx z) { return eval_map(m, z); };
}

Evaluator reference_exponential() {
  return [](cplx z) { return exp(SafeValue::from_complex(z)); };
}

}  // namespace expdyn
