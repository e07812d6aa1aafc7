#include "lich/model_space.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "lich/error.hpp"

namespace lich {
namespace {

[[noreturn]] void bad_spec(std::string_view spec, const std::string& why) {
  fail(ErrorKind::config, "invalid space '" + std::string(spec) + "': " + why);
}

double parse_number(std::string_view spec, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    bad_spec(spec, "'" + text + "' is not a number");
  return v;
}

int parse_int(std::string_view spec, const std::string& text) {
  const double v = parse_number(spec, text);
  if (v != std::floor(v)) bad_spec(spec, "'" + text + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// "n=2,L=1,1" → {n:[2], L:[1,1]}; bare values extend the previous key.
std::map<std::string, std::vector<std::string>> parse_params(std::string_view spec, std::string_view body) {
  std::map<std::string, std::vector<std::string>> out;
  if (body.empty()) return out;
  std::string last;
  for (const auto& tok : split(body, ',')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (last.empty()) bad_spec(spec, "value '" + tok + "' without a key");
      out[last].push_back(tok);
    } else {
      last = tok.substr(0, eq);
      if (out.count(last)) bad_spec(spec, "duplicate key '" + last + "'");
      out[last].push_back(tok.substr(eq + 1));
    }
  }
  return out;
}

void require_keys(std::string_view spec, const std::map<std::string, std::vector<std::string>>& params,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, values] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) bad_spec(spec, "unknown key '" + key + "'");
    if (values.size() != 1 && key != "L") bad_spec(spec, "key '" + key + "' takes one value");
  }
}

Factor sphere_factor(int n, double kappa) { return {FactorKind::sphere, n, kappa, {}}; }

Factor parse_factor(std::string_view spec, const std::string& token) {
  std::string name = token;
  std::optional<double> kappa;
  if (const auto open = token.find('('); open != std::string::npos) {
    if (token.back() != ')') bad_spec(spec, "unbalanced parenthesis in '" + token + "'");
    kappa = parse_number(spec, token.substr(open + 1, token.size() - open - 2));
    name = token.substr(0, open);
  }
  if (name == "line") name = "euclidean1";
  if (name == "circle") name = "torus1";
  std::size_t digits = name.size();
  while (digits > 0 && std::isdigit(static_cast<unsigned char>(name[digits - 1]))) --digits;
  const std::string base = name.substr(0, digits);
  if (digits == name.size()) bad_spec(spec, "factor '" + token + "' lacks a dimension");
  const int n = parse_int(spec, name.substr(digits));
  if (n < 1) bad_spec(spec, "factor dimension must be positive");
  if (base == "sphere") {
    const double k = kappa.value_or(1.0);
    if (n < 2) bad_spec(spec, "sphere factors need dimension >= 2");
    if (k <= 0) bad_spec(spec, "sphere curvature must be positive");
    return sphere_factor(n, k);
  }
  if (base == "hyperbolic") {
    const double k = kappa.value_or(-1.0);
    if (n < 2) bad_spec(spec, "hyperbolic factors need dimension >= 2");
    if (k >= 0) bad_spec(spec, "hyperbolic curvature must be negative");
    return {FactorKind::hyperbolic, n, k, {}};
  }
  if (kappa && *kappa != 0.0) bad_spec(spec, "flat factor '" + token + "' cannot carry curvature");
  if (base == "euclidean") return {FactorKind::euclidean, n, 0.0, {}};
  if (base == "torus") return {FactorKind::torus, n, 0.0, std::vector<double>(std::size_t(n), 1.0)};
  bad_spec(spec, "unknown factor '" + token + "'");
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const char* to_string(SpaceKind kind) noexcept {
  switch (kind) {
    case SpaceKind::space_form: return "space_form";
    case SpaceKind::product: return "product";
    case SpaceKind::flat_torus: return "flat_torus";
    case SpaceKind::round_sphere_2: return "round_sphere_2";
  }
  return "space_form";
}

ModelSpace ModelSpace::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string head(spec.substr(0, colon));
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "product") {
    std::vector<Factor> factors;
    for (const auto& tok : split(body, '+')) {
      if (tok.empty()) bad_spec(spec, "empty product factor");
      factors.push_back(parse_factor(spec, tok));
    }
    if (factors.size() < 2) bad_spec(spec, "a product needs at least two factors");
    return product(std::move(factors));
  }
  const auto params = parse_params(spec, body);
  auto get = [&](const char* key) -> const std::vector<std::string>* {
    auto it = params.find(key);
    return it == params.end() ? nullptr : &it->second;
  };
  const auto* nv = get("n");
  if (head == "sphere") {
    require_keys(spec, params, {"n", "k", "r"});
    const int n = nv ? parse_int(spec, nv->front()) : 2;
    if (get("k") && get("r")) bad_spec(spec, "give either k or r, not both");
    double kappa = 1.0;
    if (const auto* k = get("k")) kappa = parse_number(spec, k->front());
    if (const auto* r = get("r")) {
      const double rad = parse_number(spec, r->front());
      if (rad <= 0) bad_spec(spec, "radius must be positive");
      kappa = 1.0 / (rad * rad);
    }
    if (kappa <= 0) bad_spec(spec, "sphere curvature must be positive");
    if (n == 2) return round_sphere_2(1.0 / std::sqrt(kappa));
    return space_form(n, kappa);
  }
  if (head == "hyperbolic") {
    require_keys(spec, params, {"n", "k"});
    if (!nv) bad_spec(spec, "missing n");
    const double kappa = get("k") ? parse_number(spec, get("k")->front()) : -1.0;
    if (kappa >= 0) bad_spec(spec, "hyperbolic curvature must be negative");
    return space_form(parse_int(spec, nv->front()), kappa);
  }
  if (head == "euclidean" || head == "flat") {
    require_keys(spec, params, {"n"});
    if (!nv) bad_spec(spec, "missing n");
    return space_form(parse_int(spec, nv->front()), 0.0);
  }
  if (head == "torus") {
    require_keys(spec, params, {"n", "L"});
    const int n = nv ? parse_int(spec, nv->front()) : 2;
    if (n < 1 || n > 8) bad_spec(spec, "torus dimension outside [1, 8]");
    std::vector<double> periods(std::size_t(n), 1.0);
    if (const auto* l = get("L")) {
      if (l->size() != std::size_t(n)) bad_spec(spec, "need one period per axis");
      for (std::size_t a = 0; a < l->size(); ++a) periods[a] = parse_number(spec, (*l)[a]);
    }
    for (double L : periods)
      if (L <= 0) bad_spec(spec, "torus periods must be positive");
    return flat_torus(std::move(periods));
  }
  bad_spec(spec, "unknown space kind '" + head + "'");
}

ModelSpace ModelSpace::space_form(int n, double kappa) {
  if (n < 2 || n > 8) fail(ErrorKind::dimension, "space form dimension outside [2, 8]");
  ModelSpace m;
  if (kappa > 0)
    m.factors_.push_back(sphere_factor(n, kappa));
  else if (kappa < 0)
    m.factors_.push_back({FactorKind::hyperbolic, n, kappa, {}});
  else
    m.factors_.push_back({FactorKind::euclidean, n, 0.0, {}});
  return m;
}

ModelSpace ModelSpace::flat_torus(std::vector<double> periods) {
  const int n = static_cast<int>(periods.size());
  if (n < 2 || n > 8) fail(ErrorKind::dimension, "flat torus dimension outside [2, 8]");
  for (double L : periods)
    if (!(L > 0)) fail(ErrorKind::config, "torus periods must be positive");
  ModelSpace m;
  m.factors_.push_back({FactorKind::torus, n, 0.0, std::move(periods)});
  return m;
}

ModelSpace ModelSpace::round_sphere_2(double radius) {
  if (!(radius > 0)) fail(ErrorKind::config, "sphere radius must be positive");
  ModelSpace m;
  m.factors_.push_back(sphere_factor(2, 1.0 / (radius * radius)));
  return m;
}

ModelSpace ModelSpace::product(std::vector<Factor> factors) {
  if (factors.size() < 2) fail(ErrorKind::config, "a product needs at least two factors");
  int n = 0;
  for (const auto& f : factors) n += f.dim;
  if (n > 8) fail(ErrorKind::dimension, "product dimension exceeds 8");
  ModelSpace m;
  m.factors_ = std::move(factors);
  return m;
}

SpaceKind ModelSpace::kind() const noexcept {
  if (factors_.size() > 1) return SpaceKind::product;
  const Factor& f = factors_.front();
  if (f.kind == FactorKind::torus) return SpaceKind::flat_torus;
  if (f.kind == FactorKind::sphere && f.dim == 2) return SpaceKind::round_sphere_2;
  return SpaceKind::space_form;
}

int ModelSpace::dim() const noexcept {
  int n = 0;
  for (const auto& f : factors_) n += f.dim;
  return n;
}

bool ModelSpace::compact() const noexcept {
  for (const auto& f : factors_)
    if (f.kind == FactorKind::hyperbolic || f.kind == FactorKind::euclidean) return false;
  return true;
}

bool ModelSpace::simply_connected() const noexcept {
  for (const auto& f : factors_)
    if (f.kind == FactorKind::torus) return false;
  return true;
}

bool ModelSpace::holonomy_irreducible() const noexcept {
  return factors_.size() == 1 && factors_.front().kappa != 0.0 && factors_.front().dim >= 2;
}

std::optional<double> ModelSpace::einstein_constant() const noexcept {
  std::optional<double> k;
  for (const auto& f : factors_) {
    const double kf = (f.dim - 1) * f.kappa;
    if (k && std::abs(*k - kf) > 1e-12 * std::max(1.0, std::abs(kf))) return std::nullopt;
    k = kf;
  }
  return k;
}

bool ModelSpace::einstein() const noexcept { return einstein_constant().has_value(); }

bool ModelSpace::discretizable() const noexcept {
  const SpaceKind k = kind();
  return k == SpaceKind::round_sphere_2 || (k == SpaceKind::flat_torus && dim() <= 3);
}

double ModelSpace::sphere_radius() const {
  if (kind() != SpaceKind::round_sphere_2) fail(ErrorKind::capability, "not a round 2-sphere");
  return 1.0 / std::sqrt(factors_.front().kappa);
}

std::span<const double> ModelSpace::torus_periods() const {
  if (kind() != SpaceKind::flat_torus) fail(ErrorKind::capability, "not a flat torus");
  return factors_.front().periods;
}

CurvatureData ModelSpace::curvature() const {
  std::vector<CurvatureData> parts;
  for (const auto& f : factors_) {
    if (f.dim == 1)
      parts.push_back(line_curvature());
    else
      parts.push_back(space_form_curvature(f.dim, f.kappa));
  }
  if (parts.size() == 1) return parts.front();
  return product_curvature(parts);
}

std::string ModelSpace::spec_string() const {
  auto factor_token = [](const Factor& f) {
    switch (f.kind) {
      case FactorKind::sphere:
        return "sphere" + std::to_string(f.dim) + (f.kappa != 1.0 ? "(" + format_number(f.kappa) + ")" : "");
      case FactorKind::hyperbolic:
        return "hyperbolic" + std::to_string(f.dim) + (f.kappa != -1.0 ? "(" + format_number(f.kappa) + ")" : "");
      case FactorKind::euclidean: return "euclidean" + std::to_string(f.dim);
      case FactorKind::torus: return "torus" + std::to_string(f.dim);
    }
    return std::string();
  };
  if (factors_.size() > 1) {
    std::string s = "product:";
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "+" : "") + factor_token(factors_[i]);
    return s;
  }
  const Factor& f = factors_.front();
  switch (f.kind) {
    case FactorKind::sphere: return "sphere:n=" + std::to_string(f.dim) + ",k=" + format_number(f.kappa);
    case FactorKind::hyperbolic: return "hyperbolic:n=" + std::to_string(f.dim) + ",k=" + format_number(f.kappa);
    case FactorKind::euclidean: return "euclidean:n=" + std::to_string(f.dim);
    case FactorKind::torus: {
      std::string s = "torus:n=" + std::to_string(f.dim) + ",L=";
      for (std::size_t a = 0; a < f.periods.size(); ++a) s += (a ? "," : "") + format_number(f.periods[a]);
      return s;
    }
  }
  return {};
}

}  // namespace lich
