#include "sqm/config_io.hpp"

#include <fstream>
#include <set>

#include "sqm/errors.hpp"

namespace sqm {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::MalformedConfig, "field '" + field + "': " + what);
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback,
              bool required = false) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) malformed(path + key, "missing");
    return fallback;
  }
  if (!it->is_number()) malformed(path + key, "expected a number");
  return it->get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) malformed(path + key, "unknown field");
  }
}

ExtraTerm parse_term(const json& t, const std::string& path) {
  if (!t.is_object()) malformed(path, "expected an object");
  const auto type = t.find("type");
  if (type == t.end() || !type->is_string()) malformed(path + ".type", "expected a string");
  const std::string name = type->get<std::string>();
  const std::string p = path + ".";
  if (name == "gaussian") {
    reject_unknown(t, {"type", "height", "center", "width"}, p);
    return GaussianTerm{number(t, "height", p, 0.0, true), number(t, "center", p, 0.0, true),
                        number(t, "width", p, 0.0, true)};
  }
  if (name == "barrier") {
    reject_unknown(t, {"type", "height", "r_left", "r_right", "edge"}, p);
    return BarrierTerm{number(t, "height", p, 0.0, true), number(t, "r_left", p, 0.0, true),
                       number(t, "r_right", p, 0.0, true), number(t, "edge", p, 0.0, true)};
  }
  if (name == "exponential") {
    reject_unknown(t, {"type", "height", "range"}, p);
    return ExponentialTerm{number(t, "height", p, 0.0, true), number(t, "range", p, 0.0, true)};
  }
  malformed(path + ".type", "unknown term type '" + name + "'");
}

}  // namespace

ProblemConfig parse_config(const json& j) {
  if (!j.is_object()) malformed("<root>", "expected a JSON object");
  reject_unknown(j, {"p", "lambda", "k", "l_plus_nu", "mu", "extra_potential", "r_min", "r_max", "tol"},
                 "");
  ProblemConfig c;
  c.p = number(j, "p", "", c.p, true);
  c.lambda = number(j, "lambda", "", c.lambda, true);
  c.k = number(j, "k", "", c.k);
  c.l_plus_nu = number(j, "l_plus_nu", "", c.l_plus_nu);
  c.mu = number(j, "mu", "", c.mu);
  c.r_min = number(j, "r_min", "", c.r_min);
  c.r_max = number(j, "r_max", "", c.r_max);
  c.tol = number(j, "tol", "", c.tol);
  if (const auto it = j.find("extra_potential"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) malformed("extra_potential", "expected an array of terms");
    std::vector<ExtraTerm> terms;
    for (std::size_t i = 0; i < it->size(); ++i) {
      terms.push_back(parse_term((*it)[i], "extra_potential[" + std::to_string(i) + "]"));
    }
    c.extra_potential = ExtraPotential(std::move(terms));
  }
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedConfig, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedConfig, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json config_to_json(const ProblemConfig& c) {
  nlohmann::ordered_json j;
  j["p"] = c.p;
  j["lambda"] = c.lambda;
  j["k"] = c.k;
  j["l_plus_nu"] = c.l_plus_nu;
  j["mu"] = c.mu;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& term : c.extra_potential.terms()) {
    nlohmann::ordered_json t;
    std::visit(
        [&t](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, GaussianTerm>) {
            t["type"] = "gaussian";
            t["height"] = v.height;
            t["center"] = v.center;
            t["width"] = v.width;
          } else if constexpr (std::is_same_v<T, BarrierTerm>) {
            t["type"] = "barrier";
            t["height"] = v.height;
            t["r_left"] = v.r_left;
            t["r_right"] = v.r_right;
            t["edge"] = v.edge;
          } else {
            t["type"] = "exponential";
            t["height"] = v.height;
            t["range"] = v.range;
          }
        },
        term);
    terms.push_back(std::move(t));
  }
  j["extra_potential"] = std::move(terms);
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["tol"] = c.tol;
  return j;
}

}  // namespace sqm
