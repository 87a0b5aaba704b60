#pragma once

// Experiment configuration: a single JSON document, validated on load.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kglab/approx_function.hpp"
#include "kglab/dirichlet.hpp"
#include "kglab/rational.hpp"
#include "kglab/sets.hpp"

namespace kglab {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PsiSpec {
  std::string kind = "power";  // power | table | sparse | zero
  Rational c{1, 4};
  Rational exponent{1};
  long long q_max = 1000;
  long long q_min = 1;
  bool capped = false;
  std::vector<Rational> values;             // table
  std::map<long long, Rational> support;    // sparse

  ApproxFunction build() const {
    ApproxFunction f = ApproxFunction::zero(1);
    if (kind == "power") {
      f = ApproxFunction::power(c, exponent, q_max, q_min);
    } else if (kind == "table") {
      f = ApproxFunction::table(values);
    } else if (kind == "sparse") {
      f = ApproxFunction::sparse(support, q_max);
    } else if (kind == "zero") {
      f = ApproxFunction::zero(q_max);
    } else {
      throw ConfigError("unknown psi kind '" + kind + "'");
    }
    return capped ? f.capped() : f;
  }
};

struct TargetSpec {
  std::string kind = "rational";  // rational | pair | surrogate | moving
  std::vector<Rational> y{Rational(0)};
  IntVector a;
  long long b = 1;
  std::string surrogate;
  std::map<long long, Rational> table;

  TargetScheme build() const {
    if (kind == "rational") return TargetScheme::rational(y);
    if (kind == "pair") return TargetScheme::pair(a, b);
    if (kind == "surrogate") return TargetScheme::rational(named_surrogate(surrogate));
    if (kind == "moving") return TargetScheme::moving(table);
    throw ConfigError("unknown target kind '" + kind + "'");
  }
};

struct ExperimentConfig {
  int n = 2;
  int m = 1;
  PsiSpec psi;
  TargetSpec target;
  Variant variant = Variant::tilde;
  std::vector<long long> cutoffs{100};
  std::vector<std::pair<long long, long long>> schedule{{100, 1000}};
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  // subcommand parameters
  std::vector<long long> moduli{12};
  std::vector<Rational> deltas{Rational(1, 10)};
  std::vector<std::vector<long long>> tuples;            // disjointness: d, e, q, r
  std::vector<std::pair<Rational, Rational>> boxes;      // gallagher: a, b
  std::vector<int> dims{1, 2};                           // gallagher m values
  long long max_modulus = 100;                           // dirichlet-pairs
};

namespace detail {

inline Rational json_rational(const Json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
  throw ConfigError(what + ": expected a \"num/den\" string or an integer");
}

template <typename T>
T json_get(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::vector<Rational> json_rationals(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(json_rational(v, what));
  return out;
}

inline std::map<long long, Rational> json_table(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + ": expected an object keyed by integers");
  std::map<long long, Rational> out;
  for (const auto& [k, v] : j.items()) {
    try {
      out[std::stoll(k)] = json_rational(v, what);
    } catch (const std::invalid_argument&) {
      throw ConfigError(what + ": key '" + k + "' is not an integer");
    }
  }
  return out;
}

inline Json rationals_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

inline Json table_json(const std::map<long long, Rational>& t) {
  Json out = Json::object();
  for (const auto& [k, v] : t) out[std::to_string(k)] = to_string(v);
  return out;
}

}  // namespace detail

inline PsiSpec parse_psi(const Json& j) {
  if (!j.is_object()) throw ConfigError("psi: expected an object");
  PsiSpec p;
  p.kind = detail::json_get<std::string>(j, "kind", p.kind);
  if (j.contains("c")) p.c = detail::json_rational(j["c"], "psi.c");
  if (j.contains("exponent")) p.exponent = detail::json_rational(j["exponent"], "psi.exponent");
  p.q_max = detail::json_get<long long>(j, "q_max", p.q_max);
  p.q_min = detail::json_get<long long>(j, "q_min", p.q_min);
  p.capped = detail::json_get<bool>(j, "capped", p.capped);
  if (j.contains("values")) p.values = detail::json_rationals(j["values"], "psi.values");
  if (j.contains("support")) p.support = detail::json_table(j["support"], "psi.support");
  return p;
}

inline Json psi_json(const PsiSpec& p) {
  Json j;
  j["kind"] = p.kind;
  if (p.kind == "power") {
    j["c"] = to_string(p.c);
    j["exponent"] = to_string(p.exponent);
    j["q_min"] = p.q_min;
  }
  if (p.kind != "table") j["q_max"] = p.q_max;
  if (p.kind == "table") j["values"] = detail::rationals_json(p.values);
  if (p.kind == "sparse") j["support"] = detail::table_json(p.support);
  j["capped"] = p.capped;
  return j;
}

inline TargetSpec parse_target(const Json& j) {
  if (!j.is_object()) throw ConfigError("target: expected an object");
  TargetSpec t;
  t.kind = detail::json_get<std::string>(j, "kind", t.kind);
  if (j.contains("y")) {
    t.y = j["y"].is_array() ? detail::json_rationals(j["y"], "target.y")
                            : std::vector<Rational>{detail::json_rational(j["y"], "target.y")};
  }
  if (j.contains("a")) {
    const Json& a = j["a"];
    t.a = a.is_array() ? detail::json_get<IntVector>(j, "a", {}) : IntVector{detail::json_get<long long>(j, "a", 0)};
  }
  t.b = detail::json_get<long long>(j, "b", t.b);
  t.surrogate = detail::json_get<std::string>(j, "name", t.surrogate);
  if (j.contains("table")) t.table = detail::json_table(j["table"], "target.table");
  return t;
}

inline Json target_json(const TargetSpec& t) {
  Json j;
  j["kind"] = t.kind;
  if (t.kind == "rational") j["y"] = detail::rationals_json(t.y);
  if (t.kind == "pair") {
    j["a"] = t.a;
    j["b"] = t.b;
  }
  if (t.kind == "surrogate") j["name"] = t.surrogate;
  if (t.kind == "moving") j["table"] = detail::table_json(t.table);
  return j;
}

/// Checks the normalizations: psi values in [0, 1/2), coprime fixed pairs,
/// matching dimensions, increasing schedule.
inline void validate(const ExperimentConfig& c) {
  try {
    if (c.n < 1 || c.m < 1) throw ConfigError("dimension: n and m must be positive");
    (void)c.psi.build();
    const TargetScheme t = c.target.build();
    if (t.kind != TargetScheme::Kind::moving && t.m != c.m) throw ConfigError("target dimension differs from m");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
    for (long long q : c.cutoffs) {
      if (q < 1) throw ConfigError("Q cutoffs must be positive");
    }
    for (std::size_t i = 0; i < c.schedule.size(); ++i) {
      const auto& [q0, q1] = c.schedule[i];
      if (q0 < 1 || q1 < q0) throw ConfigError("schedule windows need 1 <= Q0 <= Q1");
      if (i > 0 && q0 <= c.schedule[i - 1].first) throw ConfigError("schedule must increase in Q0");
    }
    for (const auto& d : c.deltas) {
      if (d < 0 || d >= Rational(1, 2)) throw ConfigError("delta values must lie in [0, 1/2)");
    }
    for (const auto& tup : c.tuples) {
      if (tup.size() != 4) throw ConfigError("disjointness tuples are [d, e, q, r]");
    }
    for (long long d : c.moduli) {
      if (d == 0) throw ConfigError("moduli must be nonzero");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

inline ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  if (j.contains("dimension")) {
    const Json& d = j["dimension"];
    c.n = detail::json_get<int>(d, "n", c.n);
    c.m = detail::json_get<int>(d, "m", c.m);
  }
  if (j.contains("psi")) c.psi = parse_psi(j["psi"]);
  if (j.contains("target")) c.target = parse_target(j["target"]);
  if (j.contains("variant")) {
    try {
      c.variant = parse_variant(j["variant"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("variant: ") + e.what());
    }
  }
  c.cutoffs = detail::json_get<std::vector<long long>>(j, "Q", c.cutoffs);
  c.schedule = detail::json_get<std::vector<std::pair<long long, long long>>>(j, "schedule", c.schedule);
  c.samples = detail::json_get<std::uint64_t>(j, "samples", c.samples);
  c.seed = detail::json_get<std::uint64_t>(j, "seed", c.seed);
  c.out = detail::json_get<std::string>(j, "out", c.out);
  c.format = detail::json_get<std::string>(j, "format", c.format);
  c.moduli = detail::json_get<std::vector<long long>>(j, "moduli", c.moduli);
  if (j.contains("delta")) c.deltas = detail::json_rationals(j["delta"], "delta");
  c.tuples = detail::json_get<std::vector<std::vector<long long>>>(j, "tuples", c.tuples);
  if (j.contains("boxes")) {
    c.boxes.clear();
    for (const auto& box : j["boxes"]) {
      if (!box.is_array() || box.size() != 2) throw ConfigError("boxes: expected [a, b] pairs");
      c.boxes.emplace_back(detail::json_rational(box[0], "boxes"), detail::json_rational(box[1], "boxes"));
    }
  }
  c.dims = detail::json_get<std::vector<int>>(j, "dims", c.dims);
  c.max_modulus = detail::json_get<long long>(j, "max_modulus", c.max_modulus);
  validate(c);
  return c;
}

inline Json config_json(const ExperimentConfig& c) {
  Json j;
  j["dimension"] = {{"n", c.n}, {"m", c.m}};
  j["psi"] = psi_json(c.psi);
  j["target"] = target_json(c.target);
  j["variant"] = to_string(c.variant);
  j["Q"] = c.cutoffs;
  j["schedule"] = c.schedule;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  if (!c.out.empty()) j["out"] = c.out;
  j["format"] = c.format;
  j["moduli"] = c.moduli;
  j["delta"] = detail::rationals_json(c.deltas);
  j["tuples"] = c.tuples;
  Json boxes = Json::array();
  for (const auto& [a, b] : c.boxes) boxes.push_back({to_string(a), to_string(b)});
  j["boxes"] = boxes;
  j["dims"] = c.dims;
  j["max_modulus"] = c.max_modulus;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace kglab
