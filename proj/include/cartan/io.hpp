#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/check.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/random.hpp"

namespace cartan {

using json = nlohmann::ordered_json;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

/// Parses JSON text; syntax errors become input_error naming the byte offset.
inline json parse_json_text(const std::string& text, const std::string& origin = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

/// A groupoid (and cocycle) read from a file, with every problem found while
/// reading or validating. `problems` is empty iff both are valid.
struct LoadedGroupoid {
  FiniteGroupoid groupoid;
  Cocycle cocycle;
  ValidationReport problems;

  [[nodiscard]] bool ok() const { return problems.ok(); }
};

namespace detail {

inline const json& require_key(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw input_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

inline std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw input_error(what + " must be a string");
  return j.get<std::string>();
}

inline std::pair<std::string, std::string> split_pair(const std::string& key) {
  const auto bar = key.find('|');
  if (bar == std::string::npos || key.find('|', bar + 1) != std::string::npos)
    throw input_error("pair key '" + key + "' must have the form \"g|h\"");
  return {key.substr(0, bar), key.substr(bar + 1)};
}

inline Phase parse_phase(const json& j, const std::string& where) {
  const json& t = require_key(j, "turns");
  if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer())
    throw input_error(where + ": turns must be [p, q] with integers");
  const auto q = t[1].get<std::int64_t>();
  if (q <= 0) throw input_error(where + ": turns denominator must be positive");
  return {t[0].get<std::int64_t>(), q};
}

}  // namespace detail

/// Reads the groupoid file format. Structural problems (wrong JSON types,
/// duplicate ids) throw input_error; table inconsistencies and unknown ids
/// are collected in `problems`, followed by the groupoid axioms and, when
/// the groupoid is valid, the cocycle identity.
inline LoadedGroupoid parse_groupoid_json(const json& j) {
  using detail::as_string;
  using detail::require_key;
  if (!j.is_object()) throw input_error("groupoid document must be a JSON object");
  const json& elems = require_key(j, "elements");
  if (!elems.is_array()) throw input_error("'elements' must be an array");
  std::vector<std::string> names;
  for (const auto& e : elems) names.push_back(as_string(e, "element id"));
  const std::size_t n = names.size();
  if (n == 0) throw input_error("'elements' is empty");
  if (n > kMaxElements) throw input_error("more than 64 elements");
  std::map<std::string, Elem> index;
  for (Elem i = 0; i < n; ++i)
    if (!index.emplace(names[i], i).second) throw input_error("duplicate element id '" + names[i] + "'");

  LoadedGroupoid out;
  auto& probs = out.problems.violations;
  auto lookup = [&](const std::string& id, const std::string& where) {
    auto it = index.find(id);
    if (it == index.end()) {
      probs.push_back({"unknown element id in " + where, {id}});
      return kNoElem;
    }
    return it->second;
  };

  std::vector<bool> unit(n, false);
  const json& units = require_key(j, "units");
  if (!units.is_array()) throw input_error("'units' must be an array");
  for (const auto& u : units)
    if (Elem x = lookup(as_string(u, "unit id"), "units"); x != kNoElem) unit[x] = true;

  auto read_map = [&](const char* key) {
    std::vector<Elem> v(n, kNoElem);
    const json& m = require_key(j, key);
    if (!m.is_object()) throw input_error(std::string("'") + key + "' must be an object");
    for (const auto& [k, val] : m.items()) {
      const Elem x = lookup(k, key);
      const Elem y = lookup(as_string(val, std::string(key) + " value"), key);
      if (x != kNoElem) v[x] = y;
    }
    return v;
  };
  auto src = read_map("source");
  auto rng = read_map("range");
  auto inv = read_map("inverse");

  std::vector<Elem> comp(n * n, kNoElem);
  const json& cm = require_key(j, "compose");
  if (!cm.is_object()) throw input_error("'compose' must be an object");
  for (const auto& [k, val] : cm.items()) {
    const auto [a, b] = detail::split_pair(k);
    const Elem x = lookup(a, "compose"), y = lookup(b, "compose");
    const Elem z = lookup(as_string(val, "compose value"), "compose");
    if (x != kNoElem && y != kNoElem) comp[x * n + y] = z;
  }

  Cocycle coc(n);
  std::vector<std::pair<Elem, Elem>> cocycle_keys;
  if (j.contains("cocycle")) {
    const json& cj = j.at("cocycle");
    if (!cj.is_object()) throw input_error("'cocycle' must be an object");
    for (const auto& [k, val] : cj.items()) {
      const auto [a, b] = detail::split_pair(k);
      const Elem x = lookup(a, "cocycle"), y = lookup(b, "cocycle");
      const Phase p = detail::parse_phase(val, "cocycle entry '" + k + "'");
      if (x != kNoElem && y != kNoElem) {
        coc.set(x, y, p);
        cocycle_keys.emplace_back(x, y);
      }
    }
  }

  out.groupoid = FiniteGroupoid(std::move(names), std::move(unit), std::move(src), std::move(rng), std::move(inv),
                                std::move(comp));
  out.cocycle = std::move(coc);
  const auto gv = validate_groupoid(out.groupoid);
  probs.insert(probs.end(), gv.violations.begin(), gv.violations.end());
  if (out.problems.ok()) {
    for (auto [x, y] : cocycle_keys)
      if (!out.groupoid.composable(x, y))
        probs.push_back({"cocycle entry on non-composable pair", {out.groupoid.name(x), out.groupoid.name(y)}});
    const auto cv = validate_cocycle(out.groupoid, out.cocycle);
    probs.insert(probs.end(), cv.violations.begin(), cv.violations.end());
  }
  return out;
}

inline LoadedGroupoid load_groupoid_text(const std::string& text, const std::string& origin = "input") {
  return parse_groupoid_json(parse_json_text(text, origin));
}

inline LoadedGroupoid load_groupoid_file(const std::string& path) {
  return load_groupoid_text(read_text_file(path), path);
}

inline json phase_to_json(const Phase& p) { return json{{"turns", {p.num(), p.den()}}}; }

/// Groupoid file document; cocycle entries equal to 1 are omitted.
inline json groupoid_to_json(const FiniteGroupoid& g, const Cocycle* c = nullptr) {
  json j;
  j["elements"] = g.names();
  json units = json::array();
  for (Elem u : g.units()) units.push_back(g.name(u));
  j["units"] = units;
  json src = json::object(), rng = json::object(), inv = json::object(), comp = json::object();
  for (Elem x = 0; x < g.size(); ++x) {
    src[g.name(x)] = g.name(g.source(x));
    rng[g.name(x)] = g.name(g.range(x));
    inv[g.name(x)] = g.name(g.inverse(x));
  }
  for (Elem x = 0; x < g.size(); ++x)
    for (Elem y = 0; y < g.size(); ++y)
      if (g.composable(x, y)) comp[g.name(x) + "|" + g.name(y)] = g.name(g.compose(x, y));
  j["source"] = src;
  j["range"] = rng;
  j["inverse"] = inv;
  j["compose"] = comp;
  if (c) {
    json cj = json::object();
    for (Elem x = 0; x < g.size(); ++x)
      for (Elem y = 0; y < g.size(); ++y)
        if (g.composable(x, y) && !c->at(x, y).is_one()) cj[g.name(x) + "|" + g.name(y)] = phase_to_json(c->at(x, y));
    j["cocycle"] = cj;
  }
  return j;
}

inline json violations_to_json(const ValidationReport& rep) {
  json arr = json::array();
  for (const auto& v : rep.violations) arr.push_back(json{{"axiom", v.axiom}, {"witness", v.witness}});
  return arr;
}

/// `{"coeffs": {"<element>": [re, im], ...}}` over the support.
inline json element_to_json(const AlgebraElement& a) {
  json coeffs = json::object();
  for_each_bit(a.support(), [&](Elem g) {
    coeffs[a.context()->groupoid().name(g)] = {a[g].real(), a[g].imag()};
  });
  return json{{"coeffs", coeffs}};
}

inline AlgebraElement element_from_json(const ContextPtr& ctx, const json& j) {
  const json& coeffs = detail::require_key(j, "coeffs");
  if (!coeffs.is_object()) throw input_error("'coeffs' must be an object");
  AlgebraElement a(ctx);
  for (const auto& [id, v] : coeffs.items()) {
    const auto g = ctx->groupoid().find(id);
    if (!g) throw input_error("unknown element id '" + id + "'");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw input_error("coefficient of '" + id + "' must be [re, im]");
    a[*g] = Complex(v[0].get<double>(), v[1].get<double>());
  }
  return a;
}

/// Bisection basis file `{"bisections": [["g","h"], ...]}`. Unknown ids throw;
/// closure conditions are checked by SemigroupSpec::basis_restricted.
inline std::vector<Support> basis_from_json(const FiniteGroupoid& g, const json& j) {
  const json& arr = detail::require_key(j, "bisections");
  if (!arr.is_array()) throw input_error("'bisections' must be an array");
  std::vector<Support> out;
  for (const auto& b : arr) {
    if (!b.is_array()) throw input_error("each bisection must be an array of element ids");
    Support s = 0;
    for (const auto& id : b) {
      const auto x = g.find(detail::as_string(id, "bisection member"));
      if (!x) throw input_error("unknown element id '" + id.get<std::string>() + "' in basis");
      s |= bit(*x);
    }
    out.push_back(s);
  }
  return out;
}

inline json basis_to_json(const FiniteGroupoid& g, const std::vector<Support>& basis) {
  json arr = json::array();
  for (Support s : basis) arr.push_back(g.ids_of(s));
  return json{{"bisections", arr}};
}

inline json check_to_json(const PropertyCheck& c) {
  return json{{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"residual", c.residual},
              {"witness", c.witness}};
}

}  // namespace cartan
