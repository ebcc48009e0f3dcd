#include "spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ffmop/error.hpp"

namespace ffmop::cli {

namespace {

double number(const json& j, const char* key, double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) throw DomainError(std::string("weight spec: missing field '") + key + "'");
    return fallback;
  }
  if (!j[key].is_number()) throw DomainError(std::string("weight spec: field '") + key + "' must be a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw DomainError(std::string("weight spec: field '") + key + "' must be finite");
  return v;
}

int bit(const json& j, const char* key) {
  const double v = number(j, key, 0.0, true);
  if (v != 0.0 && v != 1.0) throw DomainError(std::string("weight spec: field '") + key + "' must be 0 or 1");
  return static_cast<int>(v);
}

}  // namespace

AnySpec spec_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("weight spec: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw DomainError("weight spec: missing string field 'kind'");
  const std::string kind = j["kind"];
  if (kind != "mdt" && kind != "adt") throw DomainError("weight spec: kind must be \"mdt\" or \"adt\"");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "kind" && it.key() != "c" && it.key() != "s0" && it.key() != "strip_lo" && it.key() != "terms")
      throw DomainError("weight spec: unknown field '" + it.key() + "'");
  if (!j.contains("terms") || !j["terms"].is_array()) throw DomainError("weight spec: 'terms' must be an array");
  std::vector<WeightTerm> terms;
  for (const json& t : j["terms"]) {
    if (!t.is_object()) throw DomainError("weight spec: each term must be an object");
    for (auto it = t.begin(); it != t.end(); ++it)
      if (it.key() != "a_re" && it.key() != "a_im" && it.key() != "d1" && it.key() != "b" && it.key() != "d2")
        throw DomainError("weight spec: unknown term field '" + it.key() + "'");
    WeightTerm w;
    w.a = cplx(number(t, "a_re", 0.0), number(t, "a_im", 0.0));
    w.d1 = bit(t, "d1");
    w.b = number(t, "b", 0.0);
    w.d2 = bit(t, "d2");
    terms.push_back(w);
  }
  const double c = number(j, "c", 0.0, true);
  const double strip_lo = number(j, "strip_lo", 0.0);
  if (strip_lo < 0.0) throw DomainError("weight spec: strip_lo must be >= 0");
  if (kind == "mdt") {
    if (j.contains("s0")) throw DomainError("weight spec: s0 is only meaningful for adt specs");
    MDTWeightSpec s{c, terms, strip_lo};
    check_structure(s);
    return s;
  }
  ADTWeightSpec s{c, number(j, "s0", 0.0), terms, strip_lo};
  check_structure(s);
  return s;
}

json spec_to_json(const AnySpec& any) {
  json terms = json::array();
  auto add_terms = [&](const std::vector<WeightTerm>& ts) {
    for (const WeightTerm& t : ts)
      terms.push_back({{"a_re", t.a.real()}, {"a_im", t.a.imag()}, {"d1", t.d1}, {"b", t.b}, {"d2", t.d2}});
  };
  if (const auto* m = std::get_if<MDTWeightSpec>(&any)) {
    add_terms(m->terms);
    return {{"kind", "mdt"}, {"c", m->c}, {"strip_lo", m->strip_lo}, {"terms", terms}};
  }
  const auto& a = std::get<ADTWeightSpec>(any);
  add_terms(a.terms);
  return {{"kind", "adt"}, {"c", a.c}, {"s0", a.s0}, {"strip_lo", a.strip_lo}, {"terms", terms}};
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(what + ": invalid JSON (" + e.what() + ")");
  }
}

AnySpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open weight spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json(parse_json_text(ss.str(), "weight spec '" + path + "'"));
}

Poly poly_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("polynomial: expected a JSON array of coefficients");
  std::vector<double> c;
  for (const json& v : j) {
    if (!v.is_number()) throw DomainError("polynomial: coefficients must be numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw DomainError("polynomial: coefficients must be finite");
    c.push_back(x);
  }
  return Poly(c);
}

json poly_to_json(const Poly& p) {
  json a = json::array();
  for (double c : p.coeffs()) a.push_back(c);
  if (p.is_zero()) a.push_back(0.0);
  return a;
}

}  // namespace ffmop::cli
