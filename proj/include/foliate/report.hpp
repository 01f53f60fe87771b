#pragma once

#include "foliate/deform.hpp"
#include "foliate/homog.hpp"
#include "foliate/parse.hpp"
#include "foliate/singloc.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliate::report {

using Json = nlohmann::ordered_json;

/// Typed witness entry. Values are strings in the input grammar so that
/// they can be fed back through the parser.
inline Json entry(const Witness& w) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, Poly>) {
          j["type"] = "poly";
          j["n"] = v.nvars();
          j["value"] = v.str();
        } else if constexpr (std::is_same_v<T, PForm>) {
          j["type"] = "form";
          j["n"] = v.nvars();
          j["degree"] = v.degree();
          j["value"] = v.str();
        } else if constexpr (std::is_same_v<T, VField>) {
          j["type"] = "field";
          j["n"] = v.nvars();
          j["value"] = v.str();
        } else if constexpr (std::is_same_v<T, PolyMap>) {
          j["type"] = "map";
          j["n"] = v.source();
          j["target"] = v.target();
          j["value"] = v.str();
        } else if constexpr (std::is_same_v<T, Rational>) {
          j["type"] = "rational";
          j["value"] = v.str();
        } else if constexpr (std::is_same_v<T, std::vector<Rational>>) {
          j["type"] = "rationals";
          j["value"] = Json::array();
          for (const auto& r : v) j["value"].push_back(r.str());
        } else {
          j["type"] = "text";
          j["value"] = v;
        }
        return j;
      },
      w);
}

inline Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

inline std::vector<Rational> parse_rationals(const Json& a) {
  std::vector<Rational> out;
  for (const auto& s : a) out.push_back(Rational::parse(s.get<std::string>()));
  return out;
}

inline Witness decode(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "rational") return Rational::parse(j.at("value").get<std::string>());
  if (type == "rationals") return parse_rationals(j.at("value"));
  if (type == "text") return j.at("value").get<std::string>();
  if (type != "poly" && type != "form" && type != "field" && type != "map")
    throw std::invalid_argument("unknown witness type '" + type + "'");
  const int n = j.at("n").get<int>();
  const std::string value = j.at("value").get<std::string>();
  if (type == "poly") return parse_poly(value, n);
  if (type == "form") return parse_form(value, n, j.at("degree").get<int>());
  if (type == "map") {
    PolyMap m(n, parse_poly_list(value, n));
    if (m.target() != j.at("target").get<int>()) throw std::invalid_argument("map witness: target arity mismatch");
    return m;
  }
  return VField(parse_poly_list(value, n));
}

/// Report document with a fixed key order.
class Report {
public:
  Report(const std::string& command, Json args) {
    doc_["command"] = command;
    doc_["args"] = std::move(args);
    doc_["status"] = "verified";
    doc_["verdicts"] = Json::object();
    doc_["witnesses"] = Json::object();
    doc_["claims"] = Json::array();
    doc_["certificates"] = Json::object();
    doc_["bounds"] = Json::object();
  }

  void status(const std::string& s) { doc_["status"] = s; }
  std::string status() const { return doc_["status"].get<std::string>(); }
  void verdict(const std::string& key, Json v) { doc_["verdicts"][key] = std::move(v); }
  void witness(const std::string& name, const Witness& w) { doc_["witnesses"][name] = entry(w); }
  void claim(Json c) { doc_["claims"].push_back(std::move(c)); }
  void certificate(const std::string& key, Json v) { doc_["certificates"][key] = std::move(v); }
  void bound(const std::string& key, Json v) { doc_["bounds"][key] = std::move(v); }
  void timing(double ms) { doc_["timing_ms"] = ms; }
  void section(const std::string& key, Json v) { doc_[key] = std::move(v); }

  const Json& json() const { return doc_; }

private:
  Json doc_;
};

/// Re-checks the claims of a report against its decoded witnesses.
class Verifier {
public:
  explicit Verifier(const Json& report) {
    if (!report.contains("witnesses") || !report.contains("claims")) throw std::invalid_argument("report lacks witnesses or claims");
    for (const auto& [name, e] : report.at("witnesses").items()) w_.emplace(name, decode(e));
  }

  struct Result {
    std::string check;
    bool ok;
    std::string error;
  };

  Result run(const Json& c) const {
    const std::string kind = c.at("check").get<std::string>();
    try {
      return {kind, eval(kind, c), ""};
    } catch (const std::exception& e) {
      return {kind, false, e.what()};
    }
  }

private:
  std::map<std::string, Witness> w_;

  const Witness& at(const Json& name) const {
    const std::string key = name.get<std::string>();
    auto it = w_.find(key);
    if (it == w_.end()) throw std::invalid_argument("unknown witness '" + key + "'");
    return it->second;
  }

  template <class T>
  const T& get(const Json& name) const {
    const Witness& w = at(name);
    if (!std::holds_alternative<T>(w)) throw std::invalid_argument("witness '" + name.get<std::string>() + "' has the wrong type");
    return std::get<T>(w);
  }

  PForm form(const Json& name) const {
    const Witness& w = at(name);
    if (auto p = std::get_if<Poly>(&w)) return PForm(*p);
    return get<PForm>(name);
  }

  // Scale factor: a rational or a polynomial witness.
  PForm scaled(const PForm& a, const Json& c) const {
    if (!c.contains("scale")) return a;
    const Witness& s = at(c["scale"]);
    if (auto r = std::get_if<Rational>(&s)) return a * *r;
    return a * get<Poly>(c["scale"]);
  }

  // lhs == equals (or zero when absent), after scaling equals.
  bool equals(const PForm& lhs, const Json& c) const {
    if (!c.contains("equals")) return lhs.is_zero();
    return scaled(form(c["equals"]), c) == lhs;
  }

  // Sum over terms of wedge products; "d:name" is the differential of a witness.
  PForm wedge_sum(const Json& terms) const {
    std::optional<PForm> total;
    for (const auto& term : terms) {
      Rational coeff(1);
      std::optional<PForm> acc;
      for (const auto& tok : term) {
        const std::string t = tok.get<std::string>();
        PForm f(1, 0);
        if (t.rfind("d:", 0) == 0) {
          f = ext_d(form(Json(t.substr(2))));
        } else if (auto r = std::get_if<Rational>(&at(tok))) {
          coeff *= *r;
          continue;
        } else {
          f = form(tok);
        }
        acc = acc ? wedge(*acc, f) : f;
      }
      if (!acc) throw std::invalid_argument("wedge_sum: term without a form factor");
      PForm v = *acc * coeff;
      total = total ? *total + v : v;
    }
    if (!total) throw std::invalid_argument("wedge_sum: no terms");
    return *total;
  }

  bool eval(const std::string& kind, const Json& c) const {
    if (kind == "wedge_sum") return equals(wedge_sum(c.at("terms")), c);
    if (kind == "exterior_derivative") return equals(ext_d(form(c.at("form"))), c);
    if (kind == "interior") {
      PForm v = c.at("form") == "volume" ? PForm::volume(get<VField>(c.at("fields").front()).nvars()) : form(c.at("form"));
      const auto& fields = c.at("fields");
      for (auto it = fields.rbegin(); it != fields.rend(); ++it) v = interior(get<VField>(*it), v);
      return equals(v, c);
    }
    if (kind == "rotational") return contract_volume(get<VField>(c.at("field"))) == ext_d(form(c.at("form")));
    if (kind == "contraction_vanishes")
      return interior(get<VField>(c.at("field")), form(c.at("form"))).is_zero() == c.at("expected").get<bool>();
    if (kind == "pullback") return equals(pullback(get<PolyMap>(c.at("map")), form(c.at("form"))), c);
    if (kind == "integrating_factor") {
      const Poly& p = get<Poly>(c.at("factor"));
      const PForm w = form(c.at("form"));
      return !p.is_zero() && ext_d(w) * p == wedge(d(p), w);
    }
    if (kind == "integrable") {
      const PForm w = form(c.at("form"));
      bool v = w.degree() == 1 ? frobenius_integrable1(w) : is_integrable2(w);
      return v == c.at("expected").get<bool>();
    }
    if (kind == "decomposable") return is_decomposable2(form(c.at("form"))) == c.at("expected").get<bool>();
    if (kind == "line_in_sing") return line_in_sing_check(form(c.at("form")), get<std::vector<Rational>>(c.at("direction")));
    if (kind == "common_zeros") {
      std::vector<std::vector<Rational>> want;
      for (const auto& p : c.at("points")) want.push_back(parse_rationals(p));
      return projective_point_scan(singular_ideal(form(c.at("form"))), c.at("height").get<long>()) == want;
    }
    if (kind == "bracket") {
      const VField& y = get<VField>(c.at("left"));
      VField x = get<VField>(c.at("right"));
      x *= get<Rational>(c.at("scale"));
      return bracket(y, get<VField>(c.at("right"))) == x;
    }
    if (kind == "invariant_hyperplane") return invariant_hyperplane(form(c.at("form")), get<Poly>(c.at("poly")));
    if (kind == "kupka") return kupka_point(form(c.at("form")), get<std::vector<Rational>>(c.at("point")));
    if (kind == "divergence") return get<VField>(c.at("field")).divergence() == get<Poly>(c.at("equals"));
    if (kind == "spectrum") {
      auto m = get<VField>(c.at("field")).linear_matrix();
      if (!m) return false;
      uni::UPoly prod{Rational(1)};
      for (const auto& v : get<std::vector<Rational>>(c.at("values"))) {
        uni::UPoly next(prod.size() + 1, Rational(0));
        for (size_t k = 0; k < prod.size(); ++k) {
          next[k + 1] += prod[k];
          next[k] -= prod[k] * v;
        }
        prod = next;
      }
      return m->charpoly() == prod;
    }
    if (kind == "relation") {
      Rational s(0);
      for (const auto& t : c.at("terms")) s += Rational::parse(t.at(0).get<std::string>()) * get<Rational>(t.at(1));
      return s == Rational::parse(c.at("equals").get<std::string>());
    }
    if (kind == "sum_zero") {
      Rational s(0);
      for (const auto& v : get<std::vector<Rational>>(c.at("values"))) s += v;
      return s.is_zero();
    }
    if (kind == "log_primitive") {
      std::vector<Poly> fs;
      for (const auto& f : c.at("polys")) fs.push_back(get<Poly>(f));
      return log_primitive(fs, get<std::vector<Rational>>(c.at("weights"))) == form(c.at("equals"));
    }
    if (kind == "component") {
      const std::string tag = c.at("tag").get<std::string>();
      ComponentData data;
      for (const auto& p : c.at("polys")) data.polys.push_back(get<Poly>(p));
      if (c.contains("weights")) data.weights = get<std::vector<Rational>>(c["weights"]);
      for (Component k : {Component::R22, Component::R13, Component::L1111, Component::L112, Component::E, Component::S2n})
        if (component_name(k) == tag) return verify_component(form(c.at("form")), k, data);
      throw std::invalid_argument("unknown component '" + tag + "'");
    }
    if (kind == "series_residual") {
      auto forms = [&](const Json& names) {
        std::vector<PForm> out;
        for (const auto& s : names) out.push_back(form(s));
        return out;
      };
      FormFamily fam{forms(c.at("eta"))};
      return family_square_zero_check(fam) && family_residual_zero(fam, {forms(c.at("alpha")), forms(c.at("beta"))});
    }
    if (kind == "quadric_residual") {
      auto q = quadric_map(form(c.at("form")));
      const auto& n = c.at("coefficients");
      return q.a == get<Poly>(n.at(0)) && q.b == get<Poly>(n.at(1)) && q.c == get<Poly>(n.at(2)) &&
             q.e == get<Poly>(n.at(3)) && q.f == get<Poly>(n.at(4)) && q.g == get<Poly>(n.at(5)) && q.residual.is_zero();
    }
    throw std::invalid_argument("unknown check '" + kind + "'");
  }
};

inline void render_value(std::ostream& os, const Json& v) {
  if (v.is_string())
    os << v.get<std::string>();
  else
    os << v.dump();
}

/// Human-readable rendering of a report.
inline std::string to_text(const Json& doc) {
  std::ostringstream os;
  os << "command: " << doc.at("command").get<std::string>() << '\n';
  os << "status: " << doc.at("status").get<std::string>() << '\n';
  auto section = [&](const char* key) {
    if (!doc.contains(key) || doc[key].empty()) return;
    os << key << ":\n";
    for (const auto& [k, v] : doc[key].items()) {
      os << "  " << k << ": ";
      render_value(os, v);
      os << '\n';
    }
  };
  section("verdicts");
  if (!doc.at("witnesses").empty()) {
    os << "witnesses:\n";
    for (const auto& [k, v] : doc["witnesses"].items()) {
      os << "  " << k << " = ";
      render_value(os, v.at("value"));
      os << '\n';
    }
  }
  if (!doc.at("claims").empty()) {
    os << "claims:\n";
    for (const auto& c : doc["claims"]) os << "  " << c.dump() << '\n';
  }
  section("certificates");
  section("bounds");
  if (doc.contains("results")) {
    os << "results:\n";
    for (const auto& r : doc["results"]) {
      os << "  " << r.at("check").get<std::string>() << ": " << (r.at("ok").get<bool>() ? "ok" : "FAILED");
      if (r.contains("error")) os << " (" << r["error"].get<std::string>() << ')';
      os << '\n';
    }
  }
  if (doc.contains("timing_ms")) os << "timing_ms: " << doc["timing_ms"].dump() << '\n';
  return os.str();
}

}  // namespace foliate::report
