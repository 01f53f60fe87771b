#include "foliate/fixtures.hpp"
#include "foliate/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace foliate;
using report::Json;
using report::Report;

namespace {

struct Options {
  int n = 4;
  std::vector<std::string> forms;
  std::string fixture;
  long height = 10;
  int dmax = -1;
  int order = -1;
  int degree = 3;
  bool json = false;
  bool timing = false;
  std::string rho = "3/2";
  std::string lambda = "1";
  std::string alpha0, beta0, field;
  std::string report_path;
  std::string mode;
};

Json names(std::vector<std::string> v) { return Json(std::move(v)); }

Json terms(std::initializer_list<std::vector<std::string>> ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(names(t));
  return a;
}

Json claim(const std::string& kind, Json fields = Json::object()) {
  Json c;
  c["check"] = kind;
  for (auto& [k, v] : fields.items()) c[k] = v;
  return c;
}

/// Text of `arg`: "@path" or an existing path is read, with `#` comments removed.
std::string read_source(const std::string& arg) {
  std::string path;
  if (!arg.empty() && arg.front() == '@')
    path = arg.substr(1);
  else if (std::filesystem::is_regular_file(arg))
    path = arg;
  if (path.empty()) return arg;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::string line, out;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    out += line + ' ';
  }
  return out;
}

Rational rational_flag(const std::string& s, const char* name) {
  try {
    return Rational::parse(s);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("--") + name + ": expected a rational, got '" + s + "'");
  }
}

PForm fixture_form(const Options& o) {
  const std::string& f = o.fixture;
  if (f == "kn-theta") return fixtures::kn_theta();
  if (f == "log-example") return fixtures::log_fixture();
  if (f == "case-a") return case_a_log_data(fixtures::case_a_lambda(), fixtures::case_a_mu()).eta;
  if (f == "case-b") return case_b_normal_data(rational_flag(o.rho, "rho"), rational_flag(o.lambda, "lambda")).eta;
  if (f == "pencil") return fixtures::pencil().omega;
  for (const auto& [name, eta] : fixtures::corpus())
    if (name == f) return eta;
  throw std::invalid_argument("unknown fixture '" + f + "'");
}

PForm input_form(const Options& o, size_t index = 0, std::optional<int> degree = std::nullopt) {
  PForm w = [&] {
    if (!o.fixture.empty()) {
      if (index != 0) throw std::invalid_argument("a fixture supplies a single form");
      return fixture_form(o);
    }
    if (index >= o.forms.size()) throw std::invalid_argument("missing --form");
    return parse_form(read_source(o.forms[index]), o.n, degree);
  }();
  if (degree && w.degree() != *degree)
    throw std::invalid_argument("expected a " + std::to_string(*degree) + "-form, got degree " + std::to_string(w.degree()));
  return w;
}

int dmax_or(const Options& o, int fallback) { return o.dmax >= 0 ? o.dmax : fallback; }

// ---------------------------------------------------------------- check

void add_decomposition(Report& rep, const PForm& eta, const std::string& target) {
  auto w = mero_decompose(eta);
  rep.witness("z1", w.z1);
  rep.witness("z2", w.z2);
  rep.witness("pivot", w.pivot);
  rep.witness("omega1", w.omega1.num);
  rep.witness("omega2", w.omega2);
  rep.claim(claim("wedge_sum", {{"terms", terms({{"omega1", "omega2"}})}, {"equals", target}, {"scale", "pivot"}}));
  rep.claim(claim("interior", {{"fields", names({"z1"})}, {"form", target}, {"equals", "omega1"}}));
  rep.claim(claim("interior", {{"fields", names({"z2"})}, {"form", target}, {"equals", "omega2"}}));
}

void add_rotational(Report& rep, const PForm& eta) {
  VField x = rotational4(eta);
  const bool vanishes = interior(x, eta).is_zero();
  rep.witness("X", x);
  rep.claim(claim("rotational", {{"field", "X"}, {"form", "eta"}}));
  rep.claim(claim("contraction_vanishes", {{"field", "X"}, {"form", "eta"}, {"expected", vanishes}}));
  rep.verdict("rotational_zero", x.is_zero());
  rep.verdict("rotational_contraction_zero", vanishes);
}

void cmd_check_form(const Options& o, Report& rep) {
  const PForm eta = input_form(o);
  const int p = eta.degree();
  rep.witness("eta", eta);
  rep.verdict("degree", p);
  auto h = eta.homogeneity();
  rep.verdict("homogeneous", h.homogeneous() ? Json(h.degree) : Json(false));
  const bool closed = ext_d(eta).is_zero();
  rep.verdict("closed", closed);
  if (closed) rep.claim(claim("exterior_derivative", {{"form", "eta"}}));
  if (p == 2) {
    const bool dec = is_decomposable2(eta);
    rep.verdict("decomposable", dec);
    rep.claim(claim("decomposable", {{"form", "eta"}, {"expected", dec}}));
    if (dec && !eta.is_zero()) add_decomposition(rep, eta, "eta");
    const bool integ = is_integrable2(eta);
    rep.verdict("integrable", integ);
    rep.claim(claim("integrable", {{"form", "eta"}, {"expected", integ}}));
    if (eta.nvars() == 4) {
      rep.verdict("integrable_rotational_criterion", is_integrable2_C4(eta));
      add_rotational(rep, eta);
    }
  } else if (p == 1) {
    const bool integ = frobenius_integrable1(eta);
    rep.verdict("integrable", integ);
    rep.claim(claim("integrable", {{"form", "eta"}, {"expected", integ}}));
  }
  if (p >= 1) {
    const bool dic = interior(radial(eta.nvars()), eta).is_zero();
    rep.witness("R", radial(eta.nvars()));
    rep.verdict("dicritical", dic);
    rep.claim(claim("contraction_vanishes", {{"field", "R"}, {"form", "eta"}, {"expected", dic}}));
  }
}

Json read_report(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    buf << in.rdbuf();
  }
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
  }
}

/// Re-verifies every claim of a saved report from its witness strings.
void cmd_check_report(const Options& o, Report& rep) {
  const Json doc = read_report(o.report_path);
  report::Verifier v(doc);
  Json results = Json::array();
  size_t passed = 0;
  for (const auto& c : doc.at("claims")) {
    auto r = v.run(c);
    Json j;
    j["check"] = r.check;
    j["ok"] = r.ok;
    if (!r.error.empty()) j["error"] = r.error;
    results.push_back(j);
    passed += r.ok;
  }
  rep.verdict("source_command", doc.value("command", ""));
  rep.verdict("witnesses", doc.at("witnesses").size());
  rep.verdict("claims", results.size());
  rep.verdict("passed", passed);
  rep.section("results", results);
  if (passed != results.size()) rep.status("failed");
}

// ------------------------------------------------------------ operations

void cmd_decompose(const Options& o, Report& rep) {
  const PForm eta = input_form(o, 0, 2);
  rep.witness("eta", eta);
  const bool dec = is_decomposable2(eta);
  rep.verdict("decomposable", dec);
  rep.claim(claim("decomposable", {{"form", "eta"}, {"expected", dec}}));
  if (dec && !eta.is_zero()) add_decomposition(rep, eta, "eta");
}

void cmd_rotational(const Options& o, Report& rep) {
  const PForm eta = input_form(o, 0, 2);
  require_arity(eta, 4, "rotational");
  rep.witness("eta", eta);
  add_rotational(rep, eta);
  const bool integ = is_integrable2_C4(eta);
  rep.verdict("integrable", integ);
  rep.claim(claim("integrable", {{"form", "eta"}, {"expected", integ}}));
}

void cmd_intersect(const Options& o, Report& rep) {
  if (!o.fixture.empty()) throw std::invalid_argument("intersect takes --form arguments");
  std::vector<PForm> ws;
  for (size_t i = 0; i < o.forms.size(); ++i) ws.push_back(input_form(o, i, 1));
  if (ws.empty()) throw std::invalid_argument("missing --form");
  auto r = complete_intersection(ws);
  std::vector<std::string> factors;
  for (size_t i = 0; i < ws.size(); ++i) {
    const std::string name = "omega" + std::to_string(i + 1);
    rep.witness(name, ws[i]);
    rep.claim(claim("integrable", {{"form", name}, {"expected", true}}));
    factors.push_back(name);
  }
  rep.witness("f", r.f);
  rep.witness("eta", r.eta);
  Json t = Json::array();
  t.push_back(names(factors));
  rep.claim(claim("wedge_sum", {{"terms", t}, {"equals", "eta"}, {"scale", "f"}}));
  rep.verdict("complete", r.complete);
}

void classify_claims(Report& rep, const ClassificationReport& c, const PForm& eta) {
  const std::string& b = c.branch;
  const int n = eta.nvars();
  auto has = [&](const char* k) { return c.find(k) != nullptr; };
  if (b == "darboux") {
    rep.witness("volume2", PForm::volume(2));
    rep.claim(claim("pullback", {{"map", "phi"}, {"form", "volume2"}, {"equals", "eta"}}));
  } else if (b == "linear vector field") {
    rep.witness("one", Poly::constant(3, Rational(1)));
    rep.claim(claim("pullback", {{"map", "phi"}, {"form", "reduced_eta"}, {"equals", "eta"}}));
    rep.claim(claim("interior", {{"fields", names({"L"})}, {"form", "volume"}, {"equals", "reduced_eta"}}));
    rep.claim(claim("divergence", {{"field", "L"}, {"equals", "one"}}));
  } else if (b == "L·Q") {
    rep.claim(claim("wedge_sum", {{"terms", terms({{"d:L", "d:Q"}})}, {"equals", "eta"}}));
    rep.claim(claim("exterior_derivative", {{"form", "omega"}, {"equals", "eta"}}));
    rep.claim(claim("integrating_factor", {{"factor", "P"}, {"form", "omega"}}));
  } else if (b == "x1x2x3 logarithmic") {
    rep.claim(claim("log_primitive", {{"polys", names({"L1", "L2", "L3"})}, {"weights", "lambda"}, {"equals", "omega"}}));
    rep.claim(claim("sum_zero", {{"values", "lambda"}}));
    rep.claim(claim("exterior_derivative", {{"form", "omega"}, {"equals", "eta"}}));
    rep.claim(claim("integrating_factor", {{"factor", "P"}, {"form", "omega"}}));
  } else if (has("components")) {
    rep.claim(claim("exterior_derivative", {{"form", "omega"}, {"equals", "eta"}}));
    if (has("integrating_factor")) rep.claim(claim("integrating_factor", {{"factor", "integrating_factor"}, {"form", "omega"}}));
    const std::vector<std::pair<std::string, std::vector<std::string>>> layout{
        {"R(2,2)", {"P", "Q"}}, {"R(1,3)", {"L", "C"}}, {"L(1,1,1,1)", {"L1", "L2", "L3", "L4"}}, {"L(1,1,2)", {"L1", "L2", "Q"}}};
    for (const auto& [tag, keys] : layout) {
      if (!has((tag + "." + keys[0]).c_str())) continue;
      std::vector<std::string> ps;
      for (const auto& k : keys) ps.push_back(tag + "." + k);
      Json j{{"tag", tag}, {"form", "eta"}, {"polys", names(ps)}};
      if (has((tag + ".weights").c_str())) j["weights"] = tag + ".weights";
      rep.claim(claim("component", j));
    }
    const std::string tags = c.get<std::string>("components");
    if (tags.find("E(n-1)") != std::string::npos)
      rep.claim(claim("component", {{"tag", "E(n-1)"}, {"form", "eta"}, {"polys", Json::array()}}));
    if (has("S(2,n).phi")) {
      auto x = [](int i) { return d(Poly::var(3, i)); };
      const PForm e3 = wedge(d(c.get<Poly>("S(2,n).P")), x(0)) + wedge(d(c.get<Poly>("S(2,n).Q")), x(1)) +
                       wedge(d(c.get<Poly>("S(2,n).R")), x(2));
      rep.witness("S(2,n).reduced_eta", e3);
      rep.claim(claim("component",
                      {{"tag", "S(2,n)"}, {"form", "S(2,n).reduced_eta"}, {"polys", names({"S(2,n).P", "S(2,n).Q", "S(2,n).R"})}}));
      rep.claim(claim("pullback", {{"map", "S(2,n).phi"}, {"form", "S(2,n).reduced_eta"}, {"equals", "eta"}}));
    }
  } else if (b == "dicritical") {
    rep.witness("R", radial(n));
    rep.witness("four", Rational(4));
    rep.claim(claim("rotational", {{"field", "X"}, {"form", "eta"}}));
    rep.claim(claim("interior", {{"fields", names({"R", "X"})}, {"form", "volume"}, {"equals", "eta"}, {"scale", "four"}}));
  } else if (b == "commuting" || b == "nilpotent" || b == "nilpotent commuting") {
    rep.claim(claim("rotational", {{"field", "X"}, {"form", "eta"}}));
    rep.claim(claim("interior", {{"fields", names({"Y", "X"})}, {"form", "volume"}, {"equals", "eta"}}));
    rep.claim(claim("bracket", {{"left", "Y"}, {"right", "X"}, {"scale", "lambda"}}));
    if (b == "nilpotent") {
      rep.claim(claim("spectrum", {{"field", "Y"}, {"values", "spectrum"}}));
      rep.claim(claim("relation", {{"terms", Json::array({Json::array({"4", "rho"}), Json::array({"-5", "lambda"})})}, {"equals", "1"}}));
      rep.claim(claim("relation", {{"terms", Json::array({Json::array({"6", "A"}), Json::array({"-1", "rho"})})}, {"equals", "0"}}));
      rep.claim(claim("relation", {{"terms", Json::array({Json::array({"3", "B"}), Json::array({"-1", "rho"}), Json::array({"1", "lambda"})})},
                                   {"equals", "0"}}));
      rep.claim(claim("relation", {{"terms", Json::array({Json::array({"2", "C"}), Json::array({"-1", "rho"}), Json::array({"1", "lambda"})})},
                                   {"equals", "0"}}));
      const auto fx = case_b_normal_data(c.get<Rational>("rho"), c.get<Rational>("lambda"));
      rep.witness("normal_eta", fx.eta);
      rep.witness("inverse_scale", Rational(1) / c.get<Rational>("normal_form_scale"));
      rep.claim(claim("pullback", {{"map", "coordinates"}, {"form", "normal_eta"}, {"equals", "eta"}, {"scale", "inverse_scale"}}));
    }
  } else if (b == "rank-one rotational") {
    rep.claim(claim("rotational", {{"field", "X"}, {"form", "eta"}}));
    rep.claim(claim("pullback", {{"map", "phi"}, {"form", "reduced_eta"}, {"equals", "eta"}}));
    rep.claim(claim("interior", {{"fields", names({"Z"})}, {"form", "volume"}, {"equals", "reduced_eta"}}));
    rep.claim(claim("divergence", {{"field", "Z"}, {"equals", "H"}}));
  } else if (b.rfind("rank-two", 0) == 0) {
    rep.claim(claim("rotational", {{"field", "X"}, {"form", "eta"}}));
    rep.claim(claim("pullback", {{"map", "phi"}, {"form", "reduced_eta"}, {"equals", "eta"}}));
  }
}

void cmd_classify(const Options& o, Report& rep) {
  const PForm eta = input_form(o, 0, 2);
  rep.witness("eta", eta);
  auto c = classify(eta);
  rep.verdict("degree", c.degree);
  rep.verdict("closed", ext_d(eta).is_zero());
  rep.verdict("branch", c.branch);
  rep.verdict("verified", c.verified);
  for (const auto& [k, w] : c.witnesses) rep.witness(k, w);
  rep.claim(claim("integrable", {{"form", "eta"}, {"expected", true}}));
  if (c.verified) classify_claims(rep, c, eta);
  if (!c.verified) rep.status("unresolved");
}

void cmd_sing_probe(const Options& o, Report& rep) {
  const PForm eta = input_form(o);
  if (eta.is_zero()) throw std::invalid_argument("sing-probe: zero form");
  rep.witness("eta", eta);
  rep.bound("height", o.height);
  auto content = codim1_content(eta);
  rep.witness("h", content.h);
  rep.witness("reduced", content.reduced);
  rep.verdict("codim1_content", !content.h.is_constant());
  rep.claim(claim("wedge_sum", {{"terms", terms({{"h", "reduced"}})}, {"equals", "eta"}}));
  auto cert = sing_line_search(eta, o.height);
  Json cj;
  cj["kind"] = kind_name(cert.kind);
  cj["step"] = cert.step;
  cj["height"] = cert.height;
  if (!cert.irrational_planes.empty()) {
    Json planes = Json::array();
    for (const auto& [i, j] : cert.irrational_planes) planes.push_back(Json::array({i + 1, j + 1}));
    cj["irrational_direction_planes"] = planes;
  }
  rep.verdict("line", kind_name(cert.kind));
  if (cert.kind == SingCertificate::Kind::Line) {
    rep.witness("direction", cert.direction);
    cj["direction"] = report::rationals(cert.direction);
    rep.claim(claim("line_in_sing", {{"form", "eta"}, {"direction", "direction"}}));
  } else {
    if (o.height >= 1)
      rep.claim(claim("common_zeros", {{"form", "eta"}, {"height", o.height}, {"points", Json::array()}}));
    rep.status("none-found");
  }
  rep.certificate("line", cj);
}

void cmd_series(const Options& o, Report& rep) {
  if (o.forms.empty()) throw std::invalid_argument("series-decompose needs --form eta_0 ... --form eta_K");
  if (o.alpha0.empty() || o.beta0.empty()) throw std::invalid_argument("series-decompose needs --alpha0 and --beta0");
  size_t count = o.forms.size();
  if (o.order >= 0) {
    if (static_cast<size_t>(o.order) + 1 > count) throw std::invalid_argument("--order exceeds the number of forms given");
    count = static_cast<size_t>(o.order) + 1;
  }
  FormFamily fam;
  for (size_t i = 0; i < count; ++i) fam.eta.push_back(parse_form(read_source(o.forms[i]), o.n, 2));
  const PForm a0 = parse_form(read_source(o.alpha0), o.n, 1);
  const PForm b0 = parse_form(read_source(o.beta0), o.n, 1);
  const int k = fam.order();
  const int dmax = dmax_or(o, 2 * std::max(k, 1));
  rep.bound("dmax", dmax);
  rep.bound("order", k);
  std::vector<std::string> en, an, bn;
  for (int r = 0; r <= k; ++r) {
    en.push_back("eta_" + std::to_string(r));
    rep.witness(en.back(), fam.eta[static_cast<size_t>(r)]);
  }
  rep.verdict("square_zero", family_square_zero_check(fam));
  try {
    auto dec = family_decompose(fam, a0, b0, dmax);
    for (int r = 0; r <= k; ++r) {
      an.push_back("alpha_" + std::to_string(r));
      bn.push_back("beta_" + std::to_string(r));
      rep.witness(an.back(), dec.alpha[static_cast<size_t>(r)]);
      rep.witness(bn.back(), dec.beta[static_cast<size_t>(r)]);
    }
    rep.claim(claim("series_residual", {{"eta", names(en)}, {"alpha", names(an)}, {"beta", names(bn)}}));
  } catch (const StepFailure& e) {
    if (e.kind() == StepFailure::Kind::ClaimViolated) throw;
    rep.verdict("failure", e.what());
    rep.verdict("failed_order", e.order());
    rep.status("none-found");
  }
}

void cmd_divide(const Options& o, Report& rep) {
  const int dmax = dmax_or(o, 2);
  if (o.mode == "saito") {
    if (o.alpha0.empty() || o.beta0.empty()) throw std::invalid_argument("divide saito needs --alpha0 and --beta0");
    const PForm a0 = parse_form(read_source(o.alpha0), o.n, 1);
    const PForm b0 = parse_form(read_source(o.beta0), o.n, 1);
    const PForm mu = input_form(o, 0, 2);
    rep.bound("dmax", dmax);
    rep.witness("alpha0", a0);
    rep.witness("beta0", b0);
    rep.witness("mu", mu);
    auto r = saito_solve(a0, b0, mu, dmax);
    if (!r) {
      rep.status("none-found");
      return;
    }
    rep.witness("alpha", r->alpha);
    rep.witness("beta", r->beta);
    rep.claim(claim("wedge_sum", {{"terms", terms({{"alpha0", "beta"}, {"alpha", "beta0"}})}, {"equals", "mu"}}));
  } else if (o.mode == "derham") {
    if (o.field.empty()) throw std::invalid_argument("divide derham needs --field");
    const PForm eta = input_form(o, 0, 2);
    const VField x(parse_poly_list(read_source(o.field), eta.nvars()));
    rep.bound("dmax", dmax);
    rep.witness("eta", eta);
    rep.witness("X", x);
    rep.claim(claim("contraction_vanishes", {{"field", "X"}, {"form", "eta"}, {"expected", true}}));
    auto y = derham_vector_solve(eta, x, dmax);
    if (!y) {
      rep.status("none-found");
      return;
    }
    rep.witness("Y", *y);
    rep.claim(claim("interior", {{"fields", names({"Y", "X"})}, {"form", "volume"}, {"equals", "eta"}}));
  } else if (o.mode == "cofoliation") {
    const PForm eta = input_form(o);
    rep.bound("dmax", dmax);
    rep.witness("eta", eta);
    auto s = containing_foliation_search(eta, dmax);
    for (size_t i = 0; i < s.basis.size(); ++i) {
      const std::string name = "basis_" + std::to_string(i + 1);
      rep.witness(name, s.basis[i]);
      rep.claim(claim("wedge_sum", {{"terms", terms({{name, "eta"}})}}));
    }
    for (size_t i = 0; i < s.integrable.size(); ++i) {
      const std::string name = "integrable_" + std::to_string(i + 1);
      rep.witness(name, s.integrable[i]);
      rep.claim(claim("wedge_sum", {{"terms", terms({{name, "eta"}})}}));
      rep.claim(claim("integrable", {{"form", name}, {"expected", true}}));
    }
    rep.verdict("basis_dimension", s.basis.size());
    rep.verdict("integrable_witnesses_found", s.integrable.size());
    if (s.integrable.empty()) rep.status("none-found");
  } else if (o.mode == "intfactor") {
    const PForm omega = input_form(o, 0, 1);
    rep.bound("degree", o.degree);
    rep.witness("omega", omega);
    auto p = integrating_factor_search(omega, o.degree);
    if (!p) {
      rep.status("none-found");
      return;
    }
    rep.witness("P", *p);
    rep.claim(claim("integrating_factor", {{"factor", "P"}, {"form", "omega"}}));
  } else {
    throw std::invalid_argument("divide: unknown mode '" + o.mode + "' (saito, derham, cofoliation, intfactor)");
  }
}

// -------------------------------------------------------------- fixtures

void fixture_kn(const Options& o, Report& rep) {
  const PForm theta = fixtures::kn_theta();
  rep.witness("eta", theta);
  rep.claim(claim("decomposable", {{"form", "eta"}, {"expected", true}}));
  add_decomposition(rep, theta, "eta");
  auto q = quadric_map(theta);
  const char* keys[] = {"A", "B", "C", "E", "F", "G"};
  const Poly* vals[] = {&q.a, &q.b, &q.c, &q.e, &q.f, &q.g};
  for (int i = 0; i < 6; ++i) rep.witness(keys[i], *vals[i]);
  rep.claim(claim("quadric_residual", {{"form", "eta"}, {"coefficients", names({"A", "B", "C", "E", "F", "G"})}}));
  add_rotational(rep, theta);
  rep.claim(claim("integrable", {{"form", "eta"}, {"expected", false}}));
  rep.verdict("decomposable", true);
  rep.verdict("integrable", false);
  rep.bound("height", o.height);
  auto pts = projective_point_scan(singular_ideal(theta), o.height);
  Json pj = Json::array();
  for (const auto& p : pts) pj.push_back(report::rationals(p));
  rep.claim(claim("common_zeros", {{"form", "eta"}, {"height", o.height}, {"points", pj}}));
  auto cert = sing_line_search(theta, o.height);
  rep.certificate("line", {{"kind", kind_name(cert.kind)}, {"step", cert.step}, {"height", cert.height}});
  rep.verdict("common_zeros", pts.size());
}

void fixture_log(const Options& o, Report& rep) {
  const PForm eta = fixtures::log_fixture();
  rep.witness("lambda", fixtures::log_lambda());
  rep.witness("mu", fixtures::log_mu());
  rep.witness("eta", eta);
  rep.claim(claim("integrable", {{"form", "eta"}, {"expected", true}}));
  rep.verdict("integrable", is_integrable2_C4(eta));
  for (int i = 0; i < 4; ++i) {
    const std::string h = "x" + std::to_string(i + 1);
    rep.witness(h, Poly::var(4, i));
    rep.claim(claim("invariant_hyperplane", {{"form", "eta"}, {"poly", h}}));
  }
  rep.bound("height", o.height);
  auto pts = projective_point_scan(singular_ideal(eta), o.height);
  Json pj = Json::array();
  for (size_t k = 0; k < pts.size(); ++k) {
    const std::string name = "line_" + std::to_string(k + 1);
    rep.witness(name, pts[k]);
    rep.claim(claim("line_in_sing", {{"form", "eta"}, {"direction", name}}));
    pj.push_back(report::rationals(pts[k]));
  }
  rep.claim(claim("common_zeros", {{"form", "eta"}, {"height", o.height}, {"points", pj}}));
  rep.verdict("line_certificates", pts.size());
  auto cert = sing_line_search(eta, o.height);
  rep.certificate("line", {{"kind", kind_name(cert.kind)}, {"step", cert.step}, {"direction", report::rationals(cert.direction)}});
}

void fixture_case_a(const Options&, Report& rep) {
  const auto lambda = fixtures::case_a_lambda(), mu = fixtures::case_a_mu();
  auto data = case_a_log_data(lambda, mu);
  Matrix ml(4, 4), mm(4, 4);
  for (size_t i = 0; i < 4; ++i) {
    ml(i, i) = lambda[i];
    mm(i, i) = mu[i];
  }
  rep.witness("lambda", lambda);
  rep.witness("mu", mu);
  rep.witness("X", VField::linear(ml));
  rep.witness("Y", VField::linear(mm));
  rep.witness("eta", data.eta);
  rep.witness("f", data.f);
  rep.witness("zero", Rational(0));
  rep.claim(claim("interior", {{"fields", names({"Y", "X"})}, {"form", "volume"}, {"equals", "eta"}}));
  rep.claim(claim("bracket", {{"left", "Y"}, {"right", "X"}, {"scale", "zero"}}));
  rep.claim(claim("integrating_factor", {{"factor", "f"}, {"form", "eta"}}));
  rep.claim(claim("integrable", {{"form", "eta"}, {"expected", true}}));
  rep.claim(claim("sum_zero", {{"values", "lambda"}}));
  Json rho = Json::array();
  for (const auto& row : data.rho) rho.push_back(report::rationals({row.begin(), row.end()}));
  rep.certificate("rho", rho);
  auto c = classify(data.eta);
  rep.verdict("branch", c.branch);
}

void fixture_case_b(const Options& o, Report& rep) {
  auto fx = case_b_normal_data(rational_flag(o.rho, "rho"), rational_flag(o.lambda, "lambda"));
  rep.witness("rho", fx.rho);
  rep.witness("lambda", fx.lambda);
  rep.witness("minus_lambda", -fx.lambda);
  rep.witness("X", fx.x);
  rep.witness("S", fx.s);
  rep.witness("R", fx.r);
  rep.witness("Y", fx.y);
  rep.witness("alpha", fx.alpha);
  rep.witness("beta", fx.beta);
  rep.witness("eta", fx.eta);
  rep.witness("g", fx.g);
  rep.witness("h", fx.h);
  rep.witness("z1", Poly::var(4, 0));
  rep.witness("z1sq", Poly::var(4, 0).pow(2));
  rep.witness("A", fx.a);
  rep.witness("B", fx.b);
  rep.witness("C", fx.c);
  auto y = Matrix(*fx.y.linear_matrix());
  std::vector<Rational> spectrum;
  for (int k = 0; k < 4; ++k) spectrum.push_back(fx.rho - fx.lambda * Rational(k));
  rep.witness("spectrum", spectrum);
  rep.claim(claim("relation", {{"terms", Json::array({Json::array({"4", "rho"}), Json::array({"-5", "lambda"})})}, {"equals", "1"}}));
  rep.claim(claim("interior", {{"fields", names({"Y", "X"})}, {"form", "volume"}, {"equals", "eta"}}));
  rep.claim(claim("bracket", {{"left", "Y"}, {"right", "X"}, {"scale", "lambda"}}));
  rep.claim(claim("spectrum", {{"field", "Y"}, {"values", "spectrum"}}));
  rep.claim(claim("interior", {{"fields", names({"S", "X"})}, {"form", "volume"}, {"equals", "alpha"}}));
  rep.claim(claim("interior", {{"fields", names({"R", "X"})}, {"form", "volume"}, {"equals", "beta"}}));
  rep.claim(claim("wedge_sum", {{"terms", terms({{"rho", "beta"}, {"minus_lambda", "alpha"}})}, {"equals", "eta"}}));
  rep.claim(claim("wedge_sum", {{"terms", terms({{"A", "z1", "d:h", "d:g"}, {"B", "h", "d:g", "d:z1"}, {"C", "g", "d:z1", "d:h"}})},
                                {"equals", "eta"},
                                {"scale", "z1sq"}}));
  rep.claim(claim("relation", {{"terms", Json::array({Json::array({"6", "A"}), Json::array({"-1", "rho"})})}, {"equals", "0"}}));
  rep.claim(claim("relation", {{"terms", Json::array({Json::array({"3", "B"}), Json::array({"-1", "rho"}), Json::array({"1", "lambda"})})},
                               {"equals", "0"}}));
  rep.claim(claim("relation", {{"terms", Json::array({Json::array({"2", "C"}), Json::array({"-1", "rho"}), Json::array({"1", "lambda"})})},
                               {"equals", "0"}}));
  rep.claim(claim("integrable", {{"form", "eta"}, {"expected", true}}));
  rep.verdict("trace_Y", y.trace().str());
  rep.verdict("A", fx.a.str());
  rep.verdict("B", fx.b.str());
  rep.verdict("C", fx.c.str());
}

void fixture_pencil(const Options&, Report& rep) {
  auto pc = fixtures::pencil();
  rep.witness("F", pc.f);
  rep.witness("G", pc.g);
  rep.witness("p", pc.p);
  rep.witness("q", pc.q);
  rep.witness("minus_p", -pc.p);
  rep.witness("omega", pc.omega);
  rep.witness("domega", ext_d(pc.omega));
  rep.witness("line", pc.line);
  rep.claim(claim("wedge_sum", {{"terms", terms({{"q", "F", "d:G"}, {"minus_p", "G", "d:F"}})}, {"equals", "omega"}}));
  rep.claim(claim("exterior_derivative", {{"form", "omega"}, {"equals", "domega"}}));
  rep.claim(claim("integrable", {{"form", "omega"}, {"expected", true}}));
  rep.claim(claim("line_in_sing", {{"form", "omega"}, {"direction", "line"}}));
  const bool kupka = kupka_point(pc.omega, pc.line);
  rep.verdict("kupka_on_line", kupka);
  if (kupka) rep.claim(claim("kupka", {{"form", "omega"}, {"point", "line"}}));
}

void cmd_fixtures(const Options& o, Report& rep) {
  rep.verdict("fixture", o.mode);
  if (o.mode == "kn-theta")
    fixture_kn(o, rep);
  else if (o.mode == "log-example")
    fixture_log(o, rep);
  else if (o.mode == "case-a")
    fixture_case_a(o, rep);
  else if (o.mode == "case-b")
    fixture_case_b(o, rep);
  else if (o.mode == "pencil")
    fixture_pencil(o, rep);
  else
    throw std::invalid_argument("unknown fixture '" + o.mode + "' (kn-theta, log-example, case-a, case-b, pencil)");
}

// ------------------------------------------------------------------ main

int exit_code(const std::string& status) {
  if (status == "verified") return 0;
  if (status == "none-found" || status == "unresolved") return 2;
  return 1;
}

/// Every claim a command emits must re-verify before the report is printed.
void self_check(Report& rep) {
  report::Verifier v(rep.json());
  for (const auto& c : rep.json().at("claims")) {
    auto r = v.run(c);
    if (!r.ok) throw std::logic_error("internal: emitted claim '" + r.check + "' does not verify" + (r.error.empty() ? "" : ": " + r.error));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with polynomial differential forms"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s, bool form) {
    s->add_option("--n", o.n, "Number of variables (1..8)")->check(CLI::Range(1, 8));
    if (form) {
      s->add_option("--form", o.forms, "Form as inline text or a path (@file.frm); repeatable where a command takes several");
      s->add_option("--fixture", o.fixture, "Built-in fixture: kn-theta, log-example, case-a, case-b, pencil, or a corpus name");
    }
    s->add_flag("--json", o.json, "Machine-readable report");
    s->add_flag("--timing", o.timing, "Include wall time in the report");
  };

  auto* check = app.add_subcommand("check", "Decomposability, integrability and dicriticality verdicts, or re-verify a report");
  common(check, true);
  check->add_option("--report", o.report_path, "Saved JSON report to re-verify ('-' reads stdin)");
  auto* decompose = app.add_subcommand("decompose", "Meromorphic decomposition witness of a square-zero 2-form");
  common(decompose, true);
  auto* rotational = app.add_subcommand("rotational", "Rotational field of a 2-form on 4 variables");
  common(rotational, true);
  auto* intersect = app.add_subcommand("intersect", "Complete intersection of integrable 1-forms");
  common(intersect, true);
  auto* classify_cmd = app.add_subcommand("classify", "Classify a homogeneous integrable 2-form of degree <= 2");
  common(classify_cmd, true);
  classify_cmd->add_option("--rho", o.rho, "rho for the case-b fixture");
  classify_cmd->add_option("--lambda", o.lambda, "lambda for the case-b fixture");
  auto* probe = app.add_subcommand("sing-probe", "Search for lines in the singular set");
  common(probe, true);
  probe->add_option("--height", o.height, "Integer grid height (default 10)");
  auto* series = app.add_subcommand("series-decompose", "Decompose a square-zero family order by order");
  common(series, true);
  series->add_option("--alpha0", o.alpha0, "alpha_0");
  series->add_option("--beta0", o.beta0, "beta_0");
  series->add_option("--dmax", o.dmax, "Coefficient degree bound (default 2K)");
  series->add_option("--order", o.order, "Truncation order K");
  auto* divide = app.add_subcommand("divide", "Division problems");
  common(divide, true);
  divide->add_option("mode", o.mode, "saito, derham, cofoliation or intfactor")->required();
  divide->add_option("--alpha0", o.alpha0, "alpha_0 (saito)");
  divide->add_option("--beta0", o.beta0, "beta_0 (saito)");
  divide->add_option("--field", o.field, "Vector field X as (p1, ..., pn) (derham)");
  divide->add_option("--dmax", o.dmax, "Coefficient degree bound (default 2)");
  divide->add_option("--degree", o.degree, "Integrating factor degree (intfactor, default 3)");
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Reports for the built-in fixtures");
  common(fixtures_cmd, false);
  fixtures_cmd->add_option("name", o.mode, "kn-theta, log-example, case-a, case-b or pencil")->required();
  fixtures_cmd->add_option("--height", o.height, "Integer grid height (default 10)");
  fixtures_cmd->add_option("--rho", o.rho, "rho for case-b");
  fixtures_cmd->add_option("--lambda", o.lambda, "lambda for case-b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  Json args = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help" || opt->get_name() == "--json" || opt->get_name() == "--timing") continue;
    const auto& res = opt->results();
    std::string key = opt->get_name();
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    args[key] = res.size() == 1 ? Json(res.front()) : Json(res);
  }
  Report rep(sub->get_name(), args);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::string name = sub->get_name();
    if (name == "check")
      o.report_path.empty() ? cmd_check_form(o, rep) : cmd_check_report(o, rep);
    else if (name == "decompose")
      cmd_decompose(o, rep);
    else if (name == "rotational")
      cmd_rotational(o, rep);
    else if (name == "intersect")
      cmd_intersect(o, rep);
    else if (name == "classify")
      cmd_classify(o, rep);
    else if (name == "sing-probe")
      cmd_sing_probe(o, rep);
    else if (name == "series-decompose")
      cmd_series(o, rep);
    else if (name == "divide")
      cmd_divide(o, rep);
    else
      cmd_fixtures(o, rep);
    if (o.report_path.empty()) self_check(rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (o.timing)
    rep.timing(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  if (o.json)
    std::cout << rep.json().dump(2) << '\n';
  else
    std::cout << report::to_text(rep.json());
  return exit_code(rep.status());
}
