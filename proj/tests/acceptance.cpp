// Acceptance run: one PASS/FAIL line per criterion.
#include "foliate/fixtures.hpp"
#include "foliate/report.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace foliate;

namespace {

class Check {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  bool ok() const { return !failed_; }
  std::string detail() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

Poly x(int n, int i) { return Poly::var(n, i - 1); }
PForm dx(int n, int i) { return PForm::dx(n, i - 1); }

std::vector<Rational> unit(int n, int i) {
  std::vector<Rational> e(static_cast<size_t>(n), Rational(0));
  e[static_cast<size_t>(i - 1)] = Rational(1);
  return e;
}

// ------------------------------------------------------------------ 1

void kn_fixture(Check& c) {
  const PForm theta = fixtures::kn_theta();
  c.expect(wedge(theta, theta).is_zero(), "theta^theta != 0");
  c.expect(quadric_map(theta).residual.is_zero(), "AE + BF + CG != 0");
  const VField rot = rotational4(theta);
  c.expect(!rot.is_zero(), "rot(theta) = 0");
  c.expect(!interior(rot, theta).is_zero(), "i_rot theta = 0");
  c.expect(!is_integrable2_C4(theta), "theta reported integrable");
  c.expect(projective_point_scan(singular_ideal(theta), 10).empty(), "point scan at height 10 not empty");
  c.expect(sing_line_search(theta, 10).kind == SingCertificate::Kind::NoneFound, "line search found a line");
}

// ------------------------------------------------------------------ 2

void log_example_fixture(Check& c) {
  const PForm eta = fixtures::log_fixture();
  const int n = 4;
  c.expect(is_integrable2_C4(eta), "not integrable");
  for (int i = 1; i <= n; ++i) c.expect(invariant_hyperplane(eta, x(n, i)), "hyperplane x" + std::to_string(i) + " not invariant");
  const auto coeffs = singular_ideal(eta);
  std::set<std::vector<Rational>> found;
  for (const auto& v : projective_point_scan(coeffs, 10)) {
    c.expect(line_in_sing_check(eta, v), "scan point is not a line certificate");
    found.insert(v);
  }
  // Oracle: every coefficient is a monomial, so its vanishing at a point
  // depends only on the support of the point.
  std::set<std::vector<Rational>> oracle;
  bool positive_dimensional_pattern = false;
  for (const auto& p : coeffs) c.expect(p.terms().size() == 1, "coefficient is not a monomial");
  for (unsigned s = 1; s < (1U << n); ++s) {
    bool all_vanish = true;
    for (const auto& p : coeffs) {
      const Monomial& m = p.terms().begin()->first;
      bool uses_outside = false;
      for (int i = 0; i < n; ++i) uses_outside = uses_outside || (m[i] > 0 && !((s >> i) & 1U));
      all_vanish = all_vanish && uses_outside;
    }
    if (!all_vanish) continue;
    if (__builtin_popcount(s) == 1)
      oracle.insert(unit(n, __builtin_ctz(s) + 1));
    else
      positive_dimensional_pattern = true;
  }
  c.expect(!positive_dimensional_pattern, "oracle: a support pattern of size > 1 is singular");
  c.expect(oracle.size() == 4, "oracle does not give the 4 axes");
  c.expect(found == oracle, "line certificates differ from the oracle");
}

// ------------------------------------------------------------------ 3

void property_suite(Check& c) {
  gen::Gen g(31337);
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(g.integer(2, 5));
    PForm a = g.form(n, static_cast<int>(g.integer(0, n - 1)), 3);
    c.expect(ext_d(ext_d(a)).is_zero(), "d(d(a)) != 0");
  }
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(g.integer(3, 5));
    const int p = static_cast<int>(g.integer(0, 2)), q = static_cast<int>(g.integer(0, 2));
    PForm a = g.form(n, p, 2), b = g.form(n, q, 2);
    PForm ba = wedge(b, a);
    if ((p * q) % 2 == 1) ba = -ba;
    c.expect(wedge(a, b) == ba, "graded anticommutativity");
  }
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(g.integer(3, 4));
    VField v = g.field(n, 2, 2);
    Poly f = g.poly(n, 3);
    PForm a = g.form(n, static_cast<int>(g.integer(0, 2)), 2), b = g.form(n, 1, 2);
    c.expect(lie(v, PForm(f)) == PForm(v.apply(f)), "L_X f != X(f)");
    c.expect(lie(v, wedge(a, b)) == wedge(lie(v, a), b) + wedge(a, lie(v, b)), "L_X is not a derivation");
    c.expect(lie(v, ext_d(a)) == ext_d(lie(v, a)), "L_X does not commute with d");
    PForm cartan = interior(v, ext_d(a));
    if (a.degree() > 0) cartan += ext_d(interior(v, a));
    c.expect(lie(v, a) == cartan, "L_X != d i_X + i_X d");
  }
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(g.integer(2, 5));
    const int p = static_cast<int>(g.integer(0, n));
    const unsigned m = static_cast<unsigned>(g.integer(0, 3));
    PForm a = g.homogeneous_form(n, p, m);
    c.expect(lie(radial(n), a) == a * Rational(static_cast<long>(m) + p), "Euler identity");
  }
  int instances = 0, with_witness = 0;
  while (instances < 100) {
    const int n = static_cast<int>(g.integer(3, 5));
    PForm eta = (instances % 2 == 0) ? wedge(g.form(n, 1, 2), g.form(n, 1, 2)) : g.form(n, 2, 1);
    if (eta.is_zero()) continue;
    bool witness = true;
    try {
      c.expect(mero_decompose(eta).verify(eta), "mero witness does not verify");
    } catch (const std::domain_error&) {
      witness = false;
    }
    c.expect(is_decomposable2(eta) == witness, "square-zero and witness disagree");
    with_witness += witness;
    ++instances;
  }
  c.expect(with_witness > 0 && with_witness < 100, "decomposition sample is one-sided");
  int integrable = 0, non_integrable = 0;
  while (integrable < 50 || non_integrable < 50) {
    const bool want = integrable < 50;
    PForm a = want ? d(g.poly(4, 2)) * g.poly(4, 1, 2) : g.form(4, 1, 2);
    PForm b = want ? d(g.poly(4, 3)) : g.form(4, 1, 2);
    PForm eta = wedge(a, b);
    if (eta.is_zero() || rotational4(eta).is_zero()) continue;
    std::vector<PForm> factors{a, b};
    const bool rot = is_integrable2_C4(eta);
    c.expect(rot == is_integrable2(eta), "rotational criterion disagrees with cleared Frobenius on meromorphic factors");
    c.expect(rot == frobenius_integrable_q(eta, factors), "rotational criterion disagrees with Frobenius on the factors");
    if (want) {
      c.expect(rot, "constructed integrable instance rejected");
      ++integrable;
    } else if (!rot) {
      ++non_integrable;
    }
  }
}

// ------------------------------------------------------------------ 4

void family_algorithm(Check& c) {
  gen::Gen g(2024);
  const int order = 5;
  int families = 0;
  while (families < 20) {
    const int n = 4 + families % 2;
    Matrix m = g.matrix(2, static_cast<size_t>(n));
    PForm a0(n, 1), b0(n, 1);
    for (int i = 0; i < n; ++i) {
      a0 += dx(n, i + 1) * Poly::constant(n, m(0, static_cast<size_t>(i)));
      b0 += dx(n, i + 1) * Poly::constant(n, m(1, static_cast<size_t>(i)));
    }
    if (wedge(a0, b0).is_zero()) continue;
    std::vector<PForm> a{a0}, b{b0};
    for (int r = 1; r <= order; ++r) {
      a.push_back(g.form(n, 1, 2, 2));
      b.push_back(g.form(n, 1, 2, 2));
    }
    FormFamily fam;
    for (int r = 0; r <= order; ++r) fam.eta.push_back(series_product(a, b, r));
    try {
      auto dec = family_decompose(fam, a0, b0, 2 * order);
      c.expect(family_residual_zero(fam, dec), "family residual nonzero");
    } catch (const std::exception& e) {
      c.expect(false, std::string("family_decompose: ") + e.what());
    }
    ++families;
  }
  for (int l = 0; l <= 6; ++l) {
    auto all = enumerate_s2(l);
    std::set<Quad> members(all.begin(), all.end());
    for (const auto& q : all) {
      Quad p = shuffle_equivalence_check(l, q);
      c.expect(p != q, "involution has a fixed point");
      c.expect(members.count(p) == 1, "involution leaves S2");
      c.expect(shuffle_equivalence_check(l, p) == q, "involution is not of order 2");
    }
  }
  for (int l = 2; l <= 6; ++l)
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<PForm> a, b;
      for (int i = 0; i <= l; ++i) {
        a.push_back(g.form(5, 1, 1, 2));
        b.push_back(g.form(5, 1, 1, 2));
      }
      c.expect(sigma_s2(l, a, b).is_zero(), "signed sum over S2 nonzero");
    }
}

// ------------------------------------------------------------------ 5

void nilpotent_case(Check& c) {
  const Rational rho(3, 2), lambda(1);
  auto fx = case_b_normal_data(rho, lambda);
  auto r = rank3_rotational_analyze(fx.eta);
  c.expect(r.branch == RotationalAnalysis::Branch::Nilpotent, "branch is not nilpotent");
  std::vector<Rational> spec = r.spectrum;
  std::sort(spec.begin(), spec.end());
  c.expect(spec == std::vector<Rational>{Rational(-3, 2), Rational(-1, 2), Rational(1, 2), Rational(3, 2)}, "spectrum");
  VField lx = r.x;
  lx *= r.lambda;
  c.expect(bracket(r.y, r.x) == lx, "[Y, X] != lambda X");
  c.expect(r.lambda == lambda && r.rho == rho, "recovered (rho, lambda)");
  c.expect(rho * Rational(4) - lambda * Rational(5) == Rational(1), "4 rho - 5 lambda != 1");
  c.expect(interior(fx.y, contract_volume(fx.x)) == fx.eta, "eta != i_Y i_X nu");
  const int n = 4;
  const Poly z1 = x(n, 1);
  const PForm dz1 = d(z1), dg = d(fx.g), dh = d(fx.h);
  PForm rep = wedge(dh, dg) * (z1 * fx.a) + wedge(dg, dz1) * (fx.h * fx.b) + wedge(dz1, dh) * (fx.g * fx.c);
  c.expect(fx.eta * (z1 * z1) == rep, "logarithmic representation");
  c.expect(fx.a == Rational(1, 4) && fx.b == Rational(1, 6) && fx.c == Rational(1, 4), "A, B, C");
}

// ------------------------------------------------------------------ 6

void linear_times_quadric(Check& c) {
  const int n = 3;
  const Poly l = x(n, 1), q = x(n, 2) * x(n, 3);
  const PForm omega = (d(q) * l - d(l) * (q * Rational(2))) * Rational(1, 3);
  auto p = integrating_factor_search(omega, 3);
  c.expect(p.has_value(), "no cubic integrating factor");
  if (p) {
    const Poly target = x(n, 1) * x(n, 2) * x(n, 3);
    auto ratio = PForm(*p) == PForm(target) ? std::optional<Rational>(1) : scalar_ratio(PForm(*p), PForm(target));
    c.expect(ratio.has_value(), "integrating factor is not a multiple of x1 x2 x3");
  }
  const PForm eta = ext_d(omega);
  c.expect(eta == wedge(d(l), d(q)), "d omega != dL ^ dQ");
  auto rep = classify(eta);
  c.expect(rep.branch == "L·Q", "branch " + rep.branch);
  c.expect(rep.verified, "classification not verified");
  if (rep.find("L") && rep.find("Q"))
    c.expect(wedge(d(rep.get<Poly>("L")), d(rep.get<Poly>("Q"))) == eta, "witness dL ^ dQ != eta");
}

// ------------------------------------------------------------------ 7

void nonclosed_branches(Check& c) {
  const std::vector<std::pair<std::string, PForm>> cases{
      {"rank-one rotational", fixtures::rank_one_template()},
      {"rank-two semisimple", fixtures::semisimple_template()},
      {"rank-two nilpotent, cubic", fixtures::cubic_nilpotent_template()},
      {"rank-two nilpotent, square zero", fixtures::square_zero_template()}};
  for (const auto& [branch, eta] : cases) {
    c.expect(!ext_d(eta).is_zero(), branch + ": template is closed");
    auto rep = classify(eta);
    c.expect(rep.branch == branch, branch + ": got " + rep.branch);
    c.expect(rep.verified, branch + ": not verified");
    if (rep.find("phi") && rep.find("reduced_eta"))
      c.expect(pullback(rep.get<PolyMap>("phi"), rep.get<PForm>("reduced_eta")) == eta, branch + ": pullback round trip");
    else
      c.expect(false, branch + ": missing phi or reduced_eta");
  }
  const Rational l1(1), l2(2), a(5);
  const Poly q = x(2, 1) * x(2, 1) + x(2, 1) * x(2, 2) + x(2, 2) * x(2, 2) * Rational(3);
  const Poly h = linearize_nonresonant(l1, l2, a, q);
  const Poly zh = x(2, 1) * h.partial(0) * l1 + x(2, 2) * h.partial(1) * l2;
  c.expect(zh == h * a - q, "Z(h) != a h - q");
}

// ------------------------------------------------------------------ 8

void singular_lines(Check& c) {
  int members = 0;
  std::set<std::string> branches;
  for (const auto& [name, eta] : fixtures::corpus()) {
    if (eta.homogeneity().is(0)) continue;
    ++members;
    c.expect(is_integrable2(eta), name + ": not integrable");
    branches.insert(classify(eta).branch);
    auto cert = sing_line_search(eta, 10);
    c.expect(cert.kind == SingCertificate::Kind::Line, name + ": no line found");
    if (cert.kind == SingCertificate::Kind::Line) c.expect(line_in_sing_check(eta, cert.direction), name + ": certificate fails");
  }
  c.expect(members >= 10, "corpus smaller than 10");
  c.expect(branches.size() >= 15, "corpus spans " + std::to_string(branches.size()) + " branches");
}

// ------------------------------------------------------------------ 9

void primitives(Check& c) {
  gen::Gen g(909);
  int closed = 0;
  while (closed < 50) {
    const int n = static_cast<int>(g.integer(3, 4));
    const unsigned a = static_cast<unsigned>(g.integer(1, 2)), b = static_cast<unsigned>(g.integer(1, 2));
    PForm eta = wedge(d(g.nonzero_homogeneous(n, a)), d(g.nonzero_homogeneous(n, b)));
    if (eta.is_zero()) continue;
    PForm omega = dicritical_primitive(eta, a + b - 2);
    c.expect(ext_d(omega) == eta, "d omega != eta");
    c.expect(wedge(omega, ext_d(omega)).is_zero(), "omega ^ d omega != 0 (closed case)");
    c.expect(wedge(omega, eta).is_zero(), "omega ^ eta != 0 (closed case)");
    ++closed;
  }
  int integrable = 0;
  while (integrable < 50) {
    const int n = static_cast<int>(g.integer(3, 4));
    Poly u = g.nonzero_homogeneous(n, static_cast<unsigned>(g.integer(0, 1)));
    PForm eta = wedge(d(g.nonzero_homogeneous(n, 1)), d(g.nonzero_homogeneous(n, 2))) * u;
    if (eta.is_zero() || interior(radial(n), eta).is_zero()) continue;
    PForm omega = radial_contraction(eta);
    c.expect(wedge(omega, ext_d(omega)).is_zero(), "omega ^ d omega != 0");
    c.expect(wedge(omega, eta).is_zero(), "omega ^ eta != 0");
    ++integrable;
  }
}

// ------------------------------------------------------------------ 10

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& cmd) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void cli_golden(Check& c) {
  const std::string cli = std::string("\"") + FOLIATE_CLI_PATH + "\"";
  for (const char* name : {"kn-theta", "log-example", "case-a", "case-b", "pencil"}) {
    const std::string f = name;
    auto first = run(cli + " fixtures " + f + " --json 2>&1");
    auto second = run(cli + " fixtures " + f + " --json 2>&1");
    c.expect(first.status == 0, f + ": exit " + std::to_string(first.status));
    c.expect(first.out == second.out, f + ": output differs between runs");
    c.expect(first.out == slurp(std::string(FOLIATE_GOLDEN_DIR) + "/" + f + ".json"), f + ": differs from golden file");
    auto check = run(cli + " fixtures " + f + " --json | " + cli + " check --report - --json 2>&1");
    c.expect(check.status == 0, f + ": check exit " + std::to_string(check.status));
    try {
      auto doc = report::Json::parse(check.out);
      const auto& v = doc.at("verdicts");
      c.expect(v.at("claims").get<size_t>() > 0 && v.at("claims") == v.at("passed"), f + ": claims did not all re-verify");
    } catch (const std::exception& e) {
      c.expect(false, f + ": check output: " + e.what());
    }
  }
  auto probe = run(cli + " sing-probe --fixture kn-theta --height 10 --json");
  c.expect(probe.status == 2, "sing-probe kn-theta exit " + std::to_string(probe.status));
  c.expect(probe.out.find("\"none-found\"") != std::string::npos, "sing-probe kn-theta is not none-found");
  auto cls = run(cli + " classify --fixture case-b --rho 3/2 --lambda 1 --json");
  c.expect(cls.status == 0, "classify case-b exit " + std::to_string(cls.status));
  try {
    auto doc = report::Json::parse(cls.out);
    const auto& w = doc.at("witnesses");
    c.expect(w.at("A").at("value") == "1/4" && w.at("B").at("value") == "1/6" && w.at("C").at("value") == "1/4", "classify case-b constants");
  } catch (const std::exception& e) {
    c.expect(false, std::string("classify case-b output: ") + e.what());
  }
  auto chk = run(cli + " check --n 4 --form @\"" + FOLIATE_DATA_DIR + "/theta.frm\" --json");
  try {
    auto doc = report::Json::parse(chk.out);
    c.expect(doc.at("verdicts").at("decomposable") == true && doc.at("verdicts").at("integrable") == false, "check theta.frm verdicts");
  } catch (const std::exception& e) {
    c.expect(false, std::string("check theta.frm output: ") + e.what());
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Check&)> body;
    double limit_s;
  };
  const std::vector<Criterion> criteria{
      {"KN fixture: square-zero, non-integrable, no singular line at height 10", kn_fixture, 10},
      {"logarithmic example: integrable, invariant hyperplanes, axes match the oracle", log_example_fixture, 5},
      {"property suite", property_suite, 0},
      {"order-by-order decomposition of 20 random families and the S2 involution", family_algorithm, 0},
      {"nilpotent normal form (rho, lambda) = (3/2, 1)", nilpotent_case, 0},
      {"degree-1 closed classification L·Q", linear_times_quadric, 0},
      {"degree-2 non-closed branches and non-resonant linearization", nonclosed_branches, 0},
      {"singular lines over the homogeneous corpus", singular_lines, 60},
      {"radial primitives of closed and integrable forms", primitives, 0},
      {"CLI golden reports and re-verification", cli_golden, 0},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[i].limit_s > 0) c.expect(s < criteria[i].limit_s, "over the time limit");
    std::printf("%s  %2zu  %s (%.2f s)%s%s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].name, s, c.ok() ? "" : ": ",
                c.detail().c_str());
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
