#include "foliate/fixtures.hpp"
#include "foliate/report.hpp"

#include <gtest/gtest.h>

using namespace foliate;
using report::Json;

namespace {

Poly x(int n, int i) { return Poly::var(n, i - 1); }
PForm dx(int n, int i) { return PForm::dx(n, i - 1); }

template <class T>
T round_trip(const T& v) {
  return std::get<T>(report::decode(Json::parse(report::entry(v).dump())));
}

report::Report decomposition_report() {
  const int n = 4;
  report::Report rep("test", Json::object());
  rep.witness("a", dx(n, 1) * x(n, 2));
  rep.witness("b", dx(n, 3) + dx(n, 4));
  rep.witness("eta", wedge(dx(n, 1) * x(n, 2), dx(n, 3) + dx(n, 4)));
  rep.claim({{"check", "wedge_sum"}, {"terms", Json::array({Json::array({"a", "b"})})}, {"equals", "eta"}});
  return rep;
}

}  // namespace

TEST(Report, WitnessRoundTrip) {
  const int n = 4;
  EXPECT_EQ(round_trip(x(n, 1) * x(n, 2) - Poly::constant(n, Rational(1, 3))), x(n, 1) * x(n, 2) - Poly::constant(n, Rational(1, 3)));
  EXPECT_EQ(round_trip(fixtures::kn_theta()), fixtures::kn_theta());
  EXPECT_EQ(round_trip(PForm(n, 3)), PForm(n, 3));
  EXPECT_EQ(round_trip(radial(n)), radial(n));
  PolyMap m(n, {x(n, 1) * x(n, 2), x(n, 3)});
  EXPECT_EQ(round_trip(m).components(), m.components());
  EXPECT_EQ(round_trip(Rational(-7, 3)), Rational(-7, 3));
  std::vector<Rational> v{1, Rational(1, 2), 0};
  EXPECT_EQ(round_trip(v), v);
  EXPECT_EQ(round_trip(std::string("R(2,2), S(2,n)")), "R(2,2), S(2,n)");
}

TEST(Report, KeyOrderIsFixed) {
  auto rep = decomposition_report();
  std::vector<std::string> keys;
  for (const auto& [k, v] : rep.json().items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "args", "status", "verdicts", "witnesses", "claims", "certificates", "bounds"}));
}

TEST(Report, VerifierAcceptsAndRejects) {
  auto rep = decomposition_report();
  report::Verifier ok(rep.json());
  EXPECT_TRUE(ok.run(rep.json()["claims"][0]).ok);

  Json tampered = rep.json();
  tampered["witnesses"]["b"]["value"] = "dx3 - dx4";
  report::Verifier bad(tampered);
  EXPECT_FALSE(bad.run(tampered["claims"][0]).ok);

  auto unknown = report::Verifier(rep.json()).run({{"check", "no-such-check"}});
  EXPECT_FALSE(unknown.ok);
  EXPECT_NE(unknown.error.find("unknown check"), std::string::npos);
  auto missing = report::Verifier(rep.json()).run({{"check", "exterior_derivative"}, {"form", "c"}});
  EXPECT_FALSE(missing.ok);
}

TEST(Report, MalformedWitness) {
  Json e = {{"type", "form"}, {"n", 4}, {"degree", 2}, {"value", "dx1 +"}};
  EXPECT_THROW(report::decode(e), ParseError);
  Json t = {{"type", "tensor"}, {"value", ""}};
  EXPECT_THROW(report::decode(t), std::invalid_argument);
}
