#include "foliate/fixtures.hpp"
#include "foliate/singloc.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace foliate;

namespace {

Poly x(int n, int i) { return Poly::var(n, i - 1); }
PForm dx(int n, int i) { return PForm::dx(n, i - 1); }
PForm dx(int n, int i, int j) { return wedge(dx(n, i), dx(n, j)); }

std::vector<Rational> unit(int n, int i) {
  std::vector<Rational> e(static_cast<size_t>(n), Rational(0));
  e[static_cast<size_t>(i - 1)] = Rational(1);
  return e;
}

bool same_up_to_sign(std::vector<Poly> a, std::vector<Poly> b) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const Poly& q) { return q == p || q == -p; });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

TEST(SingularIdeal, Examples) {
  EXPECT_EQ(singular_ideal(dx(2, 1, 2)), std::vector<Poly>{Poly::constant(2, Rational(1))});
  const int n = 3;
  EXPECT_EQ(singular_ideal(dx(n, 1, 2) * x(n, 1) + dx(n, 1, 3) * x(n, 2)), (std::vector<Poly>{x(n, 1), x(n, 2)}));
  const int m = 4;
  std::vector<Poly> kn{x(m, 3).pow(2), x(m, 1).pow(2) * Rational(-1), x(m, 1) * x(m, 2) + x(m, 3) * x(m, 4),
                       x(m, 4).pow(2), x(m, 2).pow(2), x(m, 1) * x(m, 2) - x(m, 3) * x(m, 4)};
  EXPECT_TRUE(same_up_to_sign(singular_ideal(fixtures::kn_theta()), kn));
}

TEST(Content, Examples) {
  auto c = codim1_content(dx(3, 1, 2) * x(3, 1));
  EXPECT_EQ(c.h, x(3, 1));
  EXPECT_EQ(c.reduced, dx(3, 1, 2));
  auto e = codim1_content(fixtures::log_fixture());
  EXPECT_EQ(e.h, Poly::constant(4, Rational(1)));
  EXPECT_EQ(e.reduced, fixtures::log_fixture());
  EXPECT_THROW(codim1_content(PForm(3, 2)), std::invalid_argument);
}

TEST(Content, RandomReconstruction) {
  gen::Gen g(12);
  int done = 0;
  while (done < 100) {
    const int n = 4;
    PForm eta0 = g.form(n, 2, 2);
    if (eta0.is_zero() || !codim1_content(eta0).h.is_constant()) continue;
    Poly h = x(n, 1) * x(n, 2);
    auto c = codim1_content(eta0 * h);
    EXPECT_EQ(c.reduced * c.h, eta0 * h);
    EXPECT_EQ(c.h, h);
    auto again = codim1_content(c.reduced);
    EXPECT_TRUE(again.h.is_constant());
    EXPECT_EQ(again.reduced, c.reduced);
    ++done;
  }
}

TEST(LineCheck, Examples) {
  EXPECT_TRUE(line_in_sing_check(dx(2, 1, 2) * x(2, 1), unit(2, 2)));
  EXPECT_TRUE(line_in_sing_check(fixtures::log_fixture(), unit(4, 1)));
  EXPECT_FALSE(line_in_sing_check(fixtures::kn_theta(), unit(4, 1)));
  std::vector<Rational> zero(4);
  EXPECT_THROW(line_in_sing_check(fixtures::kn_theta(), zero), std::invalid_argument);
}

TEST(LineSearch, Examples) {
  auto c = sing_line_search(fixtures::log_fixture());
  EXPECT_EQ(c.kind, SingCertificate::Kind::Line);
  EXPECT_EQ(c.direction, unit(4, 1));
  EXPECT_EQ(c.step, "axis");

  const int n = 4;
  PForm lc = wedge(dx(n, 1), d(x(n, 2) * x(n, 3) * x(n, 4)));
  auto l = sing_line_search(lc);
  ASSERT_EQ(l.kind, SingCertificate::Kind::Line);
  EXPECT_TRUE(l.verify(lc));
  EXPECT_TRUE(line_in_sing_check(lc, unit(n, 2)));

  auto kn = sing_line_search(fixtures::kn_theta(), 3);
  EXPECT_EQ(kn.kind, SingCertificate::Kind::NoneFound);
  EXPECT_EQ(kn.height, 3);
  EXPECT_THROW(sing_line_search(dx(n, 1, 2) * (x(n, 1) + x(n, 2) * x(n, 2))), std::invalid_argument);
}

TEST(LineSearch, PlaneStep) {
  // Coefficients x1^2 - 4 x2^2 and x1 - 2 x2 vanish on the line (2, 1, 0).
  const int n = 3;
  Poly l = x(n, 1) - x(n, 2) * Rational(2);
  PForm eta = dx(n, 1, 2) * (l * x(n, 3)) + dx(n, 1, 3) * (l * (x(n, 1) + x(n, 2))) + dx(n, 2, 3) * (x(n, 3) * x(n, 3) + l * l);
  auto c = sing_line_search(eta, 0);
  ASSERT_EQ(c.kind, SingCertificate::Kind::Line);
  EXPECT_EQ(c.step, "plane");
  EXPECT_EQ(c.direction, (std::vector<Rational>{2, 1, 0}));
}

TEST(LineSearch, IrrationalPlaneNoted) {
  const int n = 3;
  Poly q = x(n, 1) * x(n, 1) - x(n, 2) * x(n, 2) * Rational(2);
  PForm eta = dx(n, 1, 2) * q + dx(n, 2, 3) * (q + x(n, 3) * x(n, 3));
  auto c = sing_line_search(eta, 2);
  EXPECT_EQ(c.kind, SingCertificate::Kind::NoneFound);
  ASSERT_FALSE(c.irrational_planes.empty());
  EXPECT_EQ(c.irrational_planes.front(), std::make_pair(0, 1));
}

TEST(PointScan, Examples) {
  const int n = 4;
  auto pts = projective_point_scan({x(n, 1), x(n, 2), x(n, 3)}, 1);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0], unit(n, 4));
  EXPECT_TRUE(projective_point_scan(singular_ideal(fixtures::kn_theta()), 10).empty());
  auto axes = projective_point_scan(singular_ideal(fixtures::log_fixture()), 2);
  ASSERT_EQ(axes.size(), 4u);
  for (int i = 1; i <= n; ++i) EXPECT_NE(std::find(axes.begin(), axes.end(), unit(n, i)), axes.end());
  EXPECT_THROW(projective_point_scan({x(n, 1) + Poly::constant(n, Rational(1))}, 1), std::invalid_argument);
  EXPECT_THROW(projective_point_scan({x(8, 1)}, 10), std::invalid_argument);
}

TEST(PointScan, LogExampleOracle) {
  // Common zeros of the six coefficients by support pattern: a coefficient
  // x_k x_l vanishes iff k or l is outside the support.
  const int n = 4;
  auto coeffs = singular_ideal(fixtures::log_fixture());
  const std::vector<Rational> generic{2, 3, 5, 7};
  for (unsigned s = 1; s < 16; ++s) {
    std::vector<Rational> p(4);
    int support = 0;
    for (int i = 0; i < n; ++i)
      if ((s >> i) & 1U) {
        p[static_cast<size_t>(i)] = generic[static_cast<size_t>(i)];
        ++support;
      }
    bool all_zero = true;
    for (const auto& c : coeffs) all_zero = all_zero && c.evaluate(p).is_zero();
    EXPECT_EQ(all_zero, support == 1) << s;
  }
}

TEST(QuadricMap, Examples) {
  auto q = quadric_map(fixtures::kn_theta());
  const int n = 4;
  EXPECT_EQ(q.a, x(n, 3).pow(2));
  EXPECT_EQ(q.b, x(n, 1).pow(2) * Rational(-1));
  EXPECT_EQ(q.c, x(n, 1) * x(n, 2) + x(n, 3) * x(n, 4));
  EXPECT_EQ(q.e, x(n, 4).pow(2));
  EXPECT_EQ(q.f, x(n, 2).pow(2));
  EXPECT_EQ(q.g, x(n, 1) * x(n, 2) - x(n, 3) * x(n, 4));
  EXPECT_TRUE(q.residual.is_zero());
  auto r = quadric_map(dx(n, 1, 2) + dx(n, 3, 4));
  EXPECT_EQ(r.residual, Poly::constant(n, Rational(1)));
  EXPECT_THROW(quadric_map(dx(3, 1, 2)), std::invalid_argument);
}

TEST(QuadricMap, ResidualMatchesSquare) {
  gen::Gen g(6);
  int decomposable = 0;
  for (int k = 0; k < 100; ++k) {
    PForm eta = (k % 2 == 0) ? wedge(g.form(4, 1, 1, 2), g.form(4, 1, 1, 2)) : g.form(4, 2, 1);
    auto q = quadric_map(eta);
    EXPECT_EQ(q.residual.is_zero(), wedge(eta, eta).is_zero());
    decomposable += q.residual.is_zero();
  }
  EXPECT_GE(decomposable, 50);
}

TEST(LineSearch, HomogeneousCorpus) {
  for (const auto& [name, eta] : fixtures::corpus()) {
    if (eta.homogeneity().is(0)) continue;
    SCOPED_TRACE(name);
    auto c = sing_line_search(eta);
    ASSERT_EQ(c.kind, SingCertificate::Kind::Line);
    EXPECT_TRUE(c.verify(eta));
  }
}
