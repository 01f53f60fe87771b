#include "foliate/fixtures.hpp"
#include "foliate/predicates.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace foliate;

namespace {

Poly x(int n, int i) { return Poly::var(n, i - 1); }
PForm dx(int n, int i) { return PForm::dx(n, i - 1); }
PForm dx(int n, int i, int j) { return wedge(dx(n, i), dx(n, j)); }

}  // namespace

TEST(Decomposable, Examples) {
  EXPECT_FALSE(is_decomposable2(dx(4, 1, 2) + dx(4, 3, 4)));
  EXPECT_TRUE(is_decomposable2(wedge(dx(3, 1), dx(3, 2) + dx(3, 3))));
  EXPECT_TRUE(is_decomposable2(fixtures::kn_theta()));
  EXPECT_THROW(is_decomposable2(dx(3, 1)), std::invalid_argument);
}

TEST(MeroDecompose, PivotScan) {
  const int n = 3;
  PForm eta = dx(n, 1, 2) + dx(n, 1, 3);
  auto w = mero_decompose(eta);
  EXPECT_EQ(w.z1, VField::basis(n, 1));
  EXPECT_EQ(w.z2, VField::basis(n, 0));
  EXPECT_EQ(w.pivot, Poly::constant(n, Rational(-1)));
  EXPECT_TRUE(w.verify(eta));
  EXPECT_EQ(eta * w.pivot, wedge(w.omega1.num, w.omega2));
}

TEST(MeroDecompose, SimpleAndKn) {
  auto w = mero_decompose(dx(4, 1, 2));
  EXPECT_TRUE(scalar_ratio(w.omega1.num, dx(4, 1)).has_value());
  EXPECT_TRUE(scalar_ratio(w.omega2, dx(4, 2)).has_value());
  PForm theta = fixtures::kn_theta();
  EXPECT_TRUE(mero_decompose(theta).verify(theta));
  EXPECT_THROW(mero_decompose(dx(4, 1, 2) + dx(4, 3, 4)), std::domain_error);
  EXPECT_THROW(mero_decompose(PForm(4, 2)), std::invalid_argument);
}

TEST(Rotational, Examples) {
  EXPECT_TRUE(rotational4(wedge(d(x(4, 1) * x(4, 2)), d(x(4, 3)))).is_zero());
  PForm eta = dx(4, 1, 2) * x(4, 4);
  VField r = rotational4(eta);
  EXPECT_EQ(contract_volume(r), ext_d(eta));
  EXPECT_EQ(r, VField::basis(4, 2));
  EXPECT_FALSE(rotational4(fixtures::kn_theta()).is_zero());
  EXPECT_THROW(rotational4(dx(3, 1, 2)), std::invalid_argument);
}

TEST(IntegrableC4, Examples) {
  gen::Gen g(5);
  for (int k = 0; k < 10; ++k) {
    PForm eta = wedge(d(g.poly(4, 3)), d(g.poly(4, 3)));
    EXPECT_TRUE(is_integrable2_C4(eta));
  }
  EXPECT_TRUE(is_integrable2_C4(fixtures::log_fixture()));
  EXPECT_FALSE(is_integrable2_C4(fixtures::kn_theta()));
  EXPECT_TRUE(is_integrable2_C4(PForm(4, 2)));
}

TEST(Frobenius, OneForms) {
  EXPECT_TRUE(frobenius_integrable1(d(x(3, 1) * x(3, 2) + x(3, 3))));
  EXPECT_TRUE(frobenius_integrable1(dx(4, 2) * x(4, 1)));
  EXPECT_FALSE(frobenius_integrable1(dx(3, 1) * x(3, 2) + dx(3, 3)));
}

TEST(Frobenius, WithFactors) {
  const int n = 4;
  Poly f = x(n, 1) * x(n, 2), g = x(n, 3) + x(n, 4).pow(2);
  std::vector<PForm> fg{d(f), d(g)};
  EXPECT_TRUE(frobenius_integrable_q(wedge(d(f), d(g)), fg));
  std::vector<PForm> ab{dx(n, 1), dx(n, 2) + dx(n, 3) * x(n, 1)};
  EXPECT_TRUE(frobenius_integrable_q(wedge(ab[0], ab[1]), ab));
  EXPECT_THROW(frobenius_integrable_q(dx(n, 1, 2), ab), std::domain_error);
  // Scalar multiples are accepted.
  EXPECT_TRUE(frobenius_integrable_q(wedge(ab[0], ab[1]) * Rational(3), ab));
}

TEST(Dicritical, Examples) {
  gen::Gen g(8);
  VField xf = g.field(4, 1);
  EXPECT_TRUE(is_dicritical(interior(radial(4), contract_volume(xf))));
  EXPECT_FALSE(is_dicritical(dx(4, 1)));
  EXPECT_FALSE(is_dicritical(fixtures::log_fixture()));
}

TEST(CompleteIntersection, Examples) {
  std::vector<PForm> a{dx(3, 1), dx(3, 2)};
  auto r = complete_intersection(a);
  EXPECT_EQ(r.eta, dx(3, 1, 2));
  EXPECT_TRUE(r.complete);

  const int n = 4;
  auto lam = fixtures::log_lambda();
  auto mu = fixtures::log_mu();
  Poly prod = x(n, 1) * x(n, 2) * x(n, 3) * x(n, 4);
  PForm e1(n, 1), e2(n, 1);
  for (int i = 1; i <= n; ++i) {
    Poly cof = *prod.divide_exact(x(n, i));
    e1 += dx(n, i) * (cof * lam[static_cast<size_t>(i - 1)]);
    e2 += dx(n, i) * (cof * mu[static_cast<size_t>(i - 1)]);
  }
  std::vector<PForm> b{e1, e2};
  auto s = complete_intersection(b);
  EXPECT_EQ(s.f, prod);
  EXPECT_FALSE(s.complete);
  EXPECT_EQ(s.eta, fixtures::log_fixture());

  Poly f = x(n, 1) * x(n, 1) + x(n, 2), g = x(n, 3) * x(n, 4);
  std::vector<PForm> c{d(f), d(g)};
  EXPECT_TRUE(complete_intersection(c).complete);
  std::vector<PForm> dep{dx(n, 1), dx(n, 1) * Rational(2)};
  EXPECT_THROW(complete_intersection(dep), std::domain_error);
  std::vector<PForm> nonint{dx(3, 1) * x(3, 2) + dx(3, 3), dx(3, 1)};
  EXPECT_THROW(complete_intersection(nonint), std::domain_error);
}

TEST(LogExample, Coefficients) {
  const int n = 4;
  PForm eta = fixtures::log_fixture();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Poly rest = Poly::constant(n, Rational(i - j));
      for (int k = 1; k <= n; ++k)
        if (k != i && k != j) rest = rest * x(n, k);
      EXPECT_EQ(eta.coeff(index_set({i - 1, j - 1})), rest);
    }
  std::vector<Rational> l{1, 2, 3, 4};
  EXPECT_THROW(log_example(l, l), std::domain_error);
  for (int i = 1; i <= n; ++i) EXPECT_TRUE(invariant_hyperplane(eta, x(n, i)));
  EXPECT_TRUE(is_integrable2(eta));
  EXPECT_TRUE(generic_weights(fixtures::log_lambda(), fixtures::log_mu()));
}

TEST(InvariantHyperplane, Examples) {
  EXPECT_FALSE(invariant_hyperplane(dx(3, 1, 2), x(3, 3)));
  EXPECT_TRUE(invariant_hyperplane(dx(3, 1, 2) * x(3, 3), x(3, 3)));
  EXPECT_THROW(invariant_hyperplane(dx(3, 1, 2), x(3, 3) * x(3, 3)), std::invalid_argument);
}

TEST(Kupka, Examples) {
  std::vector<Rational> origin{0, 0};
  EXPECT_TRUE(kupka_point(dx(2, 2) * x(2, 1) - dx(2, 1) * x(2, 2), origin));
  Poly f = x(2, 1) * x(2, 1) + x(2, 2) * x(2, 2);
  EXPECT_FALSE(kupka_point(d(f), origin));
  // q F dG - p G dF with F = x1, G = x2, p = q = 1.
  const int n = 4;
  PForm w = dx(n, 2) * x(n, 1) - dx(n, 1) * x(n, 2);
  EXPECT_EQ(ext_d(w), dx(n, 1, 2) * Rational(2));
  std::vector<Rational> p{0, 0, 1, 0};
  EXPECT_TRUE(kupka_point(w, p));
  std::vector<Rational> off{1, 0, 0, 0};
  EXPECT_FALSE(kupka_point(w, off));
}

TEST(FirstIntegrals, Examples) {
  const int n = 4;
  Poly one = Poly::constant(n, Rational(1));
  EXPECT_TRUE(verify_first_integrals(dx(n, 1, 2), x(n, 1), x(n, 2), one));
  Poly l = x(n, 1), q = x(n, 2) * x(n, 3);
  EXPECT_TRUE(verify_first_integrals(wedge(d(l), d(q)), l, q, one));
  EXPECT_FALSE(verify_first_integrals(wedge(d(l), d(q)), l, q, one * Rational(2)));
}

TEST(TangentPullback, Examples) {
  PForm eta = tangent_pullback_example(radial(3), 4);
  EXPECT_EQ(eta, extend(interior(radial(3), PForm::volume(3)), 4));
  EXPECT_TRUE(interior(VField::basis(4, 3), eta).is_zero());
  EXPECT_EQ(eta.coeff_degree(), 1);
  EXPECT_THROW(tangent_pullback_example(radial(4), 4), std::invalid_argument);
}

class PredicateProperties : public ::testing::Test {
protected:
  gen::Gen g{77};
};

TEST_F(PredicateProperties, SquareZeroIffWitness) {
  int decomposable = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(g.integer(3, 5));
    PForm eta = (k % 2 == 0) ? wedge(g.form(n, 1, 2), g.form(n, 1, 2)) : g.form(n, 2, 1);
    if (eta.is_zero()) continue;
    bool witness = true;
    try {
      EXPECT_TRUE(mero_decompose(eta).verify(eta));
    } catch (const std::domain_error&) {
      witness = false;
    }
    EXPECT_EQ(is_decomposable2(eta), witness);
    decomposable += witness;
  }
  EXPECT_GE(decomposable, 50);
}

TEST_F(PredicateProperties, RotationalCriterionMatchesFrobenius) {
  int integrable = 0, non_integrable = 0;
  while (integrable < 50 || non_integrable < 50) {
    const bool want = integrable < 50;
    PForm a(4, 1), b(4, 1);
    if (want) {
      a = d(g.poly(4, 2)) * g.poly(4, 1, 2);
      b = d(g.poly(4, 3));
    } else {
      a = g.form(4, 1, 2);
      b = g.form(4, 1, 2);
    }
    PForm eta = wedge(a, b);
    if (eta.is_zero() || rotational4(eta).is_zero()) continue;
    const bool rot = is_integrable2_C4(eta);
    EXPECT_EQ(rot, is_integrable2(eta));
    std::vector<PForm> f{a, b};
    EXPECT_EQ(rot, frobenius_integrable_q(eta, f));
    if (want) {
      EXPECT_TRUE(rot);
      ++integrable;
    } else if (!rot) {
      ++non_integrable;
    }
  }
}

TEST(IntegrableRotational, ContractionVanishes) {
  for (const PForm& eta : {case_a_log_data(fixtures::case_a_lambda(), fixtures::case_a_mu()).eta, case_b_normal_data(Rational(3, 2), Rational(1)).eta}) {
    PForm de = ext_d(eta);
    ASSERT_FALSE(de.is_zero());
    EXPECT_TRUE(ext_d(de).is_zero());
    EXPECT_TRUE(interior(rotational4(eta), eta).is_zero());
    EXPECT_TRUE(interior(rotational4(eta), de).is_zero());
  }
}
