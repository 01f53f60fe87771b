#pragma once

#include "foliate/homog.hpp"

#include <string>
#include <utility>
#include <vector>

namespace foliate::fixtures {

namespace detail {
inline Poly z(int i) { return Poly::var(4, i - 1); }
inline PForm dz(int i) { return PForm::dx(4, i - 1); }
inline PForm dz(int i, int j) { return wedge(dz(i), dz(j)); }
}  // namespace detail

/// Decomposable, non-integrable quadratic 2-form on C^4 with an isolated singularity.
inline PForm kn_theta() {
  using namespace detail;
  PForm t = dz(2, 3) * z(3).pow(2) - dz(3, 1) * z(1).pow(2) + dz(1, 2) * (z(1) * z(2) + z(3) * z(4));
  PForm w = dz(1) * z(4).pow(2) + dz(2) * z(2).pow(2) + dz(3) * (z(1) * z(2) - z(3) * z(4));
  return t + wedge(w, dz(4));
}

inline std::vector<Rational> log_lambda() { return {1, 2, 3, 4}; }
inline std::vector<Rational> log_mu() { return {1, 1, 1, 1}; }
inline PForm log_fixture() { return log_example(log_lambda(), log_mu()); }

inline std::vector<Rational> case_a_lambda() { return {1, -1, 2, -2}; }
inline std::vector<Rational> case_a_mu() { return {2, 1, 1, -3}; }

/// Pencil q F dG - p G dF of two quadrics sharing the line through (1,1,1,1).
struct Pencil {
  Poly f, g;
  Rational p, q;
  PForm omega;
  std::vector<Rational> line;
};

inline Pencil pencil() {
  using namespace detail;
  Pencil pc{z(1) * z(3) - z(2).pow(2), z(2) * z(4) - z(3).pow(2), 1, 1, PForm(4, 1), {1, 1, 1, 1}};
  pc.omega = d(pc.g) * (pc.f * pc.q) - d(pc.f) * (pc.g * pc.p);
  return pc;
}

/// i_Z dz1^dz2^dz3 on C^4 with a quadratic field Z of nonzero divergence.
inline PForm rank_one_template() {
  VField zf(3);
  auto x = [](int i) { return Poly::var(3, i - 1); };
  zf[0] = x(1) * x(1) + x(2) * x(3);
  zf[1] = x(2) * x(3) - x(1) * x(2);
  zf[2] = x(1) * x(2) + x(3) * x(3);
  return tangent_pullback_example(zf, 4);
}

/// d(z1 z2) ^ (A dz3 + B dz4) + (a z1 z2 + q) dz3^dz4 with A = z3, B = 0, a = 1, q = 0.
inline PForm semisimple_template() {
  using namespace detail;
  return wedge(d(z(1) * z(2)), dz(3) * z(3)) + dz(3, 4) * (z(1) * z(2));
}

/// (z2 dz2 - z1 dz3) ^ (A dz1 + B dz4) + C dz1^dz4 with
/// C = -z3 B + a (z2^2 - 2 z1 z3) + q, A = z4, B = z1, a = 1, q = z4^2.
inline PForm cubic_nilpotent_template() {
  using namespace detail;
  Poly a = z(4), b = z(1);
  Poly c = -z(3) * b + (z(2).pow(2) - z(1) * z(3) * Rational(2)) + z(4).pow(2);
  return wedge(dz(2) * z(2) - dz(3) * z(1), dz(1) * a + dz(4) * b) + dz(1, 4) * c;
}

/// (z2 dz3 - z1 dz4) ^ (A dz1 + B dz2) + C dz1^dz2 with
/// C = -z3 A - z4 B + a (z2 z3 - z1 z4) + q, A = z2, B = z1, a = 1, q = z1 z2.
inline PForm square_zero_template() {
  using namespace detail;
  Poly a = z(2), b = z(1);
  Poly c = -z(3) * a - z(4) * b + (z(2) * z(3) - z(1) * z(4)) + z(1) * z(2);
  return wedge(dz(3) * z(2) - dz(4) * z(1), dz(1) * a + dz(2) * b) + dz(1, 2) * c;
}

/// (1/4) i_R i_X nu for a traceless linear X.
inline PForm dicritical_template() {
  Matrix m(4, 4);
  m(0, 1) = 1;
  m(1, 0) = -1;
  m(2, 2) = 2;
  m(3, 3) = -2;
  return interior(radial(4), contract_volume(VField::linear(m))) * Rational(1, 4);
}

/// i_L dz1^dz2^dz3 on C^4 for a linear field L of divergence 1.
inline PForm linear_field_template() {
  Matrix m(3, 3);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 2) = -1;
  m(2, 0) = 3;
  return tangent_pullback_example(VField::linear(m), 4);
}

/// d(i_R beta) on C^4 for a quadratic 2-form beta in z1, z2, z3.
inline PForm linear_pullback_template() {
  auto x = [](int i) { return Poly::var(3, i - 1); };
  auto dx = [](int i, int j) { return wedge(PForm::dx(3, i - 1), PForm::dx(3, j - 1)); };
  PForm beta = dx(2, 3) * (x(1) * x(1) + x(2) * x(3)) + dx(3, 1) * (x(2) * x(2) + x(1) * x(3)) +
               dx(1, 2) * (x(3) * x(3) + x(1) * x(2));
  return extend(ext_d(interior(radial(3), beta)), 4);
}

/// Homogeneous integrable 2-forms on C^4 covering the classifier's branches.
inline std::vector<std::pair<std::string, PForm>> corpus() {
  using namespace detail;
  std::vector<std::pair<std::string, PForm>> out;
  out.emplace_back("darboux", dz(1, 2) + dz(1, 3));
  out.emplace_back("linear vector field", linear_field_template());
  out.emplace_back("L·Q", wedge(dz(1), d(z(2) * z(3) + z(4).pow(2))));
  out.emplace_back("x1x2x3 logarithmic", ext_d(log_primitive({z(1), z(2), z(3)}, {1, 2, -3})));
  out.emplace_back("R(2,2)", wedge(d(z(1) * z(2)), d(z(3) * z(4) + z(1).pow(2))));
  out.emplace_back("R(1,3)", wedge(dz(1) + dz(2), d(z(2) * z(3) * z(4) + z(3).pow(3))));
  out.emplace_back("L(1,1,1,1)", ext_d(log_primitive({z(1), z(2), z(3), z(4)}, {1, 2, -1, -2})));
  out.emplace_back("L(1,1,2)", ext_d(log_primitive({z(1), z(2), z(3) * z(4) + z(1) * z(2)}, {2, 4, -3})));
  out.emplace_back("E(n-1)", exceptional_form(4));
  out.emplace_back("S(2,n)", linear_pullback_template());
  // The logarithmic example with mu = (1,1,1,1) is closed.
  out.emplace_back("L(1,1,1,1)", log_fixture());
  out.emplace_back("commuting", case_a_log_data(case_a_lambda(), case_a_mu()).eta);
  out.emplace_back("nilpotent", case_b_normal_data(Rational(3, 2), Rational(1)).eta);
  out.emplace_back("dicritical", dicritical_template());
  out.emplace_back("rank-one rotational", rank_one_template());
  out.emplace_back("rank-two semisimple", semisimple_template());
  out.emplace_back("rank-two nilpotent, cubic", cubic_nilpotent_template());
  out.emplace_back("rank-two nilpotent, square zero", square_zero_template());
  return out;
}

}  // namespace foliate::fixtures
