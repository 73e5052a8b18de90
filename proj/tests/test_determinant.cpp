// Tests for the characteristic-determinant coefficient tables: agreement
// with an independently assembled symbolic determinant, the exponential
// weight symmetry, closed-form low-order values, and the single-branch
// shortcut.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <random>

#include "doctest.h"
#include "specreg/boundary.hpp"
#include "specreg/delta.hpp"
#include "specreg/expansion.hpp"
#include "specreg/scalars.hpp"
#include "specreg/smooth_function.hpp"

using specreg::BoundaryData;
using specreg::build_expansion_table;
using specreg::Complex;
using specreg::delta_closed_forms;
using specreg::delta_table;
using specreg::ExactBackend;
using specreg::ExpansionTable;
using specreg::PreconditionError;
using specreg::Rational;
using specreg::reduced_delta;
using specreg::SmoothFunction;
using specreg::TauRat;

namespace {

using EF = SmoothFunction<ExactBackend>;
using EC = Complex<TauRat>;

EC c(long num, long den = 1) { return EC{TauRat(Rational(num, den))}; }

EF x_poly(std::initializer_list<long> nums) {
  EF::Poly p;
  for (long n : nums) p.push_back(c(n));
  return EF::polynomial(std::move(p));
}

// Boundary data with s1 = s2 = 0 and corner product 1:
//   U_1 = y'(0) + y'(1),  U_2 = y(0) - y(1).
BoundaryData<ExactBackend> anchored_bc() {
  BoundaryData<ExactBackend> bc;
  bc.a11 = c(1);
  bc.b11 = c(1);
  bc.a20 = c(1);
  bc.b20 = c(-1);
  return bc;
}

// Test-local symbolic assembly of the determinant.  Laurent polynomial in
// lambda with complex tau-rational coefficients; multiplication is the plain
// convolution, so comparing against the table checks the production Cauchy
// products independently.
using Laurent = std::map<int, EC>;

Laurent lmul(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  return out;
}

Laurent ladd(const Laurent& a, const Laurent& b) {
  Laurent out = a;
  for (const auto& [e, v] : b) out[e] += v;
  return out;
}

Laurent lscale(const Laurent& a, const EC& s) {
  Laurent out;
  for (const auto& [e, v] : a) out[e] = v * s;
  return out;
}

EC lcoeff(const Laurent& a, int e) {
  auto it = a.find(e);
  return it == a.end() ? EC{} : it->second;
}

// Endpoint series sum_{s<=m} lambda^{-s} g_{i,nu}^{(s)}(e) as a Laurent poly.
Laurent endpoint_series(const ExpansionTable<ExactBackend>& t, int i, int nu, int e) {
  Laurent out;
  for (int s = 0; s <= t.order(); ++s) {
    EC v = (e == 0) ? t.g(i, nu, s).eval0() : t.g(i, nu, s).eval1();
    if (!(v == EC{})) out[-s] = v;
  }
  return out;
}

struct AssembledDelta {
  Laurent minus, zero, plus;  // weights of e^{-lambda}, 1, e^{lambda}
};

// Full determinant  U_1(y_1) U_2(y_2) - U_1(y_2) U_2(y_1)  with
// y_i = e^{w_i lambda x} sum, y_i' = lambda e^{w_i lambda x} sum', collected
// by the exponential weight e^{k lambda} (w_1 = -1, w_2 = +1).
AssembledDelta assemble(const BoundaryData<ExactBackend>& bc,
                        const ExpansionTable<ExactBackend>& t) {
  // Functional pieces at each endpoint: U(y_i) = A_i + e^{w_i lambda} B_i.
  auto functional_at = [&](int i, const EC& deriv_c, const EC& value_c, int e) {
    Laurent lam_term = lscale(endpoint_series(t, i, 1, e), deriv_c);
    Laurent shifted;
    for (const auto& [ex, v] : lam_term) shifted[ex + 1] = v;  // times lambda
    return ladd(shifted, lscale(endpoint_series(t, i, 0, e), value_c));
  };
  // U_1 pieces
  Laurent u1_at0[3], u1_at1[3], u2_at0[3], u2_at1[3];
  for (int i = 1; i <= 2; ++i) {
    u1_at0[i] = functional_at(i, bc.a11, bc.a10, 0);
    u1_at1[i] = functional_at(i, bc.b11, bc.b10, 1);
    u2_at0[i] = functional_at(i, bc.a21, bc.a20, 0);
    u2_at1[i] = functional_at(i, bc.b21, bc.b20, 1);
  }

  // Product terms carry e^{(w_a + w_b) lambda}; w_1 + w_2 = 0.
  AssembledDelta out;
  // U_1(y_1) U_2(y_2): pieces e^0*e^0 -> 1 ... expand all four combinations.
  auto accumulate = [&](int sign, int a, int b) {
    // U_1(y_a) U_2(y_b); w(y_1) = -1, w(y_2) = +1.
    int wa = (a == 1) ? -1 : 1, wb = (b == 1) ? -1 : 1;
    EC s = (sign > 0) ? c(1) : c(-1);
    auto put = [&](int weight, const Laurent& v) {
      Laurent sv = lscale(v, s);
      if (weight == -1) out.minus = ladd(out.minus, sv);
      if (weight == 0) out.zero = ladd(out.zero, sv);
      if (weight == 1) out.plus = ladd(out.plus, sv);
    };
    put(0, lmul(u1_at0[a], u2_at0[b]));
    put(wb, lmul(u1_at0[a], u2_at1[b]));
    put(wa, lmul(u1_at1[a], u2_at0[b]));
    put(wa + wb, lmul(u1_at1[a], u2_at1[b]));  // a != b here, so weight 0
  };
  accumulate(+1, 1, 2);
  accumulate(-1, 2, 1);
  return out;
}

}  // namespace

TEST_CASE("coefficient table matches the directly assembled determinant") {
  std::mt19937_64 rng(301);
  std::uniform_int_distribution<long> coef(-3, 3);
  auto rc = [&] { return c(coef(rng), 2); };
  for (int trial = 0; trial < 6; ++trial) {
    BoundaryData<ExactBackend> bc;
    bc.a11 = rc();
    bc.b11 = rc();
    if (bc.a11 == EC{} && bc.b11 == EC{}) bc.a11 = c(1);
    bc.a10 = rc();
    bc.b10 = rc();
    bc.a20 = rc();
    bc.b20 = rc();
    if (bc.a20 == EC{} && bc.b20 == EC{}) bc.b20 = c(1);

    EF q = x_poly({coef(rng), coef(rng), coef(rng)});
    const int m = 4;
    auto t = build_expansion_table(q, m);
    auto table = delta_table(bc, t);
    auto direct = assemble(bc, t);

    for (int i = 0; i <= m; ++i) {
      CHECK(table.delta(-1, i) == lcoeff(direct.minus, 1 - i));
      CHECK(table.delta(0, i) == lcoeff(direct.zero, 1 - i));
      CHECK(table.delta(1, i) == lcoeff(direct.plus, 1 - i));
    }
  }
}

TEST_CASE("leading coefficients depend only on the boundary data") {
  std::mt19937_64 rng(302);
  std::uniform_int_distribution<long> coef(-4, 4);
  BoundaryData<ExactBackend> bc;
  bc.a11 = c(coef(rng), 3);
  bc.b11 = c(2);
  bc.a10 = c(coef(rng));
  bc.b10 = c(coef(rng), 2);
  bc.a20 = c(-3);
  bc.b20 = c(coef(rng), 2);
  EF q = x_poly({1, 2, -1});
  auto t = build_expansion_table(q, 2);
  auto table = delta_table(bc, t);
  // delta_{-1}^{(1)} = -(a20 b11 + b20 a11), delta_1^{(1)} mirrors it.
  EC s1 = bc.a20 * bc.b11 + bc.b20 * bc.a11;
  CHECK(table.delta(-1, 0) == EC{} - s1);
  CHECK(table.delta(1, 0) == EC{} - s1);
  // delta_{-1}^{(0)} = -(1/2) s1 Int q - s2.
  EC expect = (EC{} - s1) * c(1, 2) * q.definite_integral01() - bc.s2();
  CHECK(table.delta(-1, 1) == expect);

  auto cf = delta_closed_forms(bc, q);
  CHECK(cf.depth0 == table.delta(-1, 0));
  CHECK(cf.depth1 == table.delta(-1, 1));
}

TEST_CASE("opposite exponential weights alternate in sign") {
  // delta_{-1}^{(1-i)} = (-1)^i delta_{+1}^{(1-i)} for every admissible
  // boundary set and potential.
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int trial = 0; trial < 8; ++trial) {
    BoundaryData<ExactBackend> bc;
    bc.a11 = c(coef(rng), 2);
    bc.b11 = c(coef(rng), 2);
    if (bc.a11 == EC{} && bc.b11 == EC{}) bc.b11 = c(1);
    bc.a10 = c(coef(rng));
    bc.b10 = c(coef(rng));
    bc.a20 = c(coef(rng), 2);
    bc.b20 = c(coef(rng), 2);
    if (bc.a20 == EC{} && bc.b20 == EC{}) bc.a20 = c(1);
    EF q = x_poly({coef(rng), coef(rng), coef(rng), coef(rng)});
    auto t = build_expansion_table(q, 4);
    auto table = delta_table(bc, t);
    for (int i = 0; i <= 4; ++i) {
      EC lhs = table.delta(-1, i);
      EC rhs = table.delta(1, i);
      if (i % 2 == 1) rhs = EC{} - rhs;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("frozen depth values for q = x under the anchored boundary set") {
  auto bc = anchored_bc();
  EF q = x_poly({0, 1});
  auto t = build_expansion_table(q, 4);
  auto table = delta_table(bc, t);
  CHECK(table.delta(-1, 0) == EC{});
  CHECK(table.delta(-1, 1) == EC{});
  CHECK(table.delta(-1, 2) == c(1, 2));
  CHECK(table.delta(-1, 3) == c(5, 8));
  CHECK(table.delta(-1, 4) == c(25, 64));

  auto cf = delta_closed_forms(bc, q);
  REQUIRE(cf.tail_valid);
  CHECK(cf.depth2 == c(1, 2));
  CHECK(cf.depth3 == c(5, 8));
  CHECK(cf.depth4 == c(25, 64));
}

TEST_CASE("closed forms track the table for more potentials") {
  auto bc = anchored_bc();
  struct Case {
    EF q;
    long n2, d2, n3, d3, n4, d4;
  };
  std::vector<Case> cases;
  cases.push_back({x_poly({1, 1}), 1, 2, 7, 8, 65, 64});   // q = 1 + x
  cases.push_back({x_poly({0, 0, 1}), 1, 2, 7, 12, 49, 144});  // q = x^2
  for (const auto& tc : cases) {
    auto t = build_expansion_table(tc.q, 4);
    auto table = delta_table(bc, t);
    auto cf = delta_closed_forms(bc, tc.q);
    REQUIRE(cf.tail_valid);
    CHECK(cf.depth2 == c(tc.n2, tc.d2));
    CHECK(cf.depth3 == c(tc.n3, tc.d3));
    CHECK(cf.depth4 == c(tc.n4, tc.d4));
    CHECK(table.delta(-1, 2) == cf.depth2);
    CHECK(table.delta(-1, 3) == cf.depth3);
    CHECK(table.delta(-1, 4) == cf.depth4);
  }
}

TEST_CASE("closed-form tail declines when the leading coefficients survive") {
  BoundaryData<ExactBackend> bc;
  bc.a11 = c(1);
  bc.b20 = c(1);  // s1 = 1
  bc.a20 = c(0);
  EF q = x_poly({1});
  auto cf = delta_closed_forms(bc, q);
  CHECK_FALSE(cf.tail_valid);
  CHECK(cf.tail_reason.find("s1") != std::string::npos);
}

TEST_CASE("symmetric potentials kill the first surviving coefficient") {
  // q = x(1-x) satisfies q(x) = q(1-x); with the anchored boundary set the
  // depth-2 and depth-3 coefficients both vanish.
  auto bc = anchored_bc();
  EF q = x_poly({0, 1}) - x_poly({0, 0, 1});
  auto t = build_expansion_table(q, 3);
  auto table = delta_table(bc, t);
  CHECK(table.delta(-1, 2) == EC{});
  CHECK(table.delta(-1, 3) == EC{});
}

TEST_CASE("single-branch shortcut equals the full table column") {
  std::mt19937_64 rng(304);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int trial = 0; trial < 4; ++trial) {
    // Random boundary data subject to s1 = s2 = 0, a20 b11 != 0.
    BoundaryData<ExactBackend> bc;
    bc.a11 = c(coef(rng), 2);
    if (bc.a11 == EC{}) bc.a11 = c(1);
    bc.b11 = c(2);
    bc.a20 = c(3, 2);
    // b20 = -b11 a20 / a11 makes s1 = 0.
    bc.b20 = specreg::cdiv<ExactBackend>(EC{} - bc.b11 * bc.a20, bc.a11);
    bc.a10 = c(coef(rng), 2);
    // b10 = a10 b20 / a20 makes s2 = 0.
    bc.b10 = specreg::cdiv<ExactBackend>(bc.a10 * bc.b20, bc.a20);

    EF q = x_poly({coef(rng), 1, coef(rng)});
    auto t = build_expansion_table(q, 4);
    auto table = delta_table(bc, t);
    for (int i = 0; i <= 4; ++i) CHECK(reduced_delta(bc, t, i) == table.delta(-1, i));
  }
}

TEST_CASE("single-branch shortcut enforces its preconditions") {
  EF q = x_poly({1});
  auto t = build_expansion_table(q, 2);
  BoundaryData<ExactBackend> bc = anchored_bc();
  bc.b20 = c(1);  // s1 = a11 b20 + b11 a20 = 2 != 0
  CHECK_THROWS_AS(reduced_delta(bc, t, 1), PreconditionError);
  bc = anchored_bc();
  bc.a10 = c(1);  // s2 = a10 b20 = -1 != 0
  CHECK_THROWS_AS(reduced_delta(bc, t, 1), PreconditionError);
  bc = anchored_bc();
  bc.b11 = c(0);  // corner product vanishes but the gate still holds
  CHECK_THROWS_AS(reduced_delta(bc, t, 1), PreconditionError);
  CHECK_THROWS_AS(reduced_delta(anchored_bc(), t, 5), std::out_of_range);
}

TEST_CASE("table construction rejects non-reduced boundary data") {
  EF q = x_poly({1});
  auto t = build_expansion_table(q, 2);
  BoundaryData<ExactBackend> bc = anchored_bc();
  bc.a21 = c(1);
  CHECK_THROWS_AS(delta_table(bc, t), PreconditionError);
  bc = anchored_bc();
  bc.a20 = c(0);
  bc.b20 = c(0);
  CHECK_THROWS_AS(delta_table(bc, t), PreconditionError);
}

TEST_CASE("float table mirrors the exact one") {
  auto bc = anchored_bc();
  EF q = x_poly({0, 1});
  auto t = build_expansion_table(q, 3);
  auto exact = delta_table(bc, t);
  auto ft = specreg::to_float(exact);
  for (int k = -1; k <= 1; ++k)
    for (int i = 0; i <= 3; ++i) {
      CHECK(ft.delta(k, i).re ==
            doctest::Approx(exact.delta(k, i).re.to_double()).epsilon(1e-14));
      CHECK(ft.scale(k, i) == exact.scale(k, i));
    }
}

TEST_CASE("truncated determinant approximates a known exact determinant") {
  // U_1 = y'(0), U_2 = y(1), q = 0: the determinant is -2 lambda cosh(lambda)
  // and every table coefficient beyond the leading one vanishes.
  BoundaryData<ExactBackend> bc;
  bc.a11 = c(1);
  bc.b20 = c(1);
  EF q = EF::zero();
  auto t = build_expansion_table(q, 2);
  auto table = delta_table(bc, t);
  CHECK(table.delta(-1, 0) == c(-1));
  CHECK(table.delta(1, 0) == c(-1));
  CHECK(table.delta(-1, 1) == EC{});
  CHECK(table.delta(0, 0) == EC{});
  auto ft = specreg::to_float(table);
  std::complex<double> lam(0.7, 1.3);
  auto val = specreg::asymptotic_Delta(ft, lam);
  auto expect = -2.0 * lam * std::cosh(lam);
  CHECK(std::abs(val - expect) <= 1e-12 * std::abs(expect));
}
