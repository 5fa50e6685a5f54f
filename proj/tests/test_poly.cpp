#include "doctest.h"
#include "mpkc/poly.hpp"
#include "mpkc/rng.hpp"

using namespace mpkc;

namespace {

Poly random_poly(SeededRng& rng, const Domain& dom, u64 max_deg) {
  std::vector<u64> coeffs(rng.below(max_deg + 1) + 1);
  for (u64& c : coeffs) c = rng.below(dom.size());
  return Poly(dom, std::move(coeffs));
}

bool exhaustive_bijective_table(const Poly& f) {
  u64 n = f.domain().size();
  std::vector<bool> seen(n, false);
  for (u64 x = 0; x < n; ++x) {
    u64 y = f.eval(x);
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

// Unit in Z_n[x] by exhaustive inverse search among deg <= 2 polynomials.
bool unit_by_search(const Poly& f, const Domain& dom) {
  u64 n = dom.size();
  for (u64 c0 = 0; c0 < n; ++c0)
    for (u64 c1 = 0; c1 < n; ++c1)
      for (u64 c2 = 0; c2 < n; ++c2) {
        Poly g(dom, {c0, c1, c2});
        if ((f * g) == Poly::constant(dom, 1)) return true;
      }
  return false;
}

// Criterion (A): every CRT component reduced mod p is a constant unit.
bool unit_by_criterion(const Poly& f) {
  const ModulusSpec& spec = f.domain().ring();
  for (const auto& fac : spec.factors) {
    if (f.coeff(0) % fac.p == 0) return false;
    for (size_t k = 1; k < f.coeffs().size(); ++k)
      if (f.coeff(k) % fac.p != 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("arithmetic basics") {
  Domain z2{ModulusSpec::make(2)};
  Poly xp1(z2, {1, 1});
  CHECK((xp1 + xp1).is_zero());

  Domain z12{ModulusSpec::make(12)};
  Poly x = Poly::identity(z12);
  CHECK((x * x) == Poly(z12, {0, 0, 1}));

  Domain z5{ModulusSpec::make(5)};
  Poly sq(z5, {0, 0, 1});
  CHECK(sq.compose(Poly(z5, {1, 1})) == Poly(z5, {1, 2, 1}));
}

TEST_CASE("mixed-domain arithmetic is rejected") {
  Poly a(Domain{ModulusSpec::make(12)}, {1, 1});
  Poly b(Domain{ModulusSpec::make(7)}, {1, 1});
  CHECK_THROWS_AS(a + b, EvalError);
}

TEST_CASE("degree cap guards arithmetic growth") {
  Domain z5{ModulusSpec::make(5)};
  Poly big = Poly::monomial(z5, 1, 60);
  CHECK_THROWS_AS(big * big, EvalError);
  DegreeCapGuard guard(200);
  CHECK((big * big).degree() == 120);
}

TEST_CASE("evaluation") {
  Domain z12{ModulusSpec::make(12)};
  Poly f(z12, {1, 0, 1});  // x^2 + 1
  CHECK(f.eval(5) == 2);   // 26 mod 12
  CHECK(f.eval(0) == 1);
}

TEST_CASE("evaluation respects the CRT decomposition on Z_12") {
  Domain z12{ModulusSpec::make(12)};
  Poly f(z12, {7, 7});
  auto parts = poly_crt_split(f);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == Poly(parts[0].domain(), {3, 3}));
  CHECK(parts[1] == Poly(parts[1].domain(), {1, 1}));
  for (u64 x = 0; x < 12; ++x) {
    CHECK(f.eval(x) % 4 == parts[0].eval(x % 4));
    CHECK(f.eval(x) % 3 == parts[1].eval(x % 3));
  }
}

TEST_CASE("derivatives") {
  Domain z3{ModulusSpec::make(3)};
  CHECK(Poly(z3, {0, 0, 0, 1}).derivative().is_zero());  // 3x^2 = 0
  Domain z12{ModulusSpec::make(12)};
  CHECK(Poly(z12, {0, 1, 1}).derivative() == Poly(z12, {1, 2}));
  CHECK(Poly::constant(z12, 5).derivative().is_zero());
}

TEST_CASE("crt split and join roundtrip") {
  Domain z12{ModulusSpec::make(12)};
  CHECK(poly_crt_join(z12, poly_crt_split(Poly::zero(z12))).is_zero());

  Domain z360{ModulusSpec::make(360)};
  SeededRng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Poly f = random_poly(rng, z360, 6);
    CHECK(poly_crt_join(z360, poly_crt_split(f)) == f);
  }
}

TEST_CASE("eval commutes with CRT components on random samples") {
  Domain z360{ModulusSpec::make(360)};
  const ModulusSpec& spec = z360.ring();
  SeededRng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    Poly f = random_poly(rng, z360, 4);
    auto parts = poly_crt_split(f);
    for (u64 x = 0; x < 360; x += 7) {
      for (size_t i = 0; i < parts.size(); ++i) {
        REQUIRE(f.eval(x) % spec.factors[i].pl == parts[i].eval(x % spec.factors[i].pl));
      }
    }
  }
}

TEST_CASE("products decompose componentwise") {
  Domain z360{ModulusSpec::make(360)};
  SeededRng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    Poly f = random_poly(rng, z360, 4), g = random_poly(rng, z360, 4);
    auto fp = poly_crt_split(f), gp = poly_crt_split(g), prod = poly_crt_split(f * g);
    for (size_t i = 0; i < fp.size(); ++i) REQUIRE(prod[i] == fp[i] * gp[i]);
  }
}

TEST_CASE("unit criterion matches exhaustive inverse search over Z_12") {
  Domain z12{ModulusSpec::make(12)};
  for (u64 c0 = 0; c0 < 12; ++c0)
    for (u64 c1 = 0; c1 < 12; ++c1)
      for (u64 c2 = 0; c2 < 12; ++c2) {
        Poly f(z12, {c0, c1, c2});
        REQUIRE(unit_by_criterion(f) == unit_by_search(f, z12));
      }
}

TEST_CASE("lagrange interpolation") {
  Domain z5{ModulusSpec::make(5)};
  std::vector<std::pair<u64, u64>> id{{0, 0}, {1, 1}, {2, 2}};
  CHECK(lagrange_interpolate(z5, id) == Poly::identity(z5));

  Domain z3{ModulusSpec::make(3)};
  std::vector<std::pair<u64, u64>> swp{{0, 1}, {1, 0}};
  CHECK(lagrange_interpolate(z3, swp) == Poly(z3, {1, 2}));

  std::vector<std::pair<u64, u64>> single{{4, 2}};
  CHECK(lagrange_interpolate(z5, single) == Poly::constant(z5, 2));
}

TEST_CASE("lagrange interpolation error paths") {
  Domain z9{ModulusSpec::make(9)};
  std::vector<std::pair<u64, u64>> repeated{{1, 0}, {1, 1}};
  CHECK_THROWS_AS(lagrange_interpolate(z9, repeated), RejectionError);
  std::vector<std::pair<u64, u64>> nonunit{{0, 0}, {3, 1}};  // difference 3 mod 9
  CHECK_THROWS_AS(lagrange_interpolate(z9, nonunit), RejectionError);
}

TEST_CASE("bijectivity criterion examples over Z_9") {
  Domain z9{ModulusSpec::make(9)};
  Poly f(z9, {0, 1, 3});  // x + 3x^2
  CHECK(is_bijective_mod_pl(f, 3, 2));
  CHECK(exhaustive_bijective_table(f));
  // the full value table from the derivation: {0,4,5,3,7,8,6,1,2}
  std::vector<u64> expected{0, 4, 5, 3, 7, 8, 6, 1, 2};
  for (u64 x = 0; x < 9; ++x) CHECK(f.eval(x) == expected[x]);

  CHECK(!is_bijective_mod_pl(Poly(z9, {0, 0, 1}), 3, 2));  // x^2 collides mod 3
  Poly cube(z9, {0, 0, 0, 1});
  CHECK(!is_bijective_mod_pl(cube, 3, 2));  // derivative 3x^2 = 0 mod 3
  CHECK(!exhaustive_bijective_table(cube));
}

TEST_CASE("bijectivity criterion agrees with exhaustive distinctness") {
  SeededRng rng(44);
  for (auto [p, l] : {std::pair<u64, u32>{2, 3}, {2, 10}, {3, 2}, {3, 4}, {5, 3},
                      {7, 2}, {7, 4}, {11, 2}, {13, 3}}) {
    u64 pl = 1;
    for (u32 i = 0; i < l; ++i) pl *= p;
    REQUIRE(pl <= 10000);
    Domain dom{ModulusSpec::make(pl)};
    for (int trial = 0; trial < 60; ++trial) {
      Poly f = random_poly(rng, dom, 6);
      REQUIRE(is_bijective_mod_pl(f, p, l) == exhaustive_bijective_table(f));
    }
  }
}

TEST_CASE("monic quadratics split over Z_12 exactly when every component splits") {
  // test-only classification helper: a monic factor exists over Z_n iff one
  // exists modulo every prime-power component
  Domain z12{ModulusSpec::make(12)};
  auto splits_over = [](const Poly& f, u64 m) {
    for (u64 a = 0; a < m; ++a)
      for (u64 b = 0; b < m; ++b) {
        // (x + a)(x + b) compared coefficientwise
        if (addmod(a, b, m) == f.coeff(1) && mulmod(a, b, m) == f.coeff(0)) return true;
      }
    return false;
  };
  for (u64 c0 = 0; c0 < 12; ++c0)
    for (u64 c1 = 0; c1 < 12; ++c1) {
      Poly f(z12, {c0, c1, 1});
      auto parts = poly_crt_split(f);
      bool by_components = splits_over(parts[0], 4) && splits_over(parts[1], 3);
      REQUIRE(splits_over(f, 12) == by_components);
    }
}

TEST_CASE("multipoly evaluation") {
  Domain z7{ModulusSpec::make(7)};
  MultiPoly m(z7, 2);
  m.add_term({2, 1}, 3);  // 3 x^2 y
  m.add_term({0, 0}, 1);
  std::vector<u64> pt{2, 5};
  CHECK(m.eval(pt) == (3 * 4 * 5 + 1) % 7);
  std::vector<u64> bad{1};
  CHECK_THROWS_AS(m.eval(bad), EvalError);
}

}  // TEST_SUITE
