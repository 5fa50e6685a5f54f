#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "mpkc/parametric.hpp"
#include "mpkc/rng.hpp"

using namespace mpkc;

namespace {

std::vector<std::vector<u64>> full_sample(const ElemSet& set, u32 arity) {
  DomainGrid grid = DomainGrid::uniform(set, arity);
  std::vector<std::vector<u64>> out;
  out.reserve(grid.total());
  for (u64 i = 0; i < grid.total(); ++i) out.push_back(grid.point(i));
  return out;
}

// z^2 - 3 over gf(7): 3 is a quadratic non-residue, so this never vanishes
Expr gf7_nonresidue_shift() {
  return Expr::add({Expr::pow_const(Expr::variable(0, 0), 2), Expr::constant(0, 4)});
}

}  // namespace

TEST_SUITE("parametric") {

TEST_CASE("cube partition of gf(7)") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  Poly cube = Poly::monomial(gf7, 1, 3);
  PartitionOfUnity part = partition_from_discriminator(expr_from_poly(cube, 0), gf7);
  REQUIRE(part.slot_count() == 3);
  // classes {0}, {1,2,4}, {3,5,6} keyed by cube values {0, 1, 6}
  std::vector<std::vector<u64>> classes(3);
  for (u64 x = 0; x < 7; ++x) {
    std::vector<u64> pt{x};
    classes[part.class_of(pt)].push_back(x);
  }
  CHECK(classes[0] == std::vector<u64>{0});
  CHECK(classes[1] == std::vector<u64>{1, 2, 4});
  CHECK(classes[2] == std::vector<u64>{3, 5, 6});
  part.certify(full_sample(ElemSet::all_of(gf7), 1));
}

TEST_CASE("constant discriminator yields the trivial partition") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  PartitionOfUnity part = partition_from_discriminator(Expr::constant(0, 5), gf7);
  REQUIRE(part.slot_count() == 1);
  for (u64 x = 0; x < 7; ++x) {
    std::vector<u64> pt{x};
    CHECK(part.indicator_value(0, pt) == 1);
  }
}

TEST_CASE("rank-1 linear discriminator splits gf(4) in two") {
  Domain gf4{FieldSpec::make_default(2, 2)};
  // T(z) = z + z^2 has kernel {0, 1}
  Expr T = Expr::add({Expr::variable(0, 0), Expr::pow_const(Expr::variable(0, 0), 2)});
  PartitionOfUnity part = partition_from_discriminator(T, gf4);
  REQUIRE(part.slot_count() == 2);
  std::vector<u64> sizes(2, 0);
  for (u64 x = 0; x < 4; ++x) {
    std::vector<u64> pt{x};
    ++sizes[part.class_of(pt)];
  }
  CHECK(sizes == std::vector<u64>{2, 2});
  part.certify(full_sample(ElemSet::all_of(gf4), 1));
}

TEST_CASE("partitions of Z_p^l") {
  PartitionOfUnity p9 = partition_zpl(3, 2, 1);
  REQUIRE(p9.slot_count() == 3);
  std::vector<u64> reps;
  for (auto r : p9.reps) reps.push_back(*r);
  CHECK(reps == std::vector<u64>{0, 1, 8});
  p9.certify(full_sample(ElemSet::all_of(p9.dom), 1));

  // s = p-1 separates units from non-units
  PartitionOfUnity punit = partition_zpl(5, 2, 4);
  CHECK(punit.slot_count() == 2);
  punit.certify(full_sample(ElemSet::all_of(punit.dom), 1));

  CHECK_THROWS_AS(partition_zpl(5, 2, 3), RejectionError);  // 3 does not divide 4

  // attained-value differences are units for every p^l <= 343
  for (auto [p, l] : {std::pair<u64, u32>{3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2},
                      {7, 1}, {7, 2}, {7, 3}, {2, 5}}) {
    for (u64 s = 1; s < p; ++s) {
      if ((p - 1) % s) continue;
      PartitionOfUnity part = partition_zpl(p, l, s);
      const Domain& dom = part.dom;
      for (size_t i = 0; i < part.reps.size(); ++i)
        for (size_t j = i + 1; j < part.reps.size(); ++j)
          REQUIRE(dom.is_unit(dom.sub(*part.reps[i], *part.reps[j])));
      part.certify(full_sample(ElemSet::all_of(dom), 1));
    }
  }
}

TEST_CASE("partition invariants on every generated partition up to gf(512)") {
  for (auto [p, n] : {std::pair<u64, u32>{2, 3}, {2, 9}, {3, 2}, {5, 1}, {7, 1}}) {
    Domain f{FieldSpec::make_default(p, n)};
    u64 q = f.size();
    // power discriminator with a small class count
    u64 N = q - 1;
    u64 r = 0;
    for (u64 cand = N; cand >= 2; --cand)
      if (N % cand == 0 && N / cand + 1 <= 16) {
        r = cand;
        break;
      }
    if (r < 2) continue;
    Poly power = Poly::monomial(f, 1, r);
    PartitionOfUnity part = partition_from_discriminator(expr_from_poly(power, 0), f);
    CHECK(part.slot_count() == 1 + N / r);
    part.certify(full_sample(ElemSet::all_of(f), 1));
  }
}

TEST_CASE("nonvanishing maps") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  Interpretation interp = Interpretation::make(gf7);

  SUBCASE("quadratic non-residue shift") {
    // image of z^2 is {0,1,2,4}; 3 is outside
    Poly sq = Poly::monomial(gf7, 1, 2);
    MultiPoly g = MultiPoly::variable(gf7, 1, 0);
    Expr nv = nonvanishing_map(sq, 3, 1, g, gf7);
    for (u64 z = 0; z < 7; ++z) {
      std::vector<u64> pt{z};
      CHECK(expr_eval(nv, pt, interp) != 0);
    }
    CHECK_THROWS_AS(nonvanishing_map(sq, 4, 1, g, gf7), RejectionError);  // 4 = 2^2
  }

  SUBCASE("irreducible quadratic with c = 0") {
    Domain gf4{FieldSpec::make_default(2, 2)};
    Interpretation i4 = Interpretation::make(gf4);
    // z^2 + z + omega is irreducible over gf(4) for omega = 2
    Poly f(gf4, {2, 1, 1});
    for (u64 z = 0; z < 4; ++z) REQUIRE(f.eval(z) != 0);
    MultiPoly g = MultiPoly::variable(gf4, 1, 0);
    Expr nv = nonvanishing_map(f, 0, 1, g, gf4);
    for (u64 z = 0; z < 4; ++z) {
      std::vector<u64> pt{z};
      CHECK(expr_eval(nv, pt, i4) != 0);
    }
  }

  SUBCASE("power map with c outside the power residues") {
    Domain gf4{FieldSpec::make_default(2, 2)};
    Interpretation i4 = Interpretation::make(gf4);
    const FieldSpec& F = gf4.field();
    Poly f = Poly::monomial(gf4, 1, 3);
    u64 c = 0;
    for (u64 cand = 1; cand < 4; ++cand)
      if (F.pow(cand, 1) != 1) {  // c^((q-1)/r) = c^1
        c = cand;
        break;
      }
    REQUIRE(c != 0);
    MultiPoly g = MultiPoly::variable(gf4, 1, 0);
    Expr nv = nonvanishing_map(f, c, 1, g, gf4);
    for (u64 z = 0; z < 4; ++z) {
      std::vector<u64> pt{z};
      CHECK(expr_eval(nv, pt, i4) != 0);
    }
  }
}

TEST_CASE("pointwise inversion of nonvanishing maps") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  Interpretation interp = Interpretation::make(gf7);

  Expr cst = Expr::constant(0, 4);
  Expr cst_inv = invert_nonvanishing(cst, gf7);
  std::vector<u64> pt0{0};
  CHECK(expr_eval(cst_inv, pt0, interp) == 2);  // 4 * 2 = 8 = 1

  Expr f = gf7_nonresidue_shift();
  Expr finv = invert_nonvanishing(f, gf7);
  for (u64 z = 0; z < 7; ++z) {
    std::vector<u64> pt{z};
    u64 prod = mulmod(expr_eval(f, pt, interp), expr_eval(finv, pt, interp), 7);
    CHECK(prod == 1);
  }
  Expr finvinv = invert_nonvanishing(finv, gf7);
  for (u64 z = 0; z < 7; ++z) {
    std::vector<u64> pt{z};
    CHECK(expr_eval(finvinv, pt, interp) == expr_eval(f, pt, interp));
  }

  Expr vanishing = Expr::add({Expr::variable(0, 0), Expr::constant(0, 6)});
  CHECK_THROWS_AS(invert_nonvanishing(vanishing, gf7), RejectionError);
}

TEST_CASE("parametric permutation matrices") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  Poly cube = Poly::monomial(gf7, 1, 3);
  PartitionOfUnity cubes = partition_from_discriminator(expr_from_poly(cube, 0), gf7);
  // indicator g[sigma(i,j)] with sigma(r,s) = (r+s) mod 2 on a 2-slot partition
  PartitionOfUnity two = cubes.resized(2);

  std::vector<u64> id2{0, 1};
  IndexMap sigma = IndexMap::from_bijections(id2, id2, id2);
  ParametricMatrix P = parametric_permutation_matrix(gf7, two, sigma);
  CHECK(P.kind() == ParametricMatrix::Kind::permutation);

  DomainGrid params(std::vector<ElemSet>{ElemSet::all_of(gf7)});
  P.certify_invertible(params);

  // identity pattern at parameters selecting class 0
  for (u64 z = 0; z < 7; ++z) {
    std::vector<u64> zz{z};
    auto M = P.evaluate(zz);
    std::vector<u64> v{5, 3};
    auto Mv = P.apply(zz, v);
    u64 cls = two.class_of(zz);
    if (cls == 0) {
      CHECK(Mv == v);  // sigma(i,j) = 0 exactly on the diagonal
    } else {
      CHECK(Mv == std::vector<u64>{3, 5});
    }
    // apply_inverse undoes apply for every parameter
    CHECK(P.apply_inverse(zz, Mv) == v);
    u64 ones = 0;
    for (auto& row : M) for (u64 e : row) ones += e == 1;
    CHECK(ones == 2);
  }

  // products and transposes stay parametric permutation matrices
  ParametricMatrix prod = ParametricMatrix::product(P, P.transposed());
  prod.certify_invertible(params);
  for (u64 z = 0; z < 7; ++z) {
    std::vector<u64> zz{z};
    std::vector<u64> v{2, 6};
    CHECK(prod.apply(zz, v) == v);  // P * P^T = I
  }
}

TEST_CASE("general parametric invertible matrices") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  DomainGrid params(std::vector<ElemSet>{ElemSet::all_of(gf7)});

  SUBCASE("identity factors") {
    std::vector<ParametricMatrix::Factor> factors;
    factors.push_back(ParametricMatrix::DiagonalFactor{
        {Expr::constant(0, 1), Expr::constant(0, 1)}});
    ParametricMatrix I = parametric_invertible_matrix_general(gf7, 2, 1, factors, params);
    std::vector<u64> z{3}, v{4, 5};
    CHECK(I.apply(z, v) == v);
    CHECK(I.apply_inverse(z, v) == v);
  }

  SUBCASE("lower-upper product over gf(7)") {
    Expr nv = gf7_nonresidue_shift();
    ParametricMatrix::TriangularFactor lower{true, {{nv, Expr::constant(0, 0)},
                                                    {Expr::variable(0, 0), nv}}};
    ParametricMatrix::TriangularFactor upper{
        false,
        {{nv, Expr::add({Expr::variable(0, 0), Expr::constant(0, 2)})},
         {Expr::constant(0, 0), nv}}};
    std::vector<ParametricMatrix::Factor> factors{lower, upper};
    ParametricMatrix M = parametric_invertible_matrix_general(gf7, 2, 1, factors, params);
    for (u64 z = 0; z < 7; ++z) {
      std::vector<u64> zz{z};
      for (u64 a = 0; a < 7; ++a)
        for (u64 b = 0; b < 7; ++b) {
          std::vector<u64> v{a, b};
          CHECK(M.apply_inverse(zz, M.apply(zz, v)) == v);
        }
    }
  }

  SUBCASE("signature-safe kind rejects triangular factors") {
    ParametricMatrix::TriangularFactor strict{true, {{Expr::constant(0, 1), Expr::constant(0, 0)},
                                                     {Expr::variable(0, 0), Expr::constant(0, 1)}}};
    std::vector<ParametricMatrix::Factor> factors{strict};
    CHECK_THROWS_AS(
        parametric_invertible_matrix_signature_safe(gf7, 2, 1, factors, params),
        RejectionError);
  }
}

TEST_CASE("parametric injections") {
  SUBCASE("identity combinator") {
    Domain gf7{FieldSpec::make_default(7, 1)};
    PartitionOfUnity trivial = partition_from_discriminator(Expr::constant(0, 0), gf7);
    DomainGrid params(std::vector<ElemSet>{ElemSet::all_of(gf7)});
    std::vector<ParametricMatrix::Factor> idf;
    idf.push_back(ParametricMatrix::DiagonalFactor{{Expr::constant(0, 1)}});
    ClassBranch branch;
    branch.live = true;
    branch.phi = parametric_invertible_matrix_general(gf7, 1, 1, idf, params);
    branch.chi = {Expr::constant(0, 0)};
    branch.zeta = {affine_param_map(gf7, 1, Expr::constant(0, 1), Expr::constant(0, 0))};
    ParametricInjection eta(gf7, ElemSet::all_of(gf7), ElemSet::all_of(gf7), 1, 1,
                            trivial, {branch});
    eta.certify();
    for (u64 z = 0; z < 7; ++z)
      for (u64 x = 0; x < 7; ++x) {
        std::vector<u64> zz{z}, xx{x};
        CHECK(eta.forward(zz, xx) == xx);
      }
  }

  SUBCASE("multiplicative univariate special case over gf(8)") {
    Domain gf8{FieldSpec::make_default(2, 3)};
    ElemSet units = ElemSet::units_of(gf8);
    PartitionOfUnity trivial = partition_from_discriminator(Expr::constant(0, 0), gf8);
    DomainGrid params(std::vector<ElemSet>{units});
    // f(z) = z^2 + z + 1 (no roots in gf(8)); g(t) = t^2 + 4 avoids 0 mod 7
    Expr scale = Expr::add({Expr::pow_const(Expr::variable(0, 0), 2),
                            Expr::variable(0, 0), Expr::constant(0, 1)});
    Expr gexp = Expr::add({Expr::pow_const(Expr::variable(1, 0), 2), Expr::constant(1, 4)});
    // squares mod 7 are {0,1,2,4}, so t^2 + 4 stays in {4,5,6,1}
    ParamUnivariateMap zeta = multiplicative_param_map(gf8, 1, scale, gexp);

    std::vector<ParametricMatrix::Factor> idf;
    idf.push_back(ParametricMatrix::DiagonalFactor{{Expr::constant(0, 1)}});
    ClassBranch branch;
    branch.live = true;
    branch.phi = parametric_invertible_matrix_general(gf8, 1, 1, idf, params);
    branch.chi = {Expr::constant(0, 0)};
    branch.zeta = {zeta};
    ParametricInjection eta(gf8, units, units, 1, 1, trivial, {branch});
    // exhaustive roundtrip over the full 7x7 grid
    u64 checked = 0;
    for (u64 zi = 0; zi < units.size(); ++zi)
      for (u64 xi = 0; xi < units.size(); ++xi) {
        std::vector<u64> z{units.at(zi)}, x{units.at(xi)};
        std::vector<u64> y = eta.forward(z, x);
        CHECK(eta.inverse(z, y) == x);
        ++checked;
      }
    CHECK(checked == 49);
  }

  SUBCASE("two classes with distinct per-class maps over gf(7)") {
    Domain gf7{FieldSpec::make_default(7, 1)};
    ElemSet all = ElemSet::all_of(gf7);
    // discriminate parameters by cube class, merged to two slots
    Poly cube = Poly::monomial(gf7, 1, 3);
    PartitionOfUnity part =
        partition_from_discriminator(expr_from_poly(cube, 0), gf7).resized(2);
    DomainGrid params(std::vector<ElemSet>{all});

    auto diag = [&](u64 c) {
      std::vector<ParametricMatrix::Factor> f;
      f.push_back(ParametricMatrix::DiagonalFactor{
          {Expr::constant(0, c), Expr::constant(0, 1)}});
      return parametric_invertible_matrix_general(gf7, 2, 1, f, params);
    };
    ClassBranch b0;
    b0.live = true;
    b0.phi = diag(2);
    b0.chi = {Expr::constant(0, 3), Expr::variable(0, 0)};
    b0.zeta = {affine_param_map(gf7, 1, Expr::constant(0, 3), Expr::constant(0, 1)),
               affine_param_map(gf7, 1, Expr::constant(0, 1), Expr::variable(0, 0))};
    ClassBranch b1;
    b1.live = true;
    b1.phi = diag(4);
    b1.chi = {Expr::variable(0, 0), Expr::constant(0, 0)};
    b1.zeta = {affine_param_map(gf7, 1, Expr::constant(0, 5), Expr::constant(0, 2)),
               affine_param_map(gf7, 1, Expr::constant(0, 2), Expr::constant(0, 6))};
    ParametricInjection eta(gf7, all, all, 1, 2, part, {b0, b1});
    eta.certify();
  }

  SUBCASE("dead classes form the private domain") {
    Domain gf7{FieldSpec::make_default(7, 1)};
    ElemSet all = ElemSet::all_of(gf7);
    Poly cube = Poly::monomial(gf7, 1, 3);
    PartitionOfUnity part =
        partition_from_discriminator(expr_from_poly(cube, 0), gf7).resized(2);
    DomainGrid params(std::vector<ElemSet>{all});
    std::vector<ParametricMatrix::Factor> idf;
    idf.push_back(ParametricMatrix::DiagonalFactor{{Expr::constant(0, 1)}});
    ClassBranch live;
    live.live = true;
    live.phi = parametric_invertible_matrix_general(gf7, 1, 1, idf, params);
    live.chi = {Expr::constant(0, 0)};
    live.zeta = {affine_param_map(gf7, 1, Expr::constant(0, 2), Expr::constant(0, 1))};
    ClassBranch dead;
    dead.live = false;
    dead.dead_outputs = {Expr::constant(0, 3)};  // collapses everything to 3
    ParametricInjection eta(gf7, all, all, 1, 1, part, {live, dead});
    eta.certify();  // roundtrip is only demanded on the live class
    std::vector<u64> z0{0};  // cube value 0 -> class 0 (live)
    CHECK(eta.is_live(z0));
    std::vector<u64> z1{1};  // cube value 1 -> merged class 1 (dead)
    CHECK(!eta.is_live(z1));
    std::vector<u64> x{5};
    CHECK(eta.forward(z1, x) == std::vector<u64>{3});
    CHECK_THROWS_AS(eta.inverse(z1, x), EvalError);
    CHECK(eta.live_parameter() == z0);
  }
}

TEST_CASE("affine parametric injection over a prime-power ring") {
  // parameters and inputs range over all of Z_9; the partition comes from
  // the x -> x^3 level sets and the per-class maps are unit-scaled affine
  PartitionOfUnity part = partition_zpl(3, 2, 1);
  Domain z9 = part.dom;
  ElemSet all = ElemSet::all_of(z9);
  DomainGrid params(std::vector<ElemSet>{all});

  auto diag_const = [&](u64 c) {
    std::vector<ParametricMatrix::Factor> f;
    f.push_back(ParametricMatrix::DiagonalFactor{
        {Expr::constant(0, c), Expr::constant(0, 1)}});
    return parametric_invertible_matrix_general(z9, 2, 1, f, params);
  };
  auto branch = [&](u64 scale_a, u64 scale_b, u64 shift) {
    ClassBranch b;
    b.live = true;
    b.phi = diag_const(scale_a);
    b.chi = {Expr::variable(0, 0), Expr::constant(0, shift)};
    b.zeta = {affine_param_map(z9, 1, Expr::constant(0, scale_b),
                               Expr::mul({Expr::constant(0, 3), Expr::variable(0, 0)})),
              affine_param_map(z9, 1, Expr::constant(0, 7), Expr::constant(0, shift))};
    return b;
  };
  ParametricInjection inj(z9, all, all, 1, 2, part,
                          {branch(2, 4, 1), branch(5, 2, 6), branch(7, 8, 0)});
  inj.certify();
  for (u64 z = 0; z < 9; ++z)
    for (u64 a = 0; a < 9; ++a)
      for (u64 b = 0; b < 9; ++b) {
        std::vector<u64> zz{z}, xx{a, b};
        CHECK(inj.inverse(zz, inj.forward(zz, xx)) == xx);
      }
}

TEST_CASE("oversized certification grids need the sampling override") {
  Domain gf512{FieldSpec::make_default(2, 9)};
  ElemSet units = ElemSet::units_of(gf512);
  PartitionOfUnity trivial = partition_from_discriminator(Expr::constant(0, 0), gf512)
                                 .composed_with(affine_sum_expr(2), 2);
  std::vector<ParametricMatrix::Factor> idf;
  idf.push_back(ParametricMatrix::DiagonalFactor{{Expr::constant(0, 1)}});
  DomainGrid one_param(std::vector<ElemSet>{units});
  ClassBranch b;
  b.live = true;
  b.phi = parametric_invertible_matrix_general(gf512, 1, 2, idf, one_param);
  b.chi = {Expr::constant(0, 0)};
  // x -> z1 * z2 * x^5  (gcd(5, 511) = 1)
  Expr scale = Expr::mul({Expr::variable(0, 0), Expr::variable(0, 1)});
  b.zeta = {multiplicative_param_map(gf512, 2, scale, Expr::constant(1, 5))};
  ParametricInjection inj(gf512, units, units, 2, 1, trivial, {b});
  // 511^2 parameters x 511 inputs blows the enumeration cap
  CHECK_THROWS_AS(inj.certify(), CapExceededError);
  inj.certify(/*allow_sampling=*/true, /*sample_seed=*/17);
}

TEST_CASE("triangular multivariate construction") {
  SUBCASE("all identity components") {
    Domain gf5{FieldSpec::make_default(5, 1)};
    ElemSet units = ElemSet::units_of(gf5);
    std::vector<Bijection> f, g;
    std::vector<ParamUnivariateMap> h;
    for (int i = 0; i < 3; ++i) {
      f.push_back(Bijection::from_forward(units, Evaluator::from_poly(Poly::identity(gf5))));
      g.push_back(Bijection::from_forward(units, Evaluator::from_poly(Poly::identity(gf5))));
      h.push_back(constant_param_map(gf5, 2, 1, 1));
    }
    TriangularMap t = triangular_multivariate(gf5, units, f, g, h);
    std::vector<u64> x{2, 3, 4};
    CHECK(t.forward(x) == x);
    CHECK(t.inverse(x) == x);
  }

  SUBCASE("gf(8) units, m = 2, parametric exponent") {
    Domain gf8{FieldSpec::make_default(2, 3)};
    ElemSet units = ElemSet::units_of(gf8);
    std::vector<Bijection> f{Bijection::from_forward(units, power_permutation(gf8, 3).forward),
                             Bijection::from_forward(units, power_permutation(gf8, 5).forward)};
    std::vector<Bijection> g{Bijection::from_forward(units, power_permutation(gf8, 2).forward),
                             Bijection::from_forward(units, power_permutation(gf8, 4).forward)};
    // h_1 uses its parameter: scale z, exponent t^2 + 4 (never 0 mod 7)
    Expr scale = Expr::variable(0, 0);
    Expr gexp = Expr::add({Expr::pow_const(Expr::variable(1, 0), 2), Expr::constant(1, 4)});
    std::vector<ParamUnivariateMap> h{multiplicative_param_map(gf8, 1, scale, gexp),
                                      constant_param_map(gf8, 1, 1, 1)};
    TriangularMap t = triangular_multivariate(gf8, units, f, g, h);
    DomainGrid grid = DomainGrid::uniform(units, 2);
    for (u64 i = 0; i < grid.total(); ++i) {
      std::vector<u64> x = grid.point(i);
      CHECK(t.inverse(t.forward(x)) == x);
    }
  }

  SUBCASE("gf(5) units, m = 3") {
    Domain gf5{FieldSpec::make_default(5, 1)};
    ElemSet units = ElemSet::units_of(gf5);
    std::vector<Bijection> f, g;
    std::vector<ParamUnivariateMap> h;
    std::vector<u64> fr{1, 3, 3}, gr{3, 1, 3};
    for (int i = 0; i < 3; ++i) {
      f.push_back(Bijection::from_forward(units, power_permutation(gf5, fr[i]).forward));
      g.push_back(Bijection::from_forward(units, power_permutation(gf5, gr[i]).forward));
    }
    // parametric scales z1 * z2 (products of units stay units)
    Expr scale12 = Expr::mul({Expr::variable(0, 0), Expr::variable(0, 1)});
    h.push_back(multiplicative_param_map(gf5, 2, scale12, Expr::constant(1, 3)));
    h.push_back(multiplicative_param_map(gf5, 2, Expr::variable(0, 1), Expr::constant(1, 1)));
    h.push_back(constant_param_map(gf5, 2, 2, 3));
    TriangularMap t = triangular_multivariate(gf5, units, f, g, h);
    DomainGrid grid = DomainGrid::uniform(units, 3);
    CHECK(grid.total() == 64);
    for (u64 i = 0; i < grid.total(); ++i) {
      std::vector<u64> x = grid.point(i);
      CHECK(t.inverse(t.forward(x)) == x);
    }
  }
}

TEST_CASE("hash extension") {
  Domain gf8{FieldSpec::make_default(2, 3)};
  ElemSet units = ElemSet::units_of(gf8);
  auto interp = std::make_shared<Interpretation>(Interpretation::make(gf8));

  auto make_p = [&](u32 m) {
    std::vector<Bijection> f, g;
    std::vector<ParamUnivariateMap> h;
    std::vector<u64> rs{3, 5, 1};
    for (u32 i = 0; i < m; ++i) {
      f.push_back(Bijection::from_forward(units, power_permutation(gf8, rs[i % 3]).forward));
      g.push_back(Bijection::from_forward(units, power_permutation(gf8, rs[(i + 1) % 3]).forward));
      h.push_back(constant_param_map(gf8, m - 1, i + 1, 1));
    }
    return triangular_multivariate(gf8, units, f, g, h);
  };

  SUBCASE("no keys gives back P") {
    TriangularMap P = make_p(2);
    HashExtendedMap Q = hash_extend(P, {}, interp);
    DomainGrid grid = DomainGrid::uniform(units, 2);
    for (u64 i = 0; i < grid.total(); ++i) {
      std::vector<u64> x = grid.point(i);
      CHECK(Q.forward(x) == P.forward(x));
    }
  }

  SUBCASE("one key into a 2-ary injection") {
    TriangularMap P = make_p(2);
    // key x -> x^3 keeps values in the unit group
    HashExtendedMap Q = hash_extend(P, {Expr::pow_const(Expr::variable(0, 0), 3)}, interp);
    std::vector<std::vector<u64>> images;
    for (u64 i = 0; i < units.size(); ++i) {
      std::vector<u64> x{units.at(i)};
      std::vector<u64> y = Q.forward(x);
      CHECK(std::find(images.begin(), images.end(), y) == images.end());
      images.push_back(y);
      auto back = Q.invert(y);
      REQUIRE(back.has_value());
      CHECK(*back == x);
    }
  }

  SUBCASE("constant keys restrict an injective map") {
    TriangularMap P = make_p(2);
    HashExtendedMap Q = hash_extend(P, {Expr::constant(0, 3)}, interp);
    std::vector<std::vector<u64>> images;
    for (u64 i = 0; i < units.size(); ++i) {
      std::vector<u64> x{units.at(i)};
      std::vector<u64> y = Q.forward(x);
      CHECK(std::find(images.begin(), images.end(), y) == images.end());
      images.push_back(y);
    }
  }
}

TEST_CASE("multivariate hybrid discriminators") {
  Domain gf7{FieldSpec::make_default(7, 1)};
  Poly cube = Poly::monomial(gf7, 1, 3);
  PartitionOfUnity base = partition_from_discriminator(expr_from_poly(cube, 0), gf7);

  SUBCASE("affine argument") {
    PartitionOfUnity multi = base.composed_with(affine_sum_expr(2), 2);
    multi.certify(full_sample(ElemSet::all_of(gf7), 2));
  }

  SUBCASE("monomial argument") {
    std::vector<u64> exps{1, 1};
    PartitionOfUnity multi = base.composed_with(monomial_product_expr(2, 3, exps), 2);
    multi.certify(full_sample(ElemSet::all_of(gf7), 2));
  }
}

}  // TEST_SUITE
