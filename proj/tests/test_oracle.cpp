#include <algorithm>

#include "doctest.h"
#include "mpkc/oracle.hpp"
#include "mpkc/permgen.hpp"

using namespace mpkc;

TEST_SUITE("oracle") {

TEST_CASE("grid enumeration and cap") {
  Domain z7{ModulusSpec::make(7)};
  DomainGrid grid = DomainGrid::uniform(ElemSet::all_of(z7), 3);
  CHECK(grid.total() == 343);
  CHECK(grid.point(0) == std::vector<u64>{0, 0, 0});
  CHECK(grid.point(342) == std::vector<u64>{6, 6, 6});
  std::vector<u64> pt{1, 2, 3};
  CHECK(grid.point(grid.index_of(pt)) == pt);

  Domain big{ModulusSpec::make(4096)};
  CHECK_THROWS_AS(DomainGrid::uniform(ElemSet::all_of(big), 2), CapExceededError);
}

TEST_CASE("bijectivity verdicts") {
  Domain gf8{FieldSpec::make_default(2, 3)};
  DomainGrid units(std::vector<ElemSet>{ElemSet::units_of(gf8)});
  auto identity = [](std::span<const u64> x) {
    return std::vector<u64>(x.begin(), x.end());
  };
  auto v = exhaustive_bijectivity(identity, units, &units);
  CHECK(v.injective);
  CHECK(v.surjective);

  Domain z7{ModulusSpec::make(7)};
  DomainGrid all7(std::vector<ElemSet>{ElemSet::all_of(z7)});
  auto square = [&](std::span<const u64> x) {
    return std::vector<u64>{mulmod(x[0], x[0], 7)};
  };
  auto w = exhaustive_bijectivity(square, all7);
  CHECK(!w.injective);
  // witness is a genuine collision
  CHECK(w.collision_a != w.collision_b);
  CHECK(square(w.collision_a) == square(w.collision_b));
  // and the derived pair 1^2 = 6^2 = 1 collides as well
  std::vector<u64> one{1}, six{6};
  CHECK(square(one) == square(six));
}

TEST_CASE("brute force inversion") {
  Domain z9{ModulusSpec::make(9)};
  DomainGrid grid(std::vector<ElemSet>{ElemSet::all_of(z9)});
  auto identity = [](std::span<const u64> x) {
    return std::vector<u64>(x.begin(), x.end());
  };
  std::vector<u64> y{4};
  auto pre = brute_force_invert(identity, y, grid);
  REQUIRE(pre.size() == 1);
  CHECK(pre[0] == std::vector<u64>{4});

  auto f = [&](std::span<const u64> x) {
    return std::vector<u64>{addmod(x[0], mulmod(3, mulmod(x[0], x[0], 9), 9), 9)};
  };
  auto pre2 = brute_force_invert(f, y, grid);
  REQUIRE(pre2.size() == 1);
  CHECK(pre2[0] == std::vector<u64>{1});
}

TEST_CASE("preimage census") {
  Domain z5{ModulusSpec::make(5)};
  DomainGrid xg(std::vector<ElemSet>{ElemSet::all_of(z5)});
  DomainGrid wg = DomainGrid::uniform(ElemSet::all_of(z5), 2);

  auto constant = [](std::span<const u64>) { return std::vector<u64>{3}; };
  auto c1 = preimage_census(constant, xg, wg, 5);
  CHECK(c1.counts.size() == 5);
  CHECK(c1.min_nonzero == 25);  // |G|^kappa per x

  auto projection = [](std::span<const u64> args) {
    return std::vector<u64>{args[1]};  // first pad component
  };
  auto c2 = preimage_census(projection, xg, wg, 5);
  CHECK(c2.min_nonzero == 5);  // |G|^{kappa-1}
  CHECK(c2.max_count == 5);
}

TEST_CASE("census is independent of iteration order") {
  Domain z5{ModulusSpec::make(5)};
  DomainGrid xg(std::vector<ElemSet>{ElemSet::all_of(z5)});
  DomainGrid wg = DomainGrid::uniform(ElemSet::all_of(z5), 2);
  auto f = [](std::span<const u64> args) {
    return std::vector<u64>{mulmod(args[1], args[2], 5)};
  };
  auto direct = preimage_census(f, xg, wg, 5);

  // shuffled recount through a reindexed component order
  Domain z5b{ModulusSpec::make(5)};
  ElemSet shuffled = ElemSet::listed(z5b, {4, 2, 0, 3, 1});
  DomainGrid wg2(std::vector<ElemSet>{shuffled, shuffled});
  auto again = preimage_census(f, xg, wg2, 5);
  CHECK(direct.counts == again.counts);
}

TEST_CASE("generator products re-verify through the oracle") {
  Domain gf9{FieldSpec::make_default(3, 2)};
  DomainGrid all(std::vector<ElemSet>{ElemSet::all_of(gf9)});
  Bijection pw = power_permutation(gf9, 5);
  auto v = exhaustive_bijectivity(
      [&](std::span<const u64> x) { return std::vector<u64>{pw.apply(x[0])}; }, all,
      &all);
  CHECK(v.injective);
  CHECK(v.surjective);

  Bijection lin = linearized_permutation(gf9, std::vector<u64>{0, 1});  // Frobenius
  auto w = exhaustive_bijectivity(
      [&](std::span<const u64> x) { return std::vector<u64>{lin.apply(x[0])}; }, all,
      &all);
  CHECK(w.injective);
  CHECK(w.surjective);
}

TEST_CASE("exhaustive solve") {
  Domain z7{ModulusSpec::make(7)};
  Interpretation interp = Interpretation::make(z7);
  DomainGrid dep(std::vector<ElemSet>{ElemSet::all_of(z7)});

  // x^2 - x = 0 picks out the boolean values
  Expr eq = Expr::add({Expr::pow_const(Expr::variable(0, 0), 2),
                       Expr::mul({Expr::constant(0, 6), Expr::variable(0, 0)})});
  std::vector<Expr> system{eq};
  auto sols = exhaustive_solve(system, interp, dep, {});
  REQUIRE(sols.size() == 2);
  CHECK(sols[0] == std::vector<u64>{0});
  CHECK(sols[1] == std::vector<u64>{1});

  // inconsistent system: x = 1 and x = 2 simultaneously
  Expr e1 = Expr::add({Expr::variable(0, 0), Expr::constant(0, 6)});
  Expr e2 = Expr::add({Expr::variable(0, 0), Expr::constant(0, 5)});
  std::vector<Expr> bad{e1, e2};
  CHECK(exhaustive_solve(bad, interp, dep, {}).empty());
}

}  // TEST_SUITE
