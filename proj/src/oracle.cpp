#include "mpkc/oracle.hpp"

#include <unordered_map>

namespace mpkc {

DomainGrid::DomainGrid(std::vector<ElemSet> components)
    : components_(std::move(components)) {
  for (const auto& c : components_) {
    u64 s = c.size();
    if (s == 0) throw CapExceededError("empty grid component");
    if (total_ > kCap / s) throw CapExceededError("grid exceeds the enumeration cap");
    total_ *= s;
  }
}

DomainGrid DomainGrid::uniform(const ElemSet& set, u32 arity) {
  return DomainGrid(std::vector<ElemSet>(arity, set));
}

std::vector<u64> DomainGrid::point(u64 index) const {
  std::vector<u64> out(components_.size());
  for (size_t i = components_.size(); i-- > 0;) {
    u64 s = components_[i].size();
    out[i] = components_[i].at(index % s);
    index /= s;
  }
  return out;
}

u64 DomainGrid::index_of(std::span<const u64> point) const {
  u64 idx = 0;
  for (size_t i = 0; i < components_.size(); ++i) {
    auto j = components_[i].index_of(point[i]);
    if (!j) throw EvalError("point outside grid");
    idx = idx * components_[i].size() + *j;
  }
  return idx;
}

namespace {

u64 pack_value(std::span<const u64> v, u64 radix) {
  u64 key = 0;
  for (u64 x : v) {
    if (x >= radix) throw EvalError("value outside packing radix");
    key = key * radix + x;
  }
  return key;
}

}  // namespace

BijectivityVerdict exhaustive_bijectivity(const VectorMap& map, const DomainGrid& grid,
                                          const DomainGrid* codomain) {
  BijectivityVerdict verdict;
  std::unordered_map<u64, u64> seen;  // packed image -> input index
  seen.reserve(grid.total() * 2);
  for (u64 i = 0; i < grid.total(); ++i) {
    std::vector<u64> x = grid.point(i);
    std::vector<u64> y = map(x);
    u64 key = pack_value(y, 1u << 21);
    auto [it, fresh] = seen.emplace(key, i);
    if (!fresh) {
      verdict.collision_a = grid.point(it->second);
      verdict.collision_b = std::move(x);
      return verdict;
    }
  }
  verdict.injective = true;
  if (codomain) {
    verdict.surjective = true;
    for (u64 i = 0; i < codomain->total(); ++i) {
      u64 key = pack_value(codomain->point(i), 1u << 21);
      if (!seen.count(key)) {
        verdict.surjective = false;
        break;
      }
    }
  }
  return verdict;
}

std::vector<std::vector<u64>> brute_force_invert(const VectorMap& map,
                                                 std::span<const u64> y,
                                                 const DomainGrid& grid) {
  std::vector<std::vector<u64>> preimages;
  std::vector<u64> target(y.begin(), y.end());
  for (u64 i = 0; i < grid.total(); ++i) {
    std::vector<u64> x = grid.point(i);
    if (map(x) == target) preimages.push_back(std::move(x));
  }
  return preimages;
}

u64 PreimageCensus::pack(std::span<const u64> value, u64 radix) const {
  return pack_value(value, radix);
}

PreimageCensus preimage_census(const VectorMap& f, const DomainGrid& x_grid,
                               const DomainGrid& omega_grid, u64 value_radix) {
  PreimageCensus census;
  for (u64 xi = 0; xi < x_grid.total(); ++xi) {
    std::vector<u64> x = x_grid.point(xi);
    for (u64 wi = 0; wi < omega_grid.total(); ++wi) {
      std::vector<u64> args = x;
      std::vector<u64> w = omega_grid.point(wi);
      args.insert(args.end(), w.begin(), w.end());
      u64 key = pack_value(f(args), value_radix);
      ++census.counts[{xi, key}];
    }
  }
  census.min_nonzero = UINT64_MAX;
  for (const auto& [k, c] : census.counts) {
    census.min_nonzero = std::min(census.min_nonzero, c);
    census.max_count = std::max(census.max_count, c);
  }
  if (census.counts.empty()) census.min_nonzero = 0;
  return census;
}

std::vector<std::vector<u64>> exhaustive_solve(std::span<const Equation> system,
                                               const DomainGrid& dependent_grid,
                                               std::span<const u64> independent_values) {
  std::vector<std::vector<u64>> solutions;
  for (u64 i = 0; i < dependent_grid.total(); ++i) {
    std::vector<u64> args(independent_values.begin(), independent_values.end());
    std::vector<u64> dep = dependent_grid.point(i);
    args.insert(args.end(), dep.begin(), dep.end());
    bool all_zero = true;
    for (const auto& eq : system)
      if (eq(args) != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) solutions.push_back(std::move(dep));
  }
  return solutions;
}

std::vector<std::vector<u64>> exhaustive_solve(std::span<const Expr> system,
                                               const Interpretation& interp,
                                               const DomainGrid& dependent_grid,
                                               std::span<const u64> independent_values) {
  std::vector<Equation> eqs;
  eqs.reserve(system.size());
  for (const Expr& e : system)
    eqs.push_back([&e, &interp](std::span<const u64> args) {
      return expr_eval(e, args, interp);
    });
  return exhaustive_solve(std::span<const Equation>(eqs), dependent_grid,
                          independent_values);
}

}  // namespace mpkc
