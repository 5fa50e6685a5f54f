#pragma once

#include <functional>
#include <map>

#include "mpkc/expr.hpp"

namespace mpkc {

// Cartesian product of component value sets, hard-capped at 2^20 points.
// The cap has no override: total enumeration is the whole point.
class DomainGrid {
 public:
  explicit DomainGrid(std::vector<ElemSet> components);
  static DomainGrid uniform(const ElemSet& set, u32 arity);

  u64 total() const { return total_; }
  u32 arity() const { return static_cast<u32>(components_.size()); }
  const std::vector<ElemSet>& components() const { return components_; }

  std::vector<u64> point(u64 index) const;
  u64 index_of(std::span<const u64> point) const;

  static constexpr u64 kCap = 1u << 20;

 private:
  std::vector<ElemSet> components_;
  u64 total_ = 1;
};

using VectorMap = std::function<std::vector<u64>(std::span<const u64>)>;

struct BijectivityVerdict {
  bool injective = false;
  bool surjective = false;  // meaningful when a codomain grid is supplied
  std::vector<u64> collision_a, collision_b;  // witness inputs, if any
};

// Image distinctness over the full grid; with `codomain` given, also checks
// the image fills it (bijectivity rather than mere injectivity).
BijectivityVerdict exhaustive_bijectivity(const VectorMap& map, const DomainGrid& grid,
                                          const DomainGrid* codomain = nullptr);

// All preimages of y under the map, by full scan.
std::vector<std::vector<u64>> brute_force_invert(const VectorMap& map,
                                                 std::span<const u64> y,
                                                 const DomainGrid& grid);

// Exact counts |{omega : F(x, omega) = c}| for every x in x_grid and every
// attained value c. Keys are (x index, packed value).
struct PreimageCensus {
  std::map<std::pair<u64, u64>, u64> counts;
  u64 min_nonzero = 0;
  u64 max_count = 0;
  u64 pack(std::span<const u64> value, u64 radix) const;
};
PreimageCensus preimage_census(const VectorMap& f, const DomainGrid& x_grid,
                               const DomainGrid& omega_grid, u64 value_radix);

// All assignments of the dependent variables satisfying every equation
// (each equation evaluates to zero). Equations see the concatenation
// (independent values, dependent values).
using Equation = std::function<u64(std::span<const u64>)>;
std::vector<std::vector<u64>> exhaustive_solve(std::span<const Equation> system,
                                               const DomainGrid& dependent_grid,
                                               std::span<const u64> independent_values);
// Expression-system form: each expression must evaluate to zero; variables
// 0..k-1 are the independent values, k.. the dependent grid.
std::vector<std::vector<u64>> exhaustive_solve(std::span<const Expr> system,
                                               const Interpretation& interp,
                                               const DomainGrid& dependent_grid,
                                               std::span<const u64> independent_values);

}  // namespace mpkc
