#pragma once

#include "mpkc/bijection.hpp"

namespace mpkc {

// Indicator-function family over a finite domain: sum is 1 everywhere,
// pairwise products vanish, each indicator is 0/1-valued. Non-strict
// partitions (identically-zero members) are permitted; padded slots carry
// no representative.
struct PartitionOfUnity {
  Domain dom;
  u32 arity = 1;                  // argument count of the indicators
  std::vector<Expr> indicators;   // one expression per slot
  std::vector<std::optional<u64>> reps;  // discriminator value per real slot
  Expr discriminator;             // valid when built from a discriminating map
  std::shared_ptr<const Interpretation> interp;

  u64 slot_count() const { return indicators.size(); }
  u64 indicator_value(u64 slot, std::span<const u64> z) const;
  // Index of the unique slot whose indicator is 1 at z.
  u64 class_of(std::span<const u64> z) const;

  // Slot-count adjustment for matrix constructions: pads identically-zero
  // indicators, or merges the tail into the last kept slot.
  PartitionOfUnity resized(u64 slots) const;
  // Replace the single indicator argument by an l-variable expression
  // (partition of the product space through a discriminating composite).
  PartitionOfUnity composed_with(const Expr& h, u32 new_arity) const;

  // Exhaustive invariant audit over a full grid of argument tuples.
  void certify(const std::vector<std::vector<u64>>& sample) const;
};

// Partition of a field from the level sets of a discriminating map
// (codomain scanned exhaustively; indicators by the product formula).
PartitionOfUnity partition_from_discriminator(const Expr& f, const Domain& field);

// Partition of Z_{p^l} through h(x) = x^{s p^{l-1}} for s | (p-1):
// k = 1 + (p-1)/s values with unit pairwise differences; indicators by
// Lagrange interpolation on the attained values.
PartitionOfUnity partition_zpl(u64 p, u32 l, u64 s);

// a * (f(g(z_1..z_l)) - c), nonzero everywhere once c is verified outside
// the image of f; rejection carries a preimage witness.
Expr nonvanishing_map(const Poly& f, u64 c, u64 a, const MultiPoly& g,
                      const Domain& field);

// Pointwise inverse of a nonvanishing univariate expression, built from its
// own level-set partition.
Expr invert_nonvanishing(const Expr& f, const Domain& field);

}  // namespace mpkc
