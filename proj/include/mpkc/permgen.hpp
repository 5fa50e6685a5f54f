#pragma once

#include "mpkc/partition.hpp"

namespace mpkc {

// f(z) = sum a_i z^{p^{i-1}}, accepted iff the kernel is trivial
// (exhaustive scan); rejection carries a nonzero kernel witness.
Bijection linearized_permutation(const Domain& field, std::span<const u64> coeffs);

// f(z) = z^r with gcd(r, p^n - 1) = 1; closed-form inverse z^{r^-1}.
Bijection power_permutation(const Domain& field, u64 r);

// f(z) = z^{p^r} - a z for r | n; accepted iff a^{sum p^{(i-1)r}} != 1.
Bijection binomial_permutation(const Domain& field, u32 r, u64 a);

// Permutation polynomial of Z_p matching the given value sequence with
// derivative g (nonvanishing, degree <= p-2). Degree can reach (p-1)p.
// Without g the derivative defaults to the constant 1.
Poly perm_poly_zp_method1(u64 p, std::span<const u64> perm, const Poly& g);
Poly perm_poly_zp_method1(u64 p, std::span<const u64> perm);

// Same contract with degree <= 2p-2, driven by a multiset of target
// derivative offsets lambda (|set| <= p-1, sum = 0); empty lambda picks the
// built-in default.
Poly perm_poly_zp_method2(u64 p, std::span<const u64> perm,
                          std::span<const u64> lambda = {});

// Permutation-polynomial acceptance over Z_{2^l}; rejection names the
// violated coefficient condition.
Poly p2_permutation(u32 l, std::span<const u64> coeffs);

// Newton/Hensel preimage of y under a bijective polynomial of Z_{p^l},
// doubling precision each step (r <- min{2r, l}); the congruence
// f(x) = y (mod p^r) is asserted after every step.
u64 hensel_invert(const Poly& f, u64 y, std::span<const u64> base_inverse,
                  u64 p, u32 l);

// Bijection wrapper for a criterion-certified polynomial of Z_{p^l} whose
// inversion goes through Hensel lifting.
Bijection bijection_from_zpl_poly(const Poly& f, u64 p, u32 l);

// (s, t) splittings of p^n - 1 admissible for subgroup bijections.
std::vector<std::pair<u64, u64>> admissible_subgroup_splits(const FieldSpec& field);

// eta(x) = a^{g(log_a x)} restricted to H_t = {x : x^t = 1}; the exponent
// polynomial is rebuilt from the integer-coefficient f so the restriction
// permutes H_t, searching constant offsets when needed.
Bijection subgroup_bijection(const Domain& field, u64 s, u64 t,
                             std::span<const u64> exponent_poly);

// chi(x) = sum l_i(x) eta(g_i(x)) for class maps g_i carrying S_i onto
// S_{sigma(i)}, with supplied per-class left inverses f_i.
Bijection hybrid_perm_method1(const PartitionOfUnity& part, std::span<const u64> sigma,
                              std::span<const Evaluator> g, std::span<const Evaluator> f,
                              const Bijection& eta);

// zeta(x) = sum l_i(h(x)) eta(f_{sigma(i)}(x)) for a family f_1..f_rho with
// h-invariant images (h(f_i(x)) = h(x), checked exhaustively with witness).
Bijection hybrid_perm_method2(std::span<const Bijection> f_family, const Evaluator& h,
                              std::span<const u64> sigma, const PartitionOfUnity& part,
                              const Bijection& eta);

}  // namespace mpkc
