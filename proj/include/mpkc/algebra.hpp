#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mpkc/common.hpp"

namespace mpkc {

// Factored modulus n = prod p_i^{l_i} with CRT idempotents e_i = m_i * q_i,
// sum e_i = 1 (mod n), e_i * e_j = 0 for i != j.
struct ModulusSpec {
  struct Factor {
    u64 p = 0;       // prime
    u32 l = 0;       // exponent
    u64 pl = 0;      // p^l
    u64 cofactor = 0;  // q_i = n / p^l
    u64 inv_cofactor = 0;  // m_i = q_i^{-1} mod p^l
    u64 idempotent = 0;    // e_i = m_i * q_i mod n
    u64 totient = 0;       // phi(p^l)
  };

  u64 n = 0;
  std::vector<Factor> factors;  // ascending p
  u64 totient = 0;

  // Trial-division factorization; rejects n < 2.
  static ModulusSpec make(u64 n);

  u64 add(u64 a, u64 b) const { return addmod(a, b, n); }
  u64 sub(u64 a, u64 b) const { return submod(a, b, n); }
  u64 mul(u64 a, u64 b) const { return mulmod(a, b, n); }
  u64 neg(u64 a) const { return a == 0 ? 0 : n - a; }
  u64 pow(u64 a, u64 e) const { return powmod(a, e, n); }
  bool is_unit(u64 a) const { return gcd_u64(a % n, n) == 1; }
  u64 inv(u64 a) const { return invmod(a, n); }

  std::vector<u64> crt_split(u64 x) const;
  u64 crt_join(std::span<const u64> residues) const;
};

// GF(p^n) with elements packed as integers in [0, p^n): base-p digits are
// polynomial coefficients, least significant digit = constant term.
// Eager log/exp tables over a verified generator.
struct FieldSpec {
  u64 p = 0;
  u32 n = 0;
  u64 q = 0;  // p^n
  std::vector<u64> modulus_poly;  // dense monic, degree n, coeffs in Z_p
  u64 generator = 0;
  std::vector<u64> log_table;  // index: nonzero element -> exponent; [0] unused
  std::vector<u64> exp_table;  // index: exponent in [0, q-1) -> element

  // Verifies irreducibility exhaustively, finds a generator by cofactor
  // order tests, fills the tables. Throws RejectionError on a reducible
  // modulus polynomial.
  static FieldSpec make(u64 p, u32 n, std::vector<u64> modulus_poly);
  // Smallest irreducible monic polynomial in encoding order.
  static FieldSpec make_default(u64 p, u32 n);

  u64 unit_group_order() const { return q - 1; }

  u64 add(u64 a, u64 b) const;
  u64 sub(u64 a, u64 b) const;
  u64 neg(u64 a) const;
  u64 mul(u64 a, u64 b) const {
    if (a == 0 || b == 0) return 0;
    return exp_table[addmod(log_table[a], log_table[b], q - 1)];
  }
  u64 inv(u64 a) const {
    if (a == 0) throw EvalError("field inverse of zero");
    u64 e = log_table[a];
    return exp_table[e == 0 ? 0 : q - 1 - e];
  }
  u64 pow(u64 a, u64 e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    return exp_table[mulmod(log_table[a], e % (q - 1), q - 1)];
  }
  // Discrete logarithm to base `generator`; throws on zero argument.
  u64 dlog(u64 g) const {
    if (g == 0) throw EvalError("discrete log of zero");
    return log_table[g];
  }
  // Embedding of a prime-subfield scalar c (integer) as a field element.
  u64 from_int(u64 c) const { return c % p; }

  // Direct arithmetic used while tables are being built (and by tests as an
  // independent route).
  static u64 mul_direct(u64 p, u32 n, std::span<const u64> modpoly, u64 a, u64 b);
};

// Handle over either coefficient domain. Structural equality; cheap copies.
class Domain {
 public:
  Domain() = default;
  explicit Domain(ModulusSpec spec)
      : ring_(std::make_shared<const ModulusSpec>(std::move(spec))) {}
  explicit Domain(FieldSpec spec)
      : field_(std::make_shared<const FieldSpec>(std::move(spec))) {}

  bool valid() const { return ring_ || field_; }
  bool is_field() const { return static_cast<bool>(field_); }
  const ModulusSpec& ring() const { return *ring_; }
  const FieldSpec& field() const { return *field_; }

  u64 size() const { return is_field() ? field_->q : ring_->n; }
  u64 add(u64 a, u64 b) const { return is_field() ? field_->add(a, b) : ring_->add(a, b); }
  u64 sub(u64 a, u64 b) const { return is_field() ? field_->sub(a, b) : ring_->sub(a, b); }
  u64 mul(u64 a, u64 b) const { return is_field() ? field_->mul(a, b) : ring_->mul(a, b); }
  u64 neg(u64 a) const { return is_field() ? field_->neg(a) : ring_->neg(a); }
  u64 pow(u64 a, u64 e) const { return is_field() ? field_->pow(a, e) : ring_->pow(a, e); }
  bool is_unit(u64 a) const { return is_field() ? a != 0 : ring_->is_unit(a); }
  u64 inv(u64 a) const { return is_field() ? field_->inv(a) : ring_->inv(a); }
  u64 one() const { return 1 % size(); }

  // Characteristic embedding of an integer scalar.
  u64 scalar(u64 c) const { return is_field() ? field_->from_int(c) : c % ring_->n; }

  bool same_as(const Domain& other) const;
  std::string describe() const;

 private:
  std::shared_ptr<const ModulusSpec> ring_;
  std::shared_ptr<const FieldSpec> field_;
};

// Enumerable value set inside a domain: the whole ring/field, the unit
// group of a field, or an explicit list (subgroups, cosets).
class ElemSet {
 public:
  enum class Kind { all, units, explicit_list };

  ElemSet() = default;
  static ElemSet all_of(Domain d) { return ElemSet(Kind::all, std::move(d), {}); }
  static ElemSet units_of(Domain d) { return ElemSet(Kind::units, std::move(d), {}); }
  static ElemSet listed(Domain d, std::vector<u64> elems) {
    return ElemSet(Kind::explicit_list, std::move(d), std::move(elems));
  }

  const Domain& domain() const { return dom_; }
  Kind kind() const { return kind_; }
  u64 size() const;
  u64 at(u64 index) const;
  bool contains(u64 x) const;
  std::optional<u64> index_of(u64 x) const;
  std::vector<u64> elements() const;

 private:
  ElemSet(Kind k, Domain d, std::vector<u64> e)
      : kind_(k), dom_(std::move(d)), elems_(std::move(e)) {}
  Kind kind_ = Kind::all;
  Domain dom_;
  std::vector<u64> elems_;
};

// One slot of an exponent-level product ring, with the porting rule that
// fills it from the level below: the ring homomorphism
// h(x) = (p-1) * (w*x mod p^{l-1}) when l >= 2, or the discrete logarithm
// in Z_p when l = 1 (Z_p read as a field, primitive root recorded).
struct PortComponent {
  enum class Mode { ring_hom, dlog };
  Mode mode = Mode::ring_hom;
  u64 source_pl = 0;  // p^l slice of the source modulus
  u64 source_p = 0;
  u32 source_l = 0;
  u64 modulus = 0;    // phi(p^l) or p-1
  u64 aux = 0;        // ring_hom: w = (p-1)^{-1} mod p^{l-1}; dlog: primitive root of Z_p

  u64 port(u64 x) const;
};

// Porting descriptor for one modulus: maps Z_m into the product ring
// prod(component moduli). Pure ring homomorphism when every l_i >= 2; a
// hybrid descriptor (some dlog components) otherwise.
struct PortHom {
  u64 source_modulus = 0;
  std::vector<PortComponent> components;
  bool hybrid = false;  // true iff some component ports by discrete log

  static PortHom make(const ModulusSpec& spec);
  // Override the primitive-root choice of dlog components (key material).
  static PortHom make(const ModulusSpec& spec, std::span<const u64> root_overrides);

  std::vector<u64> apply(u64 x) const;
  std::vector<u64> moduli() const;
};

u64 smallest_primitive_root(u64 p);

}  // namespace mpkc
