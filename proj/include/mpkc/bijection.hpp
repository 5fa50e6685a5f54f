#pragma once

#include "mpkc/expr.hpp"

namespace mpkc {

// Serializable univariate map: a polynomial, an expression (with its
// interpretation), or a value table indexed by an element set.
class Evaluator {
 public:
  enum class Kind : u8 { poly, expr, table };

  Evaluator() = default;
  static Evaluator from_poly(Poly f);
  static Evaluator from_expr(Expr e, std::shared_ptr<const Interpretation> interp);
  static Evaluator from_table(ElemSet domain, std::vector<u64> values);

  Kind kind() const { return kind_; }
  u64 operator()(u64 x) const;

  const Poly& poly() const { return poly_; }
  const Expr& expr() const { return expr_; }
  const std::vector<u64>& table() const { return table_; }
  const ElemSet& table_domain() const { return table_domain_; }

 private:
  Kind kind_ = Kind::poly;
  Poly poly_;
  Expr expr_;
  std::shared_ptr<const Interpretation> interp_;
  ElemSet table_domain_;
  std::vector<u64> table_;
};

// A certified bijection of an element set onto itself: forward evaluator
// plus an inversion strategy (closed form, table, or Hensel lifting for
// polynomial maps of Z_{p^l}).
struct Bijection {
  enum class InverseKind : u8 { closed_form, table, hensel };

  ElemSet domain;
  Evaluator forward;
  InverseKind inverse_kind = InverseKind::table;
  Evaluator inverse;                      // closed_form | table
  std::vector<u64> hensel_base_inverse;   // x mod p for each y mod p
  u64 hensel_p = 0;
  u32 hensel_l = 0;

  u64 apply(u64 x) const;
  u64 invert(u64 y) const;

  static Bijection identity(ElemSet domain);
  // Table-backed bijection from any forward evaluator; rejects non-bijective
  // maps with a collision witness.
  static Bijection from_forward(ElemSet domain, Evaluator forward);

  // Exhaustive roundtrip audit on the declared domain; throws on failure.
  void certify() const;
};

}  // namespace mpkc
