#include "mpkc/bijection.hpp"

namespace mpkc {

Evaluator Evaluator::from_poly(Poly f) {
  Evaluator e;
  e.kind_ = Kind::poly;
  e.poly_ = std::move(f);
  return e;
}

Evaluator Evaluator::from_expr(Expr e, std::shared_ptr<const Interpretation> interp) {
  Evaluator ev;
  ev.kind_ = Kind::expr;
  ev.expr_ = std::move(e);
  ev.interp_ = std::move(interp);
  return ev;
}

Evaluator Evaluator::from_table(ElemSet domain, std::vector<u64> values) {
  if (domain.size() != values.size()) throw EvalError("table size mismatch");
  Evaluator ev;
  ev.kind_ = Kind::table;
  ev.table_domain_ = std::move(domain);
  ev.table_ = std::move(values);
  return ev;
}

u64 Evaluator::operator()(u64 x) const {
  switch (kind_) {
    case Kind::poly: return poly_.eval(x);
    case Kind::expr: {
      std::vector<u64> pt{x};
      return expr_eval(expr_, pt, *interp_);
    }
    case Kind::table: {
      auto idx = table_domain_.index_of(x);
      if (!idx) throw EvalError("table evaluation outside its domain");
      return table_[*idx];
    }
  }
  throw EvalError("bad evaluator");
}

// defined in permgen.cpp
u64 hensel_invert(const Poly& f, u64 y, std::span<const u64> base_inverse,
                  u64 p, u32 l);

u64 Bijection::apply(u64 x) const { return forward(x); }

u64 Bijection::invert(u64 y) const {
  switch (inverse_kind) {
    case InverseKind::closed_form:
    case InverseKind::table: return inverse(y);
    case InverseKind::hensel:
      return hensel_invert(forward.poly(), y, hensel_base_inverse, hensel_p, hensel_l);
  }
  throw EvalError("bad inversion strategy");
}

Bijection Bijection::identity(ElemSet domain) {
  Bijection b;
  std::vector<u64> table = domain.elements();
  b.domain = domain;
  b.forward = Evaluator::from_table(domain, table);
  b.inverse_kind = InverseKind::table;
  b.inverse = Evaluator::from_table(std::move(domain), std::move(table));
  return b;
}

Bijection Bijection::from_forward(ElemSet domain, Evaluator forward) {
  std::vector<u64> elems = domain.elements();
  std::vector<u64> inverse_table(elems.size());
  std::vector<bool> hit(elems.size(), false);
  for (u64 x : elems) {
    u64 y = forward(x);
    auto yi = domain.index_of(y);
    if (!yi) throw RejectionError("map leaves its domain", {x, y});
    if (hit[*yi]) throw RejectionError("map is not injective on its domain", {x, y});
    hit[*yi] = true;
    inverse_table[*yi] = x;
  }
  Bijection b;
  b.domain = domain;
  b.forward = std::move(forward);
  b.inverse_kind = InverseKind::table;
  b.inverse = Evaluator::from_table(std::move(domain), std::move(inverse_table));
  return b;
}

void Bijection::certify() const {
  std::vector<bool> seen(domain.size(), false);
  for (u64 i = 0, s = domain.size(); i < s; ++i) {
    u64 x = domain.at(i);
    u64 y = apply(x);
    auto yi = domain.index_of(y);
    if (!yi) throw RejectionError("bijection image escapes its domain", {x, y});
    if (seen[*yi]) throw RejectionError("bijection image collision", {x, y});
    seen[*yi] = true;
    if (invert(y) != x) throw RejectionError("inverse(forward(x)) != x", {x, y});
    if (apply(invert(x)) != x) throw RejectionError("forward(inverse(y)) != y", {x});
  }
}

}  // namespace mpkc
