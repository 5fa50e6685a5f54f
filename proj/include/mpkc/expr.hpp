#pragma once

#include <functional>
#include <map>

#include "mpkc/poly.hpp"

namespace mpkc {

// Level-tagged expression tree. Level 0 is the base domain; level k >= 1 is
// the k-th exponent domain (a product ring of slot moduli, see
// Interpretation). The exponent child of a pow node lives one level above
// its base. Constants at level 0 are encoded domain elements; constants at
// exponent levels are plain integers and a variable-free exponent subtree
// bypasses porting entirely (it is a fixed positive integer).
class Expr {
 public:
  enum class Kind : u8 { constant, variable, add, mul, pow };

  Expr() = default;

  static Expr constant(int level, u64 value);
  static Expr variable(int level, u32 index);
  static Expr add(std::vector<Expr> kids);
  static Expr mul(std::vector<Expr> kids);
  static Expr pow(Expr base, Expr exponent);
  static Expr pow_const(Expr base, u64 exponent);

  bool valid() const { return root_ != nullptr; }
  Kind kind() const { return root_->kind; }
  int level() const { return root_->level; }
  u64 value() const { return root_->value; }
  u32 var_index() const { return root_->var_index; }
  size_t child_count() const { return root_->kids.size(); }
  Expr child(size_t i) const;
  bool constant_subtree() const { return !root_->has_var; }

  bool operator==(const Expr& o) const;

 private:
  struct Node {
    Kind kind;
    int level;
    u64 value = 0;
    u32 var_index = 0;
    bool has_var = false;
    std::vector<std::shared_ptr<const Node>> kids;
  };
  using NodePtr = std::shared_ptr<const Node>;
  explicit Expr(NodePtr n) : root_(std::move(n)) {}
  NodePtr root_;
};

// Interpretation of expression levels over a base domain: the exponent
// tower (slot moduli per level with porting rules), the per-factor
// primitive-root choices (key material in the hybrid case), and
// supplementary-variable bindings.
class Interpretation {
 public:
  Interpretation() = default;
  static Interpretation make(Domain base, int max_level = 2);
  static Interpretation make(Domain base, int max_level,
                             std::span<const u64> base_root_overrides);

  const Domain& base() const { return base_; }
  int max_level() const { return static_cast<int>(levels_.size()); }
  const std::vector<u64>& slot_moduli(int level) const;

  // Porting: base element -> level-1 tuple, and level k tuple -> level k+1.
  std::vector<u64> port_from_base(u64 v) const;
  std::vector<u64> port_up(int from_level, std::span<const u64> t) const;
  std::vector<u64> port_to(int level, u64 v) const;  // iterated from base

  // Tuple arithmetic at an exponent level.
  std::vector<u64> tuple_add(int level, std::span<const u64> a, std::span<const u64> b) const;
  std::vector<u64> tuple_mul(int level, std::span<const u64> a, std::span<const u64> b) const;
  std::vector<u64> tuple_scalar(int level, u64 c) const;
  bool tuple_unit(int level, std::span<const u64> t) const;
  std::vector<u64> tuple_inv(int level, std::span<const u64> t) const;

  // Power of an invertible base by an exponent tuple one level up
  // (Euler/Fermat reduction built in).
  u64 pow_base(u64 b, std::span<const u64> e) const;
  std::vector<u64> pow_level(int level, std::span<const u64> b,
                             std::span<const u64> e) const;

  // Supplementary variables (explicit let-bindings of level-0 expressions).
  u32 bind_supplementary(Expr level0_expr);
  const Expr* supplementary(u32 var_index) const;
  static constexpr u32 kSupplementaryBase = 1u << 16;

 private:
  struct Level {
    std::vector<u64> moduli;
    // Porting data feeding this level: level 1 uses the base domain
    // directly; deeper levels carry one PortHom per previous-level slot.
    std::vector<PortHom> slot_ports;  // empty entries for modulus-1 slots
  };
  Domain base_;
  std::optional<PortHom> base_port_;  // ring base only
  std::vector<Level> levels_;
  std::map<u32, Expr> supplementary_;
  u32 next_supplementary_ = kSupplementaryBase;
};

// Recursive evaluation under an interpretation. Level-0 expressions return
// a single element; exponent-level expressions a tuple. Throws EvalError on
// invertibility violations (message names the offending assignment).
u64 expr_eval(const Expr& e, std::span<const u64> assignment,
              const Interpretation& interp);
std::vector<u64> expr_eval_tuple(const Expr& e, std::span<const u64> assignment,
                                 const Interpretation& interp);

// Exhaustive audit of every pow-node invertibility precondition over a
// sample of assignments. The report carries the first violation, if any.
struct ClosureReport {
  bool ok = true;
  std::vector<u64> violation_assignment;
  std::string message;
};
ClosureReport expr_check_closure(const Expr& e,
                                 const std::vector<std::vector<u64>>& sample,
                                 const Interpretation& interp);

// Substitution of a variable by a level-0 expression. Occurrences at
// exponent levels are re-routed through a fresh supplementary variable
// bound in the interpretation (ported value semantics).
Expr expr_substitute(const Expr& e, u32 var, const Expr& replacement,
                     Interpretation& interp);

// Horner forms of polynomial atoms.
Expr expr_from_poly(const Poly& f, u32 var_index);
Expr expr_from_multipoly(const MultiPoly& f, std::span<const u32> var_indices);

// Canonical textual serialization (prefix notation with level annotations);
// bit-exact round-trip contract.
std::string expr_to_text(const Expr& e);
Expr expr_from_text(const std::string& text);

}  // namespace mpkc
