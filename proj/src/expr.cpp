#include "mpkc/expr.hpp"

#include <sstream>

namespace mpkc {

Expr Expr::constant(int level, u64 value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->level = level;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int level, u32 index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->level = level;
  n->var_index = index;
  n->has_var = true;
  return Expr(std::move(n));
}

Expr Expr::add(std::vector<Expr> kids) {
  if (kids.empty()) throw EvalError("add requires children");
  auto n = std::make_shared<Node>();
  n->kind = Kind::add;
  n->level = kids[0].level();
  for (const Expr& k : kids) {
    if (k.level() != n->level) throw EvalError("level mismatch in add");
    n->has_var = n->has_var || !k.constant_subtree();
    n->kids.push_back(k.root_);
  }
  return Expr(std::move(n));
}

Expr Expr::mul(std::vector<Expr> kids) {
  if (kids.empty()) throw EvalError("mul requires children");
  auto n = std::make_shared<Node>();
  n->kind = Kind::mul;
  n->level = kids[0].level();
  for (const Expr& k : kids) {
    if (k.level() != n->level) throw EvalError("level mismatch in mul");
    n->has_var = n->has_var || !k.constant_subtree();
    n->kids.push_back(k.root_);
  }
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) {
  if (exponent.level() != base.level() + 1)
    throw EvalError("pow exponent must live one level above its base");
  auto n = std::make_shared<Node>();
  n->kind = Kind::pow;
  n->level = base.level();
  n->has_var = !base.constant_subtree() || !exponent.constant_subtree();
  n->kids.push_back(base.root_);
  n->kids.push_back(exponent.root_);
  return Expr(std::move(n));
}

Expr Expr::pow_const(Expr base, u64 exponent) {
  int lvl = base.level();
  return pow(std::move(base), constant(lvl + 1, exponent));
}

Expr Expr::child(size_t i) const { return Expr(root_->kids.at(i)); }

bool Expr::operator==(const Expr& o) const {
  if (!root_ || !o.root_) return root_ == o.root_;
  return expr_to_text(*this) == expr_to_text(o);
}

namespace {

PortHom port_for_modulus(u64 m) {
  if (m <= 1) return PortHom{};  // trivial slot, nothing to port into
  return PortHom::make(ModulusSpec::make(m));
}

}  // namespace

Interpretation Interpretation::make(Domain base, int max_level) {
  return make(std::move(base), max_level, {});
}

Interpretation Interpretation::make(Domain base, int max_level,
                                    std::span<const u64> base_root_overrides) {
  Interpretation in;
  in.base_ = std::move(base);
  if (max_level < 1) throw EvalError("interpretation needs at least one exponent level");
  for (int lvl = 1; lvl <= max_level; ++lvl) {
    Level L;
    if (lvl == 1) {
      if (in.base_.is_field()) {
        L.moduli = {in.base_.field().unit_group_order()};
      } else {
        in.base_port_ = PortHom::make(in.base_.ring(), base_root_overrides);
        L.moduli = in.base_port_->moduli();
      }
    } else {
      const Level& prev = in.levels_.back();
      for (u64 m : prev.moduli) {
        PortHom ph = port_for_modulus(m);
        for (const auto& c : ph.components) L.moduli.push_back(c.modulus);
        L.slot_ports.push_back(std::move(ph));
      }
    }
    in.levels_.push_back(std::move(L));
  }
  return in;
}

const std::vector<u64>& Interpretation::slot_moduli(int level) const {
  if (level < 1 || level > max_level()) throw EvalError("no such exponent level");
  return levels_[level - 1].moduli;
}

std::vector<u64> Interpretation::port_from_base(u64 v) const {
  if (base_.is_field()) return {base_.field().dlog(v)};
  if (!base_port_) throw EvalError("interpretation not initialized");
  return base_port_->apply(v);
}

std::vector<u64> Interpretation::port_up(int from_level, std::span<const u64> t) const {
  if (from_level < 1 || from_level + 1 > max_level())
    throw EvalError("porting beyond the interpretation's level cap");
  const Level& next = levels_[from_level];  // level from_level+1 data
  std::vector<u64> out;
  for (size_t j = 0; j < t.size(); ++j) {
    const PortHom& ph = next.slot_ports.at(j);
    for (const auto& c : ph.components) out.push_back(c.port(t[j]));
  }
  if (out.size() != next.moduli.size()) throw EvalError("port arity mismatch");
  return out;
}

std::vector<u64> Interpretation::port_to(int level, u64 v) const {
  std::vector<u64> t = port_from_base(v);
  for (int k = 1; k < level; ++k) t = port_up(k, t);
  return t;
}

std::vector<u64> Interpretation::tuple_add(int level, std::span<const u64> a,
                                           std::span<const u64> b) const {
  const auto& mods = slot_moduli(level);
  std::vector<u64> out(mods.size());
  for (size_t i = 0; i < mods.size(); ++i) out[i] = addmod(a[i], b[i], mods[i]);
  return out;
}

std::vector<u64> Interpretation::tuple_mul(int level, std::span<const u64> a,
                                           std::span<const u64> b) const {
  const auto& mods = slot_moduli(level);
  std::vector<u64> out(mods.size());
  for (size_t i = 0; i < mods.size(); ++i) out[i] = mulmod(a[i], b[i], mods[i]);
  return out;
}

std::vector<u64> Interpretation::tuple_scalar(int level, u64 c) const {
  const auto& mods = slot_moduli(level);
  std::vector<u64> out(mods.size());
  for (size_t i = 0; i < mods.size(); ++i) out[i] = c % mods[i];
  return out;
}

bool Interpretation::tuple_unit(int level, std::span<const u64> t) const {
  const auto& mods = slot_moduli(level);
  for (size_t i = 0; i < mods.size(); ++i)
    if (gcd_u64(t[i] % mods[i], mods[i]) != 1 && mods[i] != 1) return false;
  return true;
}

std::vector<u64> Interpretation::tuple_inv(int level, std::span<const u64> t) const {
  const auto& mods = slot_moduli(level);
  std::vector<u64> out(mods.size());
  for (size_t i = 0; i < mods.size(); ++i) out[i] = mods[i] == 1 ? 0 : invmod(t[i], mods[i]);
  return out;
}

u64 Interpretation::pow_base(u64 b, std::span<const u64> e) const {
  if (base_.is_field()) {
    const FieldSpec& f = base_.field();
    if (b == 0) throw EvalError("invertibility violation: zero base under expression exponent");
    return f.exp_table[mulmod(f.log_table[b], e[0] % (f.q - 1), f.q - 1)];
  }
  const ModulusSpec& r = base_.ring();
  if (!r.is_unit(b))
    throw EvalError("invertibility violation: non-unit base under expression exponent");
  std::vector<u64> residues(r.factors.size());
  for (size_t i = 0; i < r.factors.size(); ++i)
    residues[i] = powmod(b % r.factors[i].pl, e[i], r.factors[i].pl);
  return r.crt_join(residues);
}

std::vector<u64> Interpretation::pow_level(int level, std::span<const u64> b,
                                           std::span<const u64> e) const {
  const Level& L = levels_[level - 1];
  const Level& next = levels_[level];  // exponent tuple layout
  std::vector<u64> out(L.moduli.size());
  size_t epos = 0;
  for (size_t j = 0; j < L.moduli.size(); ++j) {
    u64 m = L.moduli[j];
    const PortHom& ph = next.slot_ports.at(j);
    if (m == 1) {
      out[j] = 0;
      continue;
    }
    if (gcd_u64(b[j], m) != 1)
      throw EvalError("invertibility violation: non-unit base under expression exponent");
    ModulusSpec spec = ModulusSpec::make(m);
    std::vector<u64> residues(spec.factors.size());
    for (size_t i = 0; i < spec.factors.size(); ++i) {
      residues[i] = powmod(b[j] % spec.factors[i].pl, e[epos + i], spec.factors[i].pl);
    }
    epos += ph.components.size();
    out[j] = spec.crt_join(residues);
  }
  return out;
}

u32 Interpretation::bind_supplementary(Expr level0_expr) {
  if (level0_expr.level() != 0)
    throw EvalError("supplementary bindings must be level-0 expressions");
  u32 idx = next_supplementary_++;
  supplementary_.emplace(idx, std::move(level0_expr));
  return idx;
}

const Expr* Interpretation::supplementary(u32 var_index) const {
  auto it = supplementary_.find(var_index);
  return it == supplementary_.end() ? nullptr : &it->second;
}

namespace {

u64 eval_plain_int(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant: return e.value();
    case Expr::Kind::variable: throw EvalError("plain-integer evaluation reached a variable");
    case Expr::Kind::add: {
      u64 acc = 0;
      for (size_t i = 0; i < e.child_count(); ++i) {
        u64 v = eval_plain_int(e.child(i));
        if (acc > UINT64_MAX - v) throw EvalError("constant exponent overflow");
        acc += v;
      }
      return acc;
    }
    case Expr::Kind::mul: {
      u64 acc = 1;
      for (size_t i = 0; i < e.child_count(); ++i) {
        u64 v = eval_plain_int(e.child(i));
        u128 t = u128(acc) * v;
        if (t > UINT64_MAX) throw EvalError("constant exponent overflow");
        acc = static_cast<u64>(t);
      }
      return acc;
    }
    case Expr::Kind::pow:
      return pow_u64_checked(eval_plain_int(e.child(0)), eval_plain_int(e.child(1)));
  }
  throw EvalError("bad node");
}

struct Evaluator {
  std::span<const u64> assignment;
  const Interpretation& interp;

  u64 eval0(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::constant: {
        if (e.value() >= interp.base().size())
          throw EvalError("level-0 constant outside the base domain");
        return e.value();
      }
      case Expr::Kind::variable: return var_base(e.var_index());
      case Expr::Kind::add: {
        u64 acc = eval0(e.child(0));
        for (size_t i = 1; i < e.child_count(); ++i)
          acc = interp.base().add(acc, eval0(e.child(i)));
        return acc;
      }
      case Expr::Kind::mul: {
        u64 acc = eval0(e.child(0));
        for (size_t i = 1; i < e.child_count(); ++i)
          acc = interp.base().mul(acc, eval0(e.child(i)));
        return acc;
      }
      case Expr::Kind::pow: {
        u64 base = eval0(e.child(0));
        Expr ex = e.child(1);
        if (ex.constant_subtree()) return interp.base().pow(base, eval_plain_int(ex));
        std::vector<u64> et = evalk(ex);
        return interp.pow_base(base, et);
      }
    }
    throw EvalError("bad node");
  }

  std::vector<u64> evalk(const Expr& e) {
    int lvl = e.level();
    switch (e.kind()) {
      case Expr::Kind::constant: return interp.tuple_scalar(lvl, e.value());
      case Expr::Kind::variable: {
        u64 v = var_base(e.var_index());
        return interp.port_to(lvl, v);
      }
      case Expr::Kind::add: {
        std::vector<u64> acc = evalk(e.child(0));
        for (size_t i = 1; i < e.child_count(); ++i)
          acc = interp.tuple_add(lvl, acc, evalk(e.child(i)));
        return acc;
      }
      case Expr::Kind::mul: {
        std::vector<u64> acc = evalk(e.child(0));
        for (size_t i = 1; i < e.child_count(); ++i)
          acc = interp.tuple_mul(lvl, acc, evalk(e.child(i)));
        return acc;
      }
      case Expr::Kind::pow: {
        std::vector<u64> base = evalk(e.child(0));
        Expr ex = e.child(1);
        if (ex.constant_subtree()) {
          u64 k = eval_plain_int(ex);
          const auto& mods = interp.slot_moduli(lvl);
          std::vector<u64> out(mods.size());
          for (size_t i = 0; i < mods.size(); ++i) out[i] = powmod(base[i], k, mods[i]);
          return out;
        }
        std::vector<u64> et = evalk(ex);
        return interp.pow_level(lvl, base, et);
      }
    }
    throw EvalError("bad node");
  }

  u64 var_base(u32 index) {
    if (index < assignment.size()) return assignment[index];
    const Expr* bound = interp.supplementary(index);
    if (!bound) throw EvalError("unbound variable index " + std::to_string(index));
    return eval0(*bound);
  }
};

}  // namespace

u64 expr_eval(const Expr& e, std::span<const u64> assignment,
              const Interpretation& interp) {
  if (e.level() != 0) throw EvalError("expr_eval expects a level-0 expression");
  Evaluator ev{assignment, interp};
  return ev.eval0(e);
}

std::vector<u64> expr_eval_tuple(const Expr& e, std::span<const u64> assignment,
                                 const Interpretation& interp) {
  Evaluator ev{assignment, interp};
  if (e.level() == 0) return {ev.eval0(e)};
  return ev.evalk(e);
}

ClosureReport expr_check_closure(const Expr& e,
                                 const std::vector<std::vector<u64>>& sample,
                                 const Interpretation& interp) {
  ClosureReport report;
  for (const auto& point : sample) {
    try {
      expr_eval_tuple(e, point, interp);
    } catch (const EvalError& err) {
      report.ok = false;
      report.violation_assignment = point;
      report.message = err.what();
      return report;
    }
  }
  return report;
}

Expr expr_substitute(const Expr& e, u32 var, const Expr& replacement,
                     Interpretation& interp) {
  if (replacement.level() != 0)
    throw EvalError("substitution replacement must be a level-0 expression");
  std::optional<u32> supp;  // allocated lazily for exponent-level occurrences
  std::function<Expr(const Expr&)> walk = [&](const Expr& node) -> Expr {
    switch (node.kind()) {
      case Expr::Kind::constant: return node;
      case Expr::Kind::variable:
        if (node.var_index() != var) return node;
        if (node.level() == 0) return replacement;
        if (!supp) supp = interp.bind_supplementary(replacement);
        return Expr::variable(node.level(), *supp);
      case Expr::Kind::add: {
        std::vector<Expr> kids;
        for (size_t i = 0; i < node.child_count(); ++i) kids.push_back(walk(node.child(i)));
        return Expr::add(std::move(kids));
      }
      case Expr::Kind::mul: {
        std::vector<Expr> kids;
        for (size_t i = 0; i < node.child_count(); ++i) kids.push_back(walk(node.child(i)));
        return Expr::mul(std::move(kids));
      }
      case Expr::Kind::pow:
        return Expr::pow(walk(node.child(0)), walk(node.child(1)));
    }
    throw EvalError("bad node");
  };
  return walk(e);
}

Expr expr_from_poly(const Poly& f, u32 var_index) {
  if (f.is_zero()) return Expr::constant(0, 0);
  Expr x = Expr::variable(0, var_index);
  Expr acc = Expr::constant(0, f.coeffs().back());
  for (size_t i = f.coeffs().size() - 1; i-- > 0;) {
    Expr term = Expr::mul({acc, x});
    acc = f.coeff(i) ? Expr::add({term, Expr::constant(0, f.coeff(i))}) : term;
  }
  return acc;
}

Expr expr_from_multipoly(const MultiPoly& f, std::span<const u32> var_indices) {
  if (var_indices.size() != f.arity())
    throw EvalError("multipoly variable index arity mismatch");
  if (f.terms().empty()) return Expr::constant(0, 0);
  std::vector<Expr> terms;
  for (const auto& [exps, c] : f.terms()) {
    std::vector<Expr> parts;
    if (c != 1 || std::all_of(exps.begin(), exps.end(), [](u32 e) { return e == 0; }))
      parts.push_back(Expr::constant(0, c));
    for (u32 i = 0; i < f.arity(); ++i) {
      if (!exps[i]) continue;
      Expr v = Expr::variable(0, var_indices[i]);
      parts.push_back(exps[i] == 1 ? v : Expr::pow_const(v, exps[i]));
    }
    terms.push_back(parts.size() == 1 ? parts[0] : Expr::mul(std::move(parts)));
  }
  return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
}

namespace {

void emit(const Expr& e, std::ostringstream& os) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      os << "c" << e.level() << ":" << e.value();
      return;
    case Expr::Kind::variable:
      os << "x" << e.level() << ":" << e.var_index();
      return;
    case Expr::Kind::add:
    case Expr::Kind::mul:
    case Expr::Kind::pow: {
      char op = e.kind() == Expr::Kind::add ? '+' : e.kind() == Expr::Kind::mul ? '*' : '^';
      os << "(" << op << e.level();
      for (size_t i = 0; i < e.child_count(); ++i) {
        os << " ";
        emit(e.child(i), os);
      }
      os << ")";
      return;
    }
  }
}

struct Parser {
  const std::string& s;
  size_t pos = 0;

  char peek() {
    if (pos >= s.size()) throw EvalError("expression text truncated");
    return s[pos];
  }
  void expect(char c) {
    if (peek() != c) throw EvalError(std::string("expected '") + c + "' in expression text");
    ++pos;
  }
  u64 number() {
    size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (start == pos) throw EvalError("expected number in expression text");
    return std::stoull(s.substr(start, pos - start));
  }
  int level_number() { return static_cast<int>(number()); }

  Expr parse() {
    char c = peek();
    if (c == 'c') {
      ++pos;
      int lvl = level_number();
      expect(':');
      return Expr::constant(lvl, number());
    }
    if (c == 'x') {
      ++pos;
      int lvl = level_number();
      expect(':');
      return Expr::variable(lvl, static_cast<u32>(number()));
    }
    expect('(');
    char op = peek();
    if (op != '+' && op != '*' && op != '^') throw EvalError("bad operator in expression text");
    ++pos;
    level_number();  // levels are re-derived from children; annotation kept for readability
    std::vector<Expr> kids;
    while (peek() == ' ') {
      ++pos;
      kids.push_back(parse());
    }
    expect(')');
    if (op == '^') {
      if (kids.size() != 2) throw EvalError("pow takes exactly base and exponent");
      return Expr::pow(kids[0], kids[1]);
    }
    return op == '+' ? Expr::add(std::move(kids)) : Expr::mul(std::move(kids));
  }
};

}  // namespace

std::string expr_to_text(const Expr& e) {
  std::ostringstream os;
  emit(e, os);
  return os.str();
}

Expr expr_from_text(const std::string& text) {
  Parser p{text};
  Expr e = p.parse();
  if (p.pos != text.size()) throw EvalError("trailing bytes after expression text");
  return e;
}

}  // namespace mpkc
