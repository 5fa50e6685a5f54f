#include "mpkc/parametric.hpp"

#include <algorithm>

#include "mpkc/rng.hpp"

namespace mpkc {

u64 ParamUnivariateMap::forward(std::span<const u64> z, u64 x) const {
  if (z.size() != param_count) throw EvalError("parameter arity mismatch");
  const Domain& dom = interp->base();
  if (kind == Kind::mult_power) {
    u64 s = expr_eval(scale, z, *interp);
    std::vector<u64> e = expr_eval_tuple(second, z, *interp);
    return dom.mul(s, interp->pow_base(x, e));
  }
  u64 a = expr_eval(scale, z, *interp);
  u64 b = expr_eval(second, z, *interp);
  return dom.add(dom.mul(a, x), b);
}

u64 ParamUnivariateMap::inverse(std::span<const u64> z, u64 y) const {
  if (z.size() != param_count) throw EvalError("parameter arity mismatch");
  const Domain& dom = interp->base();
  if (kind == Kind::mult_power) {
    u64 s = expr_eval(scale, z, *interp);
    std::vector<u64> e = expr_eval_tuple(second, z, *interp);
    if (!interp->tuple_unit(1, e))
      throw EvalError("exponent not invertible modulo the group order");
    return interp->pow_base(dom.mul(dom.inv(s), y), interp->tuple_inv(1, e));
  }
  u64 a = expr_eval(scale, z, *interp);
  u64 b = expr_eval(second, z, *interp);
  return dom.mul(dom.inv(a), dom.sub(y, b));
}

namespace {

std::shared_ptr<const Interpretation> shared_interp(const Domain& dom) {
  return std::make_shared<Interpretation>(Interpretation::make(dom));
}

}  // namespace

ParamUnivariateMap multiplicative_param_map(const Domain& field, u32 param_count,
                                            Expr scale, Expr exponent) {
  if (!field.is_field()) throw EvalError("multiplicative maps require a field domain");
  if (exponent.level() != 1) throw EvalError("exponent must be a level-1 expression");
  ParamUnivariateMap m;
  m.kind = ParamUnivariateMap::Kind::mult_power;
  m.param_count = param_count;
  m.scale = std::move(scale);
  m.second = std::move(exponent);
  m.interp = shared_interp(field);
  return m;
}

ParamUnivariateMap affine_param_map(const Domain& dom, u32 param_count, Expr a, Expr b) {
  ParamUnivariateMap m;
  m.kind = ParamUnivariateMap::Kind::affine;
  m.param_count = param_count;
  m.scale = std::move(a);
  m.second = std::move(b);
  m.interp = shared_interp(dom);
  return m;
}

ParamUnivariateMap constant_param_map(const Domain& dom, u32 param_count,
                                      u64 scale, u64 exponent) {
  if (dom.is_field()) {
    return multiplicative_param_map(dom, param_count, Expr::constant(0, scale),
                                    Expr::constant(1, exponent));
  }
  if (exponent != 1) throw EvalError("ring constant maps support exponent 1 only");
  return affine_param_map(dom, param_count, Expr::constant(0, scale),
                          Expr::constant(0, 0));
}

IndexMap IndexMap::from_bijections(std::span<const u64> f1, std::span<const u64> f2,
                                   std::span<const u64> h) {
  u64 m = f1.size();
  if (f2.size() != m || h.size() != m) throw EvalError("index map arity mismatch");
  IndexMap out;
  out.table.assign(m, std::vector<u64>(m));
  for (u64 r = 0; r < m; ++r)
    for (u64 s = 0; s < m; ++s) out.table[r][s] = h[(f1[r] + f2[s]) % m];
  out.audit();
  return out;
}

void IndexMap::audit() const {
  u64 m = dim();
  for (u64 r = 0; r < m; ++r) {
    std::vector<bool> row(m, false), col(m, false);
    for (u64 s = 0; s < m; ++s) {
      u64 a = table[r][s], b = table[s][r];
      if (a >= m || row[a]) throw RejectionError("sigma row is not a permutation", {r});
      if (b >= m || col[b]) throw RejectionError("sigma column is not a permutation", {r});
      row[a] = col[b] = true;
    }
  }
}

ParametricMatrix::ParametricMatrix(Domain dom, u32 dim, u32 param_count,
                                   std::vector<Factor> factors,
                                   std::shared_ptr<const Interpretation> interp)
    : dom_(std::move(dom)),
      dim_(dim),
      param_count_(param_count),
      factors_(std::move(factors)),
      interp_(std::move(interp)) {
  for (const Factor& f : factors_) {
    if (const auto* p = std::get_if<PermutationFactor>(&f)) {
      if (p->part.slot_count() != dim_ || p->sigma.dim() != dim_)
        throw EvalError("permutation factor dimension mismatch");
    } else if (const auto* d = std::get_if<DiagonalFactor>(&f)) {
      if (d->entries.size() != dim_) throw EvalError("diagonal factor dimension mismatch");
    } else if (const auto* t = std::get_if<TriangularFactor>(&f)) {
      if (t->entries.size() != dim_) throw EvalError("triangular factor dimension mismatch");
      for (const auto& row : t->entries)
        if (row.size() != dim_) throw EvalError("triangular factor dimension mismatch");
    }
  }
}

ParametricMatrix::Kind ParametricMatrix::kind() const {
  if (factors_.size() != 1) return Kind::product;
  if (std::holds_alternative<PermutationFactor>(factors_[0])) return Kind::permutation;
  if (std::holds_alternative<DiagonalFactor>(factors_[0])) return Kind::diagonal;
  return std::get<TriangularFactor>(factors_[0]).lower ? Kind::lower : Kind::upper;
}

namespace {

struct FactorOps {
  const Domain& dom;
  const Interpretation& interp;
  std::span<const u64> z;

  std::vector<u64> apply(const ParametricMatrix::PermutationFactor& f,
                         std::span<const u64> v, bool inverse) const {
    u64 m = f.sigma.dim();
    u64 cls = f.part.class_of(z);
    std::vector<u64> out(m, 0);
    for (u64 i = 0; i < m; ++i)
      for (u64 j = 0; j < m; ++j)
        if (f.sigma(i, j) == cls) {
          if (inverse)
            out[j] = v[i];
          else
            out[i] = v[j];
        }
    return out;
  }

  std::vector<u64> apply(const ParametricMatrix::DiagonalFactor& f,
                         std::span<const u64> v, bool inverse) const {
    std::vector<u64> out(f.entries.size());
    for (size_t i = 0; i < f.entries.size(); ++i) {
      u64 d = expr_eval(f.entries[i], z, interp);
      if (inverse) {
        if (!dom.is_unit(d)) throw EvalError("diagonal entry not invertible");
        out[i] = dom.mul(dom.inv(d), v[i]);
      } else {
        out[i] = dom.mul(d, v[i]);
      }
    }
    return out;
  }

  std::vector<u64> apply(const ParametricMatrix::TriangularFactor& f,
                         std::span<const u64> v, bool inverse) const {
    u64 m = f.entries.size();
    std::vector<u64> out(m, 0);
    if (!inverse) {
      for (u64 i = 0; i < m; ++i) {
        u64 acc = 0;
        u64 lo = f.lower ? 0 : i, hi = f.lower ? i : m - 1;
        for (u64 j = lo; j <= hi; ++j)
          acc = dom.add(acc, dom.mul(expr_eval(f.entries[i][j], z, interp), v[j]));
        out[i] = acc;
      }
      return out;
    }
    // substitution through the triangle
    if (f.lower) {
      for (u64 i = 0; i < m; ++i) {
        u64 acc = v[i];
        for (u64 j = 0; j < i; ++j)
          acc = dom.sub(acc, dom.mul(expr_eval(f.entries[i][j], z, interp), out[j]));
        u64 d = expr_eval(f.entries[i][i], z, interp);
        if (!dom.is_unit(d)) throw EvalError("diagonal entry not invertible");
        out[i] = dom.mul(dom.inv(d), acc);
      }
    } else {
      for (u64 i = m; i-- > 0;) {
        u64 acc = v[i];
        for (u64 j = i + 1; j < m; ++j)
          acc = dom.sub(acc, dom.mul(expr_eval(f.entries[i][j], z, interp), out[j]));
        u64 d = expr_eval(f.entries[i][i], z, interp);
        if (!dom.is_unit(d)) throw EvalError("diagonal entry not invertible");
        out[i] = dom.mul(dom.inv(d), acc);
      }
    }
    return out;
  }
};

}  // namespace

std::vector<u64> ParametricMatrix::apply(std::span<const u64> z,
                                         std::span<const u64> v) const {
  if (v.size() != dim_) throw EvalError("vector dimension mismatch");
  FactorOps ops{dom_, *interp_, z};
  std::vector<u64> acc(v.begin(), v.end());
  for (size_t i = factors_.size(); i-- > 0;)
    acc = std::visit([&](const auto& f) { return ops.apply(f, acc, false); }, factors_[i]);
  return acc;
}

std::vector<u64> ParametricMatrix::apply_inverse(std::span<const u64> z,
                                                 std::span<const u64> v) const {
  if (v.size() != dim_) throw EvalError("vector dimension mismatch");
  FactorOps ops{dom_, *interp_, z};
  std::vector<u64> acc(v.begin(), v.end());
  for (const Factor& f : factors_)
    acc = std::visit([&](const auto& ff) { return ops.apply(ff, acc, true); }, f);
  return acc;
}

std::vector<std::vector<u64>> ParametricMatrix::evaluate(std::span<const u64> z) const {
  std::vector<std::vector<u64>> acc(dim_, std::vector<u64>(dim_, 0));
  // columns of the product are the images of the basis vectors
  for (u64 j = 0; j < dim_; ++j) {
    std::vector<u64> e(dim_, 0);
    e[j] = 1;
    std::vector<u64> col = apply(z, e);
    for (u64 i = 0; i < dim_; ++i) acc[i][j] = col[i];
  }
  return acc;
}

ParametricMatrix ParametricMatrix::product(const ParametricMatrix& a,
                                           const ParametricMatrix& b) {
  if (a.dim_ != b.dim_ || a.param_count_ != b.param_count_ ||
      !a.dom_.same_as(b.dom_))
    throw EvalError("matrix product shape mismatch");
  std::vector<Factor> factors = a.factors_;
  factors.insert(factors.end(), b.factors_.begin(), b.factors_.end());
  return ParametricMatrix(a.dom_, a.dim_, a.param_count_, std::move(factors), a.interp_);
}

ParametricMatrix ParametricMatrix::transposed() const {
  std::vector<Factor> factors;
  for (size_t i = factors_.size(); i-- > 0;) {
    const auto* p = std::get_if<PermutationFactor>(&factors_[i]);
    if (!p) throw EvalError("transpose supported for permutation products only");
    PermutationFactor t = *p;
    for (u64 r = 0; r < t.sigma.dim(); ++r)
      for (u64 s = 0; s < r; ++s) std::swap(t.sigma.table[r][s], t.sigma.table[s][r]);
    factors.push_back(std::move(t));
  }
  return ParametricMatrix(dom_, dim_, param_count_, std::move(factors), interp_);
}

void ParametricMatrix::certify_invertible(const DomainGrid& params) const {
  for (u64 zi = 0; zi < params.total(); ++zi) {
    std::vector<u64> z = params.point(zi);
    for (const Factor& f : factors_) {
      if (const auto* p = std::get_if<PermutationFactor>(&f)) {
        // exact 0/1 doubly-stochastic pattern
        std::vector<u64> indicator(dim_);
        u64 ones = 0;
        for (u64 c = 0; c < dim_; ++c) {
          indicator[c] = p->part.indicator_value(c, z);
          if (indicator[c] != 0 && indicator[c] != 1)
            throw RejectionError("permutation entry not 0/1", {zi, c});
          ones += indicator[c];
        }
        if (ones != 1) throw RejectionError("permutation entries do not select one class", {zi});
        for (u64 i = 0; i < dim_; ++i) {
          u64 row = 0, col = 0;
          for (u64 j = 0; j < dim_; ++j) {
            row += indicator[p->sigma(i, j)];
            col += indicator[p->sigma(j, i)];
          }
          if (row != 1 || col != 1)
            throw RejectionError("permutation pattern is not doubly stochastic", {zi, i});
        }
      } else if (const auto* d = std::get_if<DiagonalFactor>(&f)) {
        for (const Expr& e : d->entries)
          if (!dom_.is_unit(expr_eval(e, z, *interp_)))
            throw RejectionError("diagonal entry vanishes", {zi});
      } else {
        const auto& t = std::get<TriangularFactor>(f);
        for (u64 i = 0; i < dim_; ++i)
          if (!dom_.is_unit(expr_eval(t.entries[i][i], z, *interp_)))
            throw RejectionError("triangular diagonal entry vanishes", {zi, i});
      }
    }
  }
}

ParametricMatrix parametric_permutation_matrix(const Domain& dom,
                                               PartitionOfUnity part, IndexMap sigma) {
  sigma.audit();
  u64 m = sigma.dim();
  if (part.slot_count() != m) part = part.resized(m);
  u32 params = part.arity;
  auto interp = part.interp;
  std::vector<ParametricMatrix::Factor> factors;
  factors.push_back(ParametricMatrix::PermutationFactor{std::move(part), std::move(sigma)});
  return ParametricMatrix(dom, static_cast<u32>(m), params, std::move(factors),
                          std::move(interp));
}

ParametricMatrix parametric_invertible_matrix_general(
    const Domain& dom, u32 dim, u32 param_count,
    std::vector<ParametricMatrix::Factor> factors, const DomainGrid& params) {
  ParametricMatrix m(dom, dim, param_count, std::move(factors), shared_interp(dom));
  m.certify_invertible(params);
  return m;
}

ParametricMatrix parametric_invertible_matrix_signature_safe(
    const Domain& dom, u32 dim, u32 param_count,
    std::vector<ParametricMatrix::Factor> factors, const DomainGrid& params) {
  for (const auto& f : factors)
    if (std::holds_alternative<ParametricMatrix::TriangularFactor>(f))
      throw RejectionError("signature-safe matrices admit only permutation and diagonal factors");
  ParametricMatrix m(dom, dim, param_count, std::move(factors), shared_interp(dom));
  m.certify_invertible(params);
  return m;
}

ParametricInjection::ParametricInjection(Domain dom, ElemSet input_set, ElemSet param_set,
                                         u32 l, u32 m, PartitionOfUnity part,
                                         std::vector<ClassBranch> branches)
    : dom_(std::move(dom)),
      input_set_(std::move(input_set)),
      param_set_(std::move(param_set)),
      l_(l),
      m_(m),
      part_(std::move(part)),
      branches_(std::move(branches)) {
  if (part_.arity != l_) throw EvalError("partition arity differs from the parameter count");
  if (branches_.size() != part_.slot_count())
    throw EvalError("branch count differs from the class count");
  bool any_live = false;
  for (const ClassBranch& b : branches_) {
    if (b.live) {
      any_live = true;
      if (b.phi.dim() != m_ || b.zeta.size() != m_ || b.chi.size() != m_)
        throw EvalError("live branch arity mismatch");
    } else if (b.dead_outputs.size() != m_) {
      throw EvalError("dead branch arity mismatch");
    }
  }
  if (!any_live) throw RejectionError("no live class: empty effective parameter domain");
}

bool ParametricInjection::is_live(std::span<const u64> z) const {
  return branches_[part_.class_of(z)].live;
}

std::vector<u64> ParametricInjection::live_parameter() const {
  DomainGrid grid = DomainGrid::uniform(param_set_, l_);
  for (u64 i = 0; i < grid.total(); ++i) {
    std::vector<u64> z = grid.point(i);
    if (is_live(z)) return z;
  }
  throw EvalError("no live parameter found");
}

std::vector<u64> ParametricInjection::forward(std::span<const u64> z,
                                              std::span<const u64> x) const {
  if (z.size() != l_ || x.size() != m_) throw EvalError("injection arity mismatch");
  const ClassBranch& b = branches_[part_.class_of(z)];
  if (!b.live) {
    std::vector<u64> zx(z.begin(), z.end());
    zx.insert(zx.end(), x.begin(), x.end());
    std::vector<u64> out(m_);
    for (u32 i = 0; i < m_; ++i) out[i] = expr_eval(b.dead_outputs[i], zx, *part_.interp);
    return out;
  }
  std::vector<u64> v(m_);
  for (u32 i = 0; i < m_; ++i)
    v[i] = dom_.add(b.zeta[i].forward(z, x[i]), expr_eval(b.chi[i], z, *part_.interp));
  return b.phi.apply(z, v);
}

std::vector<u64> ParametricInjection::inverse(std::span<const u64> z,
                                              std::span<const u64> y) const {
  if (z.size() != l_ || y.size() != m_) throw EvalError("injection arity mismatch");
  const ClassBranch& b = branches_[part_.class_of(z)];
  if (!b.live) throw EvalError("parameter outside the live domain");
  std::vector<u64> v = b.phi.apply_inverse(z, y);
  std::vector<u64> x(m_);
  for (u32 i = 0; i < m_; ++i) {
    u64 w = dom_.sub(v[i], expr_eval(b.chi[i], z, *part_.interp));
    x[i] = b.zeta[i].inverse(z, w);
  }
  return x;
}

void ParametricInjection::certify(bool allow_sampling, u64 sample_seed) const {
  u64 zs = 1, xs = 1;
  for (u32 i = 0; i < l_; ++i) zs *= param_set_.size();
  for (u32 i = 0; i < m_; ++i) xs *= input_set_.size();
  bool exhaustive = zs <= DomainGrid::kCap / std::max<u64>(xs, 1);
  if (!exhaustive && !allow_sampling)
    throw CapExceededError("certification grid exceeds the cap; sampling requires an override");

  auto check_point = [&](std::span<const u64> z, std::span<const u64> x) {
    std::vector<u64> y = forward(z, x);
    std::vector<u64> back = inverse(z, y);
    if (back != std::vector<u64>(x.begin(), x.end()))
      throw RejectionError("roundtrip identity fails");
  };

  if (exhaustive) {
    DomainGrid zg = DomainGrid::uniform(param_set_, l_);
    DomainGrid xg = DomainGrid::uniform(input_set_, m_);
    for (u64 zi = 0; zi < zg.total(); ++zi) {
      std::vector<u64> z = zg.point(zi);
      if (!is_live(z)) continue;
      for (u64 xi = 0; xi < xg.total(); ++xi) check_point(z, xg.point(xi));
    }
    return;
  }
  // sampled audit: does not certify, per the enumeration contract
  SeededRng rng(sample_seed);
  for (int trial = 0; trial < 4096; ++trial) {
    std::vector<u64> z(l_), x(m_);
    for (u32 i = 0; i < l_; ++i) z[i] = param_set_.at(rng.below(param_set_.size()));
    if (!is_live(z)) continue;
    for (u32 i = 0; i < m_; ++i) x[i] = input_set_.at(rng.below(input_set_.size()));
    check_point(z, x);
  }
}

std::vector<u64> TriangularMap::forward(std::span<const u64> x) const {
  if (x.size() != m) throw EvalError("triangular arity mismatch");
  std::vector<u64> zeta(m), out(m);
  for (u64 i = m; i-- > 0;) {
    std::vector<u64> params;
    params.reserve(m - 1);
    for (u64 j = i + 1; j < m; ++j) params.push_back(zeta[j]);
    for (u64 j = 0; j < i; ++j) params.push_back(x[j]);
    zeta[i] = h[i].forward(params, f[i].apply(x[i]));
    out[i] = g[i].apply(zeta[i]);
  }
  return out;
}

std::vector<u64> TriangularMap::inverse(std::span<const u64> y) const {
  if (y.size() != m) throw EvalError("triangular arity mismatch");
  std::vector<u64> eps(m), x(m);
  for (u64 i = 0; i < m; ++i) eps[i] = g[i].invert(y[i]);
  for (u64 i = 0; i < m; ++i) {
    std::vector<u64> params;
    params.reserve(m - 1);
    for (u64 j = i + 1; j < m; ++j) params.push_back(eps[j]);
    for (u64 j = 0; j < i; ++j) params.push_back(x[j]);
    u64 delta = h[i].inverse(params, eps[i]);
    x[i] = f[i].invert(delta);
  }
  return x;
}

TriangularMap triangular_multivariate(const Domain& dom, const ElemSet& gset,
                                      std::vector<Bijection> f, std::vector<Bijection> g,
                                      std::vector<ParamUnivariateMap> h) {
  u32 m = static_cast<u32>(f.size());
  if (g.size() != m || h.size() != m || m == 0)
    throw EvalError("component count mismatch");
  for (const auto& hi : h)
    if (hi.param_count != m - 1)
      throw EvalError("parametric component takes m-1 parameters");
  TriangularMap t{dom, gset, m, std::move(f), std::move(g), std::move(h)};

  u64 total = 1;
  for (u32 i = 0; i < m; ++i) total *= gset.size();
  if (total <= DomainGrid::kCap) {
    DomainGrid grid = DomainGrid::uniform(gset, m);
    for (u64 i = 0; i < grid.total(); ++i) {
      std::vector<u64> x = grid.point(i);
      std::vector<u64> y = t.forward(x);
      for (u64 c : y)
        if (!gset.contains(c))
          throw RejectionError("triangular image escapes the domain", {c});
      if (t.inverse(y) != x) throw RejectionError("triangular roundtrip fails");
    }
  }
  return t;
}

std::vector<u64> HashExtendedMap::forward(std::span<const u64> x) const {
  if (x.size() != m) throw EvalError("hash extension arity mismatch");
  std::vector<u64> args(n);
  for (u32 i = 0; i < n - m; ++i) {
    args[i] = expr_eval(keys[i], x, *interp);
    if (!P->gset.contains(args[i]))
      throw EvalError("hashing key value escapes the domain");
  }
  for (u32 i = 0; i < m; ++i) args[n - m + i] = x[i];
  return P->forward(args);
}

std::optional<std::vector<u64>> HashExtendedMap::invert(std::span<const u64> y) const {
  std::vector<u64> w = P->inverse(y);
  std::vector<u64> x(w.begin() + (n - m), w.end());
  for (u32 i = 0; i < n - m; ++i)
    if (expr_eval(keys[i], x, *interp) != w[i]) return std::nullopt;
  return x;
}

HashExtendedMap hash_extend(TriangularMap P, std::vector<Expr> keys,
                            std::shared_ptr<const Interpretation> interp) {
  HashExtendedMap q;
  q.n = P.m;
  if (keys.size() >= q.n) throw EvalError("too many hashing keys");
  q.m = q.n - static_cast<u32>(keys.size());
  q.P = std::make_shared<const TriangularMap>(std::move(P));
  q.keys = std::move(keys);
  q.interp = std::move(interp);
  return q;
}

Expr affine_sum_expr(u32 m) {
  std::vector<Expr> terms;
  for (u32 i = 0; i < m; ++i) terms.push_back(Expr::variable(0, i));
  return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
}

Expr monomial_product_expr(u32 m, u64 c, std::span<const u64> exponents) {
  if (exponents.size() != m) throw EvalError("exponent arity mismatch");
  std::vector<Expr> parts{Expr::constant(0, c)};
  for (u32 i = 0; i < m; ++i) {
    if (!exponents[i]) continue;
    Expr v = Expr::variable(0, i);
    parts.push_back(exponents[i] == 1 ? v : Expr::pow_const(v, exponents[i]));
  }
  return parts.size() == 1 ? parts[0] : Expr::mul(std::move(parts));
}

}  // namespace mpkc
