#include "mpkc/permgen.hpp"

#include <algorithm>

namespace mpkc {

namespace {

constexpr u64 kSmallPrimeLimit = 31;

void require_small_prime(u64 p) {
  if (!is_prime_u64(p) || p < 3 || p > kSmallPrimeLimit)
    throw RejectionError("method requires a small odd prime (3..31)", {p});
}

void require_permutation(u64 p, std::span<const u64> perm) {
  if (perm.size() != p) throw RejectionError("value sequence length differs from p");
  std::vector<bool> seen(p, false);
  for (u64 v : perm) {
    if (v >= p || seen[v]) throw RejectionError("values do not permute Z_p", {v});
    seen[v] = true;
  }
}

std::shared_ptr<const Interpretation> shared_interp(const Domain& dom) {
  return std::make_shared<Interpretation>(Interpretation::make(dom));
}

}  // namespace

Bijection linearized_permutation(const Domain& field, std::span<const u64> coeffs) {
  const FieldSpec& F = field.field();
  if (coeffs.size() != F.n) throw RejectionError("coefficient count differs from the degree");
  std::vector<Expr> terms;
  for (u32 i = 0; i < F.n; ++i) {
    if (!coeffs[i]) continue;
    u64 e = 1;
    for (u32 k = 0; k < i; ++k) e *= F.p;
    Expr power = e == 1 ? Expr::variable(0, 0) : Expr::pow_const(Expr::variable(0, 0), e);
    terms.push_back(coeffs[i] == 1 ? power
                                   : Expr::mul({Expr::constant(0, coeffs[i]), power}));
  }
  Expr f = terms.empty() ? Expr::constant(0, 0)
                         : (terms.size() == 1 ? terms[0] : Expr::add(std::move(terms)));
  Evaluator fwd = Evaluator::from_expr(f, shared_interp(field));
  for (u64 z = 1; z < F.q; ++z)
    if (fwd(z) == 0) throw RejectionError("singular linear operator", {z});
  return Bijection::from_forward(ElemSet::all_of(field), std::move(fwd));
}

Bijection power_permutation(const Domain& field, u64 r) {
  const FieldSpec& F = field.field();
  u64 N = F.unit_group_order();
  if (r == 0 || gcd_u64(r, N) != 1)
    throw RejectionError("exponent shares a factor with the group order", {r});
  Bijection b;
  b.domain = ElemSet::all_of(field);
  auto interp = shared_interp(field);
  b.forward = Evaluator::from_expr(Expr::pow_const(Expr::variable(0, 0), r), interp);
  b.inverse_kind = Bijection::InverseKind::closed_form;
  b.inverse = Evaluator::from_expr(
      Expr::pow_const(Expr::variable(0, 0), invmod(r % N, N)), interp);
  return b;
}

Bijection binomial_permutation(const Domain& field, u32 r, u64 a) {
  const FieldSpec& F = field.field();
  if (r == 0 || F.n % r != 0) throw RejectionError("r must divide the extension degree", {r});
  u64 norm_exp = 0, pr = 1;
  for (u32 i = 0; i < r; ++i) pr *= F.p;
  u64 q_power = 1;
  for (u32 i = 0; i < F.n / r; ++i) {
    norm_exp += q_power;
    q_power *= pr;
  }
  if (F.pow(a, norm_exp) == 1)
    throw RejectionError("norm condition fails: a^(sum p^((i-1)r)) = 1", {a});
  Expr f = Expr::add({Expr::pow_const(Expr::variable(0, 0), pr),
                      Expr::mul({Expr::constant(0, F.neg(a)), Expr::variable(0, 0)})});
  return Bijection::from_forward(ElemSet::all_of(field),
                                 Evaluator::from_expr(f, shared_interp(field)));
}

Poly perm_poly_zp_method1(u64 p, std::span<const u64> perm, const Poly& g) {
  require_small_prime(p);
  require_permutation(p, perm);
  if (!g.is_zero() && g.degree() > p - 2)
    throw RejectionError("derivative polynomial degree exceeds p - 2");
  Domain zp{ModulusSpec::make(p)};
  for (u64 x = 0; x < p; ++x)
    if (g.eval(x) == 0) throw RejectionError("derivative polynomial vanishes", {x});

  std::vector<std::pair<u64, u64>> nodes;
  for (u64 i = 0; i < p; ++i) nodes.emplace_back(i, perm[i]);
  Poly interpolant = lagrange_interpolate(zp, nodes);

  std::vector<u64> f((p - 1) * p + 1, 0);
  f[0] = interpolant.coeff(0);
  for (u64 i = 1; i <= p - 1; ++i) {
    u64 ci = g.coeff(i - 1);
    u64 rho = mulmod(invmod(i, p), ci, p);
    u64 sigma = submod(interpolant.coeff(i), rho, p);
    f[i] = addmod(f[i], rho, p);
    f[i * p] = addmod(f[i * p], sigma, p);
  }
  Poly out(zp, std::move(f));
  Poly deriv = out.derivative();
  for (u64 i = 0; i < p; ++i) {
    if (out.eval(i) != perm[i]) throw EvalError("method 1 value check failed");
    if (deriv.eval(i) == 0) throw EvalError("method 1 derivative check failed");
  }
  return out;
}

Poly perm_poly_zp_method1(u64 p, std::span<const u64> perm) {
  return perm_poly_zp_method1(p, perm, Poly::constant(Domain{ModulusSpec::make(p)}, 1));
}

Poly perm_poly_zp_method2(u64 p, std::span<const u64> perm,
                          std::span<const u64> lambda) {
  require_small_prime(p);
  require_permutation(p, perm);
  Domain zp{ModulusSpec::make(p)};

  std::vector<u64> lam(lambda.begin(), lambda.end());
  if (lam.empty()) {
    // near-identity offsets with the tail pair collapsed to fix the sum
    lam.resize(p);
    u64 partial = 0;
    for (u64 i = 0; i + 2 < p; ++i) {
      lam[i] = i;
      partial = addmod(partial, i, p);
    }
    u64 t = mulmod(submod(0, partial, p), invmod(2, p), p);
    lam[p - 2] = lam[p - 1] = t;
  }
  if (lam.size() != p) throw RejectionError("lambda sequence length differs from p");
  u64 sum = 0;
  std::vector<bool> member(p, false);
  u64 distinct = 0;
  for (u64 v : lam) {
    if (v >= p) throw RejectionError("lambda value out of range", {v});
    sum = addmod(sum, v, p);
    if (!member[v]) {
      member[v] = true;
      ++distinct;
    }
  }
  if (sum != 0) throw RejectionError("lambda values must sum to zero");
  if (distinct > p - 1) throw RejectionError("lambda values must omit some residue");

  u64 sigma = 0;
  while (member[sigma]) ++sigma;

  std::vector<u64> c(p, 0);  // c[0] = 0
  for (u64 j = 1; j < p; ++j) {
    u64 sj = 0;
    for (u64 i = 0; i < p; ++i) {
      if (i == j) continue;
      sj = addmod(sj, mulmod(perm[i], invmod(submod(j, i, p), p), p), p);
    }
    c[j] = mulmod(j, submod(sj, lam[j], p), p);
  }
  std::vector<u64> b(p, 0);
  b[0] = perm[0];
  for (u64 j = 1; j < p; ++j) b[j] = submod(perm[j], c[j], p);

  Poly f = Poly::monomial(zp, sigma, p);
  Poly xp1 = Poly::monomial(zp, 1, p - 1);
  for (u64 i = 0; i < p; ++i) {
    // l_i(x) = -prod_{j != i}(x - j)
    Poly li = Poly::constant(zp, p - 1);
    for (u64 j = 0; j < p; ++j)
      if (j != i) li = li * Poly(zp, {submod(0, j, p), 1});
    Poly coeff = Poly::constant(zp, submod(b[i], mulmod(sigma, i, p), p)) +
                 xp1 * Poly::constant(zp, c[i]);
    f = f + coeff * li;
  }

  if (!f.is_zero() && f.degree() > 2 * p - 2)
    throw EvalError("method 2 degree bound violated");
  Poly deriv = f.derivative();
  for (u64 i = 0; i < p; ++i) {
    if (f.eval(i) != perm[i]) throw EvalError("method 2 value check failed");
    if (deriv.eval(i) != submod(lam[i], sigma, p) || deriv.eval(i) == 0)
      throw EvalError("method 2 derivative check failed");
  }
  return f;
}

Poly p2_permutation(u32 l, std::span<const u64> coeffs) {
  if (l == 0 || l > 20) throw RejectionError("modulus exponent out of range", {l});
  u64 m = u64(1) << l;
  if (coeffs.size() < 2) throw RejectionError("polynomial needs a linear part");
  u64 odd_sum = 0;
  for (size_t i = 1; i < coeffs.size(); ++i) odd_sum ^= coeffs[i] & 1;
  if (odd_sum != 1)
    throw RejectionError("coefficient sum over indexes >= 1 must be odd");
  if (l >= 2) {
    if ((coeffs[1] & 1) == 0)
      throw RejectionError("linear coefficient must be odd");
    u64 weighted = 0;
    for (size_t i = 2; i < coeffs.size(); ++i) weighted ^= (i & 1) & coeffs[i];
    if (weighted != 0)
      throw RejectionError("odd-index odd coefficients above the linear term must pair up");
  }
  std::vector<u64> reduced(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) reduced[i] = coeffs[i] % m;
  return Poly(Domain{ModulusSpec::make(m)}, std::move(reduced));
}

u64 hensel_invert(const Poly& f, u64 y, std::span<const u64> base_inverse,
                  u64 p, u32 l) {
  if (!is_bijective_mod_pl(f, p, l))
    throw RejectionError("polynomial is not bijective mod p^l");
  if (base_inverse.size() != p) throw RejectionError("base inverse table size differs from p");
  Poly deriv = f.derivative();
  u64 x = base_inverse[y % p];
  u64 pr = p;
  u32 r = 1;
  while (r < l) {
    r = std::min(2 * r, l);
    pr = 1;
    for (u32 i = 0; i < r; ++i) pr *= p;
    u64 d = deriv.eval(x) % pr;
    if (gcd_u64(d, p) != 1)
      throw RejectionError("derivative not invertible at an iterate", {x});
    u64 residual = submod(y % pr, f.eval(x) % pr, pr);
    x = addmod(x % pr, mulmod(invmod(d, pr), residual, pr), pr);
    if (f.eval(x) % pr != y % pr) throw EvalError("hensel convergence assertion failed");
  }
  return x;
}

Bijection bijection_from_zpl_poly(const Poly& f, u64 p, u32 l) {
  if (!is_bijective_mod_pl(f, p, l))
    throw RejectionError("polynomial is not bijective mod p^l");
  std::vector<u64> base(p);
  for (u64 x = 0; x < p; ++x) base[f.eval(x) % p] = x;
  Bijection b;
  b.domain = ElemSet::all_of(f.domain());
  b.forward = Evaluator::from_poly(f);
  b.inverse_kind = Bijection::InverseKind::hensel;
  b.hensel_base_inverse = std::move(base);
  b.hensel_p = p;
  b.hensel_l = l;
  return b;
}

std::vector<std::pair<u64, u64>> admissible_subgroup_splits(const FieldSpec& field) {
  u64 N = field.unit_group_order();
  std::vector<std::pair<u64, u64>> out;
  for (u64 s = 2; s <= N / 2; ++s) {
    if (N % s) continue;
    u64 t = N / s;
    if (t < 2 || gcd_u64(s, t) != 1) continue;
    out.emplace_back(s, t);
  }
  return out;
}

Bijection subgroup_bijection(const Domain& field, u64 s, u64 t,
                             std::span<const u64> exponent_poly) {
  const FieldSpec& F = field.field();
  u64 N = F.unit_group_order();
  if (s < 2 || t < 2 || s > N - 2 || t > N - 2)
    throw RejectionError("no admissible split: cofactor out of range", {s, t});
  if (s * t != N)
    throw RejectionError("no admissible split: s*t differs from the group order", {s, t});
  if (gcd_u64(s, t) != 1)
    throw RejectionError("no admissible split: cofactors share a factor", {s, t});

  // f must act bijectively on Z_t
  std::vector<bool> seen(t, false);
  for (u64 u = 0; u < t; ++u) {
    u64 v = 0;
    for (size_t i = exponent_poly.size(); i-- > 0;)
      v = (mulmod(v, u, t) + exponent_poly[i] % t) % t;
    if (seen[v]) throw RejectionError("exponent polynomial not bijective mod t", {u});
    seen[v] = true;
  }

  std::vector<u64> subgroup;
  for (u64 u = 0; u < t; ++u) subgroup.push_back(F.exp_table[(s * u) % N]);
  std::sort(subgroup.begin(), subgroup.end());
  ElemSet ht = ElemSet::listed(field, subgroup);

  auto interp = shared_interp(field);
  u64 v_lift = invmod(s % t, t);
  // g(y) = s * f(v * y), coefficients as plain integers at the exponent level
  Expr inner = Expr::mul({Expr::constant(1, v_lift), Expr::variable(1, 0)});
  Expr acc = Expr::constant(1, exponent_poly.empty() ? 0 : exponent_poly.back());
  if (!exponent_poly.empty())
    for (size_t i = exponent_poly.size() - 1; i-- > 0;) {
      Expr term = Expr::mul({acc, inner});
      acc = exponent_poly[i] ? Expr::add({term, Expr::constant(1, exponent_poly[i])}) : term;
    }
  Expr gbase = Expr::mul({Expr::constant(1, s), acc});

  for (u64 offset = 0; offset < t; ++offset) {
    Expr g = offset == 0 ? gbase : Expr::add({gbase, Expr::constant(1, s * offset)});
    Expr eta = Expr::pow(Expr::constant(0, F.generator), g);
    try {
      return Bijection::from_forward(ht, Evaluator::from_expr(eta, interp));
    } catch (const RejectionError&) {
      // restriction missed the subgroup; try the next constant term
    }
  }
  throw RejectionError("no constant offset makes the restriction bijective");
}

Bijection hybrid_perm_method1(const PartitionOfUnity& part, std::span<const u64> sigma,
                              std::span<const Evaluator> g, std::span<const Evaluator> f,
                              const Bijection& eta) {
  u64 k = part.slot_count();
  if (sigma.size() != k || g.size() != k || f.size() != k)
    throw RejectionError("class data arity mismatch");
  std::vector<bool> hit(k, false);
  for (u64 v : sigma) {
    if (v >= k || hit[v]) throw RejectionError("sigma is not a permutation of the classes");
    hit[v] = true;
  }

  const Domain& dom = part.dom;
  std::vector<std::vector<u64>> classes(k);
  for (u64 x = 0; x < dom.size(); ++x) {
    std::vector<u64> pt{x};
    classes[part.class_of(pt)].push_back(x);
  }
  std::vector<u64> sigma_inv(k);
  for (u64 i = 0; i < k; ++i) sigma_inv[sigma[i]] = i;

  for (u64 i = 0; i < k; ++i) {
    if (classes[i].size() != classes[sigma[i]].size())
      throw RejectionError("class size mismatch under sigma", {i, sigma[i]});
    std::vector<u64> image;
    for (u64 x : classes[i]) {
      u64 y = g[i](x);
      if (f[i](y) != x)
        throw RejectionError("per-class inverse fails f_i(g_i(x)) = x", {i, x});
      image.push_back(y);
    }
    std::sort(image.begin(), image.end());
    if (image != classes[sigma[i]])
      throw RejectionError("g_i does not carry its class onto the target", {i});
  }

  ElemSet all = ElemSet::all_of(dom);
  std::vector<u64> fwd_table(dom.size()), inv_table(dom.size());
  for (u64 x = 0; x < dom.size(); ++x) {
    std::vector<u64> pt{x};
    fwd_table[x] = eta.apply(g[part.class_of(pt)](x));
  }
  for (u64 y = 0; y < dom.size(); ++y) {
    u64 xi = eta.invert(y);
    std::vector<u64> pt{xi};
    inv_table[y] = f[sigma_inv[part.class_of(pt)]](xi);
  }
  Bijection b;
  b.domain = all;
  b.forward = Evaluator::from_table(all, std::move(fwd_table));
  b.inverse_kind = Bijection::InverseKind::table;
  b.inverse = Evaluator::from_table(all, std::move(inv_table));
  b.certify();
  return b;
}

Bijection hybrid_perm_method2(std::span<const Bijection> f_family, const Evaluator& h,
                              std::span<const u64> sigma, const PartitionOfUnity& part,
                              const Bijection& eta) {
  u64 rho = f_family.size();
  if (rho == 0) throw RejectionError("empty bijection family");
  if (sigma.size() != rho) throw RejectionError("sigma length differs from the family size");
  if (part.slot_count() > rho)
    throw RejectionError("more classes than family members");
  std::vector<bool> hit(rho, false);
  for (u64 v : sigma) {
    if (v >= rho || hit[v]) throw RejectionError("sigma is not a permutation");
    hit[v] = true;
  }

  const ElemSet& G = eta.domain;
  for (u64 idx = 0; idx < G.size(); ++idx) {
    u64 x = G.at(idx);
    u64 hx = h(x);
    for (u64 i = 0; i < rho; ++i)
      if (h(f_family[i].apply(x)) != hx)
        throw RejectionError("h is not invariant under the family", {i, x});
  }

  std::vector<u64> fwd(G.size()), inv(G.size());
  for (u64 idx = 0; idx < G.size(); ++idx) {
    u64 x = G.at(idx);
    std::vector<u64> hv{h(x)};
    u64 i = part.class_of(hv);
    if (i >= rho) throw RejectionError("class index beyond the family", {i});
    fwd[idx] = eta.apply(f_family[sigma[i]].apply(x));
  }
  for (u64 idx = 0; idx < G.size(); ++idx) {
    u64 y = G.at(idx);
    u64 xi = eta.invert(y);
    std::vector<u64> hv{h(xi)};
    u64 i = part.class_of(hv);
    inv[idx] = f_family[sigma[i]].invert(xi);
  }
  Bijection b;
  b.domain = G;
  b.forward = Evaluator::from_table(G, std::move(fwd));
  b.inverse_kind = Bijection::InverseKind::table;
  b.inverse = Evaluator::from_table(G, std::move(inv));
  b.certify();
  return b;
}

}  // namespace mpkc
