#include "mpkc/schemes.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "json.hpp"

namespace mpkc {

namespace {

using ordered_json = nlohmann::ordered_json;

u64 unit_index(const Domain& dom, u64 x) {
  if (x == 0 || x >= dom.size())
    throw EvalError("component outside the message domain");
  return x - 1;
}

u64 units_row(const Domain& dom, std::span<const u64> values) {
  u64 idx = 0;
  for (u64 v : values) idx = idx * (dom.size() - 1) + unit_index(dom, v);
  return idx;
}

std::vector<u64> table_row(const std::vector<u64>& table, u64 row, u64 width) {
  return std::vector<u64>(table.begin() + row * width, table.begin() + (row + 1) * width);
}

u64 random_coprime(SeededRng& rng, u64 n) {
  for (;;) {
    u64 r = 1 + rng.below(n - 1);
    if (gcd_u64(r, n) == 1) return r;
  }
}

u64 random_unit(SeededRng& rng, const Domain& dom) {
  return 1 + rng.below(dom.size() - 1);
}

Bijection random_unit_power(SeededRng& rng, const Domain& dom, const ElemSet& units) {
  u64 N = dom.size() - 1;
  Bijection pw = power_permutation(dom, random_coprime(rng, N));
  Bijection scaled = Bijection::from_forward(
      units, Evaluator::from_poly(Poly(dom, {0, random_unit(rng, dom)})));
  // x -> c * x^r as a composed table over the unit group
  std::vector<u64> fwd(units.size());
  for (u64 i = 0; i < units.size(); ++i)
    fwd[i] = scaled.apply(pw.apply(units.at(i)));
  return Bijection::from_forward(units, Evaluator::from_table(units, std::move(fwd)));
}

// c * prod vars[i]^{e_i}: unit-valued whenever the variables are units.
// Mixing mode draws every exponent coprime to the group order, so a change
// in any single variable always moves the value.
Expr random_monomial(SeededRng& rng, const Domain& dom, std::span<const u32> vars,
                     bool mixing = false) {
  u64 N = dom.size() - 1;
  std::vector<Expr> parts{Expr::constant(0, random_unit(rng, dom))};
  for (u32 v : vars) {
    u64 e = mixing && N > 1 ? random_coprime(rng, N) : rng.below(N);
    if (!e) continue;
    Expr var = Expr::variable(0, v);
    parts.push_back(e == 1 ? var : Expr::pow_const(var, e));
  }
  return parts.size() == 1 ? parts[0] : Expr::mul(std::move(parts));
}

// Exponent expression that stays a unit mod N: a constant coprime to N, or
// for odd prime N the shifted square t^2 + (N - nr) with nr a non-residue.
Expr random_unit_exponent(SeededRng& rng, u64 N, u32 param_count) {
  bool parametric = param_count > 0 && N > 3 && is_prime_u64(N) && rng.below(2);
  if (!parametric) return Expr::constant(1, random_coprime(rng, N));
  u64 nr = 0;
  std::vector<bool> residue(N, false);
  for (u64 t = 0; t < N; ++t) residue[mulmod(t, t, N)] = true;
  for (u64 c = 2; c < N; ++c)
    if (!residue[c]) {
      nr = c;
      break;
    }
  if (!nr) return Expr::constant(1, random_coprime(rng, N));
  u32 idx = static_cast<u32>(rng.below(param_count));
  return Expr::add({Expr::pow_const(Expr::variable(1, idx), 2),
                    Expr::constant(1, N - nr)});
}

ParamUnivariateMap random_param_map(SeededRng& rng, const Domain& dom, u32 param_count) {
  std::vector<u32> vars(param_count);
  for (u32 i = 0; i < param_count; ++i) vars[i] = i;
  Expr scale = random_monomial(rng, dom, vars, /*mixing=*/true);
  Expr exponent = random_unit_exponent(rng, dom.size() - 1, param_count);
  return multiplicative_param_map(dom, param_count, std::move(scale), std::move(exponent));
}

TriangularMap random_triangular(SeededRng& rng, const Domain& dom, const ElemSet& units,
                                u32 m) {
  std::vector<Bijection> f, g;
  std::vector<ParamUnivariateMap> h;
  for (u32 i = 0; i < m; ++i) {
    f.push_back(random_unit_power(rng, dom, units));
    g.push_back(random_unit_power(rng, dom, units));
    h.push_back(random_param_map(rng, dom, m - 1));
  }
  return triangular_multivariate(dom, units, std::move(f), std::move(g), std::move(h));
}

// Class-valued map of the pad slot: indicators of a coarse partition summed
// with unit representatives. Non-injective by construction, keeping the
// hidden-key fibers fat.
Expr random_class_map(SeededRng& rng, const Domain& dom, Interpretation& interp,
                      u32 var_index) {
  const FieldSpec& F = dom.field();
  Expr disc;
  u64 N = F.q - 1;
  // proper power maps only: r = N collapses the whole unit group into one class
  std::vector<u64> divisors;
  for (u64 r = 2; r < N; ++r)
    if (N % r == 0 && 1 + N / r <= 16) divisors.push_back(r);
  bool use_trace = F.n >= 2 && (divisors.empty() || rng.below(2));
  if (use_trace) {
    std::vector<Expr> terms{Expr::variable(0, 0)};
    u64 e = F.p;
    for (u32 i = 1; i < F.n; ++i) {
      terms.push_back(Expr::pow_const(Expr::variable(0, 0), e));
      e *= F.p;
    }
    disc = Expr::add(std::move(terms));
  } else {
    if (divisors.empty()) throw RejectionError("no coarse discriminator available");
    u64 r = divisors[rng.below(divisors.size())];
    disc = Expr::pow_const(Expr::variable(0, 0), r);
  }
  PartitionOfUnity part = partition_from_discriminator(disc, dom);
  // distinct representatives keep the map non-constant across classes
  std::vector<u64> reps;
  for (u64 u = 1; u < dom.size(); ++u) reps.push_back(u);
  rng.shuffle(reps);
  if (part.slot_count() > reps.size())
    throw RejectionError("partition finer than the unit group");
  std::vector<Expr> terms;
  for (u64 c = 0; c < part.slot_count(); ++c) {
    Expr ind = expr_substitute(part.indicators[c], 0, Expr::variable(0, var_index), interp);
    terms.push_back(Expr::mul({ind, Expr::constant(0, reps[c])}));
  }
  return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
}

std::vector<Expr> draw_hidden_keys(SeededRng& rng, const Domain& dom,
                                   Interpretation& interp, u64 mu, u64 kappa,
                                   u64 count) {
  u64 N = dom.size() - 1;
  std::vector<Expr> pad_classes;
  for (u64 t = 0; t < kappa; ++t)
    pad_classes.push_back(random_class_map(rng, dom, interp, static_cast<u32>(mu + t)));
  std::vector<Expr> out;
  for (u64 j = 0; j < count; ++j) {
    std::vector<Expr> parts{Expr::constant(0, random_unit(rng, dom))};
    for (u64 i = 0; i < mu; ++i) {
      // coprime exponents: plaintexts sharing a hidden-key value always
      // differ in at least two coordinates
      u64 e = N > 1 ? random_coprime(rng, N) : 1;
      Expr v = Expr::variable(0, static_cast<u32>(i));
      parts.push_back(e == 1 ? v : Expr::pow_const(v, e));
    }
    for (u64 t = 0; t < kappa; ++t) {
      u64 e = N > 1 ? random_coprime(rng, N) : 1;
      parts.push_back(e == 1 ? pad_classes[t] : Expr::pow_const(pad_classes[t], e));
    }
    out.push_back(parts.size() == 1 ? parts[0] : Expr::mul(std::move(parts)));
  }
  return out;
}

}  // namespace

void SchemeParams::validate() const {
  if (!is_prime_u64(field_p) || field_n < 1)
    throw RejectionError("invalid field parameters");
  if (mu == 0 || nu == 0 || mu > nu) throw RejectionError("require 1 <= mu <= nu");
  if (kind == Kind::pkc) {
    if (lambda != nu - mu) throw RejectionError("pkc requires lambda = nu - mu");
    if (lambda > 0 && kappa == 0)
      throw RejectionError("hidden keys need at least one padding slot");
  } else {
    if (K == 0 || L == 0 || tau == 0) throw RejectionError("signature arities must be positive");
    if (K > kappa || L > lambda || nu < L + mu)
      throw RejectionError("signature arity constraints violated");
    if (nu == L + mu || kappa == K || lambda == L)
      throw RejectionError("surjective maps need at least one parameter slot");
  }
}

std::vector<u64> PkcPublicKey::encrypt(std::span<const u64> x,
                                       std::span<const u64> omega) const {
  if (x.size() != params.mu || omega.size() != params.kappa)
    throw EvalError("message arity mismatch");
  std::vector<u64> joint(x.begin(), x.end());
  joint.insert(joint.end(), omega.begin(), omega.end());
  u64 row = units_row(dom, joint);
  return table_row(table, row, params.nu);
}

std::vector<u64> PkcPrivateKey::hidden_values(std::span<const u64> x,
                                              std::span<const u64> omega) const {
  std::vector<u64> joint(x.begin(), x.end());
  joint.insert(joint.end(), omega.begin(), omega.end());
  std::vector<u64> out;
  out.reserve(hidden.size());
  for (const Expr& f : hidden) out.push_back(expr_eval(f, joint, *interp));
  return out;
}

DecryptOutcome PkcPrivateKey::decrypt(std::span<const u64> eps,
                                      std::span<const u64> omega) const {
  if (eps.size() != params.nu) throw EvalError("ciphertext arity mismatch");
  if (omega.size() != params.kappa) throw EvalError("padding arity mismatch");
  for (u64 w : omega) unit_index(dom, w);
  for (u64 e : eps)
    if (e == 0 || e >= dom.size()) return {DecryptStatus::inversion_failure, {}};
  std::vector<u64> pre = P.inverse(eps);
  std::vector<u64> z(pre.begin(), pre.begin() + params.lambda);
  std::vector<u64> x(pre.begin() + params.lambda, pre.end());
  if (hidden_values(x, omega) != z) return {DecryptStatus::integrity_failure, {}};
  return {DecryptStatus::ok, std::move(x)};
}

PkcKeyPair pkc_keygen(const SchemeParams& params, u64 seed) {
  params.validate();
  if (params.kind != SchemeParams::Kind::pkc)
    throw RejectionError("pkc_keygen requires pkc parameters");
  Domain dom{FieldSpec::make_default(params.field_p, static_cast<u32>(params.field_n))};
  ElemSet units = ElemSet::units_of(dom);
  auto interp = std::make_shared<Interpretation>(Interpretation::make(dom));
  u64 g = units.size();

  u64 rows = 1;
  for (u64 i = 0; i < params.mu + params.kappa; ++i) rows *= g;
  u64 xrows = 1;
  for (u64 i = 0; i < params.mu; ++i) xrows *= g;
  u64 wrows = rows / xrows;
  DomainGrid joint = DomainGrid::uniform(units,
                                         static_cast<u32>(params.mu + params.kappa));

  auto build_table = [&](const PkcPrivateKey& priv) {
    std::vector<u64> table(rows * params.nu);
    for (u64 r = 0; r < rows; ++r) {
      std::vector<u64> point = joint.point(r);
      std::span<const u64> x(point.data(), params.mu);
      std::span<const u64> w(point.data() + params.mu, params.kappa);
      std::vector<u64> args = priv.hidden_values(x, w);
      args.insert(args.end(), x.begin(), x.end());
      std::vector<u64> eps = priv.P.forward(args);
      std::copy(eps.begin(), eps.end(), table.begin() + r * params.nu);
    }
    return table;
  };

  auto certify_pair = [&](const PkcPrivateKey& priv, const std::vector<u64>& table) {
    if (params.lambda == 0) return;
    DomainGrid xg = DomainGrid::uniform(units, static_cast<u32>(params.mu));
    DomainGrid wg = DomainGrid::uniform(units, static_cast<u32>(params.kappa));
    auto census = preimage_census(
        [&](std::span<const u64> args) {
          return priv.hidden_values(args.subspan(0, params.mu),
                                    args.subspan(params.mu));
        },
        xg, wg, dom.size());
    if (census.min_nonzero < 2) throw RejectionError("hidden-key fibers too thin");
    // every plaintext must see at least two hidden-key values, so pad
    // mismatches are actually detectable
    std::map<u64, u64> values_per_x;
    for (const auto& [key, count] : census.counts) ++values_per_x[key.first];
    for (const auto& [xi, vals] : values_per_x)
      if (vals < 2) throw RejectionError("hidden keys ignore the padding");
    // no two ciphertexts under one pad differ in a single component, so
    // single-component tampering can never silently decode wrongly
    for (u64 wr = 0; wr < wrows; ++wr) {
      for (u64 a = 0; a < xrows; ++a)
        for (u64 b = a + 1; b < xrows; ++b) {
          u64 diff = 0;
          for (u64 c = 0; c < params.nu; ++c)
            diff += table[(a * wrows + wr) * params.nu + c] !=
                    table[(b * wrows + wr) * params.nu + c];
          if (diff < 2) throw RejectionError("ciphertext pair at unit distance");
        }
    }
  };

  SeededRng rng(seed);
  for (int attempt = 0; attempt < 32; ++attempt) {
    try {
      TriangularMap P = random_triangular(rng, dom, units, static_cast<u32>(params.nu));
      // the certifications constrain the (P, F) pair jointly; a few
      // hidden-key redraws share one structural draw
      PkcPrivateKey priv;
      std::vector<u64> table;
      for (int f_try = 0;; ++f_try) {
        auto working = std::make_shared<Interpretation>(*interp);
        std::vector<Expr> hidden = draw_hidden_keys(rng, dom, *working, params.mu,
                                                    params.kappa, params.lambda);
        priv = PkcPrivateKey{params, dom, P, std::move(hidden), working};
        table = build_table(priv);
        try {
          certify_pair(priv, table);
          break;
        } catch (const RejectionError&) {
          if (f_try >= 7) throw;
        }
      }

      PkcPublicKey pub{params, dom, std::move(table)};

      // full decrypt-encrypt audit before shipping the pair
      for (u64 r = 0; r < rows; ++r) {
        std::vector<u64> point = joint.point(r);
        std::span<const u64> x(point.data(), params.mu);
        std::span<const u64> w(point.data() + params.mu, params.kappa);
        DecryptOutcome out = priv.decrypt(pub.encrypt(x, w), w);
        if (out.status != DecryptStatus::ok ||
            out.plaintext != std::vector<u64>(x.begin(), x.end()))
          throw RejectionError("decrypt-encrypt audit failed");
      }
      return PkcKeyPair{std::move(pub), std::move(priv)};
    } catch (const RejectionError& e) {
      if (std::getenv("MPKC_KEYGEN_TRACE"))
        std::fprintf(stderr, "attempt %d rejected: %s\n", attempt, e.what());
      if (attempt == 31) throw;
    }
  }
  throw RejectionError("key generation failed after bounded retries");
}

std::vector<u64> SigPublicKey::verify(std::span<const u64> eps) const {
  if (eps.size() != params.nu) throw EvalError("signature arity mismatch");
  u64 row = units_row(dom, eps);
  return table_row(plain_table, row, params.mu);
}

std::vector<u64> SigAuthTable::p_of(std::span<const u64> eps) const {
  return table_row(p_full, units_row(dom, eps), params.L + params.mu);
}

std::vector<u64> SigAuthTable::f_of(std::span<const u64> x,
                                    std::span<const u64> omega) const {
  std::vector<u64> joint(x.begin(), x.end());
  joint.insert(joint.end(), omega.begin(), omega.end());
  return table_row(f_table, units_row(dom, joint), params.L);
}

std::vector<u64> SigAuthTable::q_of(std::span<const u64> omega) const {
  return table_row(q_table, units_row(dom, omega), params.K);
}

std::vector<u64> SigAuthTable::r_of(std::span<const u64> z) const {
  return table_row(r_table, units_row(dom, z), params.L);
}

std::vector<u64> SigAuthTable::h_of(std::span<const u64> z, std::span<const u64> x,
                                    std::span<const u64> omega) const {
  std::vector<u64> joint(z.begin(), z.end());
  joint.insert(joint.end(), x.begin(), x.end());
  joint.insert(joint.end(), omega.begin(), omega.end());
  return table_row(h_table, units_row(dom, joint), params.tau);
}

std::vector<u64> SigPrivateKey::hidden_values(std::span<const u64> x,
                                              std::span<const u64> omega) const {
  std::vector<u64> joint(x.begin(), x.end());
  joint.insert(joint.end(), omega.begin(), omega.end());
  std::vector<u64> out;
  out.reserve(hidden.size());
  for (const Expr& f : hidden) out.push_back(expr_eval(f, joint, *interp));
  return out;
}

std::vector<u64> SigPrivateKey::authenticator(std::span<const u64> z,
                                              std::span<const u64> x,
                                              std::span<const u64> omega) const {
  std::vector<u64> joint(z.begin(), z.end());
  joint.insert(joint.end(), x.begin(), x.end());
  joint.insert(joint.end(), omega.begin(), omega.end());
  std::vector<u64> full = H.forward(joint);
  full.resize(params.tau);
  return full;
}

namespace {

ParametricInjection random_surjection(SeededRng& rng, const Domain& dom,
                                      const ElemSet& units, u32 l, u32 m) {
  const FieldSpec& F = dom.field();

  Expr disc;
  if (F.n >= 2) {
    std::vector<Expr> terms{Expr::variable(0, 0)};
    u64 e = F.p;
    for (u32 i = 1; i < F.n; ++i) {
      terms.push_back(Expr::pow_const(Expr::variable(0, 0), e));
      e *= F.p;
    }
    disc = Expr::add(std::move(terms));
  } else {
    u64 r = 2;
    while ((F.q - 1) % r) ++r;
    disc = Expr::pow_const(Expr::variable(0, 0), r);
  }
  PartitionOfUnity part = partition_from_discriminator(disc, dom);
  if (l >= 2) part = part.composed_with(affine_sum_expr(l), l);

  DomainGrid params = DomainGrid::uniform(units, l);
  // the class of the lexicographically smallest parameter stays live
  u64 anchor = part.class_of(params.point(0));

  std::vector<ClassBranch> branches;
  for (u64 c = 0; c < part.slot_count(); ++c) {
    ClassBranch b;
    b.live = c == anchor || rng.below(4) != 0;
    if (b.live) {
      std::vector<ParametricMatrix::Factor> factors;
      std::vector<Expr> diag;
      std::vector<u32> vars(l);
      for (u32 i = 0; i < l; ++i) vars[i] = i;
      for (u32 i = 0; i < m; ++i)
        diag.push_back(random_monomial(rng, dom, vars, /*mixing=*/true));
      factors.push_back(ParametricMatrix::DiagonalFactor{std::move(diag)});
      if (m >= 2 && rng.below(2)) {
        std::vector<u64> f1(m), f2(m), hh(m);
        std::iota(f1.begin(), f1.end(), 0);
        std::iota(f2.begin(), f2.end(), 0);
        std::iota(hh.begin(), hh.end(), 0);
        rng.shuffle(f1);
        rng.shuffle(f2);
        rng.shuffle(hh);
        IndexMap sigma = IndexMap::from_bijections(f1, f2, hh);
        factors.push_back(
            ParametricMatrix::PermutationFactor{part.resized(m), std::move(sigma)});
      }
      b.phi = parametric_invertible_matrix_signature_safe(dom, m, l, std::move(factors),
                                                          params);
      for (u32 i = 0; i < m; ++i) {
        b.chi.push_back(Expr::constant(0, 0));
        b.zeta.push_back(random_param_map(rng, dom, l));
      }
    } else {
      std::vector<u32> zxvars(l + m);
      for (u32 i = 0; i < l + m; ++i) zxvars[i] = i;
      for (u32 i = 0; i < m; ++i)
        b.dead_outputs.push_back(random_monomial(rng, dom, zxvars));
    }
    branches.push_back(std::move(b));
  }
  ParametricInjection inj(dom, units, units, l, m, std::move(part), std::move(branches));
  inj.certify();
  return inj;
}

void audit_surjective(const Domain& dom, const ElemSet& units,
                      const std::vector<u64>& table, u64 in_arity, u64 out_arity) {
  u64 g = units.size();
  u64 rows = 1;
  for (u64 i = 0; i < in_arity; ++i) rows *= g;
  u64 want = 1;
  for (u64 i = 0; i < out_arity; ++i) want *= g;
  std::set<u64> seen;
  for (u64 r = 0; r < rows; ++r) {
    u64 key = 0;
    for (u64 c = 0; c < out_arity; ++c)
      key = key * dom.size() + table[r * out_arity + c];
    seen.insert(key);
  }
  if (seen.size() != want)
    throw RejectionError("map is not surjective on the tested grid");
}

}  // namespace

SigKeySet sig_keygen(const SchemeParams& params, u64 seed) {
  params.validate();
  if (params.kind != SchemeParams::Kind::signature)
    throw RejectionError("sig_keygen requires signature parameters");
  Domain dom{FieldSpec::make_default(params.field_p, static_cast<u32>(params.field_n))};
  ElemSet units = ElemSet::units_of(dom);
  auto interp = std::make_shared<Interpretation>(Interpretation::make(dom));
  u64 g = units.size();

  SeededRng rng(seed);
  for (int attempt = 0; attempt < 32; ++attempt) {
    try {
      u32 lp = static_cast<u32>(params.nu - params.L - params.mu);
      u32 mp = static_cast<u32>(params.L + params.mu);
      ParametricInjection P = random_surjection(rng, dom, units, lp, mp);
      ParametricInjection Q = random_surjection(
          rng, dom, units, static_cast<u32>(params.kappa - params.K),
          static_cast<u32>(params.K));
      ParametricInjection R = random_surjection(
          rng, dom, units, static_cast<u32>(params.lambda - params.L),
          static_cast<u32>(params.L));
      TriangularMap H = random_triangular(
          rng, dom, units,
          static_cast<u32>(params.lambda + params.mu + params.kappa));
      auto working = std::make_shared<Interpretation>(*interp);
      std::vector<Expr> hidden = draw_hidden_keys(rng, dom, *working, params.mu,
                                                  params.kappa, params.L);

      SigPrivateKey priv{params, dom,        std::move(P), std::move(Q),
                         std::move(R), std::move(H), std::move(hidden), working};

      auto fill = [&](u64 in_arity, u64 out_arity, auto&& fn) {
        u64 rows = 1;
        for (u64 i = 0; i < in_arity; ++i) rows *= g;
        std::vector<u64> table(rows * out_arity);
        DomainGrid grid = DomainGrid::uniform(units, static_cast<u32>(in_arity));
        for (u64 r = 0; r < rows; ++r) {
          std::vector<u64> point = grid.point(r);
          std::vector<u64> out = fn(point);
          std::copy(out.begin(), out.end(), table.begin() + r * out_arity);
        }
        return table;
      };

      SigAuthTable auth;
      auth.params = params;
      auth.dom = dom;
      auth.p_full = fill(params.nu, params.L + params.mu, [&](std::vector<u64>& eps) {
        std::span<const u64> zc(eps.data(), lp);
        std::span<const u64> vc(eps.data() + lp, mp);
        return priv.P.forward(zc, vc);
      });
      auth.f_table = fill(params.mu + params.kappa, params.L, [&](std::vector<u64>& pt) {
        return priv.hidden_values(std::span<const u64>(pt.data(), params.mu),
                                  std::span<const u64>(pt.data() + params.mu, params.kappa));
      });
      auth.q_table = fill(params.kappa, params.K, [&](std::vector<u64>& w) {
        u64 lq = params.kappa - params.K;
        return priv.Q.forward(std::span<const u64>(w.data(), lq),
                              std::span<const u64>(w.data() + lq, params.K));
      });
      auth.r_table = fill(params.lambda, params.L, [&](std::vector<u64>& z) {
        u64 lr = params.lambda - params.L;
        return priv.R.forward(std::span<const u64>(z.data(), lr),
                              std::span<const u64>(z.data() + lr, params.L));
      });
      auth.h_table = fill(params.lambda + params.mu + params.kappa, params.tau,
                          [&](std::vector<u64>& zxw) {
                            std::vector<u64> full = priv.H.forward(zxw);
                            full.resize(params.tau);
                            return full;
                          });

      audit_surjective(dom, units, auth.p_full, params.nu, params.L + params.mu);
      audit_surjective(dom, units, auth.q_table, params.kappa, params.K);
      audit_surjective(dom, units, auth.r_table, params.lambda, params.L);

      SigPublicKey pub;
      pub.params = params;
      pub.dom = dom;
      {
        u64 rows = auth.p_full.size() / (params.L + params.mu);
        pub.plain_table.resize(rows * params.mu);
        for (u64 r = 0; r < rows; ++r)
          for (u64 c = 0; c < params.mu; ++c)
            pub.plain_table[r * params.mu + c] =
                auth.p_full[r * (params.L + params.mu) + params.L + c];
      }

      // right-inverse identities on the full grids
      std::vector<u64> zp = priv.P.live_parameter();
      DomainGrid wgrid = DomainGrid::uniform(units, mp);
      for (u64 r = 0; r < wgrid.total(); ++r) {
        std::vector<u64> w = wgrid.point(r);
        std::vector<u64> eps(zp.begin(), zp.end());
        std::vector<u64> tail = priv.P.inverse(zp, w);
        eps.insert(eps.end(), tail.begin(), tail.end());
        if (auth.p_of(eps) != w) throw RejectionError("right inverse of P fails");
      }
      std::vector<u64> zq = priv.Q.live_parameter();
      DomainGrid kgrid = DomainGrid::uniform(units, static_cast<u32>(params.K));
      for (u64 r = 0; r < kgrid.total(); ++r) {
        std::vector<u64> w = kgrid.point(r);
        std::vector<u64> omega(zq.begin(), zq.end());
        std::vector<u64> tail = priv.Q.inverse(zq, w);
        omega.insert(omega.end(), tail.begin(), tail.end());
        if (auth.q_of(omega) != w) throw RejectionError("right inverse of Q fails");
      }
      std::vector<u64> zr = priv.R.live_parameter();
      DomainGrid lgrid = DomainGrid::uniform(units, static_cast<u32>(params.L));
      for (u64 r = 0; r < lgrid.total(); ++r) {
        std::vector<u64> w = lgrid.point(r);
        std::vector<u64> z(zr.begin(), zr.end());
        std::vector<u64> tail = priv.R.inverse(zr, w);
        z.insert(z.end(), tail.begin(), tail.end());
        if (auth.r_of(z) != w) throw RejectionError("right inverse of R fails");
      }

      return SigKeySet{std::move(pub), std::move(auth), std::move(priv)};
    } catch (const RejectionError&) {
      if (attempt == 31) throw;
    }
  }
  throw RejectionError("key generation failed after bounded retries");
}

Tav::Tav(SigAuthTable table, u64 seed, std::string journal_path)
    : table_(std::move(table)), rng_(seed), journal_path_(std::move(journal_path)) {}

void Tav::journal_record(const std::string& kind, const Transaction& txn,
                         const std::string& extra) {
  if (journal_path_.empty()) return;
  ordered_json rec;
  rec["kind"] = kind;
  rec["id"] = txn.id;
  rec["omega_prime"] = txn.omega_prime;
  rec["issued_at"] = txn.issued_at;
  rec["expires_at"] = txn.expires_at;
  rec["gist"] = txn.gist;
  if (!extra.empty()) rec["note"] = extra;
  std::string line = rec.dump();
  std::ofstream out(journal_path_, std::ios::binary | std::ios::app);
  u32 len = static_cast<u32>(line.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(line.data(), len);
}

void Tav::replay_journal() {
  if (journal_path_.empty()) return;
  std::ifstream in(journal_path_, std::ios::binary);
  if (!in) return;
  while (true) {
    u32 len = 0;
    if (!in.read(reinterpret_cast<char*>(&len), sizeof(len))) break;
    std::string line(len, '\0');
    if (!in.read(line.data(), len)) throw EvalError("truncated journal record");
    ordered_json rec = ordered_json::parse(line);
    if (rec["kind"] == "reserve") {
      Transaction txn;
      txn.id = rec["id"].get<u64>();
      txn.omega_prime = rec["omega_prime"].get<std::vector<u64>>();
      txn.issued_at = rec["issued_at"].get<u64>();
      txn.expires_at = rec["expires_at"].get<u64>();
      txn.gist = rec["gist"].get<std::string>();
      next_id_ = std::max(next_id_, txn.id + 1);
      clock_ = std::max(clock_, txn.issued_at);
      txns_[txn.id] = std::move(txn);
    }
  }
}

const Transaction& Tav::reserve(const std::string& gist, u64 validity_window) {
  ++clock_;
  Transaction txn;
  txn.id = next_id_++;
  txn.issued_at = clock_;
  txn.expires_at = clock_ + validity_window;
  txn.gist = gist;
  for (u64 i = 0; i < table_.params.K; ++i)
    txn.omega_prime.push_back(1 + rng_.below(table_.dom.size() - 1));
  auto [it, fresh] = txns_.emplace(txn.id, std::move(txn));
  journal_record("reserve", it->second, "");
  return it->second;
}

const Transaction* Tav::find(u64 id) const {
  auto it = txns_.find(id);
  return it == txns_.end() ? nullptr : &it->second;
}

AuthResult Tav::authenticate(const SigClaim& claim) {
  ++clock_;
  const Transaction* txn = find(claim.txn_id);
  if (!txn) return {false, "txn-unknown"};
  auto finish = [&](bool ok, const std::string& reason) {
    journal_record("authenticate", *txn, ok ? "accepted" : reason);
    return AuthResult{ok, reason};
  };
  if (clock_ > txn->expires_at) return finish(false, "txn-expired");
  try {
    if (table_.q_of(claim.omega) != txn->omega_prime) return finish(false, "q-mismatch");
    std::vector<u64> fxw = table_.f_of(claim.x, claim.omega);
    if (table_.r_of(claim.z) != fxw) return finish(false, "r-mismatch");
    if (table_.h_of(claim.z, claim.x, claim.omega) != claim.delta)
      return finish(false, "h-mismatch");
    std::vector<u64> want(fxw.begin(), fxw.end());
    want.insert(want.end(), claim.x.begin(), claim.x.end());
    if (table_.p_of(claim.eps) != want) return finish(false, "p-mismatch");
  } catch (const EvalError&) {
    return finish(false, "malformed-claim");
  }
  return finish(true, "");
}

SigMessage Signer::sign(std::span<const u64> x, const Transaction& txn, const Tav& tav) {
  const SchemeParams& params = priv_->params;
  if (x.size() != params.mu) throw EvalError("message arity mismatch");
  const Transaction* known = tav.find(txn.id);
  if (!known || known->omega_prime != txn.omega_prime)
    throw RejectionError("txn-unknown");
  if (tav.now() > txn.expires_at) throw RejectionError("txn-expired");
  if (used_.count(txn.id)) throw RejectionError("txn-already-used");

  std::vector<u64> zq = priv_->Q.live_parameter();
  std::vector<u64> omega(zq.begin(), zq.end());
  std::vector<u64> qtail = priv_->Q.inverse(zq, txn.omega_prime);
  omega.insert(omega.end(), qtail.begin(), qtail.end());

  std::vector<u64> zprime = priv_->hidden_values(x, omega);

  std::vector<u64> zr = priv_->R.live_parameter();
  std::vector<u64> z(zr.begin(), zr.end());
  std::vector<u64> rtail = priv_->R.inverse(zr, zprime);
  z.insert(z.end(), rtail.begin(), rtail.end());

  std::vector<u64> zp = priv_->P.live_parameter();
  std::vector<u64> eps(zp.begin(), zp.end());
  std::vector<u64> w(zprime.begin(), zprime.end());
  w.insert(w.end(), x.begin(), x.end());
  std::vector<u64> ptail = priv_->P.inverse(zp, w);
  eps.insert(eps.end(), ptail.begin(), ptail.end());

  std::vector<u64> delta = priv_->authenticator(z, x, omega);

  // the four constraints the claim will be judged against
  u64 lp = params.nu - params.L - params.mu;
  std::vector<u64> back = priv_->P.forward(std::span<const u64>(eps.data(), lp),
                                           std::span<const u64>(eps.data() + lp,
                                                                params.L + params.mu));
  if (back != w) throw EvalError("signing broke P(eps) = (F(x, omega), x)");
  u64 lq = params.kappa - params.K;
  if (priv_->Q.forward(std::span<const u64>(omega.data(), lq),
                       std::span<const u64>(omega.data() + lq, params.K)) !=
      txn.omega_prime)
    throw EvalError("signing broke Q(omega) = omega'");
  u64 lr = params.lambda - params.L;
  if (priv_->R.forward(std::span<const u64>(z.data(), lr),
                       std::span<const u64>(z.data() + lr, params.L)) != zprime)
    throw EvalError("signing broke R(z) = F(x, omega)");
  if (priv_->authenticator(z, x, omega) != delta)
    throw EvalError("signing broke H(z, x, omega) = delta");

  used_.insert(txn.id);
  return SigMessage{std::move(eps), std::move(z), std::move(delta), std::move(omega),
                    txn.id};
}

}  // namespace mpkc
