#include "mpkc/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace mpkc {

ModulusSpec ModulusSpec::make(u64 n) {
  if (n < 2) throw RejectionError("modulus must be at least 2", {n});
  ModulusSpec spec;
  spec.n = n;
  u64 rest = n;
  for (u64 p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    Factor f;
    f.p = p;
    while (rest % p == 0) {
      rest /= p;
      ++f.l;
    }
    spec.factors.push_back(f);
  }
  if (rest > 1) spec.factors.push_back(Factor{rest, 1, 0, 0, 0, 0, 0});
  spec.totient = 1;
  for (auto& f : spec.factors) {
    f.pl = 1;
    for (u32 i = 0; i < f.l; ++i) f.pl *= f.p;
    f.cofactor = n / f.pl;
    f.inv_cofactor = invmod(f.cofactor % f.pl, f.pl);
    f.idempotent = mulmod(f.inv_cofactor, f.cofactor, n);
    f.totient = (f.p - 1) * (f.pl / f.p);
    spec.totient *= f.totient;
  }
  return spec;
}

std::vector<u64> ModulusSpec::crt_split(u64 x) const {
  std::vector<u64> out(factors.size());
  for (size_t i = 0; i < factors.size(); ++i) out[i] = x % factors[i].pl;
  return out;
}

u64 ModulusSpec::crt_join(std::span<const u64> residues) const {
  if (residues.size() != factors.size())
    throw EvalError("crt_join: residue count mismatch");
  u64 acc = 0;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (residues[i] >= factors[i].pl) throw EvalError("crt_join: residue out of range");
    acc = addmod(acc, mulmod(factors[i].idempotent, residues[i], n), n);
  }
  return acc;
}

namespace {

std::vector<u64> unpack(u64 p, u32 n, u64 x) {
  std::vector<u64> d(n);
  for (u32 i = 0; i < n; ++i) {
    d[i] = x % p;
    x /= p;
  }
  return d;
}

u64 pack(u64 p, std::span<const u64> d) {
  u64 x = 0;
  for (size_t i = d.size(); i-- > 0;) x = x * p + d[i];
  return x;
}

// Remainder of `a` (dense, any degree) by monic `m` over Z_p, in place.
void poly_mod_inplace(u64 p, std::vector<u64>& a, std::span<const u64> m) {
  size_t dm = m.size() - 1;
  while (a.size() > dm) {
    u64 lead = a.back();
    size_t shift = a.size() - 1 - dm;
    if (lead) {
      for (size_t i = 0; i < dm; ++i)
        a[shift + i] = submod(a[shift + i], mulmod(lead, m[i], p), p);
    }
    a.pop_back();
  }
}

}  // namespace

u64 FieldSpec::mul_direct(u64 p, u32 n, std::span<const u64> modpoly, u64 a, u64 b) {
  std::vector<u64> da = unpack(p, n, a), db = unpack(p, n, b);
  std::vector<u64> prod(2 * n - 1, 0);
  for (u32 i = 0; i < n; ++i) {
    if (!da[i]) continue;
    for (u32 j = 0; j < n; ++j)
      prod[i + j] = addmod(prod[i + j], mulmod(da[i], db[j], p), p);
  }
  poly_mod_inplace(p, prod, modpoly);
  prod.resize(n, 0);
  return pack(p, prod);
}

u64 FieldSpec::add(u64 a, u64 b) const {
  std::vector<u64> da = unpack(p, n, a), db = unpack(p, n, b);
  for (u32 i = 0; i < n; ++i) da[i] = addmod(da[i], db[i], p);
  return pack(p, da);
}

u64 FieldSpec::sub(u64 a, u64 b) const {
  std::vector<u64> da = unpack(p, n, a), db = unpack(p, n, b);
  for (u32 i = 0; i < n; ++i) da[i] = submod(da[i], db[i], p);
  return pack(p, da);
}

u64 FieldSpec::neg(u64 a) const {
  std::vector<u64> da = unpack(p, n, a);
  for (u32 i = 0; i < n; ++i) da[i] = da[i] ? p - da[i] : 0;
  return pack(p, da);
}

namespace {

// Exhaustive irreducibility over Z_p: no root, and no monic divisor of
// degree 1..n/2. Desk scale only.
bool poly_irreducible(u64 p, u32 n, std::span<const u64> modpoly) {
  if (n == 1) return true;
  for (u64 x = 0; x < p; ++x) {
    u64 v = 0;
    for (size_t i = modpoly.size(); i-- > 0;) v = addmod(mulmod(v, x, p), modpoly[i], p);
    if (v == 0) return false;
  }
  for (u32 d = 2; d <= n / 2; ++d) {
    u64 count = 1;
    for (u32 i = 0; i < d; ++i) count *= p;
    for (u64 enc = 0; enc < count; ++enc) {
      std::vector<u64> div = unpack(p, d, enc);
      div.push_back(1);  // monic
      std::vector<u64> rem(modpoly.begin(), modpoly.end());
      poly_mod_inplace(p, rem, div);
      bool zero = std::all_of(rem.begin(), rem.end(), [](u64 c) { return c == 0; });
      if (zero) return false;
    }
  }
  return true;
}

std::vector<u64> prime_factors(u64 m) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    out.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) out.push_back(m);
  return out;
}

}  // namespace

FieldSpec FieldSpec::make(u64 p, u32 n, std::vector<u64> modulus_poly) {
  if (!is_prime_u64(p)) throw RejectionError("field characteristic must be prime", {p});
  if (n < 1) throw RejectionError("field extension degree must be positive");
  if (modulus_poly.size() != n + 1 || modulus_poly[n] != 1)
    throw RejectionError("modulus polynomial must be monic of degree n");
  for (u64 c : modulus_poly)
    if (c >= p) throw RejectionError("modulus polynomial coefficient out of range", {c});

  FieldSpec spec;
  spec.p = p;
  spec.n = n;
  spec.q = 1;
  for (u32 i = 0; i < n; ++i) {
    spec.q *= p;
    if (spec.q > (1u << 20)) throw RejectionError("field too large for table construction");
  }
  spec.modulus_poly = std::move(modulus_poly);
  if (!poly_irreducible(p, n, spec.modulus_poly))
    throw RejectionError("modulus polynomial is reducible");

  u64 order = spec.q - 1;
  std::vector<u64> cof = prime_factors(order);
  for (u64 g = 1; g < spec.q; ++g) {
    bool primitive = order == 1;
    if (!primitive) {
      primitive = true;
      for (u64 r : cof) {
        u64 v = 1, e = order / r;
        u64 base = g;
        // direct square-and-multiply, tables not built yet
        while (e) {
          if (e & 1) v = mul_direct(p, n, spec.modulus_poly, v, base);
          base = mul_direct(p, n, spec.modulus_poly, base, base);
          e >>= 1;
        }
        if (v == 1) {
          primitive = false;
          break;
        }
      }
    }
    if (!primitive) continue;
    spec.generator = g;
    break;
  }
  if (spec.generator == 0) throw EvalError("no generator found in a valid field");

  spec.log_table.assign(spec.q, 0);
  spec.exp_table.assign(order, 0);
  u64 v = 1;
  for (u64 e = 0; e < order; ++e) {
    spec.exp_table[e] = v;
    spec.log_table[v] = e;
    v = mul_direct(p, n, spec.modulus_poly, v, spec.generator);
  }
  if (v != 1) throw EvalError("generator order check failed");
  return spec;
}

FieldSpec FieldSpec::make_default(u64 p, u32 n) {
  if (n == 1) return make(p, 1, {0, 1});
  u64 count = 1;
  for (u32 i = 0; i < n; ++i) count *= p;
  for (u64 enc = 0; enc < count; ++enc) {
    std::vector<u64> cand(n + 1);
    u64 x = enc;
    for (u32 i = 0; i < n; ++i) {
      cand[i] = x % p;
      x /= p;
    }
    cand[n] = 1;
    if (poly_irreducible(p, n, cand)) return make(p, n, std::move(cand));
  }
  throw EvalError("no irreducible polynomial found");  // unreachable for prime p
}

bool Domain::same_as(const Domain& other) const {
  if (is_field() != other.is_field()) return false;
  if (is_field()) {
    return field_->p == other.field_->p && field_->n == other.field_->n &&
           field_->modulus_poly == other.field_->modulus_poly;
  }
  return ring_->n == other.ring_->n;
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (is_field()) {
    os << "gf(" << field_->p;
    if (field_->n > 1) os << "^" << field_->n;
    os << ")";
  } else {
    os << "z" << ring_->n;
  }
  return os.str();
}

u64 ElemSet::size() const {
  switch (kind_) {
    case Kind::all: return dom_.size();
    case Kind::units:
      if (dom_.is_field()) return dom_.size() - 1;
      return dom_.ring().totient;
    case Kind::explicit_list: return elems_.size();
  }
  return 0;
}

u64 ElemSet::at(u64 index) const {
  switch (kind_) {
    case Kind::all: return index;
    case Kind::units:
      if (dom_.is_field()) return index + 1;
      for (u64 x = 0, seen = 0; x < dom_.size(); ++x)
        if (dom_.is_unit(x) && seen++ == index) return x;
      throw EvalError("unit index out of range");
    case Kind::explicit_list: return elems_.at(index);
  }
  throw EvalError("bad element set");
}

bool ElemSet::contains(u64 x) const {
  if (x >= dom_.size()) return false;
  switch (kind_) {
    case Kind::all: return true;
    case Kind::units: return dom_.is_unit(x);
    case Kind::explicit_list:
      return std::find(elems_.begin(), elems_.end(), x) != elems_.end();
  }
  return false;
}

std::optional<u64> ElemSet::index_of(u64 x) const {
  if (!contains(x)) return std::nullopt;
  switch (kind_) {
    case Kind::all: return x;
    case Kind::units: {
      if (dom_.is_field()) return x - 1;
      u64 idx = 0;
      for (u64 v = 0; v < x; ++v)
        if (dom_.is_unit(v)) ++idx;
      return idx;
    }
    case Kind::explicit_list:
      return static_cast<u64>(std::find(elems_.begin(), elems_.end(), x) - elems_.begin());
  }
  return std::nullopt;
}

std::vector<u64> ElemSet::elements() const {
  std::vector<u64> out;
  out.reserve(size());
  for (u64 i = 0, s = size(); i < s; ++i) out.push_back(at(i));
  return out;
}

u64 smallest_primitive_root(u64 p) {
  if (p == 2) return 1;
  std::vector<u64> cof = prime_factors(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (u64 r : cof)
      if (powmod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw EvalError("no primitive root found");
}

u64 PortComponent::port(u64 x) const {
  if (mode == Mode::ring_hom) {
    u64 w = aux;
    u64 pl1 = source_pl / source_p;  // p^{l-1}
    return ((source_p - 1) * mulmod(w, x % source_pl, pl1)) % modulus;
  }
  u64 r = x % source_p;
  if (r == 0) throw EvalError("porting a non-unit through a discrete-log component");
  u64 v = 1;
  for (u64 e = 0; e < source_p - 1; ++e) {
    if (v == r) return e;
    v = mulmod(v, aux, source_p);
  }
  throw EvalError("discrete log failed");  // unreachable for primitive aux
}

PortHom PortHom::make(const ModulusSpec& spec) { return make(spec, {}); }

PortHom PortHom::make(const ModulusSpec& spec, std::span<const u64> root_overrides) {
  PortHom h;
  h.source_modulus = spec.n;
  for (size_t i = 0; i < spec.factors.size(); ++i) {
    const auto& f = spec.factors[i];
    PortComponent c;
    c.source_pl = f.pl;
    c.source_p = f.p;
    c.source_l = f.l;
    if (f.l >= 2) {
      c.mode = PortComponent::Mode::ring_hom;
      c.modulus = f.totient;
      c.aux = invmod(f.p - 1, f.pl / f.p);
    } else {
      c.mode = PortComponent::Mode::dlog;
      c.modulus = f.p - 1;
      c.aux = (i < root_overrides.size() && root_overrides[i])
                  ? root_overrides[i]
                  : smallest_primitive_root(f.p);
      h.hybrid = true;
    }
    if (c.modulus == 0) c.modulus = 1;
    h.components.push_back(c);
  }
  return h;
}

std::vector<u64> PortHom::apply(u64 x) const {
  std::vector<u64> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.port(x));
  return out;
}

std::vector<u64> PortHom::moduli() const {
  std::vector<u64> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.modulus);
  return out;
}

}  // namespace mpkc
