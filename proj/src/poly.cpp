#include "mpkc/poly.hpp"

#include <algorithm>

namespace mpkc {

u64 Poly::degree_cap = 64;

Poly::Poly(Domain dom, std::vector<u64> coeffs)
    : dom_(std::move(dom)), coeffs_(std::move(coeffs)) {
  for (u64& c : coeffs_)
    if (c >= dom_.size()) throw EvalError("coefficient out of canonical range");
  normalize();
}

Poly Poly::monomial(Domain dom, u64 c, u64 k) {
  std::vector<u64> coeffs(k + 1, 0);
  coeffs[k] = c;
  return Poly(std::move(dom), std::move(coeffs));
}

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

void Poly::check_domain(const Poly& o) const {
  if (!dom_.same_as(o.dom_)) throw EvalError("polynomial arithmetic across mixed domains");
}

Poly Poly::operator+(const Poly& o) const {
  check_domain(o);
  std::vector<u64> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < out.size(); ++i) out[i] = dom_.add(coeff(i), o.coeff(i));
  return Poly(dom_, std::move(out));
}

Poly Poly::operator-(const Poly& o) const {
  check_domain(o);
  std::vector<u64> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < out.size(); ++i) out[i] = dom_.sub(coeff(i), o.coeff(i));
  return Poly(dom_, std::move(out));
}

Poly Poly::operator*(const Poly& o) const {
  check_domain(o);
  if (is_zero() || o.is_zero()) return zero(dom_);
  if (coeffs_.size() + o.coeffs_.size() - 2 > degree_cap)
    throw EvalError("polynomial degree cap exceeded");
  std::vector<u64> out(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (!coeffs_[i]) continue;
    for (size_t j = 0; j < o.coeffs_.size(); ++j)
      out[i + j] = dom_.add(out[i + j], dom_.mul(coeffs_[i], o.coeffs_[j]));
  }
  return Poly(dom_, std::move(out));
}

Poly Poly::compose(const Poly& g) const {
  check_domain(g);
  Poly acc = zero(dom_);
  for (size_t i = coeffs_.size(); i-- > 0;) {
    acc = acc * g + constant(dom_, coeffs_[i]);
  }
  return acc;
}

Poly Poly::compose_monomial(u64 k) const {
  if (is_zero()) return zero(dom_);
  if (k == 0) return constant(dom_, eval(1));
  std::vector<u64> out((coeffs_.size() - 1) * k + 1, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) out[i * k] = coeffs_[i];
  return Poly(dom_, std::move(out));
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return zero(dom_);
  std::vector<u64> out(coeffs_.size() - 1, 0);
  for (size_t k = 1; k < coeffs_.size(); ++k)
    out[k - 1] = dom_.mul(dom_.scalar(k), coeffs_[k]);
  return Poly(dom_, std::move(out));
}

u64 Poly::eval(u64 x) const {
  u64 acc = 0;
  for (size_t i = coeffs_.size(); i-- > 0;) acc = dom_.add(dom_.mul(acc, x), coeffs_[i]);
  return acc;
}

void MultiPoly::add_term(std::vector<u32> exps, u64 coeff) {
  if (exps.size() != arity_) throw EvalError("multipoly exponent arity mismatch");
  if (coeff >= dom_.size()) throw EvalError("coefficient out of canonical range");
  auto it = terms_.find(exps);
  u64 merged = it == terms_.end() ? coeff : dom_.add(it->second, coeff);
  if (it != terms_.end()) terms_.erase(it);
  if (merged) terms_.emplace(std::move(exps), merged);
}

u64 MultiPoly::eval(std::span<const u64> point) const {
  if (point.size() != arity_) throw EvalError("multipoly evaluation arity mismatch");
  u64 acc = 0;
  for (const auto& [exps, c] : terms_) {
    u64 term = c;
    for (u32 i = 0; i < arity_; ++i)
      if (exps[i]) term = dom_.mul(term, dom_.pow(point[i], exps[i]));
    acc = dom_.add(acc, term);
  }
  return acc;
}

MultiPoly MultiPoly::variable(Domain dom, u32 arity, u32 index) {
  MultiPoly m(std::move(dom), arity);
  std::vector<u32> e(arity, 0);
  e.at(index) = 1;
  m.add_term(std::move(e), 1);
  return m;
}

MultiPoly MultiPoly::constant(Domain dom, u32 arity, u64 c) {
  MultiPoly m(std::move(dom), arity);
  if (c) m.add_term(std::vector<u32>(arity, 0), c);
  return m;
}

std::vector<Poly> poly_crt_split(const Poly& f) {
  if (f.domain().is_field()) throw EvalError("poly_crt_split requires a ring domain");
  const ModulusSpec& spec = f.domain().ring();
  std::vector<Poly> out;
  out.reserve(spec.factors.size());
  for (const auto& fac : spec.factors) {
    std::vector<u64> coeffs(f.coeffs().size());
    for (size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = f.coeff(k) % fac.pl;
    out.emplace_back(Domain(ModulusSpec::make(fac.pl)), std::move(coeffs));
  }
  return out;
}

Poly poly_crt_join(const Domain& dom, std::span<const Poly> parts) {
  const ModulusSpec& spec = dom.ring();
  if (parts.size() != spec.factors.size()) throw EvalError("poly_crt_join: part count mismatch");
  size_t deg = 0;
  for (const auto& part : parts) deg = std::max(deg, part.coeffs().size());
  std::vector<u64> coeffs(deg, 0);
  for (size_t k = 0; k < deg; ++k) {
    std::vector<u64> residues(parts.size());
    for (size_t i = 0; i < parts.size(); ++i) residues[i] = parts[i].coeff(k);
    coeffs[k] = spec.crt_join(residues);
  }
  return Poly(dom, std::move(coeffs));
}

Poly lagrange_interpolate(const Domain& dom,
                          std::span<const std::pair<u64, u64>> points) {
  if (points.empty()) throw RejectionError("interpolation requires at least one point");
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].first == points[j].first)
        throw RejectionError("repeated interpolation node", {points[i].first});
      u64 diff = dom.sub(points[i].first, points[j].first);
      if (!dom.is_unit(diff))
        throw RejectionError("non-invertible node difference",
                             {points[i].first, points[j].first});
    }
  Poly acc = Poly::zero(dom);
  for (size_t i = 0; i < points.size(); ++i) {
    Poly basis = Poly::constant(dom, 1);
    u64 denom = 1;
    for (size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      basis = basis * Poly(dom, {dom.neg(points[j].first), 1});
      denom = dom.mul(denom, dom.sub(points[i].first, points[j].first));
    }
    u64 scale = dom.mul(points[i].second, dom.inv(denom));
    acc = acc + basis * Poly::constant(dom, scale);
  }
  return acc;
}

bool is_bijective_mod_pl(const Poly& f, u64 p, u32 l) {
  Domain zp{ModulusSpec::make(p)};
  std::vector<u64> base_coeffs(f.coeffs().size());
  for (size_t k = 0; k < base_coeffs.size(); ++k) base_coeffs[k] = f.coeff(k) % p;
  Poly fp(zp, std::move(base_coeffs));

  std::vector<bool> seen(p, false);
  for (u64 x = 0; x < p; ++x) {
    u64 y = fp.eval(x);
    if (seen[y]) return false;
    seen[y] = true;
  }
  if (l == 1) return true;
  Poly dfp = fp.derivative();
  for (u64 x = 0; x < p; ++x)
    if (dfp.eval(x) == 0) return false;
  return true;
}

}  // namespace mpkc
