#include "mpkc/partition.hpp"

#include <algorithm>

namespace mpkc {

u64 PartitionOfUnity::indicator_value(u64 slot, std::span<const u64> z) const {
  return expr_eval(indicators.at(slot), z, *interp);
}

u64 PartitionOfUnity::class_of(std::span<const u64> z) const {
  for (u64 i = 0; i < slot_count(); ++i)
    if (indicator_value(i, z) == 1) return i;
  throw EvalError("no indicator selects the point");
}

PartitionOfUnity PartitionOfUnity::resized(u64 slots) const {
  PartitionOfUnity out = *this;
  if (slots >= slot_count()) {
    while (out.indicators.size() < slots) {
      out.indicators.push_back(Expr::constant(0, 0));
      out.reps.push_back(std::nullopt);
    }
    return out;
  }
  // merge the tail into the last kept slot; a union of classes is again a class
  std::vector<Expr> tail(out.indicators.begin() + (slots - 1), out.indicators.end());
  out.indicators.resize(slots - 1);
  out.indicators.push_back(Expr::add(std::move(tail)));
  out.reps.resize(slots - 1);
  out.reps.push_back(std::nullopt);
  return out;
}

PartitionOfUnity PartitionOfUnity::composed_with(const Expr& h, u32 new_arity) const {
  if (arity != 1) throw EvalError("composition expects univariate indicators");
  PartitionOfUnity out = *this;
  auto composed_interp = std::make_shared<Interpretation>(*interp);
  for (Expr& ind : out.indicators) ind = expr_substitute(ind, 0, h, *composed_interp);
  if (discriminator.valid())
    out.discriminator = expr_substitute(discriminator, 0, h, *composed_interp);
  out.interp = std::move(composed_interp);
  out.arity = new_arity;
  return out;
}

void PartitionOfUnity::certify(const std::vector<std::vector<u64>>& sample) const {
  for (const auto& z : sample) {
    u64 sum = 0;
    for (u64 i = 0; i < slot_count(); ++i) {
      u64 vi = indicator_value(i, z);
      if (vi != 0 && vi != 1)
        throw RejectionError("indicator not 0/1 valued", {i, vi});
      sum = dom.add(sum, vi);
      for (u64 j = i + 1; j < slot_count(); ++j)
        if (dom.mul(vi, indicator_value(j, z)) != 0)
          throw RejectionError("indicator product nonzero", {i, j});
    }
    if (sum != 1) throw RejectionError("indicator sum differs from one", {sum});
  }
}

PartitionOfUnity partition_from_discriminator(const Expr& f, const Domain& dom) {
  auto interp = std::make_shared<Interpretation>(Interpretation::make(dom));
  std::vector<u64> image;
  for (u64 x = 0; x < dom.size(); ++x) {
    std::vector<u64> pt{x};
    u64 v = expr_eval(f, pt, *interp);
    if (std::find(image.begin(), image.end(), v) == image.end()) image.push_back(v);
  }
  std::sort(image.begin(), image.end());

  PartitionOfUnity part;
  part.dom = dom;
  part.arity = 1;
  part.discriminator = f;
  part.interp = interp;
  for (u64 i = 0; i < image.size(); ++i) {
    u64 denom = 1;
    std::vector<Expr> factors;
    for (u64 j = 0; j < image.size(); ++j) {
      if (j == i) continue;
      denom = dom.mul(denom, dom.sub(image[i], image[j]));
      factors.push_back(Expr::add({f, Expr::constant(0, dom.neg(image[j]))}));
    }
    Expr ind = factors.empty()
                   ? Expr::constant(0, 1)
                   : Expr::mul([&] {
                       factors.push_back(Expr::constant(0, dom.inv(denom)));
                       return std::move(factors);
                     }());
    part.indicators.push_back(std::move(ind));
    part.reps.push_back(image[i]);
  }
  return part;
}

PartitionOfUnity partition_zpl(u64 p, u32 l, u64 s) {
  if (s == 0 || (p - 1) % s != 0)
    throw RejectionError("s must divide p - 1", {p, s});
  u64 pl = 1;
  for (u32 i = 0; i < l; ++i) pl *= p;
  Domain dom{ModulusSpec::make(pl)};
  u64 pl1 = pl / p;  // p^{l-1}
  u64 exponent = s * pl1;

  std::vector<u64> image;
  for (u64 x = 0; x < pl; ++x) {
    u64 v = powmod(x, exponent, pl);
    if (std::find(image.begin(), image.end(), v) == image.end()) image.push_back(v);
  }
  std::sort(image.begin(), image.end());
  if (image.size() != 1 + (p - 1) / s)
    throw EvalError("attained value count differs from 1 + (p-1)/s");
  for (u64 i = 0; i < image.size(); ++i)
    for (u64 j = i + 1; j < image.size(); ++j)
      if (!dom.is_unit(dom.sub(image[i], image[j])))
        throw EvalError("attained values with non-unit difference");

  PartitionOfUnity part;
  part.dom = dom;
  part.arity = 1;
  part.interp = std::make_shared<Interpretation>(Interpretation::make(dom));
  Poly h = Poly::monomial(dom, 1, exponent);
  part.discriminator = expr_from_poly(h, 0);
  for (u64 i = 0; i < image.size(); ++i) {
    std::vector<std::pair<u64, u64>> nodes;
    for (u64 j = 0; j < image.size(); ++j) nodes.emplace_back(image[j], j == i ? 1 : 0);
    Poly g = lagrange_interpolate(dom, nodes);
    Poly indicator = g.compose_monomial(exponent);
    part.indicators.push_back(expr_from_poly(indicator, 0));
    part.reps.push_back(image[i]);
  }
  return part;
}

Expr nonvanishing_map(const Poly& f, u64 c, u64 a, const MultiPoly& g,
                      const Domain& dom) {
  if (a == 0) throw RejectionError("scale must be nonzero");
  for (u64 x = 0; x < dom.size(); ++x)
    if (f.eval(x) == c) throw RejectionError("value lies in the image", {c, x});
  std::vector<u32> idx(g.arity());
  for (u32 i = 0; i < g.arity(); ++i) idx[i] = i;
  Expr inner = expr_from_multipoly(g, idx);
  // a * (f(g(z)) - c) via a Horner walk over f
  Expr acc = Expr::constant(0, f.is_zero() ? 0 : f.coeffs().back());
  if (!f.is_zero())
    for (size_t i = f.coeffs().size() - 1; i-- > 0;) {
      Expr term = Expr::mul({acc, inner});
      acc = f.coeff(i) ? Expr::add({term, Expr::constant(0, f.coeff(i))}) : term;
    }
  return Expr::mul({Expr::constant(0, a),
                    Expr::add({acc, Expr::constant(0, dom.neg(c))})});
}

Expr invert_nonvanishing(const Expr& f, const Domain& dom) {
  Interpretation interp = Interpretation::make(dom);
  for (u64 x = 0; x < dom.size(); ++x) {
    std::vector<u64> pt{x};
    if (expr_eval(f, pt, interp) == 0)
      throw RejectionError("map vanishes", {x});
  }
  PartitionOfUnity part = partition_from_discriminator(f, dom);
  std::vector<Expr> terms;
  for (u64 i = 0; i < part.slot_count(); ++i) {
    u64 value = *part.reps[i];
    terms.push_back(Expr::mul({Expr::constant(0, dom.inv(value)), part.indicators[i]}));
  }
  return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
}

}  // namespace mpkc
