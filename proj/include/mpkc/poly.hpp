#pragma once

#include <map>

#include "mpkc/algebra.hpp"

namespace mpkc {

// Dense univariate polynomial over a declared coefficient domain.
// Invariant: trailing (leading-degree) coefficient nonzero unless zero poly.
class Poly {
 public:
  Poly() = default;
  Poly(Domain dom, std::vector<u64> coeffs);
  static Poly zero(Domain dom) { return Poly(std::move(dom), {}); }
  static Poly constant(Domain dom, u64 c) { return Poly(std::move(dom), {c}); }
  static Poly identity(Domain dom) { return Poly(std::move(dom), {0, 1}); }
  // c * x^k
  static Poly monomial(Domain dom, u64 c, u64 k);

  const Domain& domain() const { return dom_; }
  const std::vector<u64>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  u64 degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  u64 coeff(u64 k) const { return k < coeffs_.size() ? coeffs_[k] : 0; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  bool operator==(const Poly& o) const {
    return dom_.same_as(o.dom_) && coeffs_ == o.coeffs_;
  }

  // this(g(x))
  Poly compose(const Poly& g) const;
  // this(x^k) by coefficient spreading; exempt from the arithmetic cap.
  Poly compose_monomial(u64 k) const;
  Poly derivative() const;
  u64 eval(u64 x) const;

  // Arithmetic growth cap (mul/compose results), configurable per scope.
  static u64 degree_cap;

 private:
  void normalize();
  void check_domain(const Poly& o) const;
  Domain dom_;
  std::vector<u64> coeffs_;
};

// Sparse multivariate polynomial: exponent vector -> nonzero coefficient.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(Domain dom, u32 arity) : dom_(std::move(dom)), arity_(arity) {}

  const Domain& domain() const { return dom_; }
  u32 arity() const { return arity_; }
  const std::map<std::vector<u32>, u64>& terms() const { return terms_; }

  void add_term(std::vector<u32> exps, u64 coeff);
  u64 eval(std::span<const u64> point) const;

  static MultiPoly variable(Domain dom, u32 arity, u32 index);
  static MultiPoly constant(Domain dom, u32 arity, u64 c);

 private:
  Domain dom_;
  u32 arity_ = 0;
  std::map<std::vector<u32>, u64> terms_;
};

// CRT decomposition of f over Z_n: component i is f with coefficients
// reduced mod p_i^{l_i}; join reconstructs f exactly.
std::vector<Poly> poly_crt_split(const Poly& f);
Poly poly_crt_join(const Domain& dom, std::span<const Poly> parts);

// Unique interpolant of degree < #points. Over a ring, every pairwise node
// difference must be a unit; otherwise RejectionError.
Poly lagrange_interpolate(const Domain& dom,
                          std::span<const std::pair<u64, u64>> points);

// Bijectivity of f on Z_{p^l}: f mod p bijective, and for l >= 2 the
// derivative nonvanishing mod p.
bool is_bijective_mod_pl(const Poly& f, u64 p, u32 l);

struct DegreeCapGuard {
  explicit DegreeCapGuard(u64 cap) : saved(Poly::degree_cap) { Poly::degree_cap = cap; }
  ~DegreeCapGuard() { Poly::degree_cap = saved; }
  u64 saved;
};

}  // namespace mpkc
