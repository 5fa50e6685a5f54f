#pragma once

#include <variant>

#include "mpkc/oracle.hpp"
#include "mpkc/permgen.hpp"

namespace mpkc {

// Parametric univariate injection of an element set, in one of two shapes:
//   mult_power: x -> scale(z) * x^{e(z)}   (scale nonvanishing, e a unit
//               modulo the group order; the exponent lives at level 1 in
//               the ported parameters)
//   affine:     x -> a(z) * x + b(z)       (a unit-valued)
struct ParamUnivariateMap {
  enum class Kind : u8 { mult_power, affine };
  Kind kind = Kind::affine;
  u32 param_count = 0;
  Expr scale;   // mult: scale(z); affine: a(z)
  Expr second;  // mult: exponent expression (level 1); affine: b(z)
  std::shared_ptr<const Interpretation> interp;

  u64 forward(std::span<const u64> z, u64 x) const;
  u64 inverse(std::span<const u64> z, u64 y) const;
};

ParamUnivariateMap multiplicative_param_map(const Domain& field, u32 param_count,
                                            Expr scale, Expr exponent);
ParamUnivariateMap affine_param_map(const Domain& dom, u32 param_count,
                                    Expr a, Expr b);
// Parameter-independent wrapper around a fixed bijection exponent/scale.
ParamUnivariateMap constant_param_map(const Domain& dom, u32 param_count,
                                      u64 scale, u64 exponent);

// Doubly-bijective index map sigma : Z_m x Z_m -> Z_m.
struct IndexMap {
  std::vector<std::vector<u64>> table;
  u64 dim() const { return table.size(); }
  u64 operator()(u64 r, u64 s) const { return table[r][s]; }
  // sigma(r, s) = h((f1(r) + f2(s)) mod m)
  static IndexMap from_bijections(std::span<const u64> f1, std::span<const u64> f2,
                                  std::span<const u64> h);
  void audit() const;  // every row and every column permutes Z_m
};

// Parametric square matrix given as a product of structured factors;
// inverses go through the factor structure, never generic elimination.
class ParametricMatrix {
 public:
  struct PermutationFactor {
    PartitionOfUnity part;  // exactly dim slots
    IndexMap sigma;
  };
  struct DiagonalFactor {
    std::vector<Expr> entries;
  };
  struct TriangularFactor {
    bool lower = true;
    std::vector<std::vector<Expr>> entries;  // dense dim x dim, one triangle used
  };
  using Factor = std::variant<PermutationFactor, DiagonalFactor, TriangularFactor>;
  enum class Kind : u8 { permutation, diagonal, lower, upper, product };

  ParametricMatrix() = default;
  ParametricMatrix(Domain dom, u32 dim, u32 param_count,
                   std::vector<Factor> factors,
                   std::shared_ptr<const Interpretation> interp);

  u32 dim() const { return dim_; }
  u32 param_count() const { return param_count_; }
  Kind kind() const;
  const std::vector<Factor>& factors() const { return factors_; }
  const Domain& domain() const { return dom_; }

  std::vector<u64> apply(std::span<const u64> z, std::span<const u64> v) const;
  std::vector<u64> apply_inverse(std::span<const u64> z, std::span<const u64> v) const;
  std::vector<std::vector<u64>> evaluate(std::span<const u64> z) const;

  static ParametricMatrix product(const ParametricMatrix& a, const ParametricMatrix& b);
  // Transpose of a pure permutation product.
  ParametricMatrix transposed() const;

  // Exhaustive invertibility audit over a parameter grid: permutation
  // factors must evaluate to exact 0/1 doubly-stochastic patterns, scale
  // factors to unit diagonals.
  void certify_invertible(const DomainGrid& params) const;

 private:
  Domain dom_;
  u32 dim_ = 0;
  u32 param_count_ = 0;
  std::vector<Factor> factors_;
  std::shared_ptr<const Interpretation> interp_;
};

ParametricMatrix parametric_permutation_matrix(const Domain& dom,
                                               PartitionOfUnity part, IndexMap sigma);
// General form: permutation . lower . upper . permutation, diagonal entries
// certified nonvanishing over the parameter grid.
ParametricMatrix parametric_invertible_matrix_general(
    const Domain& dom, u32 dim, u32 param_count, std::vector<ParametricMatrix::Factor> factors,
    const DomainGrid& params);
// Signature-safe form: permutation and diagonal factors only; triangular
// factors are rejected.
ParametricMatrix parametric_invertible_matrix_signature_safe(
    const Domain& dom, u32 dim, u32 param_count, std::vector<ParametricMatrix::Factor> factors,
    const DomainGrid& params);

// One class branch of a parametric injection: a certified matrix, offsets,
// and per-coordinate injections when the class is live, or arbitrary output
// expressions when it is dead.
struct ClassBranch {
  bool live = true;
  ParametricMatrix phi;
  std::vector<Expr> chi;                    // m offsets in the parameters
  std::vector<ParamUnivariateMap> zeta;     // live branches
  std::vector<Expr> dead_outputs;           // dead branches, over (z..., x...)
};

// eta(z; x) = sum_i g_i(z) * phi_i(z) * [zeta_i(z; x) + chi_i(z)], invertible
// for parameters in the live classes; the live-class set is private data.
class ParametricInjection {
 public:
  ParametricInjection() = default;
  ParametricInjection(Domain dom, ElemSet input_set, ElemSet param_set, u32 l, u32 m,
                      PartitionOfUnity part, std::vector<ClassBranch> branches);

  u32 param_arity() const { return l_; }
  u32 input_arity() const { return m_; }
  const ElemSet& input_set() const { return input_set_; }
  const ElemSet& param_set() const { return param_set_; }
  const PartitionOfUnity& partition() const { return part_; }
  const std::vector<ClassBranch>& branches() const { return branches_; }

  bool is_live(std::span<const u64> z) const;
  std::vector<u64> live_parameter() const;  // lexicographically smallest live z

  std::vector<u64> forward(std::span<const u64> z, std::span<const u64> x) const;
  std::vector<u64> inverse(std::span<const u64> z, std::span<const u64> y) const;

  // Roundtrip identity over live parameters x inputs. Exhaustive when the
  // grid product fits the cap; beyond it an explicit sampling override is
  // required (sampled checks do not certify).
  void certify(bool allow_sampling = false, u64 sample_seed = 0) const;

 private:
  Domain dom_;
  ElemSet input_set_, param_set_;
  u32 l_ = 0, m_ = 0;
  PartitionOfUnity part_;
  std::vector<ClassBranch> branches_;
};

// Triangular multivariate construction: coordinate bijections f_i, g_i and
// parametric univariate injections h_i chained so inversion proceeds by
// back-substitution.
struct TriangularMap {
  Domain dom;
  ElemSet gset;
  u32 m = 0;
  std::vector<Bijection> f, g;
  std::vector<ParamUnivariateMap> h;  // h_i takes m-1 parameters

  std::vector<u64> forward(std::span<const u64> x) const;
  std::vector<u64> inverse(std::span<const u64> y) const;
};

TriangularMap triangular_multivariate(const Domain& dom, const ElemSet& gset,
                                      std::vector<Bijection> f, std::vector<Bijection> g,
                                      std::vector<ParamUnivariateMap> h);

// Q(x) = P(k_1(x), ..., k_{n-m}(x), x_1, ..., x_m): injective extension of
// an m-ary input through hashing keys into an n-ary injection.
struct HashExtendedMap {
  std::shared_ptr<const TriangularMap> P;
  std::vector<Expr> keys;  // n - m expressions over the m inputs
  std::shared_ptr<const Interpretation> interp;
  u32 m = 0, n = 0;

  std::vector<u64> forward(std::span<const u64> x) const;
  // Inversion through P's private inverse plus key consistency.
  std::optional<std::vector<u64>> invert(std::span<const u64> y) const;
};

HashExtendedMap hash_extend(TriangularMap P, std::vector<Expr> keys,
                            std::shared_ptr<const Interpretation> interp);

// Default multivariate discriminator arguments: x_1 + ... + x_m and
// c * prod x_i^{s_i}.
Expr affine_sum_expr(u32 m);
Expr monomial_product_expr(u32 m, u64 c, std::span<const u64> exponents);

}  // namespace mpkc
