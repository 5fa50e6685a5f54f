#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpkc {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Thrown when a generator or scheme constructor declines its inputs
// (condition named in what(), offending element(s) in witness).
class RejectionError : public std::runtime_error {
 public:
  RejectionError(std::string condition, std::vector<u64> witness = {})
      : std::runtime_error(condition),
        condition(std::move(condition)),
        witness(std::move(witness)) {}
  std::string condition;
  std::vector<u64> witness;
};

// Structural or runtime evaluation fault: level mismatch, invertibility
// violation, arity mismatch.
class EvalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oracle/certification grid exceeds the hard enumeration cap.
class CapExceededError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s < a || s >= m) s -= m;
  return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Extended gcd on signed values: returns g and x,y with a*x + b*y = g.
struct XgcdResult {
  i64 g, x, y;
};
inline XgcdResult xgcd(i64 a, i64 b) {
  if (b == 0) return {a, 1, 0};
  XgcdResult r = xgcd(b, a % b);
  return {r.g, r.y, r.x - (a / b) * r.y};
}

// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline u64 invmod(u64 a, u64 m) {
  a %= m;
  XgcdResult r = xgcd(static_cast<i64>(a), static_cast<i64>(m));
  if (r.g != 1) throw EvalError("invmod: argument not a unit");
  i64 x = r.x % static_cast<i64>(m);
  if (x < 0) x += static_cast<i64>(m);
  return static_cast<u64>(x);
}

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Checked integer power for plain (unreduced) exponent values.
inline u64 pow_u64_checked(u64 base, u64 exp) {
  u64 r = 1;
  while (exp) {
    if (exp & 1) {
      u128 t = u128(r) * base;
      if (t > UINT64_MAX) throw EvalError("integer power overflow");
      r = static_cast<u64>(t);
    }
    exp >>= 1;
    if (exp) {
      u128 t = u128(base) * base;
      if (t > UINT64_MAX) throw EvalError("integer power overflow");
      base = static_cast<u64>(t);
    }
  }
  return r;
}

}  // namespace mpkc
