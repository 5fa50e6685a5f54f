#pragma once

#include <span>

#include "mpkc/common.hpp"

namespace mpkc {

// Deterministic generator (splitmix64). Key generation and all randomized
// construction draw from an injected instance so that equal seeds give
// bit-identical artifacts on every platform.
class SeededRng {
 public:
  explicit SeededRng(u64 seed) : state_(seed) {}

  u64 next() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection; bound >= 1.
  u64 below(u64 bound) {
    u64 threshold = (0 - bound) % bound;
    for (;;) {
      u64 r = next();
      if (r >= threshold) return r % bound;
    }
  }

  u64 range(u64 lo, u64 hi) { return lo + below(hi - lo + 1); }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (u64 i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  u64 state_;
};

}  // namespace mpkc
