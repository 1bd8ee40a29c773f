#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace minijudge {

// All MiniC arithmetic is 64-bit two's-complement wrapping. These helpers are
// the single definition of that semantics; the concrete interpreter, the
// symbolic evaluator and the constraint solver all go through them.
inline std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

inline std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}

inline std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

inline std::int64_t wrap_neg(std::int64_t a) {
  return static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(a));
}

// Truncating division; INT64_MIN / -1 wraps to INT64_MIN. Divisor must be
// nonzero (callers fork or signal the zero case themselves).
inline std::int64_t wrap_div(std::int64_t a, std::int64_t b) {
  if (b == -1 && a == std::numeric_limits<std::int64_t>::min()) return a;
  return a / b;
}

inline std::int64_t wrap_mod(std::int64_t a, std::int64_t b) {
  if (b == -1) return 0;
  return a % b;
}

// Deterministic RNG facade. std::uniform_int_distribution is
// implementation-defined, so bounded draws and shuffles are hand-rolled to
// keep generated corpora byte-identical across platforms.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next_u64());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span + 1));
  }

  double unit() { return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  RandomSource fork(std::uint64_t salt) { return RandomSource(next_u64() ^ (salt * 0xd1342543de82ef95ULL + 1)); }

 private:
  std::uint64_t state_;
};

// Wall-clock cutoff shared between an exploration and the solver calls it
// makes. A default-constructed deadline never expires.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after_ms(std::uint64_t ms) {
    Deadline d;
    d.expiry_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
    return d;
  }
  bool expired() const {
    return expiry_.has_value() && std::chrono::steady_clock::now() >= *expiry_;
  }
  bool is_set() const { return expiry_.has_value(); }

 private:
  std::optional<std::chrono::steady_clock::time_point> expiry_;
};

}  // namespace minijudge
