#pragma once

// Shared basics: exact arithmetic aliases, overflow-checked 64-bit helpers,
// deterministic RNG utilities, error type, and thread-count resolution.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace homsel {

// Arbitrary-precision integer / rational used wherever entries may blow up.
// cpp_int stores small values inline and promotes to heap limbs automatically,
// which is the "64-bit fast path with automatic promotion" we rely on.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline constexpr double kPi = 3.14159265358979323846;

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Signals that a checked int64 computation left the representable range and
// the caller should redo the work in arbitrary precision.
class int64_overflow : public std::exception {
 public:
  const char* what() const noexcept override { return "int64 overflow"; }
};

// Overflow-checked int64 arithmetic (fast path of the sparse elimination).
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw int64_overflow{};
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw int64_overflow{};
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw int64_overflow{};
  return r;
}

// Deterministic RNG. We draw from mt19937_64 directly instead of the standard
// distributions, whose outputs are not pinned by the C++ standard; this keeps
// seeded runs byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw error("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(gen_());  // full range
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % span);
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

// Number of worker threads: explicit argument wins, then HOMSEL_THREADS, then 1.
int resolve_thread_count(int requested = 0);

// Runs fn(i) for i in [0, n). With more than one thread the index range is
// split into contiguous chunks; fn must be safe to call concurrently and any
// result assembly must not depend on execution order.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace homsel
