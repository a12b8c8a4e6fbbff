#pragma once

// PCG64 (XSL-RR 128/64), O'Neill 2014.
//
//   state' = state * 0x2360ed051fc65da44385df649fccf645 + inc      (mod 2^128)
//   out    = rotr64(hi64(state) ^ lo64(state), state >> 122)
//
// Each draw advances first and outputs from the new state (as the reference
// C implementation and numpy's PCG64 do). Seeding follows
// the reference `pcg64::seed(seed, stream)`: state = 0, inc = (stream << 1) | 1,
// advance, state += seed, advance. Doubles take the top 53 bits of one draw.

#include <cstdint>

namespace birkhoff {

class Pcg64 {
 public:
  using result_type = std::uint64_t;

  explicit Pcg64(std::uint64_t seed, std::uint64_t stream = kDefaultStream);

  std::uint64_t operator()();

  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform in (lo, hi].
  double uniform_left_open(double lo, double hi);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  static constexpr std::uint64_t kDefaultStream = 0xda3e39cb94b95bdbULL;

 private:
  void step();

  unsigned __int128 state_ = 0;
  unsigned __int128 inc_ = 0;
};

}  // namespace birkhoff
