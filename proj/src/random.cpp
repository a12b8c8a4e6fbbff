#include "birkhoff/random.hpp"

namespace birkhoff {
namespace {

constexpr unsigned __int128 kMultiplier =
    (static_cast<unsigned __int128>(0x2360ed051fc65da4ULL) << 64) | 0x4385df649fccf645ULL;

constexpr std::uint64_t rotr64(std::uint64_t value, unsigned rot) {
  return (value >> rot) | (value << ((-rot) & 63u));
}

}  // namespace

Pcg64::Pcg64(std::uint64_t seed, std::uint64_t stream) {
  inc_ = (static_cast<unsigned __int128>(stream) << 1) | 1u;
  step();
  state_ += seed;
  step();
}

void Pcg64::step() { state_ = state_ * kMultiplier + inc_; }

std::uint64_t Pcg64::operator()() {
  step();
  const auto hi = static_cast<std::uint64_t>(state_ >> 64);
  const auto lo = static_cast<std::uint64_t>(state_);
  return rotr64(hi ^ lo, static_cast<unsigned>(state_ >> 122));
}

double Pcg64::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Pcg64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Pcg64::uniform_left_open(double lo, double hi) { return hi - (hi - lo) * uniform01(); }

}  // namespace birkhoff
