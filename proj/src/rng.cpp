#include "masterysim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace masterysim {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t RandomStream::derive_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x6A09E667F3BCC909ull;
  for (std::uint64_t w : words) {
    h = mix64(h + kGolden + mix64(w + kGolden));
  }
  return h;
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t v = mix64(key_ + (++counter_) * kGolden);
  return v;
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) {
  return next_unit() < p;
}

int RandomStream::uniform_int(int n) {
  if (n <= 0) {
    throw std::logic_error("uniform_int requires a positive range");
  }
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
  return static_cast<int>(wide >> 64);
}

double RandomStream::normal() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace masterysim
