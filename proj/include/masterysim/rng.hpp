#pragma once

#include <cstdint>
#include <initializer_list>

namespace masterysim {

// Counter-based random stream: draw i is a strong 64-bit mix of (key, i),
// so streams are splittable by key and independent of scheduling order.
// Two streams with the same key produce identical sequences.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  // Collapses a tuple of identifying words (seed, condition, student, purpose,
  // ...) into a stream key.
  static std::uint64_t derive_key(std::initializer_list<std::uint64_t> words);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), one 64-bit draw.
  double next_unit();

  // One 64-bit draw.
  bool bernoulli(double p);

  // Uniform integer in [0, n), one 64-bit draw. n must be positive.
  int uniform_int(int n);

  // Standard normal via Box-Muller, two 64-bit draws.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Number of 64-bit draws consumed so far.
  std::uint64_t draws() const { return counter_; }

private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

} // namespace masterysim
