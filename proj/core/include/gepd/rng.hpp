#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gepd {

/// Seeded random source with a platform-stable output sequence.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard library distributions are not (their
/// algorithms are implementation-defined), so every derived draw below is
/// computed here from raw 64-bit words:
///   - uniform():  top 53 bits scaled by 2^-53, in [0, 1).
///   - below(n):   rejection sampling on the top bits, unbiased.
///   - shuffle():  Fisher-Yates from the back using below().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gepd
