#include "gepd/rng.hpp"

namespace gepd {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Smallest all-ones mask covering n - 1, then reject draws >= n.
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  while (true) {
    std::uint64_t x = engine_() & mask;
    if (x < n) return x;
  }
}

}  // namespace gepd
