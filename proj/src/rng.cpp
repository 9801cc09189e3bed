#include "nashbandit/rng.hpp"

namespace nashbandit {

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = parent;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t key : keys) {
    state = out ^ (key * 0xD1B54A32D192ED03ULL);
    out = splitmix64(state);
  }
  return out;
}

std::uint64_t Rng::below(std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace nashbandit
