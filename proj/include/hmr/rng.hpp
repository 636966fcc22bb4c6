#pragma once

#include <cstdint>
#include <random>

namespace hmr {

// splitmix64; used to derive well-separated substream seeds from a master
// seed so parallel loops can draw independently of iteration order.
constexpr uint64_t splitmix64(uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic per-work-item engine: the same (seed, stream) pair always
// yields the same draws, regardless of which thread runs the work item.
inline std::mt19937_64 substream(uint64_t seed, uint64_t stream) {
  uint64_t mixed = splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0x14057b7ef767814fULL));
  return std::mt19937_64(mixed);
}

}  // namespace hmr
