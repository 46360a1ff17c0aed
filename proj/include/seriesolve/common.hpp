#pragma once

#include <cstddef>
#include <cstdint>

#ifndef __SIZEOF_INT128__
#error "seriesolve requires a compiler with __int128 support"
#endif

namespace seriesolve {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline std::size_t next_pow2(std::size_t n) {
  std::size_t r = 1;
  while (r < n) r <<= 1;
  return r;
}

// floor(log2(n)) for n >= 1
inline int floor_log2(std::size_t n) {
  int k = 0;
  while (n > 1) { n >>= 1; ++k; }
  return k;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace seriesolve
