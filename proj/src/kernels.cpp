#include <stdexcept>

#include "seriesolve/kernels.hpp"

namespace seriesolve::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

MontParams make_mont(u64 p) {
  if (p < 3 || (p & 1) == 0 || p >= (u64(1) << 62))
    throw std::invalid_argument("make_mont: modulus must be odd and < 2^62");
  MontParams mp;
  mp.p = p;
  mp.rbits = p < (u64(1) << 31) ? 32 : 64;

  // Newton iteration for p^-1 mod 2^64; doubles correct bits each round.
  u64 inv = p;
  for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
  if (mp.rbits == 32) {
    mp.pinv = (0u - (u32)inv) & 0xffffffffu;
    u128 r = ((u128)1 << 32) % p;
    mp.one_mont = (u64)r;
    mp.r2 = (u64)(r * r % p);
  } else {
    mp.pinv = 0 - inv;
    mp.one_mont = (u64)(((u128)1 << 64) % p);
    mp.r2 = (u64)((u128)mp.one_mont * mp.one_mont % p);
  }
  return mp;
}

const ZpKernels& select(const MontParams& mp) {
  if (mp.rbits == 32) {
    if (const ZpKernels* k = avx2_32()) return *k;
    return scalar32();
  }
  return scalar64();
}

}  // namespace seriesolve::kernels
