#include <immintrin.h>

#include "seriesolve/kernels.hpp"

// AVX2 variants of the R = 2^32 Montgomery kernels. Residues stay in 64-bit
// lanes (4 per vector); _mm256_mul_epu32 gives the exact 62-bit products a
// p < 2^31 modulus needs. Tails run the scalar formulas. Only reached when
// select() saw AVX2 at runtime, so -mavx2 codegen here is safe.

namespace seriesolve::kernels {

namespace {

inline u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 mul32(const MontParams& mp, u64 a, u64 b) {
  u64 t = a * b;
  u64 m = (t & 0xffffffffu) * mp.pinv & 0xffffffffu;
  u64 r = (t + m * mp.p) >> 32;
  return r >= mp.p ? r - mp.p : r;
}

struct VParams {
  __m256i p, pm1, pinv, lo32;
};

inline VParams vparams(const MontParams& mp) {
  return {_mm256_set1_epi64x((long long)mp.p), _mm256_set1_epi64x((long long)(mp.p - 1)),
          _mm256_set1_epi64x((long long)mp.pinv), _mm256_set1_epi64x(0xffffffffll)};
}

// lanes < 2p -> canonical
inline __m256i reduce_once(__m256i x, const VParams& v) {
  __m256i over = _mm256_cmpgt_epi64(x, v.pm1);  // lanes < 2^32, signed compare is fine
  return _mm256_sub_epi64(x, _mm256_and_si256(over, v.p));
}

inline __m256i add_mod_v(__m256i a, __m256i b, const VParams& v) {
  return reduce_once(_mm256_add_epi64(a, b), v);
}

inline __m256i sub_mod_v(__m256i a, __m256i b, const VParams& v) {
  __m256i d = _mm256_sub_epi64(a, b);
  __m256i neg = _mm256_cmpgt_epi64(b, a);
  return _mm256_add_epi64(d, _mm256_and_si256(neg, v.p));
}

inline __m256i mont_mul_v(__m256i a, __m256i b, const VParams& v) {
  __m256i t = _mm256_mul_epu32(a, b);
  __m256i m = _mm256_and_si256(_mm256_mul_epu32(t, v.pinv), v.lo32);
  __m256i r = _mm256_srli_epi64(_mm256_add_epi64(t, _mm256_mul_epu32(m, v.p)), 32);
  return reduce_once(r, v);
}

inline __m256i loadu(const u64* p) { return _mm256_loadu_si256((const __m256i*)p); }
inline void storeu(u64* p, __m256i x) { _mm256_storeu_si256((__m256i*)p, x); }

void vec_add(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
  const VParams v = vparams(mp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) storeu(dst + i, add_mod_v(loadu(a + i), loadu(b + i), v));
  for (; i < n; ++i) dst[i] = add_mod(a[i], b[i], mp.p);
}

void vec_sub(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
  const VParams v = vparams(mp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) storeu(dst + i, sub_mod_v(loadu(a + i), loadu(b + i), v));
  for (; i < n; ++i) dst[i] = sub_mod(a[i], b[i], mp.p);
}

void vec_scale(const MontParams& mp, u64* dst, const u64* a, u64 s, std::size_t n) {
  const VParams v = vparams(mp);
  const __m256i sv = _mm256_set1_epi64x((long long)s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) storeu(dst + i, mont_mul_v(loadu(a + i), sv, v));
  for (; i < n; ++i) dst[i] = mul32(mp, a[i], s);
}

void vec_axpy(const MontParams& mp, u64* dst, const u64* a, u64 s, std::size_t n) {
  const VParams v = vparams(mp);
  const __m256i sv = _mm256_set1_epi64x((long long)s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    storeu(dst + i, add_mod_v(loadu(dst + i), mont_mul_v(loadu(a + i), sv, v), v));
  for (; i < n; ++i) dst[i] = add_mod(dst[i], mul32(mp, a[i], s), mp.p);
}

void vec_mul(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
  const VParams v = vparams(mp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) storeu(dst + i, mont_mul_v(loadu(a + i), loadu(b + i), v));
  for (; i < n; ++i) dst[i] = mul32(mp, a[i], b[i]);
}

void vec_madd(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
  const VParams v = vparams(mp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    storeu(dst + i, add_mod_v(loadu(dst + i), mont_mul_v(loadu(a + i), loadu(b + i), v), v));
  for (; i < n; ++i) dst[i] = add_mod(dst[i], mul32(mp, a[i], b[i]), mp.p);
}

void ntt_dif(const MontParams& mp, u64* lo, u64* hi, const u64* tw, std::size_t n) {
  const VParams v = vparams(mp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i u = loadu(lo + i), w = loadu(hi + i);
    storeu(lo + i, add_mod_v(u, w, v));
    storeu(hi + i, mont_mul_v(sub_mod_v(u, w, v), loadu(tw + i), v));
  }
  for (; i < n; ++i) {
    u64 u = lo[i], w = hi[i];
    lo[i] = add_mod(u, w, mp.p);
    hi[i] = mul32(mp, sub_mod(u, w, mp.p), tw[i]);
  }
}

void ntt_dit(const MontParams& mp, u64* lo, u64* hi, const u64* tw, std::size_t n) {
  const VParams v = vparams(mp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i u = loadu(lo + i);
    __m256i w = mont_mul_v(loadu(hi + i), loadu(tw + i), v);
    storeu(lo + i, add_mod_v(u, w, v));
    storeu(hi + i, sub_mod_v(u, w, v));
  }
  for (; i < n; ++i) {
    u64 u = lo[i], w = mul32(mp, hi[i], tw[i]);
    lo[i] = add_mod(u, w, mp.p);
    hi[i] = sub_mod(u, w, mp.p);
  }
}

}  // namespace

const ZpKernels* avx2_32() {
  if (!cpu_has_avx2()) return nullptr;
  static const ZpKernels k = {vec_add, vec_sub, vec_scale, vec_axpy,
                              vec_mul, vec_madd, ntt_dif,   ntt_dit,
                              "avx2_32"};
  return &k;
}

}  // namespace seriesolve::kernels
