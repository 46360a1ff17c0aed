#include "seriesolve/kernels.hpp"

// Reference kernels. scalar32 and avx2_32 share the R = 2^32 Montgomery
// domain, so their outputs must match bit for bit; scalar64 serves moduli up
// to 2^62 through 128-bit products.

namespace seriesolve::kernels {

namespace {

inline u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;  // p < 2^63: no overflow
  return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

// (a*b + m*p) / 2^32 with m = a*b*pinv mod 2^32; result canonical.
inline u64 mul32(const MontParams& mp, u64 a, u64 b) {
  u64 t = a * b;  // a, b < 2^31
  u64 m = (t & 0xffffffffu) * mp.pinv & 0xffffffffu;
  u64 r = (t + m * mp.p) >> 32;
  return r >= mp.p ? r - mp.p : r;
}

inline u64 mul64(const MontParams& mp, u64 a, u64 b) {
  u128 t = (u128)a * b;
  u64 m = (u64)t * mp.pinv;
  u64 r = (u64)((t + (u128)m * mp.p) >> 64);
  return r >= mp.p ? r - mp.p : r;
}

template <u64 (*MUL)(const MontParams&, u64, u64)>
struct Ops {
  static void vec_add(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = add_mod(a[i], b[i], mp.p);
  }
  static void vec_sub(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = sub_mod(a[i], b[i], mp.p);
  }
  static void vec_scale(const MontParams& mp, u64* dst, const u64* a, u64 s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = MUL(mp, a[i], s);
  }
  static void vec_axpy(const MontParams& mp, u64* dst, const u64* a, u64 s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = add_mod(dst[i], MUL(mp, a[i], s), mp.p);
  }
  static void vec_mul(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = MUL(mp, a[i], b[i]);
  }
  static void vec_madd(const MontParams& mp, u64* dst, const u64* a, const u64* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = add_mod(dst[i], MUL(mp, a[i], b[i]), mp.p);
  }
  static void ntt_dif(const MontParams& mp, u64* lo, u64* hi, const u64* tw, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      u64 u = lo[i], v = hi[i];
      lo[i] = add_mod(u, v, mp.p);
      hi[i] = MUL(mp, sub_mod(u, v, mp.p), tw[i]);
    }
  }
  static void ntt_dit(const MontParams& mp, u64* lo, u64* hi, const u64* tw, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      u64 u = lo[i], w = MUL(mp, hi[i], tw[i]);
      lo[i] = add_mod(u, w, mp.p);
      hi[i] = sub_mod(u, w, mp.p);
    }
  }
};

}  // namespace

u64 mont_mul(const MontParams& mp, u64 a, u64 b) {
  return mp.rbits == 32 ? mul32(mp, a, b) : mul64(mp, a, b);
}

const ZpKernels& scalar32() {
  using O = Ops<mul32>;
  static const ZpKernels k = {O::vec_add, O::vec_sub, O::vec_scale, O::vec_axpy,
                              O::vec_mul, O::vec_madd, O::ntt_dif,  O::ntt_dit,
                              "scalar32"};
  return k;
}

const ZpKernels& scalar64() {
  using O = Ops<mul64>;
  static const ZpKernels k = {O::vec_add, O::vec_sub, O::vec_scale, O::vec_axpy,
                              O::vec_mul, O::vec_madd, O::ntt_dif,  O::ntt_dit,
                              "scalar64"};
  return k;
}

}  // namespace seriesolve::kernels
