#pragma once

#include <cstddef>

#include "seriesolve/common.hpp"

namespace seriesolve::kernels {

// Montgomery parameters for an odd modulus p. rbits selects the word size of
// the Montgomery domain: 32 when p < 2^31 (SIMD-friendly), 64 otherwise.
//   mont(x)  = x * R mod p          with R = 2^rbits
//   mul(a,b) = a * b * R^-1 mod p   (both canonical residues < p)
struct MontParams {
  u64 p = 0;
  u64 pinv = 0;     // -p^-1 mod 2^rbits
  u64 r2 = 0;       // R^2 mod p, for canonical -> Montgomery
  u64 one_mont = 0; // R mod p
  int rbits = 0;
};

MontParams make_mont(u64 p);  // p odd, p < 2^62

// Scalar Montgomery product; routes on rbits. Inputs canonical (< p).
u64 mont_mul(const MontParams& mp, u64 a, u64 b);
// mont_mul(a, r2) = a*R: into the Montgomery domain
inline u64 to_mont(const MontParams& mp, u64 a) { return mont_mul(mp, a, mp.r2); }
// mont_mul(a, 1) = a*R^-1: out of the Montgomery domain
inline u64 from_mont(const MontParams& mp, u64 a) { return mont_mul(mp, a, 1); }

// Vector kernels over canonical residues. All lengths in elements; dst may
// alias a but not b. "mul"-family kernels are Montgomery products, so the
// caller decides the domain: mul(mont, mont) stays in the domain, while
// mul(canonical, mont) lands back in canonical form.
struct ZpKernels {
  void (*vec_add)(const MontParams&, u64* dst, const u64* a, const u64* b, std::size_t n);
  void (*vec_sub)(const MontParams&, u64* dst, const u64* a, const u64* b, std::size_t n);
  // dst[i] = mont_mul(a[i], s)
  void (*vec_scale)(const MontParams&, u64* dst, const u64* a, u64 s, std::size_t n);
  // dst[i] += mont_mul(a[i], s)  (mod p)
  void (*vec_axpy)(const MontParams&, u64* dst, const u64* a, u64 s, std::size_t n);
  // dst[i] = mont_mul(a[i], b[i])
  void (*vec_mul)(const MontParams&, u64* dst, const u64* a, const u64* b, std::size_t n);
  // dst[i] += mont_mul(a[i], b[i])  (mod p)
  void (*vec_madd)(const MontParams&, u64* dst, const u64* a, const u64* b, std::size_t n);
  // butterfly passes over a half-block of width n, twiddles in Montgomery form:
  //   dif: (lo, hi) -> (lo + hi, (lo - hi) * tw)
  //   dit: (lo, hi) -> (lo + hi*tw, lo - hi*tw)
  void (*ntt_dif)(const MontParams&, u64* lo, u64* hi, const u64* tw, std::size_t n);
  void (*ntt_dit)(const MontParams&, u64* lo, u64* hi, const u64* tw, std::size_t n);
  const char* name;
};

const ZpKernels& scalar64();        // any odd p < 2^62, rbits = 64
const ZpKernels& scalar32();        // p < 2^31, rbits = 32
const ZpKernels* avx2_32();         // p < 2^31; nullptr when the CPU lacks AVX2

// Runtime selection for a modulus: avx2_32 when applicable and available,
// otherwise the matching scalar table.
const ZpKernels& select(const MontParams& mp);

bool cpu_has_avx2();

}  // namespace seriesolve::kernels
