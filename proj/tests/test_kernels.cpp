#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "seriesolve/kernels.hpp"

using namespace seriesolve;
using namespace seriesolve::kernels;

namespace {

constexpr u64 kP31 = 2013265921;            // < 2^31, rbits 32
constexpr u64 kP61 = 2305843009213693951ull;  // 2^61 - 1, rbits 64

u64 ref_mulmod(u64 a, u64 b, u64 p) { return (u64)((u128)a * b % p); }

u64 ref_pow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = ref_mulmod(r, a, p);
    a = ref_mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::vector<u64> random_residues(std::mt19937_64& rng, u64 p, std::size_t n) {
  std::vector<u64> v(n);
  for (auto& x : v) x = rng() % p;
  return v;
}

// sizes that exercise SIMD main loops and scalar tails
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 100, 256};

}  // namespace

TEST_CASE("montgomery parameters satisfy their defining identities") {
  for (u64 p : {3ull, 97ull, kP31, (u64)2147483659ull, kP61}) {
    MontParams mp = make_mont(p);
    u64 R = mp.rbits == 32 ? ((u64)1 << 32) % p : ref_pow(2, 64, p);
    CHECK(mp.one_mont == R);
    CHECK(mp.r2 == ref_mulmod(R, R, p));
    // to_mont then from_mont is the identity
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
      u64 a = rng() % p;
      CHECK(from_mont(mp, to_mont(mp, a)) == a);
    }
  }
}

TEST_CASE("montgomery product matches wide reference") {
  std::mt19937_64 rng(2);
  for (u64 p : {kP31, kP61}) {
    MontParams mp = make_mont(p);
    for (int i = 0; i < 500; ++i) {
      u64 a = rng() % p, b = rng() % p;
      // mont_mul(aR, bR) = abR
      u64 got = from_mont(mp, mont_mul(mp, to_mont(mp, a), to_mont(mp, b)));
      CHECK(got == ref_mulmod(a, b, p));
    }
  }
}

TEST_CASE("scalar kernels match plain modular loops") {
  std::mt19937_64 rng(3);
  for (u64 p : {kP31, kP61}) {
    MontParams mp = make_mont(p);
    const ZpKernels& k = mp.rbits == 32 ? scalar32() : scalar64();
    for (std::size_t n : kSizes) {
      auto a = random_residues(rng, p, n);
      auto b = random_residues(rng, p, n);
      auto d0 = random_residues(rng, p, n);
      u64 s = rng() % p;

      std::vector<u64> got(d0), want(d0);
      k.vec_add(mp, got.data(), a.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) want[i] = (a[i] + b[i]) % p;
      CHECK(got == want);

      got = d0;
      k.vec_sub(mp, got.data(), a.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) want[i] = (a[i] + p - b[i]) % p;
      CHECK(got == want);

      got = d0;
      k.vec_scale(mp, got.data(), a.data(), s, n);
      for (std::size_t i = 0; i < n; ++i) want[i] = mont_mul(mp, a[i], s);
      CHECK(got == want);

      got = d0;
      k.vec_axpy(mp, got.data(), a.data(), s, n);
      for (std::size_t i = 0; i < n; ++i) want[i] = (d0[i] + mont_mul(mp, a[i], s)) % p;
      CHECK(got == want);

      got = d0;
      k.vec_mul(mp, got.data(), a.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) want[i] = mont_mul(mp, a[i], b[i]);
      CHECK(got == want);

      got = d0;
      k.vec_madd(mp, got.data(), a.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) want[i] = (d0[i] + mont_mul(mp, a[i], b[i])) % p;
      CHECK(got == want);
    }
  }
}

TEST_CASE("butterfly kernels implement the dif and dit formulas") {
  std::mt19937_64 rng(4);
  MontParams mp = make_mont(kP31);
  const ZpKernels& k = scalar32();
  for (std::size_t n : kSizes) {
    auto lo = random_residues(rng, kP31, n);
    auto hi = random_residues(rng, kP31, n);
    auto tw = random_residues(rng, kP31, n);
    auto lo1 = lo, hi1 = hi;
    k.ntt_dif(mp, lo1.data(), hi1.data(), tw.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(lo1[i] == (lo[i] + hi[i]) % kP31);
      CHECK(hi1[i] == mont_mul(mp, (lo[i] + kP31 - hi[i]) % kP31, tw[i]));
    }
    lo1 = lo;
    hi1 = hi;
    k.ntt_dit(mp, lo1.data(), hi1.data(), tw.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      u64 w = mont_mul(mp, hi[i], tw[i]);
      CHECK(lo1[i] == (lo[i] + w) % kP31);
      CHECK(hi1[i] == (lo[i] + kP31 - w) % kP31);
    }
  }
}

TEST_CASE("avx2 kernels are bit-identical to scalar32") {
  const ZpKernels* simd = avx2_32();
  if (!simd) {
    MESSAGE("cpu lacks AVX2, table unavailable; skipping equivalence");
    return;
  }
  const ZpKernels& ref = scalar32();
  std::mt19937_64 rng(5);
  for (u64 p : {3ull, 5ull, 97ull, 65537ull, kP31, (u64)((1u << 31) - 1)}) {
    MontParams mp = make_mont(p);
    for (std::size_t n : kSizes) {
      auto a = random_residues(rng, p, n);
      auto b = random_residues(rng, p, n);
      auto d0 = random_residues(rng, p, n);
      u64 s = rng() % p;
      std::vector<u64> x, y;

      x = d0; y = d0;
      simd->vec_add(mp, x.data(), a.data(), b.data(), n);
      ref.vec_add(mp, y.data(), a.data(), b.data(), n);
      CHECK(x == y);

      x = d0; y = d0;
      simd->vec_sub(mp, x.data(), a.data(), b.data(), n);
      ref.vec_sub(mp, y.data(), a.data(), b.data(), n);
      CHECK(x == y);

      x = d0; y = d0;
      simd->vec_scale(mp, x.data(), a.data(), s, n);
      ref.vec_scale(mp, y.data(), a.data(), s, n);
      CHECK(x == y);

      x = d0; y = d0;
      simd->vec_axpy(mp, x.data(), a.data(), s, n);
      ref.vec_axpy(mp, y.data(), a.data(), s, n);
      CHECK(x == y);

      x = d0; y = d0;
      simd->vec_mul(mp, x.data(), a.data(), b.data(), n);
      ref.vec_mul(mp, y.data(), a.data(), b.data(), n);
      CHECK(x == y);

      x = d0; y = d0;
      simd->vec_madd(mp, x.data(), a.data(), b.data(), n);
      ref.vec_madd(mp, y.data(), a.data(), b.data(), n);
      CHECK(x == y);

      auto lo = random_residues(rng, p, n);
      auto hi = random_residues(rng, p, n);
      auto tw = random_residues(rng, p, n);
      auto lox = lo, hix = hi, loy = lo, hiy = hi;
      simd->ntt_dif(mp, lox.data(), hix.data(), tw.data(), n);
      ref.ntt_dif(mp, loy.data(), hiy.data(), tw.data(), n);
      CHECK(lox == loy);
      CHECK(hix == hiy);
      lox = lo; hix = hi; loy = lo; hiy = hi;
      simd->ntt_dit(mp, lox.data(), hix.data(), tw.data(), n);
      ref.ntt_dit(mp, loy.data(), hiy.data(), tw.data(), n);
      CHECK(lox == loy);
      CHECK(hix == hiy);
    }
  }
}

TEST_CASE("dst may alias the first operand") {
  std::mt19937_64 rng(6);
  MontParams mp = make_mont(kP31);
  for (const ZpKernels* k : {&scalar32(), avx2_32()}) {
    if (!k) continue;
    auto a = random_residues(rng, kP31, 33);
    auto b = random_residues(rng, kP31, 33);
    auto want = a;
    k->vec_mul(mp, want.data(), a.data(), b.data(), 33);
    auto got = a;
    k->vec_mul(mp, got.data(), got.data(), b.data(), 33);
    CHECK(got == want);
  }
}

TEST_CASE("kernel selection routes on modulus size") {
  MontParams small = make_mont(kP31);
  MontParams big = make_mont(kP61);
  const ZpKernels& ks = select(small);
  const ZpKernels& kb = select(big);
  if (cpu_has_avx2())
    CHECK(&ks == avx2_32());
  else
    CHECK(&ks == &scalar32());
  CHECK(&kb == &scalar64());
}
