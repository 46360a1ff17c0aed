#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "seriesolve/ntt.hpp"

using namespace seriesolve;

namespace {

constexpr u64 kP = 2013265921;  // two-adicity 27

std::vector<u64> random_residues(std::mt19937_64& rng, u64 p, std::size_t n) {
  std::vector<u64> v(n);
  for (auto& x : v) x = rng() % p;
  return v;
}

std::vector<u64> conv_ref(const PrimeField& f, const std::vector<u64>& a,
                          const std::vector<u64>& b) {
  std::vector<u64> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  return out;
}

}  // namespace

TEST_CASE("transform size tracks two-adicity and the table cap") {
  PrimeField f(kP);
  CHECK(f.two_adicity() == 27);
  CHECK(ntt::max_size(f) == (std::size_t(1) << 23));  // cache cap
  PrimeField f7(7);  // 7 - 1 = 2 * 3
  CHECK(ntt::max_size(f7) == 2);
  CHECK(ntt::get_tables(f7, 4) == nullptr);
  PrimeField f2(2);
  CHECK(ntt::max_size(f2) == 0);
  CHECK(ntt::get_tables(f, 3) == nullptr);   // not a power of two
  CHECK(ntt::get_tables(f, 1) == nullptr);   // below minimum
}

TEST_CASE("tables are cached per size") {
  PrimeField f(kP);
  auto a = ntt::get_tables(f, 64);
  auto b = ntt::get_tables(f, 64);
  REQUIRE(a != nullptr);
  CHECK(a.get() == b.get());
}

TEST_CASE("forward then inverse is the identity") {
  PrimeField f(kP);
  std::mt19937_64 rng(11);
  for (std::size_t size : {2, 4, 8, 64, 256, 4096}) {
    auto t = ntt::get_tables(f, size);
    REQUIRE(t != nullptr);
    auto a = random_residues(rng, kP, size);
    auto b = a;
    ntt::forward(f, *t, b.data(), size);
    ntt::inverse(f, *t, b.data(), size);
    CHECK(a == b);
  }
}

TEST_CASE("spectrum of an impulse is flat") {
  PrimeField f(kP);
  std::size_t size = 32;
  auto t = ntt::get_tables(f, size);
  REQUIRE(t != nullptr);
  std::vector<u64> a(size, 0);
  a[0] = 5;
  ntt::forward(f, *t, a.data(), size);
  for (u64 x : a) CHECK(kernels::from_mont(f.mont(), x) == 5);
}

TEST_CASE("transform multiplication matches plain convolution") {
  PrimeField f(kP);
  std::mt19937_64 rng(12);
  for (auto [na, nb] : {std::pair<std::size_t, std::size_t>{1, 1},
                        {1, 17},
                        {2, 2},
                        {5, 3},
                        {64, 64},
                        {100, 1},
                        {129, 57},
                        {200, 200}}) {
    auto a = random_residues(rng, kP, na);
    auto b = random_residues(rng, kP, nb);
    auto want = conv_ref(f, a, b);
    std::size_t full = na + nb - 1;

    std::vector<u64> out(full, 1);
    REQUIRE(ntt::mul(f, a.data(), na, b.data(), nb, out.data(), full));
    CHECK(out == want);

    // shorter prefixes and zero-padded requests
    std::size_t short_need = full / 2 + 1;
    std::vector<u64> shorter(short_need, 1);
    REQUIRE(ntt::mul(f, a.data(), na, b.data(), nb, shorter.data(), short_need));
    CHECK(std::equal(shorter.begin(), shorter.end(), want.begin()));

    std::vector<u64> padded(full + 3, 1);
    REQUIRE(ntt::mul(f, a.data(), na, b.data(), nb, padded.data(), full + 3));
    CHECK(std::equal(want.begin(), want.end(), padded.begin()));
    for (std::size_t i = full; i < full + 3; ++i) CHECK(padded[i] == 0);
  }
}

TEST_CASE("multiplication declines sizes without a root") {
  PrimeField f7(7);
  std::vector<u64> a = {1, 2, 3}, out(5, 0);
  CHECK_FALSE(ntt::mul(f7, a.data(), 3, a.data(), 3, out.data(), 5));
}

TEST_CASE("transforms report their multiplication counts") {
  PrimeField f(kP);
  std::size_t size = 256;
  auto t = ntt::get_tables(f, size);
  auto a = random_residues(*new std::mt19937_64(13), kP, size);  // leak-free enough for a test
  OpCounter c;
  {
    CounterScope scope(c);
    ntt::forward(f, *t, a.data(), size);
  }
  CHECK(c.field_muls == size + (size / 2) * 8);
}
