#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "seriesolve/field.hpp"

using namespace seriesolve;

namespace {
constexpr u64 kP = 2013265921;  // 2^31 - 2^27 + 1
constexpr u64 kBigP = 2305843009213693951ull;  // 2^61 - 1
}  // namespace

TEST_CASE("primality test agrees with known values") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(is_prime_u64(kP));
  CHECK(is_prime_u64(kBigP));
  CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
  CHECK_FALSE(is_prime_u64(0));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(561));          // Carmichael
  CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
  CHECK_FALSE(is_prime_u64(kP + 1));
}

TEST_CASE("prime field construction rejects bad moduli") {
  CHECK_THROWS(PrimeField(4));
  CHECK_THROWS(PrimeField(u64(1) << 62));
  CHECK_NOTHROW(PrimeField(2));
  CHECK_NOTHROW(PrimeField(kBigP));
}

TEST_CASE("prime field arithmetic identities") {
  for (u64 p : {2ull, 3ull, 97ull, kP, kBigP}) {
    PrimeField f(p);
    CHECK(f.characteristic() == p);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      u64 a = f.from_uint(rng());
      u64 b = f.from_uint(rng());
      CHECK(f.add(a, f.neg(a)) == 0);
      CHECK(f.sub(a, b) == f.add(a, f.neg(b)));
      CHECK(f.mul(a, b) == f.mul(b, a));
      if (b != 0) {
        CHECK(f.mul(f.div(a, b), b) == a);
        CHECK(f.mul(b, f.inv(b)) == 1);
      }
      if (a != 0) CHECK(f.pow(a, p - 1) == 1);
    }
  }
}

TEST_CASE("prime field text round trip") {
  PrimeField f(kP);
  CHECK(f.parse("0") == 0);
  CHECK(f.parse("-1") == kP - 1);
  CHECK(f.parse("+7") == 7);
  CHECK(f.parse(std::to_string(kP)) == 0);
  CHECK(f.parse("36893488147419103232") == f.from_uint(36893488147419103232ull % kP));
  CHECK_THROWS_AS(f.parse(""), ParseError);
  CHECK_THROWS_AS(f.parse("12x"), ParseError);
  CHECK_THROWS_AS(f.parse("-"), ParseError);
  CHECK(f.to_string(f.parse("12345")) == "12345");
}

TEST_CASE("prime field division errors") {
  PrimeField f(97);
  CHECK_THROWS_AS(f.inv(0), NotInvertible);
  CHECK_THROWS_AS(f.div(3, 0), DivisionByZero);
}

TEST_CASE("rational arithmetic is exact") {
  RationalField f;
  CHECK(f.characteristic() == 0);
  mpq_class a = f.parse("2/3");
  mpq_class b = f.parse("-5/7");
  CHECK(f.to_string(f.add(a, b)) == "-1/21");
  CHECK(f.to_string(f.mul(a, b)) == "-10/21");
  CHECK(f.to_string(f.div(a, b)) == "-14/15");
  CHECK(f.to_string(f.parse("4/6")) == "2/3");
  CHECK(f.eq(f.from_int(-4), f.parse("-4")));
  CHECK_THROWS_AS(f.parse("1/0"), ParseError);
  CHECK_THROWS_AS(f.parse("a/b"), ParseError);
  CHECK_THROWS_AS(f.inv(f.zero()), NotInvertible);
  CHECK_THROWS_AS(f.div(a, f.zero()), DivisionByZero);
  CHECK(f.to_string(f.pow(f.parse("-2/3"), 3)) == "-8/27");
  CHECK(f.eq(f.from_uint(18446744073709551615ull), f.parse("18446744073709551615")));
}

TEST_CASE("characteristic guards divisions by 1..n-1") {
  PrimeField f5(5);
  CHECK_NOTHROW(ensure_characteristic_of(f5, 5));
  CHECK_THROWS_AS(ensure_characteristic_of(f5, 6), CharacteristicTooSmall);
  RationalField q;
  CHECK_NOTHROW(ensure_characteristic_of(q, 1u << 20));
}

TEST_CASE("batch integer inverses match single inversions") {
  PrimeField f(kP);
  auto inv = integer_inverses(f, 40);
  for (u64 k = 1; k <= 40; ++k) CHECK(f.mul(inv[k], k) == 1);
  RationalField q;
  auto qinv = integer_inverses(q, 12);
  for (u64 k = 1; k <= 12; ++k) CHECK(q.to_string(qinv[k]) == "1/" + std::to_string(k));
  CHECK_THROWS_AS(integer_inverses(PrimeField(7), 7), CharacteristicTooSmall);
}

TEST_CASE("integer inverse logs the divisor, not a unit division") {
  PrimeField f(kP);
  OpCounter c;
  {
    CounterScope scope(c);
    u64 x = int_inverse(f, 6);
    CHECK(f.mul(x, 6) == 1);
  }
  CHECK(c.int_divisions == 1);
  CHECK(c.int_divisor_min == 6);
  CHECK(c.int_divisor_max == 6);
  CHECK(c.unit_divisions == 0);
  CHECK_THROWS_AS(int_inverse(PrimeField(5), 10), CharacteristicTooSmall);
}

TEST_CASE("batch inverses log every divisor and no units") {
  PrimeField f(kP);
  OpCounter c;
  {
    CounterScope scope(c);
    integer_inverses(f, 16);
  }
  CHECK(c.int_divisions == 16);
  CHECK(c.int_divisor_min == 1);
  CHECK(c.int_divisor_max == 16);
  CHECK(c.unit_divisions == 0);
}

TEST_CASE("field descriptor boxes both fields") {
  auto zp = FieldDescriptor::prime(kP);
  auto qq = FieldDescriptor::rationals();
  CHECK(zp->is_prime_field());
  CHECK(zp->modulus() == kP);
  CHECK_FALSE(qq->is_prime_field());
  CHECK(qq->characteristic() == 0);

  FieldScalar a = parse_scalar(zp, "-1");
  FieldScalar b = make_scalar(zp, 2);
  CHECK(field_arith(a, b, FieldOp::add).to_string() == "1");
  FieldScalar qa = parse_scalar(qq, "1/2");
  FieldScalar qb = parse_scalar(qq, "1/3");
  CHECK(field_arith(qa, qb, FieldOp::sub).to_string() == "1/6");
  CHECK_THROWS_AS(field_arith(a, qa, FieldOp::add), MixedFields);
}

TEST_CASE("counters stack and pause") {
  PrimeField f(kP);
  OpCounter outer, inner;
  {
    CounterScope so(outer);
    count_field_muls(3);
    {
      CounterScope si(inner);
      count_field_muls(5);
    }
    {
      CounterPause pause;
      count_field_muls(100);  // silenced
    }
    count_field_muls(4);
  }
  CHECK(outer.field_muls == 7);
  CHECK(inner.field_muls == 5);
}
