#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seriesolve/common.hpp"
#include "seriesolve/errors.hpp"
#include "seriesolve/kernels.hpp"
#include "seriesolve/opcounter.hpp"

namespace seriesolve {

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(u64 n);

// Z/pZ for a prime p < 2^62. Elements are canonical residues. The context
// carries the Montgomery constants and the kernel table picked at
// construction; it must outlive any Series built over it.
class PrimeField {
 public:
  using Elem = u64;

  explicit PrimeField(u64 p);

  u64 modulus() const { return p_; }
  u64 characteristic() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  Elem add(Elem a, Elem b) const {
    u64 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return (u64)((u128)a * b % p_); }

  Elem pow(Elem a, u64 e) const;
  // Fermat inverse; throws NotInvertible on 0. Logged as a unit division.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const {
    if (b == 0) throw DivisionByZero("prime field: division by zero");
    return mul(a, inv(b));
  }

  Elem from_int(i64 x) const {
    i64 r = x % (i64)p_;
    return r < 0 ? (u64)(r + (i64)p_) : (u64)r;
  }
  Elem from_uint(u64 x) const { return x % p_; }

  std::string to_string(Elem a) const { return std::to_string(a); }
  Elem parse(std::string_view text) const;

  bool mont_ok() const { return mont_ok_; }
  const kernels::MontParams& mont() const { return mont_; }
  const kernels::ZpKernels& kern() const { return *kern_; }

  // largest s with 2^s | p-1
  int two_adicity() const { return two_adicity_; }

 private:
  u64 p_;
  bool mont_ok_;
  kernels::MontParams mont_{};
  const kernels::ZpKernels* kern_ = nullptr;
  int two_adicity_;
};

// Q with exact reduced fractions (GMP).
class RationalField {
 public:
  using Elem = mpq_class;

  u64 characteristic() const { return 0; }

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) throw NotInvertible("rationals: 0 has no inverse");
    count_unit_divisions();
    return 1 / a;
  }
  Elem div(const Elem& a, const Elem& b) const {
    if (sgn(b) == 0) throw DivisionByZero("rationals: division by zero");
    return mul(a, inv(b));
  }
  Elem pow(Elem a, u64 e) const;

  Elem from_int(i64 x) const { return Elem((long)x); }
  Elem from_uint(u64 x) const;

  std::string to_string(const Elem& a) const { return a.get_str(); }
  Elem parse(std::string_view text) const;
};

// Runtime field tag used by the frontend; owns the arithmetic context.
class FieldDescriptor {
 public:
  enum class Kind { prime_field, rationals };

  static std::shared_ptr<const FieldDescriptor> prime(u64 p) {
    return std::shared_ptr<const FieldDescriptor>(new FieldDescriptor(p));
  }
  static std::shared_ptr<const FieldDescriptor> rationals() {
    return std::shared_ptr<const FieldDescriptor>(new FieldDescriptor());
  }

  Kind kind() const { return kind_; }
  bool is_prime_field() const { return kind_ == Kind::prime_field; }
  u64 characteristic() const { return is_prime_field() ? zp_->characteristic() : 0; }
  u64 modulus() const {
    if (!is_prime_field()) throw Error("modulus() on the rational field");
    return zp_->modulus();
  }
  const PrimeField& zp() const {
    if (!is_prime_field()) throw Error("zp() on the rational field");
    return *zp_;
  }
  const RationalField& qq() const {
    if (is_prime_field()) throw Error("qq() on a prime field");
    return qq_;
  }

 private:
  explicit FieldDescriptor(u64 p) : kind_(Kind::prime_field), zp_(std::make_unique<PrimeField>(p)) {}
  FieldDescriptor() : kind_(Kind::rationals) {}

  Kind kind_;
  std::unique_ptr<PrimeField> zp_;
  RationalField qq_;
};

// Boxed scalar for frontend-level arithmetic; hot paths use raw Elems.
struct FieldScalar {
  std::shared_ptr<const FieldDescriptor> field;
  std::variant<u64, mpq_class> value;

  std::string to_string() const;
};

enum class FieldOp { add, sub, mul, div };

FieldScalar make_scalar(std::shared_ptr<const FieldDescriptor> field, i64 x);
FieldScalar parse_scalar(std::shared_ptr<const FieldDescriptor> field, std::string_view text);
FieldScalar field_arith(const FieldScalar& a, const FieldScalar& b, FieldOp op);

// Characteristic must be 0 or >= n; divisions by 1..n-1 are then valid.
void ensure_characteristic(const FieldDescriptor& f, u64 n);
void ensure_characteristic_value(u64 characteristic, u64 n);

template <class F>
void ensure_characteristic_of(const F& f, u64 n) {
  ensure_characteristic_value(f.characteristic(), n);
}

// Batch inverses of 1..n as field elements (one unit inversion + O(n) muls).
// Each integer divisor is logged. Throws CharacteristicTooSmall if some
// k in 1..n vanishes in F.
template <class F>
std::vector<typename F::Elem> integer_inverses(const F& f, std::size_t n) {
  using Elem = typename F::Elem;
  std::vector<Elem> fact(n + 1);
  Elem acc = f.one();
  fact[0] = acc;
  for (std::size_t k = 1; k <= n; ++k) {
    Elem kk = f.from_uint(k);
    if (f.is_zero(kk))
      throw CharacteristicTooSmall("division by " + std::to_string(k) +
                                   " is impossible: it vanishes in the field");
    acc = f.mul(acc, kk);
    fact[k] = acc;
  }
  count_field_muls(n);
  std::vector<Elem> inv(n + 1, f.zero());
  if (n == 0) return inv;
  Elem ifac;
  {
    CounterPause pause;  // the batch trick's one unit inversion is not a logged division
    ifac = f.inv(fact[n]);
  }
  for (std::size_t k = n; k >= 1; --k) {
    inv[k] = f.mul(ifac, fact[k - 1]);  // 1/k = (k-1)!/k!
    ifac = f.mul(ifac, f.from_uint(k));
    count_int_division((i64)k);
  }
  count_field_muls(2 * n);
  return inv;
}

// Inverse of the image of the integer k >= 1, logged as one integer division.
// Throws CharacteristicTooSmall if k vanishes in F.
template <class F>
typename F::Elem int_inverse(const F& f, u64 k) {
  typename F::Elem kk = f.from_uint(k);
  if (f.is_zero(kk))
    throw CharacteristicTooSmall("division by " + std::to_string(k) +
                                 " is impossible: it vanishes in the field");
  count_int_division((i64)k);
  CounterPause pause;
  return f.inv(kk);
}

}  // namespace seriesolve
