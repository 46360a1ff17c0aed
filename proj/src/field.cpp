#include "seriesolve/field.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace seriesolve {

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // this base set decides primality for every n < 2^64
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

PrimeField::PrimeField(u64 p) : p_(p) {
  if (p >= (u64(1) << 62))
    throw std::invalid_argument("PrimeField: modulus must be < 2^62");
  if (!is_prime_u64(p))
    throw std::invalid_argument("PrimeField: " + std::to_string(p) + " is not prime");
  mont_ok_ = (p & 1) != 0;  // every prime except 2
  if (mont_ok_) {
    mont_ = kernels::make_mont(p);
    kern_ = &kernels::select(mont_);
  }
  u64 d = p - 1;
  two_adicity_ = 0;
  while ((d & 1) == 0) d >>= 1, ++two_adicity_;
}

PrimeField::Elem PrimeField::pow(Elem a, u64 e) const { return powmod_u64(a, e, p_); }

PrimeField::Elem PrimeField::inv(Elem a) const {
  if (a == 0) throw NotInvertible("prime field: 0 has no inverse");
  count_unit_divisions();
  return powmod_u64(a, p_ - 2, p_);
}

PrimeField::Elem PrimeField::parse(std::string_view text) const {
  if (text.empty()) throw ParseError("empty scalar");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw ParseError("bad scalar: '" + std::string(text) + "'");
  u64 acc = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit((unsigned char)text[i]))
      throw ParseError("bad scalar: '" + std::string(text) + "'");
    acc = (u64)(((u128)acc * 10 + (u64)(text[i] - '0')) % p_);
  }
  return negative ? neg(acc) : acc;
}

RationalField::Elem RationalField::pow(Elem a, u64 e) const {
  Elem r(1);
  while (e) {
    if (e & 1) r *= a;
    a *= a;
    e >>= 1;
  }
  return r;
}

RationalField::Elem RationalField::from_uint(u64 x) const {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return Elem(z);
}

RationalField::Elem RationalField::parse(std::string_view text) const {
  if (text.empty()) throw ParseError("empty scalar");
  std::string s(text);
  for (char c : s)
    if (!(std::isdigit((unsigned char)c) || c == '-' || c == '+' || c == '/'))
      throw ParseError("bad rational: '" + s + "'");
  try {
    Elem q(s);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational: '" + s + "'");
  }
}

FieldScalar make_scalar(std::shared_ptr<const FieldDescriptor> field, i64 x) {
  if (field->is_prime_field()) return {field, field->zp().from_int(x)};
  return {std::move(field), mpq_class((long)x)};
}

FieldScalar parse_scalar(std::shared_ptr<const FieldDescriptor> field, std::string_view text) {
  if (field->is_prime_field()) return {field, field->zp().parse(text)};
  return {std::move(field), RationalField{}.parse(text)};
}

std::string FieldScalar::to_string() const {
  if (std::holds_alternative<u64>(value)) return std::to_string(std::get<u64>(value));
  return std::get<mpq_class>(value).get_str();
}

FieldScalar field_arith(const FieldScalar& a, const FieldScalar& b, FieldOp op) {
  if (!a.field || !b.field) throw Error("field_arith: scalar without a field");
  if (a.field->kind() != b.field->kind() ||
      (a.field->is_prime_field() && a.field->modulus() != b.field->modulus()))
    throw MixedFields();
  FieldScalar out{a.field, {}};
  if (a.field->is_prime_field()) {
    const PrimeField& f = a.field->zp();
    u64 x = std::get<u64>(a.value), y = std::get<u64>(b.value);
    switch (op) {
      case FieldOp::add: out.value = f.add(x, y); break;
      case FieldOp::sub: out.value = f.sub(x, y); break;
      case FieldOp::mul: out.value = f.mul(x, y); count_field_muls(1); break;
      case FieldOp::div: out.value = f.div(x, y); break;
    }
  } else {
    RationalField f;
    const mpq_class& x = std::get<mpq_class>(a.value);
    const mpq_class& y = std::get<mpq_class>(b.value);
    switch (op) {
      case FieldOp::add: out.value = f.add(x, y); break;
      case FieldOp::sub: out.value = f.sub(x, y); break;
      case FieldOp::mul: out.value = f.mul(x, y); count_field_muls(1); break;
      case FieldOp::div: out.value = f.div(x, y); break;
    }
  }
  return out;
}

void ensure_characteristic_value(u64 characteristic, u64 n) {
  if (characteristic != 0 && characteristic < n)
    throw CharacteristicTooSmall("field characteristic " + std::to_string(characteristic) +
                                 " is smaller than required bound " + std::to_string(n));
}

void ensure_characteristic(const FieldDescriptor& f, u64 n) {
  ensure_characteristic_value(f.characteristic(), n);
}

}  // namespace seriesolve
