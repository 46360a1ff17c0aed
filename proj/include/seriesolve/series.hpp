#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "seriesolve/common.hpp"
#include "seriesolve/errors.hpp"
#include "seriesolve/field.hpp"
#include "seriesolve/ntt.hpp"
#include "seriesolve/opcounter.hpp"

namespace seriesolve {

// Truncated power series f mod t^n over a field context F. The coefficient
// vector length is the precision; the context must outlive the series.
template <class F>
class Series {
 public:
  using Elem = typename F::Elem;

  Series(const F& f, std::size_t precision) : f_(&f), c_(precision, f.zero()) {}
  Series(const F& f, std::vector<Elem> coeffs) : f_(&f), c_(std::move(coeffs)) {}

  static Series constant(const F& f, Elem value, std::size_t precision) {
    Series s(f, precision);
    if (precision > 0) s.c_[0] = std::move(value);
    return s;
  }

  const F& field() const { return *f_; }
  std::size_t precision() const { return c_.size(); }

  const Elem& operator[](std::size_t i) const {
    if (i >= c_.size()) throw IndexOutOfRange("series coefficient " + std::to_string(i) +
                                              " out of range (precision " +
                                              std::to_string(c_.size()) + ")");
    return c_[i];
  }
  void set(std::size_t i, Elem v) {
    if (i >= c_.size()) throw IndexOutOfRange("series coefficient " + std::to_string(i) +
                                              " out of range (precision " +
                                              std::to_string(c_.size()) + ")");
    c_[i] = std::move(v);
  }

  const std::vector<Elem>& coeffs() const { return c_; }
  std::vector<Elem>& coeffs() { return c_; }

  bool is_zero() const {
    for (const Elem& x : c_)
      if (!f_->is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!a.f_->eq(a.c_[i], b.c_[i])) return false;
    return true;
  }

 private:
  const F* f_;
  std::vector<Elem> c_;
};

namespace detail {

// fixed multiplication thresholds; correctness never depends on them
constexpr std::size_t kNaiveMax = 32;   // min input length served by schoolbook
constexpr std::size_t kKaratsubaMax = 512;  // full product length below which no NTT

// out (size la+lb-1, uninitialized) = a * b, schoolbook
template <class F>
void conv_naive(const F& f, const typename F::Elem* a, std::size_t la,
                const typename F::Elem* b, std::size_t lb, typename F::Elem* out) {
  using Elem = typename F::Elem;
  if constexpr (std::is_same_v<F, PrimeField>) {
    const u64 p = f.modulus();
    // accumulate 128-bit products, reducing before the headroom runs out
    int headroom = 128 - 2 * (64 - __builtin_clzll(p | 1));
    const std::size_t chunk =
        headroom >= 63 ? ~std::size_t(0) : (std::size_t(1) << (headroom > 0 ? headroom : 0));
    for (std::size_t k = 0; k < la + lb - 1; ++k) {
      std::size_t i0 = k >= lb ? k - lb + 1 : 0;
      std::size_t i1 = std::min(k, la - 1);
      u128 acc = 0;
      std::size_t pending = 0;
      for (std::size_t i = i0; i <= i1; ++i) {
        acc += (u128)a[i] * b[k - i];
        if (++pending == chunk) {
          acc %= p;
          pending = 0;
        }
      }
      out[k] = (u64)(acc % p);
    }
  } else {
    for (std::size_t k = 0; k < la + lb - 1; ++k) out[k] = f.zero();
    for (std::size_t i = 0; i < la; ++i)
      for (std::size_t j = 0; j < lb; ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
  count_field_muls((u64)la * lb);
}

// out (size la+lb-1, uninitialized) = a * b, Karatsuba with schoolbook base
template <class F>
void conv_kara(const F& f, const typename F::Elem* a, std::size_t la,
               const typename F::Elem* b, std::size_t lb, typename F::Elem* out) {
  using Elem = typename F::Elem;
  if (std::min(la, lb) <= kNaiveMax) {
    conv_naive(f, a, la, b, lb, out);
    return;
  }
  std::size_t m = (std::max(la, lb) + 1) / 2;
  std::size_t la0 = std::min(la, m), la1 = la - la0;
  std::size_t lb0 = std::min(lb, m), lb1 = lb - lb0;
  std::size_t lo = la + lb - 1;
  if (la1 == 0 || lb1 == 0) {
    // one side fits the low half: two straight sub-products
    for (std::size_t i = 0; i < lo; ++i) out[i] = f.zero();
    std::vector<Elem> t(la0 + lb0 - 1, f.zero());
    conv_kara(f, a, la0, b, lb0, t.data());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = f.add(out[i], t[i]);
    if (la1 > 0) {
      std::vector<Elem> u(la1 + lb0 - 1, f.zero());
      conv_kara(f, a + la0, la1, b, lb0, u.data());
      for (std::size_t i = 0; i < u.size(); ++i) out[m + i] = f.add(out[m + i], u[i]);
    } else if (lb1 > 0) {
      std::vector<Elem> u(la0 + lb1 - 1, f.zero());
      conv_kara(f, a, la0, b + lb0, lb1, u.data());
      for (std::size_t i = 0; i < u.size(); ++i) out[m + i] = f.add(out[m + i], u[i]);
    }
    return;
  }
  std::vector<Elem> z0(la0 + lb0 - 1, f.zero());
  conv_kara(f, a, la0, b, lb0, z0.data());
  std::vector<Elem> z2(la1 + lb1 - 1, f.zero());
  conv_kara(f, a + la0, la1, b + lb0, lb1, z2.data());
  std::size_t lsa = std::max(la0, la1), lsb = std::max(lb0, lb1);
  std::vector<Elem> sa(lsa, f.zero()), sb(lsb, f.zero());
  for (std::size_t i = 0; i < la0; ++i) sa[i] = a[i];
  for (std::size_t i = 0; i < la1; ++i) sa[i] = f.add(sa[i], a[la0 + i]);
  for (std::size_t i = 0; i < lb0; ++i) sb[i] = b[i];
  for (std::size_t i = 0; i < lb1; ++i) sb[i] = f.add(sb[i], b[lb0 + i]);
  std::vector<Elem> z1(lsa + lsb - 1, f.zero());
  conv_kara(f, sa.data(), lsa, sb.data(), lsb, z1.data());
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = f.sub(z1[i], z0[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = f.sub(z1[i], z2[i]);
  for (std::size_t i = 0; i < lo; ++i) out[i] = f.zero();
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = z0[i];
  for (std::size_t i = 0; i < z1.size(); ++i) out[m + i] = f.add(out[m + i], z1[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * m + i] = f.add(out[2 * m + i], z2[i]);
}

// full product of the coefficient spans, any algorithm, result size la+lb-1
template <class F>
std::vector<typename F::Elem> conv_full(const F& f, const typename F::Elem* a, std::size_t la,
                                        const typename F::Elem* b, std::size_t lb) {
  using Elem = typename F::Elem;
  std::vector<Elem> out(la + lb - 1, f.zero());
  std::size_t full = la + lb - 1;
  if (std::min(la, lb) <= kNaiveMax) {
    conv_naive(f, a, la, b, lb, out.data());
    return out;
  }
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (full >= kKaratsubaMax && f.mont_ok() &&
        ntt::mul(f, a, la, b, lb, out.data(), full))
      return out;
  }
  conv_kara(f, a, la, b, lb, out.data());
  return out;
}

}  // namespace detail

// f mod t^k; requires k <= precision(f)
template <class F>
Series<F> low(const Series<F>& f, std::size_t k) {
  if (k > f.precision())
    throw IndexOutOfRange("low: " + std::to_string(k) + " exceeds precision " +
                          std::to_string(f.precision()));
  std::vector<typename F::Elem> c(f.coeffs().begin(), f.coeffs().begin() + k);
  return Series<F>(f.field(), std::move(c));
}

// f div t^k; requires k <= precision(f); precision drops by k
template <class F>
Series<F> high(const Series<F>& f, std::size_t k) {
  if (k > f.precision())
    throw IndexOutOfRange("high: " + std::to_string(k) + " exceeds precision " +
                          std::to_string(f.precision()));
  std::vector<typename F::Elem> c(f.coeffs().begin() + k, f.coeffs().end());
  return Series<F>(f.field(), std::move(c));
}

// (f mod t^l) div t^k; requires k <= l <= precision(f); precision l-k
template <class F>
Series<F> mid(const Series<F>& f, std::size_t k, std::size_t l) {
  if (k > l || l > f.precision())
    throw IndexOutOfRange("mid: bad window [" + std::to_string(k) + ", " + std::to_string(l) +
                          ") for precision " + std::to_string(f.precision()));
  std::vector<typename F::Elem> c(f.coeffs().begin() + k, f.coeffs().begin() + l);
  return Series<F>(f.field(), std::move(c));
}

// extend precision to n >= precision(f) with zero coefficients
template <class F>
Series<F> pad(const Series<F>& f, std::size_t n) {
  if (n < f.precision()) throw IndexOutOfRange("pad: target below current precision");
  std::vector<typename F::Elem> c = f.coeffs();
  c.resize(n, f.field().zero());
  return Series<F>(f.field(), std::move(c));
}

// truncate or zero-pad to exactly precision n
template <class F>
Series<F> fit(const Series<F>& f, std::size_t n) {
  std::vector<typename F::Elem> c(f.coeffs().begin(),
                                  f.coeffs().begin() + std::min(n, f.precision()));
  c.resize(n, f.field().zero());
  return Series<F>(f.field(), std::move(c));
}

template <class F>
Series<F> add(const Series<F>& a, const Series<F>& b) {
  const F& f = a.field();
  std::size_t n = std::min(a.precision(), b.precision());
  Series<F> out(f, n);
  for (std::size_t i = 0; i < n; ++i) out.coeffs()[i] = f.add(a.coeffs()[i], b.coeffs()[i]);
  return out;
}

template <class F>
Series<F> sub(const Series<F>& a, const Series<F>& b) {
  const F& f = a.field();
  std::size_t n = std::min(a.precision(), b.precision());
  Series<F> out(f, n);
  for (std::size_t i = 0; i < n; ++i) out.coeffs()[i] = f.sub(a.coeffs()[i], b.coeffs()[i]);
  return out;
}

template <class F>
Series<F> negate(const Series<F>& a) {
  const F& f = a.field();
  Series<F> out(f, a.precision());
  for (std::size_t i = 0; i < a.precision(); ++i) out.coeffs()[i] = f.neg(a.coeffs()[i]);
  return out;
}

template <class F>
Series<F> scale(const Series<F>& a, const typename F::Elem& s) {
  const F& f = a.field();
  Series<F> out(f, a.precision());
  for (std::size_t i = 0; i < a.precision(); ++i) out.coeffs()[i] = f.mul(a.coeffs()[i], s);
  count_field_muls(a.precision());
  return out;
}

// t^k * f; precision grows by k
template <class F>
Series<F> shift_up(const Series<F>& f, std::size_t k) {
  std::vector<typename F::Elem> c(f.precision() + k, f.field().zero());
  for (std::size_t i = 0; i < f.precision(); ++i) c[k + i] = f.coeffs()[i];
  return Series<F>(f.field(), std::move(c));
}

// f * g mod t^n; inputs are truncated to t^n first. Result precision is n.
template <class F>
Series<F> mul(const Series<F>& a, const Series<F>& b, std::size_t n) {
  const F& f = a.field();
  count_poly_mul(n);
  if (n == 0) return Series<F>(f, 0);
  std::size_t la = std::min(a.precision(), n), lb = std::min(b.precision(), n);
  if (la == 0 || lb == 0) return Series<F>(f, n);
  auto full = detail::conv_full(f, a.coeffs().data(), la, b.coeffs().data(), lb);
  full.resize(n, f.zero());
  return Series<F>(f, std::move(full));
}

// d/dt; precision drops by one
template <class F>
Series<F> differentiate(const Series<F>& a) {
  const F& f = a.field();
  if (a.precision() == 0) return Series<F>(f, 0);
  Series<F> out(f, a.precision() - 1);
  for (std::size_t i = 1; i < a.precision(); ++i)
    out.coeffs()[i - 1] = f.mul(a.coeffs()[i], f.from_uint(i));
  count_field_muls(a.precision() ? a.precision() - 1 : 0);
  return out;
}

// antiderivative with zero constant term; precision grows by one.
// Divides by 1..n: characteristic must be 0 or > precision(a).
template <class F>
Series<F> integrate(const Series<F>& a) {
  const F& f = a.field();
  std::size_t n = a.precision();
  auto inv = integer_inverses(f, n);
  Series<F> out(f, n + 1);
  for (std::size_t i = 0; i < n; ++i) out.coeffs()[i + 1] = f.mul(a.coeffs()[i], inv[i + 1]);
  count_field_muls(n);
  return out;
}

// 1/f mod t^n by Newton doubling; requires f(0) invertible
template <class F>
Series<F> series_inverse(const Series<F>& a, std::size_t n) {
  const F& f = a.field();
  if (a.precision() == 0 || f.is_zero(a.coeffs()[0]))
    throw NotInvertible("series_inverse: constant term is zero");
  if (n == 0) return Series<F>(f, 0);
  Series<F> g = Series<F>::constant(f, f.inv(a.coeffs()[0]), 1);
  std::size_t k = 1;
  while (k < n) {
    std::size_t k2 = std::min(2 * k, n);
    // g <- g*(2 - f*g) mod t^k2
    Series<F> e = mul(low(a, std::min(a.precision(), k2)), g, k2);
    Series<F> two_minus = negate(pad(e, k2));
    two_minus.coeffs()[0] = f.add(two_minus.coeffs()[0], f.from_uint(2));
    g = mul(g, two_minus, k2);
    k = k2;
  }
  return g;
}

template <class F>
std::string to_text(const Series<F>& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.precision(); ++i) {
    if (i) os << ' ';
    os << a.field().to_string(a.coeffs()[i]);
  }
  return os.str();
}

template <class F>
Series<F> series_from_text(const F& f, const std::string& text) {
  std::istringstream is(text);
  std::vector<typename F::Elem> c;
  std::string tok;
  while (is >> tok) c.push_back(f.parse(tok));
  return Series<F>(f, std::move(c));
}

}  // namespace seriesolve
