#pragma once

#include <vector>

#include "seriesolve/series.hpp"

namespace seriesolve {

// Dense polynomials as coefficient vectors (lowest degree first) plus the
// rational-function reconstruction and expansion used by the
// constant-coefficient solver. Degrees here are tiny (a few times the system
// dimension), so everything is schoolbook.

template <class F>
long poly_deg(const F& f, const std::vector<typename F::Elem>& a) {
  for (std::size_t i = a.size(); i > 0; --i)
    if (!f.is_zero(a[i - 1])) return (long)(i - 1);
  return -1;
}

template <class F>
std::vector<typename F::Elem> poly_trim(const F& f, std::vector<typename F::Elem> a) {
  long d = poly_deg(f, a);
  a.resize((std::size_t)(d + 1));
  return a;
}

template <class F>
std::vector<typename F::Elem> poly_mul_dense(const F& f,
                                             const std::vector<typename F::Elem>& a,
                                             const std::vector<typename F::Elem>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<typename F::Elem> out(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  count_field_muls((u64)a.size() * b.size());
  return poly_trim(f, std::move(out));
}

template <class F>
std::vector<typename F::Elem> poly_sub_dense(const F& f, std::vector<typename F::Elem> a,
                                             const std::vector<typename F::Elem>& b) {
  if (a.size() < b.size()) a.resize(b.size(), f.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = f.sub(a[i], b[i]);
  return poly_trim(f, std::move(a));
}

// quotient and remainder; divides by the leading coefficient of b
template <class F>
std::pair<std::vector<typename F::Elem>, std::vector<typename F::Elem>> poly_divmod(
    const F& f, std::vector<typename F::Elem> a, const std::vector<typename F::Elem>& b) {
  long db = poly_deg(f, b);
  if (db < 0) throw DivisionByZero("polynomial division by zero");
  a = poly_trim(f, std::move(a));
  long da = (long)a.size() - 1;
  if (da < db) return {{}, std::move(a)};
  typename F::Elem lcinv = f.inv(b[(std::size_t)db]);
  std::vector<typename F::Elem> q((std::size_t)(da - db + 1), f.zero());
  for (long k = da - db; k >= 0; --k) {
    typename F::Elem c = f.mul(a[(std::size_t)(k + db)], lcinv);
    q[(std::size_t)k] = c;
    if (f.is_zero(c)) continue;
    for (long j = 0; j <= db; ++j)
      a[(std::size_t)(k + j)] = f.sub(a[(std::size_t)(k + j)], f.mul(c, b[(std::size_t)j]));
  }
  count_field_muls((u64)(da - db + 1) * (u64)(db + 2));
  return {std::move(q), poly_trim(f, std::move(a))};
}

// monic gcd; gcd(0, 0) = 0
template <class F>
std::vector<typename F::Elem> poly_gcd(const F& f, std::vector<typename F::Elem> a,
                                       std::vector<typename F::Elem> b) {
  a = poly_trim(f, std::move(a));
  b = poly_trim(f, std::move(b));
  while (!b.empty()) {
    auto qr = poly_divmod(f, std::move(a), b);
    a = std::move(b);
    b = std::move(qr.second);
  }
  if (a.empty()) return a;
  typename F::Elem lc = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, lc);
  count_field_muls(a.size());
  return a;
}

template <class F>
struct RationalFunction {
  std::vector<typename F::Elem> num, den;  // den(0) = 1, gcd(num, den) = 1
};

// (r, r) rational reconstruction of u mod t^{2r+1} by the extended Euclidean
// scheme on (t^{2r+1}, u), stopped at the first remainder of degree <= r.
// The cofactor of u at that point is the denominator. Throws PadeFailure if
// its constant term vanishes (no approximant with invertible denominator).
template <class F>
RationalFunction<F> pade(const Series<F>& u, std::size_t r) {
  const F& f = u.field();
  if (u.precision() < 2 * r + 1)
    throw DimensionMismatch("rational reconstruction needs 2r+1 coefficients");
  using V = std::vector<typename F::Elem>;
  V r0(2 * r + 2, f.zero());
  r0.back() = f.one();
  V r1(u.coeffs().begin(), u.coeffs().begin() + (2 * r + 1));
  r1 = poly_trim(f, std::move(r1));
  V v0, v1{f.one()};
  while (poly_deg(f, r1) > (long)r) {
    auto qr = poly_divmod(f, std::move(r0), r1);
    r0 = r1;
    r1 = std::move(qr.second);
    V vn = poly_sub_dense(f, std::move(v0), poly_mul_dense(f, qr.first, v1));
    v0 = std::move(v1);
    v1 = std::move(vn);
  }
  if (v1.empty() || f.is_zero(v1[0]))
    throw PadeFailure("denominator constant term vanishes");
  V num = std::move(r1), den = std::move(v1);
  V g = poly_gcd(f, num, den);
  if (poly_deg(f, g) > 0) {
    num = poly_divmod(f, std::move(num), g).first;
    den = poly_divmod(f, std::move(den), g).first;
  }
  typename F::Elem c = f.inv(den[0]);
  for (auto& x : num) x = f.mul(x, c);
  for (auto& x : den) x = f.mul(x, c);
  count_field_muls(num.size() + den.size());
  return {std::move(num), std::move(den)};
}

enum class ExpandMethod { recurrence, sliced };

// First N+1 series coefficients of num/den, den(0) = 1. The default is the
// direct linear recurrence (deg(den) multiplications per coefficient); the
// sliced method produces the same output block by block with two short
// polynomial products per block.
template <class F>
Series<F> expand_rational(const F& f, const RationalFunction<F>& fr, std::size_t N,
                          ExpandMethod method = ExpandMethod::recurrence) {
  using Elem = typename F::Elem;
  const std::vector<Elem>& num = fr.num;
  const std::vector<Elem>& den = fr.den;
  if (den.empty() || f.is_zero(den[0]))
    throw NotInvertible("rational expansion needs an invertible denominator constant");
  std::size_t n = N + 1;
  long s = poly_deg(f, den);
  Series<F> out(f, n);
  if (s <= 0) {
    // constant denominator: the expansion is the numerator itself
    Elem c = f.inv(den[0]);
    for (std::size_t k = 0; k < std::min(n, num.size()); ++k) out.set(k, f.mul(num[k], c));
    count_field_muls(std::min(n, num.size()));
    return out;
  }
  if (method == ExpandMethod::recurrence) {
    u64 muls = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Elem c = k < num.size() ? num[k] : f.zero();
      std::size_t jmax = std::min<std::size_t>(k, (std::size_t)s);
      for (std::size_t j = 1; j <= jmax; ++j) c = f.sub(c, f.mul(den[j], out[k - j]));
      muls += jmax;
      out.set(k, c);
    }
    count_field_muls(muls);
    return out;
  }
  // sliced: with g = den^{-1} mod t^b, each output block of b coefficients is
  // g * (num - den * previous block), read in the block's window
  std::size_t b = (std::size_t)s;
  Series<F> denser(f, std::vector<Elem>(den.begin(), den.end()));
  Series<F> g = series_inverse(denser, b);
  std::vector<Elem> prev;  // block just below the current window
  for (std::size_t k0 = 0; k0 < n; k0 += b) {
    std::size_t len = std::min(b, n - k0);
    std::vector<Elem> e(b, f.zero());
    for (std::size_t i = 0; i < b && k0 + i < num.size(); ++i) e[i] = num[k0 + i];
    if (!prev.empty()) {
      // subtract the window [k0, k0+b) of den * prev, prev sitting at k0-b
      std::vector<Elem> pr = poly_mul_dense(f, den, prev);
      for (std::size_t i = 0; i < b; ++i)
        if (b + i < pr.size()) e[i] = f.sub(e[i], pr[b + i]);
    }
    Series<F> blk = mul(Series<F>(f, std::move(e)), g, b);
    prev.assign(b, f.zero());
    for (std::size_t i = 0; i < b; ++i) prev[i] = blk[i];
    for (std::size_t i = 0; i < len; ++i) out.set(k0 + i, blk[i]);
  }
  return out;
}

}  // namespace seriesolve
