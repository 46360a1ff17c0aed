#pragma once

#include <memory>
#include <vector>

#include "seriesolve/series_matrix.hpp"

namespace seriesolve {

// Divide-and-conquer solver for the shifted equation
//   t*y' + (p*I - t*A)*y = s mod t^m
// recursing on the precision. The system matrix is abstracted so a companion
// matrix can apply itself with O(r) series products instead of r*r.

template <class F>
class SystemOperator {
 public:
  virtual ~SystemOperator() = default;
  virtual std::size_t dim() const = 0;
  // A*y mod t^n; y is read as an exact polynomial of its precision
  virtual SeriesVector<F> apply(const SeriesVector<F>& y, std::size_t n) const = 0;
};

template <class F>
class DenseOperator final : public SystemOperator<F> {
 public:
  explicit DenseOperator(SeriesMatrix<F> a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw DimensionMismatch("system matrix must be square");
  }
  std::size_t dim() const override { return a_.rows(); }
  SeriesVector<F> apply(const SeriesVector<F>& y, std::size_t n) const override {
    return mat_mul(a_, y, n);
  }
  const SeriesMatrix<F>& matrix() const { return a_; }

 private:
  SeriesMatrix<F> a_;
};

// Companion matrix of a_r*y^(r) + ... + a_0*y = 0 acting on the state vector
// (y, y', ..., y^(r-1)): rows 0..r-2 shift, the last row is -a_i/a_r.
// Applying it costs r+1 series products. a_r(0) must be a unit (ordinary
// point); its series inverse is precomputed to `prec` coefficients, which
// bounds the precision apply() may be asked for.
template <class F>
class CompanionOperator final : public SystemOperator<F> {
 public:
  CompanionOperator(const F& f, std::vector<Series<F>> a, std::size_t prec)
      : f_(&f), a_(std::move(a)), inv_ar_(f, 0) {
    if (a_.size() < 2) throw DimensionMismatch("companion form needs order >= 1");
    const Series<F>& ar = a_.back();
    if (ar.precision() == 0 || f.is_zero(ar[0]))
      throw NotOrdinaryPoint("leading coefficient vanishes at t = 0");
    inv_ar_ = series_inverse(ar, std::max<std::size_t>(prec, 1));
  }
  std::size_t dim() const override { return a_.size() - 1; }
  const Series<F>& leading_inverse() const { return inv_ar_; }

  SeriesVector<F> apply(const SeriesVector<F>& y, std::size_t n) const override {
    std::size_t r = dim();
    if (n > inv_ar_.precision())
      throw IndexOutOfRange("companion apply beyond the precomputed 1/a_r precision");
    SeriesVector<F> out(*f_, r, 1, n);
    for (std::size_t i = 0; i + 1 < r; ++i) out.at(i, 0) = fit(y.at(i + 1, 0), n);
    Series<F> acc(*f_, n);
    for (std::size_t i = 0; i < r; ++i) acc = add(acc, mul(a_[i], y.at(i, 0), n));
    out.at(r - 1, 0) = negate(mul(acc, inv_ar_, n));
    return out;
  }

 private:
  const F* f_;
  std::vector<Series<F>> a_;  // a_0 .. a_r
  Series<F> inv_ar_;
};

// Solves t*y' + (p*I - t*A)*y = s mod t^m with y(0) = v when p = 0.
// s must have precision m. For p = 0 consistency needs s(0) = 0; for p > 0
// the base case divides by the integer p. All divisions on this path are by
// the integers p..p+m-1.
template <class F>
SeriesVector<F> divide_and_conquer(const SystemOperator<F>& op, const SeriesVector<F>& s, u64 p,
                                   std::size_t m, const std::vector<typename F::Elem>& v) {
  const F& f = s.field();
  std::size_t r = op.dim();
  if (s.rows() != r || s.cols() != 1) throw DimensionMismatch("right-hand side must be r by 1");
  if (s.precision() < m) throw DimensionMismatch("right-hand side shorter than the precision");
  if (m == 0) return SeriesVector<F>(f, r, 1, 0);
  if (m == 1) {
    SeriesVector<F> y(f, r, 1, 1);
    if (p == 0) {
      for (std::size_t i = 0; i < r; ++i)
        if (!f.is_zero(s.at(i, 0)[0]))
          throw InconsistentBaseCase("order-0 equation demands s(0) = 0 when the shift is 0");
      if (v.size() != r) throw DimensionMismatch("initial vector must have length r");
      for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, v[i]);
    } else {
      typename F::Elem ip = int_inverse(f, p);
      for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, f.mul(s.at(i, 0)[0], ip));
      count_field_muls(r);
    }
    return y;
  }
  std::size_t d = m / 2;
  SeriesVector<F> y0 = divide_and_conquer(op, mat_low(s, d), p, d, v);
  // residual of y0 against the full window: s - t*y0' - p*y0 + t*(A*y0) mod t^m
  SeriesVector<F> rho = mat_sub(mat_low(s, m), mat_shift_up(mat_differentiate(mat_fit(y0, m)), 1));
  if (p != 0) rho = mat_sub(rho, mat_scale(mat_fit(y0, m), f.from_uint(p)));
  rho = mat_add(rho, mat_low(mat_shift_up(op.apply(y0, m - 1), 1), m));
  SeriesVector<F> y1 = divide_and_conquer(op, mat_mid(rho, d, m), p + d, m - d, v);
  SeriesVector<F> y(f, r, 1, m);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < d; ++k) y.at(i, 0).set(k, y0.at(i, 0)[k]);
    for (std::size_t k = d; k < m; ++k) y.at(i, 0).set(k, y1.at(i, 0)[k - d]);
  }
  return y;
}

// y' = A*y + b mod t^{N-1}, y(0) = v: the shifted equation with p = 0 and
// s = t*b. Divisions are by the integers 1..N-1 exactly.
template <class F>
SeriesVector<F> dac_solve(const SystemOperator<F>& op, const SeriesVector<F>& b, std::size_t N,
                          const std::vector<typename F::Elem>& v) {
  const F& f = b.field();
  ensure_characteristic_of(f, N);
  if (N == 0) return SeriesVector<F>(f, op.dim(), 1, 0);
  SeriesVector<F> s = mat_fit(mat_shift_up(mat_fit(b, N - 1), 1), N);
  return divide_and_conquer(op, s, 0, N, v);
}

template <class F>
SeriesVector<F> dac_solve(const SeriesMatrix<F>& a, const SeriesVector<F>& b, std::size_t N,
                          const std::vector<typename F::Elem>& v) {
  DenseOperator<F> op(a);
  return dac_solve(op, b, N, v);
}

// One solution of a_r*y^(r) + ... + a_0*y = rhs with y^(k)(0) = alpha_k,
// through the companion system. Costs O(r) series products per recursion
// level; the only non-integer division is the series inversion of a_r.
template <class F>
Series<F> solve_companion(const std::vector<Series<F>>& a, const Series<F>& rhs, std::size_t N,
                          const std::vector<typename F::Elem>& alpha) {
  if (a.size() < 2) throw DimensionMismatch("equation order must be at least 1");
  const F& f = a[0].field();
  std::size_t r = a.size() - 1;
  if (alpha.size() != r) throw DimensionMismatch("need r initial derivatives");
  ensure_characteristic_of(f, N);
  if (N == 0) return Series<F>(f, 0);
  CompanionOperator<F> op(f, a, N >= 2 ? N - 1 : 1);
  SeriesVector<F> b(f, r, 1, N >= 2 ? N - 1 : 1);
  b.at(r - 1, 0) = mul(rhs, op.leading_inverse(), b.precision());
  SeriesVector<F> y = dac_solve<F>(op, b, N, alpha);
  return y.at(0, 0);
}

}  // namespace seriesolve
