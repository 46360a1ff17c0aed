#pragma once

#include <vector>

#include "seriesolve/const_solver.hpp"
#include "seriesolve/series_matrix.hpp"

namespace seriesolve {

// Polynomial-coefficient solvers: when A (resp. the a_j) are polynomials of
// degree at most d, extracting the coefficient of t^n gives a recurrence of
// bounded length, so N coefficients cost O(d N r^2) (resp. O(d r N)).

// y' = A*y + b mod t^{N-1}, y(0) = v, with A and b polynomial of degree <= d
// (their precisions are read as degree bounds). From the coefficient of t^n:
// (n+1) y_{n+1} = sum_{j<=min(n,d)} A_j y_{n-j} + b_n.
template <class F>
SeriesVector<F> solve_polycoeff_II(const SeriesMatrix<F>& a, const SeriesVector<F>& b,
                                   const std::vector<typename F::Elem>& v, std::size_t N) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (a.cols() != r || b.rows() != r || b.cols() != 1 || v.size() != r)
    throw DimensionMismatch("polynomial solve: square A, r by 1 b, length-r v");
  ensure_characteristic_of(f, N);
  SeriesVector<F> y(f, r, 1, N);
  if (N == 0) return y;
  for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, v[i]);
  if (N == 1) return y;
  std::size_t d = a.precision() ? a.precision() - 1 : 0;
  std::vector<Mat<F>> aj;
  aj.reserve(d + 1);
  for (std::size_t j = 0; j <= d; ++j) {
    Mat<F> m(f, r, r);
    if (j < a.precision())
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) m.at(i, k) = a.at(i, k)[j];
    aj.push_back(std::move(m));
  }
  auto inv = integer_inverses(f, N - 1);
  u64 muls = 0;
  std::vector<typename F::Elem> acc(r);
  for (std::size_t n = 0; n + 1 < N; ++n) {
    for (std::size_t i = 0; i < r; ++i)
      acc[i] = n < b.precision() ? b.at(i, 0)[n] : f.zero();
    std::size_t jmax = std::min(n, d);
    for (std::size_t j = 0; j <= jmax; ++j) {
      const Mat<F>& m = aj[j];
      for (std::size_t i = 0; i < r; ++i) {
        typename F::Elem s = f.zero();
        for (std::size_t k = 0; k < r; ++k)
          s = f.add(s, f.mul(m.at(i, k), y.at(k, 0)[n - j]));
        acc[i] = f.add(acc[i], s);
      }
    }
    muls += (jmax + 1) * r * r + r;
    for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(n + 1, f.mul(acc[i], inv[n + 1]));
  }
  count_field_muls(muls);
  return y;
}

// One solution of sum_j a_j(t) y^(j) = rhs with polynomial a_j of degree <= d
// and y^(k)(0) = alpha_k. In the transformed sequence u_k = k! y_k the
// coefficient of t^n reads sum_j sum_l a_{j,l} fall(n,l) u_{n-l+j} = n! rhs_n
// with fall(n,l) = n(n-1)...(n-l+1), and the top term's multiplier is the
// unit a_{r,0}.
template <class F>
Series<F> solve_polycoeff_ii(const std::vector<Series<F>>& a,
                             const std::vector<typename F::Elem>& alpha, std::size_t N,
                             const Series<F>* rhs = nullptr) {
  if (a.size() < 2) throw DimensionMismatch("equation order must be at least 1");
  const F& f = a[0].field();
  std::size_t r = a.size() - 1;
  if (alpha.size() != r) throw DimensionMismatch("need r initial derivatives");
  if (a[r].precision() == 0 || f.is_zero(a[r][0]))
    throw NotOrdinaryPoint("leading coefficient vanishes at t = 0");
  ensure_characteristic_of(f, N + r);
  Series<F> u(f, N);
  if (N == 0) return u;
  for (std::size_t k = 0; k < std::min(r, N); ++k) u.set(k, alpha[k]);
  typename F::Elem inv_ar0 = f.inv(a[r][0]);
  std::size_t maxd = 0;
  for (const auto& s : a) if (s.precision() > maxd + 1) maxd = s.precision() - 1;
  u64 muls = 0;
  typename F::Elem factn = f.one();  // n!
  std::vector<typename F::Elem> fall(maxd + 1);
  for (std::size_t n = 0; n + r < N; ++n) {
    std::size_t lmax = std::min(n, maxd);
    fall[0] = f.one();
    for (std::size_t l = 1; l <= lmax; ++l)
      fall[l] = f.mul(fall[l - 1], f.from_uint(n - l + 1));
    typename F::Elem acc = f.zero();
    for (std::size_t j = 0; j <= r; ++j) {
      std::size_t lj = a[j].precision() ? std::min(lmax, a[j].precision() - 1) : 0;
      for (std::size_t l = (j == r ? 1 : 0); l <= lj && a[j].precision(); ++l) {
        const typename F::Elem& c = a[j][l];
        if (f.is_zero(c)) continue;
        acc = f.add(acc, f.mul(f.mul(c, fall[l]), u[n - l + j]));
        muls += 2;
      }
    }
    typename F::Elem t = f.zero();
    if (rhs && n < rhs->precision()) {
      t = f.mul(factn, (*rhs)[n]);
      ++muls;
    }
    u.set(n + r, f.mul(f.sub(t, acc), inv_ar0));
    factn = f.mul(factn, f.from_uint(n + 1));
    muls += lmax + 2;
  }
  count_field_muls(muls);
  return inverse_laplace(u);
}

}  // namespace seriesolve
