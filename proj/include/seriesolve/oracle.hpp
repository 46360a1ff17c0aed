#pragma once

#include <vector>

#include "seriesolve/nonlinear.hpp"
#include "seriesolve/series_matrix.hpp"

namespace seriesolve {

// Reference solvers with quadratic coefficient recurrences. They use only
// plain convolution loops, never the dispatching multiplication, so they are
// independent of the kernels they validate.

namespace detail {

// plain convolution truncated to n, counting multiplications
template <class F>
Series<F> naive_mul(const Series<F>& a, const Series<F>& b, std::size_t n) {
  const F& f = a.field();
  std::vector<typename F::Elem> out(n, f.zero());
  i64 muls = 0;
  std::size_t la = std::min(a.precision(), n);
  for (std::size_t i = 0; i < la; ++i) {
    std::size_t lb = std::min(b.precision(), n - i);
    for (std::size_t j = 0; j < lb; ++j)
      out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
    muls += (i64)lb;
  }
  count_field_muls(muls);
  return Series<F>(f, std::move(out));
}

}  // namespace detail

// y' = A y + b mod t^{N-1}, y(0) = v, one coefficient at a time:
// (k+1) y_{k+1} = sum_{i<=k} A_i y_{k-i} + b_k.
template <class F>
SeriesVector<F> naive_solve_II(const SeriesMatrix<F>& a, const SeriesVector<F>& b, std::size_t N,
                               const std::vector<typename F::Elem>& v) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (a.cols() != r) throw DimensionMismatch("coefficient matrix must be square");
  if (b.rows() != r || b.cols() != 1) throw DimensionMismatch("right-hand side must be r by 1");
  if (v.size() != r) throw DimensionMismatch("initial vector must have length r");
  ensure_characteristic_of(f, N);
  SeriesVector<F> y(f, r, 1, N);
  if (N == 0) return y;
  for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, v[i]);
  i64 muls = 0;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    std::vector<typename F::Elem> acc(r, f.zero());
    if (k < b.precision())
      for (std::size_t i = 0; i < r; ++i) acc[i] = b.at(i, 0)[k];
    std::size_t imax = std::min(k + 1, a.precision());
    for (std::size_t i = 0; i < imax; ++i)
      for (std::size_t row = 0; row < r; ++row)
        for (std::size_t col = 0; col < r; ++col) {
          acc[row] = f.add(acc[row], f.mul(a.at(row, col)[i], y.at(col, 0)[k - i]));
          ++muls;
        }
    typename F::Elem inv_k1 = int_inverse(f, k + 1);
    for (std::size_t row = 0; row < r; ++row) {
      y.at(row, 0).set(k + 1, f.mul(acc[row], inv_k1));
      ++muls;
    }
  }
  count_field_muls(muls);
  return y;
}

// a_r y^{(r)} + ... + a_0 y = rhs mod t^{N-r}, y^{(k)}(0) = alpha_k, by
// undetermined coefficients. Uses [y^{(j)}]_m = (m+1)...(m+j) y_{m+j}.
template <class F>
Series<F> naive_solve_scalar(const F& f, const std::vector<Series<F>>& a, const Series<F>& rhs,
                             const std::vector<typename F::Elem>& alpha, std::size_t N) {
  if (a.size() < 2) throw DimensionMismatch("equation order must be at least 1");
  std::size_t r = a.size() - 1;
  if (alpha.size() != r) throw DimensionMismatch("need r initial derivatives");
  if (a[r].precision() == 0 || f.is_zero(a[r][0]))
    throw NotOrdinaryPoint("leading coefficient vanishes at the expansion point");
  ensure_characteristic_of(f, N);
  Series<F> y(f, N);
  typename F::Elem fact = f.one();
  for (std::size_t k = 0; k < std::min(r, N); ++k) {
    if (k > 0) fact = f.mul(fact, f.from_uint(k));
    y.set(k, f.div(alpha[k], fact));
  }
  auto falling = [&](std::size_t m, std::size_t j) {
    typename F::Elem w = f.one();
    for (std::size_t q = 1; q <= j; ++q) w = f.mul(w, f.from_uint(m + q));
    return w;
  };
  for (std::size_t n = 0; n + r < N; ++n) {
    typename F::Elem s = n < rhs.precision() ? rhs[n] : f.zero();
    for (std::size_t j = 0; j <= r; ++j) {
      if (a[j].precision() == 0) continue;
      std::size_t lmax = std::min(n, a[j].precision() - 1);
      for (std::size_t l = (j == r ? 1u : 0u); l <= lmax; ++l) {
        std::size_t m = n - l;
        s = f.sub(s, f.mul(a[j][l], f.mul(falling(m, j), y[m + j])));
      }
    }
    typename F::Elem d = f.mul(a[r][0], falling(n, r));
    y.set(n + r, f.div(s, d));
  }
  return y;
}

// Evaluator over naive convolutions, for validating the nonlinear solver
// without touching the dispatching multiplication.
template <class F>
NonlinearEvaluator<F> naive_poly_evaluator(const F& f, const SparsePolySystem<F>& sys) {
  std::size_t r = sys.r;
  if (sys.eqs.size() != r) throw DimensionMismatch("system needs one equation per unknown");
  auto eqs = std::make_shared<SparsePolySystem<F>>(sys);
  const F* fp = &f;
  NonlinearEvaluator<F> ev;
  ev.r = r;
  ev.cost_note = "naive convolutions: O(m d n^2) per evaluation";
  ev.eval = [fp, eqs, r](const SeriesVector<F>& y, std::size_t n) {
    const F& f = *fp;
    if (y.rows() != r || y.cols() != 1)
      throw DimensionMismatch("evaluation point must be r by 1");
    auto mono = [&](const Monomial<F>& m) {
      if (m.t_exp >= n) return Series<F>(f, n);
      std::size_t inner = n - m.t_exp;
      Series<F> val = Series<F>::constant(f, m.coeff, inner);
      for (std::size_t j = 0; j < r; ++j)
        for (unsigned e = 0; e < m.y_exp[j]; ++e)
          val = detail::naive_mul(val, y.at(j, 0), inner);
      return shift_up(val, m.t_exp);
    };
    SeriesVector<F> phi(f, r, 1, n);
    SeriesMatrix<F> jm(f, r, r, n);
    for (std::size_t i = 0; i < r; ++i)
      for (const auto& m : eqs->eqs[i]) {
        phi.at(i, 0) = add(phi.at(i, 0), mono(m));
        for (std::size_t j = 0; j < r; ++j) {
          if (m.y_exp[j] == 0) continue;
          Monomial<F> dm = m;
          dm.coeff = f.mul(m.coeff, f.from_uint(m.y_exp[j]));
          dm.y_exp[j] -= 1;
          jm.at(i, j) = add(jm.at(i, j), mono(dm));
        }
      }
    return std::make_pair(std::move(phi), std::move(jm));
  };
  return ev;
}

// Picard iteration y <- v + integral(phi(y)), run exactly N times at
// precision N. Convergence is one extra correct coefficient per round, so N
// rounds pin all N coefficients.
template <class F>
SeriesVector<F> picard_solve_nonlinear(const F& f, const NonlinearEvaluator<F>& ev,
                                       const std::vector<typename F::Elem>& v, std::size_t N) {
  std::size_t r = ev.r;
  if (v.size() != r) throw DimensionMismatch("initial vector must have length r");
  ensure_characteristic_of(f, N);
  SeriesVector<F> y(f, r, 1, N);
  if (N == 0) return y;
  for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, v[i]);
  for (std::size_t round = 0; round < N; ++round) {
    SeriesVector<F> phi = ev.eval(mat_low(y, N - 1), N - 1).first;
    y = mat_integrate(phi);
    for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, v[i]);
  }
  return y;
}

}  // namespace seriesolve
