#pragma once

#include <vector>

#include "seriesolve/oracle.hpp"

namespace seriesolve {

// Residual checkers built from plain coefficient loops. Tests use these to
// certify solver output without trusting the dispatching arithmetic that the
// solvers themselves run on.

namespace detail {

// one coefficient of the product A*B of matrix series, raw loops
template <class F>
Mat<F> naive_conv_coeff(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b, std::size_t k) {
  const F& f = a.field();
  Mat<F> out(f, a.rows(), b.cols());
  std::size_t imax = std::min(k + 1, a.precision());
  for (std::size_t i = 0; i < imax; ++i) {
    if (k - i >= b.precision()) continue;
    for (std::size_t row = 0; row < a.rows(); ++row)
      for (std::size_t col = 0; col < b.cols(); ++col) {
        typename F::Elem s = out.at(row, col);
        for (std::size_t mid = 0; mid < a.cols(); ++mid)
          s = f.add(s, f.mul(a.at(row, mid)[i], b.at(mid, col)[k - i]));
        out.at(row, col) = s;
      }
  }
  return out;
}

}  // namespace detail

// Y' = A Y mod t^order (Y may be a fundamental matrix or a single column).
template <class F>
bool linear_residual_ok(const SeriesMatrix<F>& a, const SeriesMatrix<F>& y, std::size_t order) {
  const F& f = a.field();
  if (y.precision() < order + 1 || a.precision() < order)
    throw DimensionMismatch("operands too short for the requested residual order");
  for (std::size_t k = 0; k < order; ++k) {
    Mat<F> ay = detail::naive_conv_coeff(a, y, k);
    for (std::size_t row = 0; row < y.rows(); ++row)
      for (std::size_t col = 0; col < y.cols(); ++col) {
        typename F::Elem d = f.mul(f.from_uint(k + 1), y.at(row, col)[k + 1]);
        if (!f.is_zero(f.sub(d, ay.at(row, col)))) return false;
      }
  }
  return true;
}

// Y' = A Y + B mod t^order.
template <class F>
bool linear_residual_ok(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b,
                        const SeriesMatrix<F>& y, std::size_t order) {
  const F& f = a.field();
  if (y.precision() < order + 1 || a.precision() < order || b.precision() < order)
    throw DimensionMismatch("operands too short for the requested residual order");
  for (std::size_t k = 0; k < order; ++k) {
    Mat<F> ay = detail::naive_conv_coeff(a, y, k);
    for (std::size_t row = 0; row < y.rows(); ++row)
      for (std::size_t col = 0; col < y.cols(); ++col) {
        typename F::Elem d = f.mul(f.from_uint(k + 1), y.at(row, col)[k + 1]);
        d = f.sub(d, b.at(row, col)[k]);
        if (!f.is_zero(f.sub(d, ay.at(row, col)))) return false;
      }
  }
  return true;
}

// Y Z = I mod t^order.
template <class F>
bool inverse_residual_ok(const SeriesMatrix<F>& y, const SeriesMatrix<F>& z, std::size_t order) {
  const F& f = y.field();
  if (y.precision() < order || z.precision() < order)
    throw DimensionMismatch("operands too short for the requested residual order");
  for (std::size_t k = 0; k < order; ++k) {
    Mat<F> yz = detail::naive_conv_coeff(y, z, k);
    for (std::size_t row = 0; row < y.rows(); ++row)
      for (std::size_t col = 0; col < y.cols(); ++col) {
        typename F::Elem want = (k == 0 && row == col) ? f.one() : f.zero();
        if (!f.is_zero(f.sub(yz.at(row, col), want))) return false;
      }
  }
  return true;
}

// t y' + (p I - t A) y = s mod t^m, the shifted form solved by the
// divide-and-conquer recursion. Coefficient k reads
// (k + p) y_k - (A y)_{k-1} - s_k = 0.
template <class F>
bool shifted_residual_ok(const SeriesMatrix<F>& a, const SeriesVector<F>& s, u64 p,
                         const SeriesVector<F>& y, std::size_t m) {
  const F& f = a.field();
  if (y.precision() < m || s.precision() < m || (m > 0 && a.precision() + 1 < m))
    throw DimensionMismatch("operands too short for the requested residual order");
  for (std::size_t k = 0; k < m; ++k) {
    Mat<F> ay =
        k == 0 ? Mat<F>(f, y.rows(), 1) : detail::naive_conv_coeff(a, y, k - 1);
    typename F::Elem kp = f.from_uint(k + p);
    for (std::size_t row = 0; row < y.rows(); ++row) {
      typename F::Elem res = f.mul(kp, y.at(row, 0)[k]);
      res = f.sub(res, ay.at(row, 0));
      res = f.sub(res, s.at(row, 0)[k]);
      if (!f.is_zero(res)) return false;
    }
  }
  return true;
}

// y(0) = v and y' = phi(y) mod t^order, with phi supplied by the caller
// (pass the naive evaluator for full independence).
template <class F>
bool nonlinear_residual_ok(const NonlinearEvaluator<F>& ev,
                           const std::vector<typename F::Elem>& v, const SeriesVector<F>& y,
                           std::size_t order) {
  const F& f = y.field();
  if (y.precision() < order + 1)
    throw DimensionMismatch("operands too short for the requested residual order");
  for (std::size_t i = 0; i < y.rows(); ++i)
    if (!f.is_zero(f.sub(y.at(i, 0)[0], v[i]))) return false;
  SeriesVector<F> phi = ev.eval(mat_low(y, order), order).first;
  for (std::size_t k = 0; k < order; ++k)
    for (std::size_t i = 0; i < y.rows(); ++i) {
      typename F::Elem d = f.mul(f.from_uint(k + 1), y.at(i, 0)[k + 1]);
      if (!f.is_zero(f.sub(d, phi.at(i, 0)[k]))) return false;
    }
  return true;
}

// sum_j a_j y^{(j)} = rhs mod t^order for a scalar equation, using
// [y^{(j)}]_m = (m+1)...(m+j) y_{m+j}.
template <class F>
bool scalar_residual_ok(const F& f, const std::vector<Series<F>>& a, const Series<F>& rhs,
                        const Series<F>& y, std::size_t order) {
  std::size_t r = a.size() - 1;
  if (order > 0 && y.precision() < order + r)
    throw DimensionMismatch("operands too short for the requested residual order");
  auto falling = [&](std::size_t m, std::size_t j) {
    typename F::Elem w = f.one();
    for (std::size_t q = 1; q <= j; ++q) w = f.mul(w, f.from_uint(m + q));
    return w;
  };
  for (std::size_t n = 0; n < order; ++n) {
    typename F::Elem res = n < rhs.precision() ? f.neg(rhs[n]) : f.zero();
    for (std::size_t j = 0; j <= r; ++j) {
      std::size_t pj = a[j].precision();
      for (std::size_t l = 0; l <= std::min(n, pj == 0 ? 0 : pj - 1) && pj > 0; ++l) {
        std::size_t m = n - l;
        res = f.add(res, f.mul(a[j][l], f.mul(falling(m, j), y[m + j])));
      }
    }
    if (!f.is_zero(res)) return false;
  }
  return true;
}

}  // namespace seriesolve
