#pragma once

#include <vector>

#include "seriesolve/ratfun.hpp"
#include "seriesolve/series_matrix.hpp"

namespace seriesolve {

// Constant-coefficient solver: the coefficientwise transform z_i = i! y_i
// turns y' = A y into the algebraic identity z = (I - tA)^{-1} v, so each
// coordinate of z is a rational function of degree at most r. Reconstructing
// it from 2r+1 Krylov terms and re-expanding costs O(N) per coordinate
// instead of a power-series solve.

template <class F>
std::vector<typename F::Elem> factorials(const F& f, std::size_t n) {
  std::vector<typename F::Elem> fact(n + 1, f.one());
  for (std::size_t k = 1; k <= n; ++k) fact[k] = f.mul(fact[k - 1], f.from_uint(k));
  count_field_muls(n);
  return fact;
}

// z_i = i! * y_i entrywise
template <class F>
Series<F> laplace(const Series<F>& y) {
  const F& f = y.field();
  std::size_t n = y.precision();
  auto fact = factorials(f, n ? n - 1 : 0);
  Series<F> z(f, n);
  for (std::size_t i = 0; i < n; ++i) z.set(i, f.mul(y[i], fact[i]));
  count_field_muls(n);
  return z;
}

// y_i = z_i / i! entrywise; divides by the integers 1..n-1
template <class F>
Series<F> inverse_laplace(const Series<F>& z) {
  const F& f = z.field();
  std::size_t n = z.precision();
  Series<F> y(f, n);
  if (n == 0) return y;
  auto inv = integer_inverses(f, n - 1);
  typename F::Elem ifac = f.one();
  for (std::size_t i = 0; i < n; ++i) {
    if (i) ifac = f.mul(ifac, inv[i]);
    y.set(i, f.mul(z[i], ifac));
  }
  count_field_muls(2 * n);
  return y;
}

template <class F>
SeriesMatrix<F> laplace(const SeriesMatrix<F>& y) {
  return entrywise(y, [](const Series<F>& s) { return laplace(s); });
}

template <class F>
SeriesMatrix<F> inverse_laplace(const SeriesMatrix<F>& z) {
  return entrywise(z, [](const Series<F>& s) { return inverse_laplace(s); });
}

// v, Av, ..., A^{2r}v as the columns of an r x (2r+1) matrix, built by
// squaring A and applying each power to the whole block computed so far.
template <class F>
Mat<F> krylov_doubling(const Mat<F>& a, const std::vector<typename F::Elem>& v) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (a.cols() != r || v.size() != r) throw DimensionMismatch("Krylov block: square A, length-r v");
  std::size_t need = 2 * r + 1;
  Mat<F> block(f, r, 1);
  for (std::size_t i = 0; i < r; ++i) block.at(i, 0) = v[i];
  Mat<F> pw = a;  // A^(2^k), the power matching the current block width
  while (block.cols() < need) {
    Mat<F> ext = mat_mul_scalar(pw, block);
    std::size_t take = std::min(ext.cols(), need - block.cols());
    Mat<F> merged(f, r, block.cols() + take);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < block.cols(); ++j) merged.at(i, j) = block.at(i, j);
      for (std::size_t j = 0; j < take; ++j) merged.at(i, block.cols() + j) = ext.at(i, j);
    }
    block = std::move(merged);
    if (block.cols() < need) pw = mat_mul_scalar(pw, pw);
  }
  return block;
}

// y' = A y, y(0) = v, precision N, for a constant matrix A.
template <class F>
SeriesVector<F> solve_const_II(const Mat<F>& a, const std::vector<typename F::Elem>& v,
                               std::size_t N, ExpandMethod method = ExpandMethod::recurrence) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (a.cols() != r || v.size() != r)
    throw DimensionMismatch("constant solve: square A, length-r v");
  ensure_characteristic_of(f, N + 1);
  SeriesVector<F> y(f, r, 1, N);
  if (N == 0) return y;
  Mat<F> block = krylov_doubling(a, v);
  for (std::size_t i = 0; i < r; ++i) {
    Series<F> u(f, 2 * r + 1);
    for (std::size_t j = 0; j < 2 * r + 1; ++j) u.set(j, block.at(i, j));
    RationalFunction<F> fr = pade(u, r);
    Series<F> z = expand_rational(f, fr, N - 1, method);
    y.at(i, 0) = inverse_laplace(z);
  }
  return y;
}

// One solution of the constant-coefficient scalar equation
// a_r y^(r) + ... + a_0 y = 0 with y^(k)(0) = alpha_k: the transformed
// sequence z_i = i! y_i obeys sum_k a_k z_{i+k} = 0.
template <class F>
Series<F> solve_const_ii(const F& f, const std::vector<typename F::Elem>& a,
                         const std::vector<typename F::Elem>& alpha, std::size_t N) {
  if (a.size() < 2) throw DimensionMismatch("equation order must be at least 1");
  std::size_t r = a.size() - 1;
  if (alpha.size() != r) throw DimensionMismatch("need r initial derivatives");
  if (f.is_zero(a[r])) throw NotOrdinaryPoint("leading coefficient is zero");
  ensure_characteristic_of(f, N);
  Series<F> z(f, N);
  if (N == 0) return z;
  // z_k = k! y_k and y^(k)(0) = k! y_k, so the initial window is alpha itself
  for (std::size_t k = 0; k < std::min(r, N); ++k) z.set(k, alpha[k]);
  // z_{i+r} = -(1/a_r) * sum_{k<r} a_k z_{i+k}
  typename F::Elem nar = f.neg(f.inv(a[r]));
  std::vector<typename F::Elem> w(r);
  for (std::size_t k = 0; k < r; ++k) w[k] = f.mul(a[k], nar);
  for (std::size_t i = 0; i + r < N; ++i) {
    typename F::Elem acc = f.zero();
    for (std::size_t k = 0; k < r; ++k) acc = f.add(acc, f.mul(w[k], z[i + k]));
    z.set(i + r, acc);
  }
  count_field_muls(r + (N > r ? (N - r) * r : 0));
  return inverse_laplace(z);
}

// Fundamental matrix for constant A: each column of V0 solved independently.
template <class F>
SeriesMatrix<F> solve_const_I(const Mat<F>& a, const Mat<F>& v0, std::size_t N,
                              ExpandMethod method = ExpandMethod::recurrence) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (v0.rows() != r || v0.cols() != r) throw DimensionMismatch("constant basis: V0 must be r by r");
  mat_inverse_const(v0);  // assert invertibility up front
  SeriesMatrix<F> y(f, r, r, N);
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<typename F::Elem> col(r);
    for (std::size_t i = 0; i < r; ++i) col[i] = v0.at(i, j);
    SeriesVector<F> yj = solve_const_II(a, col, N, method);
    for (std::size_t i = 0; i < r; ++i) y.at(i, j) = yj.at(i, 0);
  }
  return y;
}

// Solution basis for the constant-coefficient scalar equation: the k-th
// member has y^(i)(0) = [i == k].
template <class F>
std::vector<Series<F>> solve_const_i(const F& f, const std::vector<typename F::Elem>& a,
                                     std::size_t N) {
  if (a.size() < 2) throw DimensionMismatch("equation order must be at least 1");
  std::size_t r = a.size() - 1;
  std::vector<Series<F>> basis;
  basis.reserve(r);
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<typename F::Elem> alpha(r, f.zero());
    alpha[k] = f.one();
    basis.push_back(solve_const_ii(f, a, alpha, N));
  }
  return basis;
}

}  // namespace seriesolve
