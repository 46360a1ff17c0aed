#pragma once

#include <utility>

#include "seriesolve/series_matrix.hpp"

namespace seriesolve {

// Y' = A*Y + (optional B) solved by quadratic doubling. Y is the solution
// matrix, Z its inverse at half precision; both are maintained together so
// each doubling pass costs a constant number of polynomial matrix products.

template <class F>
struct HomSolution {
  SeriesMatrix<F> Y;  // precision N
  SeriesMatrix<F> Z;  // Y^-1 mod t^ceil(N/2)
};

// One doubling pass, m even. Preconditions: I - Y0*Z0 = 0 mod t^{m/2},
// Y0' - A*Y0 = 0 mod t^{m-1}, deg Z0 < m/2, deg Y0 < m. Produces
// Z = Z0*(2I - Y0*Z0) mod t^m   with I - Y*Z = 0 mod t^m,
// Y = Y0*(I - integral(Z*(Y0' - A*Y0))) mod t^{2m}  with Y' - A*Y = 0 mod t^{2m-1}.
// Exactly five polynomial matrix products. The target precisions may be
// capped to stay at or below a requested final precision; cap_y also bounds
// the integration divisors (cap_y - 1 at most).
template <class F>
std::pair<SeriesMatrix<F>, SeriesMatrix<F>> newton_step(const SeriesMatrix<F>& y0,
                                                        const SeriesMatrix<F>& z0,
                                                        const SeriesMatrix<F>& a, std::size_t m,
                                                        std::size_t cap_z, std::size_t cap_y) {
  const F& f = y0.field();
  std::size_t r = y0.rows();
  std::size_t mz = std::min(m, cap_z);
  std::size_t my = std::min(2 * m, cap_y);
  SeriesMatrix<F> yz = mat_mul(y0, z0, mz);
  SeriesMatrix<F> e = mat_sub(SeriesMatrix<F>::identity(f, r, mz), yz);
  SeriesMatrix<F> z = mat_add(mat_fit(z0, mz), mat_mul(z0, e, mz));
  SeriesMatrix<F> yp = mat_fit(y0, my);
  SeriesMatrix<F> s = mat_sub(mat_differentiate(yp), mat_mul(a, yp, my - 1));
  SeriesMatrix<F> u = mat_integrate(mat_mul(z, s, my - 1));
  SeriesMatrix<F> y = mat_sub(yp, mat_mul(yp, u, my));
  return {std::move(y), std::move(z)};
}

template <class F>
std::pair<SeriesMatrix<F>, SeriesMatrix<F>> newton_step(const SeriesMatrix<F>& y0,
                                                        const SeriesMatrix<F>& z0,
                                                        const SeriesMatrix<F>& a, std::size_t m) {
  return newton_step(y0, z0, a, m, m, 2 * m);
}

// Y' = A*Y mod t^{N-1}, Y(0) = Y0. A must carry at least N-1 coefficients.
// Divisions are by the integers 1..N-1 only, so characteristic 0 or >= N
// is required even when N is not a power of two.
template <class F>
HomSolution<F> solve_hom(const SeriesMatrix<F>& a, std::size_t N, const Mat<F>& y0) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (a.cols() != r || y0.rows() != r || y0.cols() != r)
    throw DimensionMismatch("homogeneous solve: square A and matching Y0 required");
  if (N >= 2 && a.precision() + 1 < N)
    throw DimensionMismatch("homogeneous solve: A needs precision at least N-1");
  ensure_characteristic_of(f, N);
  Mat<F> z0 = mat_inverse_const(y0);
  // Y = (I + t*A(0)) * Y0, correct mod t^2
  Mat<F> a0y0 = mat_mul_scalar(a.eval0(), y0);
  SeriesMatrix<F> y(f, r, r, 2);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      y.at(i, j).set(0, y0.at(i, j));
      y.at(i, j).set(1, a0y0.at(i, j));
    }
  SeriesMatrix<F> z = SeriesMatrix<F>::from_const(z0, 1);
  std::size_t m = 2;
  while (m < N) {
    auto next = newton_step(y, z, a, m, N, N);
    y = std::move(next.first);
    z = std::move(next.second);
    m = std::min(2 * m, N);
  }
  if (y.precision() > N) y = mat_low(y, N);
  std::size_t zp = std::max<std::size_t>(1, (N + 1) / 2);
  if (z.precision() > zp) z = mat_low(z, zp);
  return {std::move(y), std::move(z)};
}

// Y' = A*Y + B mod t^{N-1}, Y(0) = Y0: solve the homogeneous problem,
// refresh Z to full precision by one more Schulz step, then
// Y = Yh + (Yh * integral(Z*B)) mod t^N.
template <class F>
SeriesMatrix<F> solve_inhom(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b, std::size_t N,
                            const Mat<F>& y0) {
  if (b.rows() != a.rows() || b.cols() != a.rows())
    throw DimensionMismatch("inhomogeneous solve: B must be r by r");
  HomSolution<F> hom = solve_hom(a, N, y0);
  if (N == 0) return hom.Y;
  SeriesMatrix<F> z = schulz_step(hom.Z, hom.Y, N);
  SeriesMatrix<F> g = mat_integrate(mat_mul(z, b, N - 1));
  return mat_add(hom.Y, mat_mul(hom.Y, g, N));
}

// y' = A*y + b mod t^{N-1}, y(0) = v, via the fundamental matrix:
// y = Yh * (v + integral(Z*b)).
template <class F>
SeriesVector<F> solve_vec(const SeriesMatrix<F>& a, const SeriesVector<F>& b, std::size_t N,
                          const std::vector<typename F::Elem>& v) {
  const F& f = a.field();
  std::size_t r = a.rows();
  if (b.rows() != r || b.cols() != 1 || v.size() != r)
    throw DimensionMismatch("vector solve: b must be r by 1 and v length r");
  HomSolution<F> hom = solve_hom(a, N, Mat<F>::identity(f, r));
  if (N == 0) return SeriesVector<F>(f, r, 1, 0);
  SeriesMatrix<F> z = schulz_step(hom.Z, hom.Y, N);
  SeriesVector<F> g = mat_integrate(mat_mul(z, b, N - 1));
  for (std::size_t i = 0; i < r; ++i) g.at(i, 0).set(0, v[i]);
  return mat_mul(hom.Y, g, N);
}

}  // namespace seriesolve
