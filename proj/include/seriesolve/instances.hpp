#pragma once

#include <map>
#include <random>
#include <type_traits>

#include "seriesolve/nonlinear.hpp"
#include "seriesolve/series_matrix.hpp"

namespace seriesolve {

// Reproducible random instances: every generator draws from a caller-seeded
// PRNG, so an instance is named by (seed, shape) alone.

template <class F>
typename F::Elem random_scalar(const F& f, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return f.from_uint(rng());
  } else {
    // small signed numerators keep rational blowup in check
    i64 num = (i64)(rng() % 19) - 9;
    return f.from_int(num);
  }
}

template <class F>
typename F::Elem random_nonzero_scalar(const F& f, std::mt19937_64& rng) {
  while (true) {
    typename F::Elem x = random_scalar(f, rng);
    if (!f.is_zero(x)) return x;
  }
}

template <class F>
Series<F> random_series(const F& f, std::mt19937_64& rng, std::size_t n) {
  std::vector<typename F::Elem> c;
  c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.push_back(random_scalar(f, rng));
  return Series<F>(f, std::move(c));
}

// random series with invertible constant term (for leading coefficients)
template <class F>
Series<F> random_unit_series(const F& f, std::mt19937_64& rng, std::size_t n) {
  Series<F> s = random_series(f, rng, n);
  if (n > 0) s.set(0, random_nonzero_scalar(f, rng));
  return s;
}

template <class F>
SeriesMatrix<F> random_series_matrix(const F& f, std::mt19937_64& rng, std::size_t rows,
                                     std::size_t cols, std::size_t n) {
  SeriesMatrix<F> m(f, rows, cols, n);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = random_series(f, rng, n);
  return m;
}

// invertible constant matrix as a unit-triangular product L*U
template <class F>
Mat<F> random_invertible_const(const F& f, std::mt19937_64& rng, std::size_t r) {
  Mat<F> l = Mat<F>::identity(f, r);
  Mat<F> u = Mat<F>::identity(f, r);
  for (std::size_t i = 0; i < r; ++i) {
    u.at(i, i) = random_nonzero_scalar(f, rng);
    for (std::size_t j = 0; j < i; ++j) l.at(i, j) = random_scalar(f, rng);
    for (std::size_t j = i + 1; j < r; ++j) u.at(i, j) = random_scalar(f, rng);
  }
  Mat<F> out(f, r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      typename F::Elem s = f.zero();
      for (std::size_t k = 0; k < r; ++k) s = f.add(s, f.mul(l.at(i, k), u.at(k, j)));
      out.at(i, j) = s;
    }
  return out;
}

template <class F>
std::vector<typename F::Elem> random_vector(const F& f, std::mt19937_64& rng, std::size_t r) {
  std::vector<typename F::Elem> v;
  v.reserve(r);
  for (std::size_t i = 0; i < r; ++i) v.push_back(random_scalar(f, rng));
  return v;
}

// a_0 .. a_r with deg <= d and a_r(0) invertible, so t = 0 is ordinary
template <class F>
std::vector<Series<F>> random_scalar_equation(const F& f, std::mt19937_64& rng, std::size_t r,
                                              std::size_t d) {
  std::vector<Series<F>> a;
  a.reserve(r + 1);
  for (std::size_t j = 0; j < r; ++j) a.push_back(random_series(f, rng, d + 1));
  a.push_back(random_unit_series(f, rng, d + 1));
  return a;
}

// sparse quadratic right-hand side: per equation a few monomials with
// t-degree <= 2 and total y-degree <= 2
template <class F>
SparsePolySystem<F> random_quadratic_system(const F& f, std::mt19937_64& rng, std::size_t r,
                                            std::size_t terms = 3) {
  SparsePolySystem<F> sys;
  sys.r = r;
  sys.eqs.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    std::map<std::pair<unsigned, std::vector<unsigned>>, typename F::Elem> merged;
    for (std::size_t k = 0; k < terms; ++k) {
      typename F::Elem coeff = random_scalar(f, rng);
      unsigned t_exp = (unsigned)(rng() % 3);
      std::vector<unsigned> y_exp(r, 0);
      unsigned ydeg = (unsigned)(rng() % 3);
      for (unsigned q = 0; q < ydeg; ++q) y_exp[rng() % r] += 1;
      auto key = std::make_pair(t_exp, std::move(y_exp));
      auto it = merged.find(key);
      if (it == merged.end())
        merged.emplace(std::move(key), coeff);
      else
        it->second = f.add(it->second, coeff);
    }
    for (auto& kv : merged) {
      if (f.is_zero(kv.second)) continue;
      Monomial<F> m;
      m.coeff = kv.second;
      m.t_exp = kv.first.first;
      m.y_exp = kv.first.second;
      sys.eqs[i].push_back(std::move(m));
    }
  }
  return sys;
}

}  // namespace seriesolve
