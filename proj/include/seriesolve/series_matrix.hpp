#pragma once

#include <utility>
#include <vector>

#include "seriesolve/series.hpp"

namespace seriesolve {

// Dense scalar matrix over F, row-major.
template <class F>
class Mat {
 public:
  using Elem = typename F::Elem;

  Mat(const F& f, std::size_t rows, std::size_t cols)
      : f_(&f), rows_(rows), cols_(cols), e_(rows * cols, f.zero()) {}

  static Mat identity(const F& f, std::size_t r) {
    Mat m(f, r, r);
    for (std::size_t i = 0; i < r; ++i) m.at(i, i) = f.one();
    return m;
  }

  const F& field() const { return *f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Elem& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Elem& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  friend bool operator==(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.e_.size(); ++i)
      if (!a.f_->eq(a.e_[i], b.e_[i])) return false;
    return true;
  }

 private:
  const F* f_;
  std::size_t rows_, cols_;
  std::vector<Elem> e_;
};

template <class F>
Mat<F> mat_mul_scalar(const Mat<F>& a, const Mat<F>& b) {
  const F& f = a.field();
  if (a.cols() != b.rows()) throw DimensionMismatch("scalar matrix product: inner dimensions");
  Mat<F> out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a.at(i, k);
      if (f.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out.at(i, j) = f.add(out.at(i, j), f.mul(aik, b.at(k, j)));
    }
  count_field_muls((u64)a.rows() * a.cols() * b.cols());
  if (a.rows() == a.cols() && b.rows() == b.cols()) count_scalar_mat_muls(a.rows(), 1);
  return out;
}

template <class F>
Mat<F> mat_add_scalar(const Mat<F>& a, const Mat<F>& b) {
  const F& f = a.field();
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("scalar matrix sum: shapes differ");
  Mat<F> out(f, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = f.add(a.at(i, j), b.at(i, j));
  return out;
}

template <class F>
Mat<F> mat_sub_scalar(const Mat<F>& a, const Mat<F>& b) {
  const F& f = a.field();
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("scalar matrix difference: shapes differ");
  Mat<F> out(f, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = f.sub(a.at(i, j), b.at(i, j));
  return out;
}

// Gauss-Jordan inverse of a constant matrix; throws SingularMatrix.
template <class F>
Mat<F> mat_inverse_const(const Mat<F>& m) {
  const F& f = m.field();
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  std::size_t r = m.rows();
  Mat<F> a = m;
  Mat<F> inv = Mat<F>::identity(f, r);
  u64 muls = 0;
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && f.is_zero(a.at(piv, col))) ++piv;
    if (piv == r) throw SingularMatrix();
    if (piv != col)
      for (std::size_t j = 0; j < r; ++j) {
        std::swap(a.at(piv, j), a.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    typename F::Elem d = f.inv(a.at(col, col));
    for (std::size_t j = 0; j < r; ++j) {
      a.at(col, j) = f.mul(a.at(col, j), d);
      inv.at(col, j) = f.mul(inv.at(col, j), d);
    }
    muls += 2 * r;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || f.is_zero(a.at(i, col))) continue;
      typename F::Elem c = a.at(i, col);
      for (std::size_t j = 0; j < r; ++j) {
        a.at(i, j) = f.sub(a.at(i, j), f.mul(c, a.at(col, j)));
        inv.at(i, j) = f.sub(inv.at(i, j), f.mul(c, inv.at(col, j)));
      }
      muls += 2 * r;
    }
  }
  count_field_muls(muls);
  return inv;
}

// Characteristic polynomial det(tI - A), lowest degree first, by the
// trace recursion M_{k+1} = A(M_k + c_{r-k} I), c_{r-k-1} = -tr(M_{k+1})/(k+1).
// Divides by the integers 2..r (characteristic 0 or > r required).
template <class F>
std::vector<typename F::Elem> mat_charpoly(const Mat<F>& a) {
  const F& f = a.field();
  if (a.rows() != a.cols()) throw DimensionMismatch("characteristic polynomial of a non-square matrix");
  std::size_t r = a.rows();
  std::vector<typename F::Elem> c(r + 1, f.zero());
  c[r] = f.one();
  if (r == 0) return c;
  auto trace = [&](const Mat<F>& m) {
    typename F::Elem t = f.zero();
    for (std::size_t i = 0; i < r; ++i) t = f.add(t, m.at(i, i));
    return t;
  };
  Mat<F> m = a;
  c[r - 1] = f.neg(trace(m));
  for (std::size_t k = 1; k < r; ++k) {
    for (std::size_t i = 0; i < r; ++i) m.at(i, i) = f.add(m.at(i, i), c[r - k]);
    m = mat_mul_scalar(a, m);
    c[r - k - 1] = f.neg(f.mul(trace(m), int_inverse(f, k + 1)));
  }
  count_field_muls(r - 1);
  return c;
}

// Matrix of truncated power series; every entry shares one precision.
template <class F>
class SeriesMatrix {
 public:
  using Elem = typename F::Elem;

  SeriesMatrix(const F& f, std::size_t rows, std::size_t cols, std::size_t precision)
      : f_(&f), rows_(rows), cols_(cols) {
    e_.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) e_.emplace_back(f, precision);
  }

  static SeriesMatrix identity(const F& f, std::size_t r, std::size_t precision) {
    SeriesMatrix m(f, r, r, precision);
    for (std::size_t i = 0; i < r; ++i)
      if (precision > 0) m.at(i, i).set(0, f.one());
    return m;
  }

  static SeriesMatrix from_const(const Mat<F>& c, std::size_t precision) {
    SeriesMatrix m(c.field(), c.rows(), c.cols(), precision);
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j)
        if (precision > 0) m.at(i, j).set(0, c.at(i, j));
    return m;
  }

  const F& field() const { return *f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t precision() const { return e_.empty() ? 0 : e_[0].precision(); }

  Series<F>& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Series<F>& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  Mat<F> eval0() const {
    Mat<F> m(*f_, rows_, cols_);
    if (precision() > 0)
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j)[0];
    return m;
  }

  bool is_zero() const {
    for (const auto& s : e_)
      if (!s.is_zero()) return false;
    return true;
  }

  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

 private:
  const F* f_;
  std::size_t rows_, cols_;
  std::vector<Series<F>> e_;
};

template <class F>
using SeriesVector = SeriesMatrix<F>;

template <class F, class Fn>
SeriesMatrix<F> entrywise(const SeriesMatrix<F>& a, Fn&& fn) {
  SeriesMatrix<F> out(a.field(), a.rows(), a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = fn(a.at(i, j));
  return out;
}

template <class F>
SeriesMatrix<F> mat_low(const SeriesMatrix<F>& a, std::size_t k) {
  return entrywise(a, [&](const Series<F>& s) { return low(s, k); });
}

template <class F>
SeriesMatrix<F> mat_mid(const SeriesMatrix<F>& a, std::size_t k, std::size_t l) {
  return entrywise(a, [&](const Series<F>& s) { return mid(s, k, l); });
}

template <class F>
SeriesMatrix<F> mat_pad(const SeriesMatrix<F>& a, std::size_t n) {
  return entrywise(a, [&](const Series<F>& s) { return pad(s, n); });
}

template <class F>
SeriesMatrix<F> mat_fit(const SeriesMatrix<F>& a, std::size_t n) {
  return entrywise(a, [&](const Series<F>& s) { return fit(s, n); });
}

template <class F>
SeriesMatrix<F> mat_shift_up(const SeriesMatrix<F>& a, std::size_t k) {
  return entrywise(a, [&](const Series<F>& s) { return shift_up(s, k); });
}

template <class F>
SeriesMatrix<F> mat_differentiate(const SeriesMatrix<F>& a) {
  return entrywise(a, [&](const Series<F>& s) { return differentiate(s); });
}

template <class F>
SeriesMatrix<F> mat_scale(const SeriesMatrix<F>& a, const typename F::Elem& c) {
  return entrywise(a, [&](const Series<F>& s) { return scale(s, c); });
}

// Entrywise antiderivative; the 1..n inverse table is shared across entries.
template <class F>
SeriesMatrix<F> mat_integrate(const SeriesMatrix<F>& a) {
  const F& f = a.field();
  std::size_t n = a.precision();
  auto inv = integer_inverses(f, n);
  SeriesMatrix<F> out(f, a.rows(), a.cols(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < n; ++k)
        out.at(i, j).set(k + 1, f.mul(a.at(i, j)[k], inv[k + 1]));
  count_field_muls((u64)a.rows() * a.cols() * n);
  return out;
}

template <class F>
SeriesMatrix<F> mat_add(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("series matrix sum: shapes differ");
  SeriesMatrix<F> out(a.field(), a.rows(), a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = add(a.at(i, j), b.at(i, j));
  return out;
}

template <class F>
SeriesMatrix<F> mat_sub(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("series matrix difference: shapes differ");
  SeriesMatrix<F> out(a.field(), a.rows(), a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = sub(a.at(i, j), b.at(i, j));
  return out;
}

namespace detail {

// thresholds for the polynomial-matrix product; correctness-neutral
constexpr std::size_t kMatNttMin = 64;  // full product length from which NTT pays off
constexpr std::size_t kMatNaiveMax = 4;

template <class F>
std::vector<Mat<F>> to_mat_coeffs(const SeriesMatrix<F>& a, std::size_t len) {
  std::vector<Mat<F>> out(len, Mat<F>(a.field(), a.rows(), a.cols()));
  for (std::size_t k = 0; k < len; ++k)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) out[k].at(i, j) = a.at(i, j)[k];
  return out;
}

template <class F>
void matconv_naive(const std::vector<Mat<F>>& a, const std::vector<Mat<F>>& b,
                   std::vector<Mat<F>>& out) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = mat_add_scalar(out[i + j], mat_mul_scalar(a[i], b[j]));
}

template <class F>
void matconv_kara(const F& f, const Mat<F>* a, std::size_t la, const Mat<F>* b, std::size_t lb,
                  std::vector<Mat<F>>& out) {
  // out has size la+lb-1 and is accumulated into
  if (std::min(la, lb) <= kMatNaiveMax) {
    for (std::size_t i = 0; i < la; ++i)
      for (std::size_t j = 0; j < lb; ++j)
        out[i + j] = mat_add_scalar(out[i + j], mat_mul_scalar(a[i], b[j]));
    return;
  }
  std::size_t m = (std::max(la, lb) + 1) / 2;
  std::size_t la0 = std::min(la, m), la1 = la - la0;
  std::size_t lb0 = std::min(lb, m), lb1 = lb - lb0;
  auto zeros = [&](std::size_t n) {
    return std::vector<Mat<F>>(n, Mat<F>(f, a[0].rows(), b[0].cols()));
  };
  if (la1 == 0 || lb1 == 0) {
    auto t = zeros(la0 + lb0 - 1);
    matconv_kara(f, a, la0, b, lb0, t);
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = mat_add_scalar(out[i], t[i]);
    if (la1 > 0) {
      auto u = zeros(la1 + lb0 - 1);
      matconv_kara(f, a + la0, la1, b, lb0, u);
      for (std::size_t i = 0; i < u.size(); ++i) out[m + i] = mat_add_scalar(out[m + i], u[i]);
    } else if (lb1 > 0) {
      auto u = zeros(la0 + lb1 - 1);
      matconv_kara(f, a, la0, b + lb0, lb1, u);
      for (std::size_t i = 0; i < u.size(); ++i) out[m + i] = mat_add_scalar(out[m + i], u[i]);
    }
    return;
  }
  auto z0 = zeros(la0 + lb0 - 1);
  matconv_kara(f, a, la0, b, lb0, z0);
  auto z2 = zeros(la1 + lb1 - 1);
  matconv_kara(f, a + la0, la1, b + lb0, lb1, z2);
  std::size_t lsa = std::max(la0, la1), lsb = std::max(lb0, lb1);
  std::vector<Mat<F>> sa(lsa, Mat<F>(f, a[0].rows(), a[0].cols()));
  std::vector<Mat<F>> sb(lsb, Mat<F>(f, b[0].rows(), b[0].cols()));
  for (std::size_t i = 0; i < la0; ++i) sa[i] = a[i];
  for (std::size_t i = 0; i < la1; ++i) sa[i] = mat_add_scalar(sa[i], a[la0 + i]);
  for (std::size_t i = 0; i < lb0; ++i) sb[i] = b[i];
  for (std::size_t i = 0; i < lb1; ++i) sb[i] = mat_add_scalar(sb[i], b[lb0 + i]);
  auto z1 = zeros(lsa + lsb - 1);
  matconv_kara(f, sa.data(), lsa, sb.data(), lsb, z1);
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = mat_sub_scalar(z1[i], z0[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = mat_sub_scalar(z1[i], z2[i]);
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = mat_add_scalar(out[i], z0[i]);
  for (std::size_t i = 0; i < z1.size(); ++i) out[m + i] = mat_add_scalar(out[m + i], z1[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * m + i] = mat_add_scalar(out[2 * m + i], z2[i]);
}

// NTT route: transform every entry once, multiply scalar matrices per
// evaluation point, transform the result back.
inline bool mat_mul_ntt(const PrimeField& f, const SeriesMatrix<PrimeField>& a,
                        const SeriesMatrix<PrimeField>& b, std::size_t da, std::size_t db,
                        std::size_t n, SeriesMatrix<PrimeField>& out) {
  std::size_t full = da + db - 1;
  std::size_t L = next_pow2(full);
  auto tables = ntt::get_tables(f, L);
  if (!tables) return false;
  auto transform = [&](const SeriesMatrix<PrimeField>& m, std::size_t len) {
    std::vector<std::vector<u64>> t(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        auto& buf = t[i * m.cols() + j];
        buf.assign(L, 0);
        const auto& c = m.at(i, j).coeffs();
        std::copy(c.begin(), c.begin() + std::min(len, c.size()), buf.begin());
        ntt::forward(f, *tables, buf.data(), L);
      }
    return t;
  };
  auto ta = transform(a, da);
  auto tb = transform(b, db);
  const auto& mp = f.mont();
  const auto& kern = f.kern();
  std::vector<u64> acc(L);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < a.cols(); ++k)
        kern.vec_madd(mp, acc.data(), ta[i * a.cols() + k].data(), tb[k * b.cols() + j].data(), L);
      ntt::inverse(f, *tables, acc.data(), L);
      auto& dst = out.at(i, j).coeffs();
      std::copy(acc.begin(), acc.begin() + std::min(n, full), dst.begin());
    }
  count_field_muls((u64)a.rows() * a.cols() * b.cols() * L);
  if (a.rows() == a.cols() && a.cols() == b.cols()) count_scalar_mat_muls(a.rows(), L);
  return true;
}

}  // namespace detail

// A * B mod t^n as a polynomial with matrix coefficients. Inputs are
// truncated to t^n first; the result has precision n.
template <class F>
SeriesMatrix<F> mat_mul(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b, std::size_t n) {
  const F& f = a.field();
  if (a.cols() != b.rows()) throw DimensionMismatch("series matrix product: inner dimensions");
  count_mat_mul(a.rows(), n);
  SeriesMatrix<F> out(f, a.rows(), b.cols(), n);
  if (n == 0) return out;
  std::size_t da = std::min(a.precision(), n), db = std::min(b.precision(), n);
  if (da == 0 || db == 0) return out;
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (da + db - 1 >= detail::kMatNttMin && f.mont_ok() &&
        detail::mat_mul_ntt(f, a, b, da, db, n, out))
      return out;
  }
  auto ca = detail::to_mat_coeffs(mat_low(a, da), da);
  auto cb = detail::to_mat_coeffs(mat_low(b, db), db);
  std::vector<Mat<F>> co(da + db - 1, Mat<F>(f, a.rows(), b.cols()));
  detail::matconv_kara(f, ca.data(), da, cb.data(), db, co);
  for (std::size_t k = 0; k < std::min(n, co.size()); ++k)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j).set(k, co[k].at(i, j));
  return out;
}

// One Newton refinement of an approximate inverse:
// Z' = Z + (Z (I - Y Z)) mod t^m. If I - Y Z = 0 mod t^k then
// I - Y Z' = 0 mod t^min(2k, m).
template <class F>
SeriesMatrix<F> schulz_step(const SeriesMatrix<F>& z, const SeriesMatrix<F>& y, std::size_t m) {
  const F& f = z.field();
  SeriesMatrix<F> yz = mat_mul(y, z, m);
  SeriesMatrix<F> e = mat_sub(SeriesMatrix<F>::identity(f, z.rows(), m), yz);
  return mat_add(mat_pad(mat_low(z, std::min(z.precision(), m)), m), mat_mul(z, e, m));
}

// Y^-1 mod t^n from the constant-term inverse by Schulz doubling.
template <class F>
SeriesMatrix<F> mat_series_inverse(const SeriesMatrix<F>& y, std::size_t n) {
  const F& f = y.field();
  if (y.rows() != y.cols()) throw DimensionMismatch("series inverse of a non-square matrix");
  if (y.precision() == 0) throw IndexOutOfRange("series inverse needs precision >= 1");
  Mat<F> z0 = mat_inverse_const(y.eval0());
  SeriesMatrix<F> z = SeriesMatrix<F>::from_const(z0, 1);
  if (n == 0) return mat_low(z, 0);
  std::size_t k = 1;
  while (k < n) {
    k = std::min(2 * k, n);
    z = schulz_step(z, y, k);
  }
  return z;
}

}  // namespace seriesolve
