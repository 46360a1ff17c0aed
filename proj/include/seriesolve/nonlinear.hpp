#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "seriesolve/dac.hpp"
#include "seriesolve/newton.hpp"

namespace seriesolve {

// First-order systems y' = phi(t, y) solved by linearization: an order-m
// approximation is upgraded to order 2m by solving the tangent system
// z' = Jac(phi)(y) z + (phi(y) - y') with z(0) = 0.

template <class F>
struct Monomial {
  typename F::Elem coeff;
  unsigned t_exp = 0;
  std::vector<unsigned> y_exp;  // one exponent per unknown
};

template <class F>
struct SparsePolySystem {
  std::size_t r = 0;
  std::vector<std::vector<Monomial<F>>> eqs;  // eqs[i] = right-hand side of y_i'
};

// phi and its Jacobian at a series point, both to a requested precision.
// cost_note is informational (the evaluator's own cost profile).
template <class F>
struct NonlinearEvaluator {
  std::size_t r = 0;
  std::function<std::pair<SeriesVector<F>, SeriesMatrix<F>>(const SeriesVector<F>&, std::size_t)>
      eval;
  std::string cost_note;
};

namespace detail {

// product of one monomial at the cached powers, truncated to n
template <class F>
Series<F> monomial_value(const F& f, const Monomial<F>& m,
                         const std::vector<std::vector<Series<F>>>& pw, std::size_t n) {
  if (m.t_exp >= n) return Series<F>(f, n);
  std::size_t inner = n - m.t_exp;
  Series<F> val = Series<F>::constant(f, m.coeff, inner);
  for (std::size_t j = 0; j < m.y_exp.size(); ++j)
    if (m.y_exp[j] > 0) val = mul(val, pw[j][m.y_exp[j]], inner);
  return shift_up(val, m.t_exp);
}

}  // namespace detail

// Evaluator for a sparse polynomial right-hand side. The Jacobian is
// differentiated symbolically once, up front; each eval shares one table of
// powers of the y_j across phi and all Jacobian entries.
template <class F>
NonlinearEvaluator<F> poly_system_evaluator(const F& f, const SparsePolySystem<F>& sys) {
  std::size_t r = sys.r;
  if (sys.eqs.size() != r) throw DimensionMismatch("system needs one equation per unknown");
  for (const auto& eq : sys.eqs)
    for (const auto& m : eq)
      if (m.y_exp.size() != r) throw DimensionMismatch("monomial exponent width != r");
  auto jac = std::make_shared<std::vector<std::vector<std::vector<Monomial<F>>>>>();
  jac->assign(r, std::vector<std::vector<Monomial<F>>>(r));
  std::vector<unsigned> maxexp(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (const auto& m : sys.eqs[i])
      for (std::size_t j = 0; j < r; ++j) {
        maxexp[j] = std::max(maxexp[j], m.y_exp[j]);
        if (m.y_exp[j] == 0) continue;
        Monomial<F> dm = m;
        dm.coeff = f.mul(m.coeff, f.from_uint(m.y_exp[j]));
        dm.y_exp[j] -= 1;
        (*jac)[i][j].push_back(std::move(dm));
      }
  auto eqs = std::make_shared<SparsePolySystem<F>>(sys);
  auto maxe = std::make_shared<std::vector<unsigned>>(std::move(maxexp));
  const F* fp = &f;
  NonlinearEvaluator<F> ev;
  ev.r = r;
  ev.cost_note = "sparse polynomial: O(m r M(n)) per evaluation";
  ev.eval = [fp, eqs, jac, maxe, r](const SeriesVector<F>& y, std::size_t n) {
    const F& f = *fp;
    if (y.rows() != r || y.cols() != 1)
      throw DimensionMismatch("evaluation point must be r by 1");
    std::vector<std::vector<Series<F>>> pw(r);
    for (std::size_t j = 0; j < r; ++j) {
      pw[j].reserve((*maxe)[j] + 1);
      pw[j].push_back(Series<F>::constant(f, f.one(), n));
      for (unsigned e = 1; e <= (*maxe)[j]; ++e)
        pw[j].push_back(mul(pw[j][e - 1], y.at(j, 0), n));
    }
    SeriesVector<F> phi(f, r, 1, n);
    SeriesMatrix<F> jm(f, r, r, n);
    for (std::size_t i = 0; i < r; ++i) {
      for (const auto& m : eqs->eqs[i])
        phi.at(i, 0) = add(phi.at(i, 0), detail::monomial_value(f, m, pw, n));
      for (std::size_t j = 0; j < r; ++j)
        for (const auto& m : (*jac)[i][j])
          jm.at(i, j) = add(jm.at(i, j), detail::monomial_value(f, m, pw, n));
    }
    return std::make_pair(std::move(phi), std::move(jm));
  };
  return ev;
}

// y' = phi(t, y) mod t^{N-1}, y(0) = v, by doubling: each pass solves the
// tangent system with the divide-and-conquer linear solver. When verify is
// set (default) the returned series is checked against the evaluator at full
// precision; a mismatch means the formal problem has no series solution (or
// the evaluator is inconsistent) and throws ResidualNonzero.
template <class F>
SeriesVector<F> solve_nonlinear(const F& f, const NonlinearEvaluator<F>& ev,
                                const std::vector<typename F::Elem>& v, std::size_t N,
                                bool verify = true) {
  std::size_t r = ev.r;
  if (v.size() != r) throw DimensionMismatch("initial vector must have length r");
  ensure_characteristic_of(f, N);
  if (N == 0) return SeriesVector<F>(f, r, 1, 0);
  SeriesVector<F> y(f, r, 1, 1);
  for (std::size_t i = 0; i < r; ++i) y.at(i, 0).set(0, v[i]);
  std::vector<typename F::Elem> zero(r, f.zero());
  std::size_t m = 1;
  while (m < N) {
    std::size_t m2 = std::min(2 * m, N);
    SeriesVector<F> yp = mat_fit(y, m2);
    auto fj = ev.eval(yp, m2);
    SeriesVector<F> b = mat_sub(fj.first, mat_differentiate(mat_fit(y, m2 + 1)));
    DenseOperator<F> op(std::move(fj.second));
    SeriesVector<F> z = dac_solve(op, b, m2, zero);
    y = mat_add(yp, z);
    m = m2;
  }
  if (verify && N >= 2) {
    SeriesVector<F> phi = ev.eval(y, N - 1).first;
    if (!(mat_differentiate(y) == phi))
      throw ResidualNonzero("solution does not satisfy the system at full precision");
  }
  return y;
}

// --- text grammar -----------------------------------------------------------
// One line per equation:   dy1 = t + y1^2*y2 - 3*y2
// Terms are separated by + or -, factors by *, each factor is a scalar
// literal, t, or y<k>, optionally raised with ^.

template <class F>
SparsePolySystem<F> parse_poly_system(const F& f, const std::vector<std::string>& lines) {
  SparsePolySystem<F> sys;
  sys.r = lines.size();
  sys.eqs.resize(sys.r);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& s = lines[li];
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) {
      throw ParseError("equation " + std::to_string(li + 1) + ", column " +
                       std::to_string(pos + 1) + ": " + what);
    };
    auto skip = [&] {
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    };
    auto number = [&]() -> u64 {
      std::size_t start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == start) fail("expected a number");
      return std::stoull(s.substr(start, pos - start));
    };
    skip();
    if (pos + 1 >= s.size() || s[pos] != 'd' || s[pos + 1] != 'y') fail("expected dy<k>");
    pos += 2;
    u64 lhs = number();
    if (lhs != li + 1) fail("equations must appear in order dy1, dy2, ...");
    skip();
    if (pos >= s.size() || s[pos] != '=') fail("expected =");
    ++pos;
    bool first = true;
    while (true) {
      skip();
      if (pos >= s.size()) {
        if (first) fail("empty right-hand side");
        break;
      }
      bool negative = false;
      if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
        skip();
      } else if (!first) {
        fail("expected + or - between terms");
      }
      first = false;
      Monomial<F> m;
      m.coeff = negative ? f.neg(f.one()) : f.one();
      m.y_exp.assign(sys.r, 0);
      bool factors = false;
      while (true) {
        skip();
        if (pos < s.size() && (s[pos] >= '0' && s[pos] <= '9')) {
          std::size_t start = pos;
          while (pos < s.size() && ((s[pos] >= '0' && s[pos] <= '9') || s[pos] == '/')) ++pos;
          m.coeff = f.mul(m.coeff, f.parse(s.substr(start, pos - start)));
        } else if (pos < s.size() && s[pos] == 't') {
          ++pos;
          unsigned e = 1;
          if (pos < s.size() && s[pos] == '^') {
            ++pos;
            e = (unsigned)number();
          }
          m.t_exp += e;
        } else if (pos < s.size() && s[pos] == 'y') {
          ++pos;
          u64 idx = number();
          if (idx < 1 || idx > sys.r) fail("unknown variable y" + std::to_string(idx));
          unsigned e = 1;
          if (pos < s.size() && s[pos] == '^') {
            ++pos;
            e = (unsigned)number();
          }
          m.y_exp[idx - 1] += e;
        } else if (!factors) {
          fail("expected a factor");
        }
        factors = true;
        skip();
        if (pos < s.size() && s[pos] == '*') {
          ++pos;
          continue;
        }
        break;
      }
      sys.eqs[li].push_back(std::move(m));
    }
    // merge duplicate exponent patterns so the invariant holds
    std::map<std::pair<unsigned, std::vector<unsigned>>, typename F::Elem> merged;
    for (auto& m : sys.eqs[li]) {
      auto key = std::make_pair(m.t_exp, m.y_exp);
      auto it = merged.find(key);
      if (it == merged.end())
        merged.emplace(key, m.coeff);
      else
        it->second = f.add(it->second, m.coeff);
    }
    sys.eqs[li].clear();
    for (auto& kv : merged) {
      if (f.is_zero(kv.second)) continue;
      Monomial<F> m;
      m.coeff = kv.second;
      m.t_exp = kv.first.first;
      m.y_exp = kv.first.second;
      sys.eqs[li].push_back(std::move(m));
    }
  }
  return sys;
}

template <class F>
std::string render_poly_system(const F& f, const SparsePolySystem<F>& sys) {
  std::string out;
  for (std::size_t i = 0; i < sys.r; ++i) {
    out += "dy" + std::to_string(i + 1) + " =";
    if (sys.eqs[i].empty()) out += " 0";
    for (std::size_t k = 0; k < sys.eqs[i].size(); ++k) {
      const Monomial<F>& m = sys.eqs[i][k];
      out += k == 0 ? " " : " + ";
      out += f.to_string(m.coeff);
      if (m.t_exp == 1)
        out += "*t";
      else if (m.t_exp > 1)
        out += "*t^" + std::to_string(m.t_exp);
      for (std::size_t j = 0; j < m.y_exp.size(); ++j) {
        if (m.y_exp[j] == 0) continue;
        out += "*y" + std::to_string(j + 1);
        if (m.y_exp[j] > 1) out += "^" + std::to_string(m.y_exp[j]);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace seriesolve
