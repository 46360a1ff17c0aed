#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seriesolve/const_solver.hpp"
#include "seriesolve/dac.hpp"
#include "seriesolve/newton.hpp"
#include "seriesolve/nonlinear.hpp"
#include "seriesolve/oracle.hpp"
#include "seriesolve/polycoef_solver.hpp"
#include "seriesolve/verify.hpp"

namespace seriesolve {

// Problem-level API: the four linear problems plus first-order non-linear
// systems, a text file format for fixtures, and dispatch over engines.
//
//   i    basis of solutions of a scalar equation
//   ii   one solution of a scalar equation
//   I    fundamental matrix of a first-order system, Y(0) = I
//   II   one vector solution of a first-order system

enum class ProblemKind { scalar_basis, scalar_one, system_fundamental, system_one, nonlinear };
enum class Engine { automatic, newton, dac, constant, polycoeff, naive };
enum class CoeffClass { series, constant, polynomial };

inline std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::scalar_basis: return "i";
    case ProblemKind::scalar_one: return "ii";
    case ProblemKind::system_fundamental: return "I";
    case ProblemKind::system_one: return "II";
    default: return "nonlinear";
  }
}

inline ProblemKind problem_kind_from(const std::string& s) {
  if (s == "i") return ProblemKind::scalar_basis;
  if (s == "ii") return ProblemKind::scalar_one;
  if (s == "I") return ProblemKind::system_fundamental;
  if (s == "II") return ProblemKind::system_one;
  if (s == "nonlinear") return ProblemKind::nonlinear;
  throw ParseError("unknown problem kind '" + s + "' (expected i, ii, I, II, nonlinear)");
}

inline std::string to_string(Engine e) {
  switch (e) {
    case Engine::automatic: return "auto";
    case Engine::newton: return "newton";
    case Engine::dac: return "dac";
    case Engine::constant: return "const";
    case Engine::polycoeff: return "polycoeff";
    default: return "naive";
  }
}

inline Engine engine_from(const std::string& s) {
  if (s == "auto") return Engine::automatic;
  if (s == "newton") return Engine::newton;
  if (s == "dac") return Engine::dac;
  if (s == "const") return Engine::constant;
  if (s == "polycoeff") return Engine::polycoeff;
  if (s == "naive") return Engine::naive;
  throw ParseError("unknown engine '" + s + "'");
}

inline std::string to_string(CoeffClass c) {
  switch (c) {
    case CoeffClass::series: return "series";
    case CoeffClass::constant: return "constant";
    default: return "polynomial";
  }
}

inline CoeffClass coeff_class_from(const std::string& s) {
  if (s == "series") return CoeffClass::series;
  if (s == "constant") return CoeffClass::constant;
  if (s == "polynomial") return CoeffClass::polynomial;
  throw ParseError("unknown coefficient class '" + s + "'");
}

template <class F>
struct ProblemSpec {
  ProblemKind kind = ProblemKind::system_one;
  std::size_t N = 0;
  std::optional<CoeffClass> declared_class;
  // systems
  std::optional<SeriesMatrix<F>> A;
  std::optional<SeriesMatrix<F>> B;    // forcing for problem I
  std::optional<SeriesVector<F>> b;    // forcing for problem II
  // scalar equations, a_0 .. a_r
  std::vector<Series<F>> eq;
  std::optional<Series<F>> rhs;
  // non-linear
  std::optional<SparsePolySystem<F>> phi;
  // alpha for ii, v for II / nonlinear; empty for i and I
  std::vector<typename F::Elem> init;

  std::size_t r() const {
    switch (kind) {
      case ProblemKind::scalar_basis:
      case ProblemKind::scalar_one:
        return eq.empty() ? 0 : eq.size() - 1;
      case ProblemKind::nonlinear:
        return phi ? phi->r : 0;
      default:
        return A ? A->rows() : 0;
    }
  }
};

namespace detail {

// numeric degree of the payload: index of the last nonzero coefficient
template <class F>
long payload_degree(const std::vector<const Series<F>*>& entries) {
  long d = -1;
  for (const Series<F>* s : entries) {
    const F& f = s->field();
    for (std::size_t k = s->precision(); k-- > 0;)
      if (!f.is_zero((*s)[k])) {
        d = std::max(d, (long)k);
        break;
      }
  }
  return d;
}

template <class F>
std::vector<const Series<F>*> coeff_entries(const ProblemSpec<F>& spec) {
  std::vector<const Series<F>*> out;
  if (spec.A)
    for (std::size_t i = 0; i < spec.A->rows(); ++i)
      for (std::size_t j = 0; j < spec.A->cols(); ++j) out.push_back(&spec.A->at(i, j));
  for (const Series<F>& s : spec.eq) out.push_back(&s);
  return out;
}

}  // namespace detail

// Declared class wins (a constant claim is checked); otherwise the payload
// decides: numeric degree 0 is constant, input shorter than the precision a
// series-class problem must supply is an exact polynomial, anything else is
// a series prefix.
template <class F>
CoeffClass effective_class(const ProblemSpec<F>& spec) {
  if (spec.kind == ProblemKind::nonlinear) return CoeffClass::polynomial;
  auto entries = detail::coeff_entries(spec);
  long d = detail::payload_degree<F>(entries);
  if (spec.declared_class) {
    if (*spec.declared_class == CoeffClass::constant && d > 0)
      throw DimensionMismatch("coefficients declared constant but have positive degree");
    return *spec.declared_class;
  }
  if (d <= 0) return CoeffClass::constant;
  std::size_t supplied = 0;
  for (auto* s : entries) supplied = std::max(supplied, s->precision());
  std::size_t required = spec.N >= 2 ? spec.N - 1 : 1;
  return supplied < required ? CoeffClass::polynomial : CoeffClass::series;
}

// --- problem files -----------------------------------------------------------
//
//   [field]          p 2013265921   |   q
//   [problem]        kind II / N 16 / class polynomial (optional)
//   [matrix A]       r*r lines, row-major, each a coefficient list
//   [matrix B]       optional forcing for problem I, same layout
//   [vector b]       optional forcing for problem II, r lines
//   [equation]       scalar problems: r+1 lines, a_0 first
//   [rhs]            optional scalar forcing, one line
//   [system]         nonlinear: r lines of dy<k> = ... grammar
//   [init]           one line of scalars: alpha for ii, v for II/nonlinear
//
// '#' starts a comment; blank lines are ignored.

namespace detail {

struct RawSection {
  std::vector<std::pair<std::size_t, std::string>> lines;  // (line number, text)
};

inline std::map<std::string, RawSection> split_sections(const std::string& text) {
  std::map<std::string, RawSection> out;
  std::istringstream in(text);
  std::string line, current;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
      current = line.substr(1, line.size() - 2);
      if (out.count(current))
        throw ParseError("line " + std::to_string(lineno) + ": duplicate section [" + current +
                         "]");
      out[current];
      continue;
    }
    if (current.empty())
      throw ParseError("line " + std::to_string(lineno) + ": content before any section");
    out[current].lines.emplace_back(lineno, line);
  }
  return out;
}

inline std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

template <class F>
std::vector<typename F::Elem> parse_scalar_line(const F& f, const std::string& line,
                                                std::size_t lineno) {
  std::vector<typename F::Elem> out;
  for (const std::string& tok : split_tokens(line)) {
    try {
      out.push_back(f.parse(tok));
    } catch (const Error& err) {
      throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return out;
}

template <class F>
Series<F> parse_series_line(const F& f, const std::string& line, std::size_t lineno) {
  return Series<F>(f, parse_scalar_line(f, line, lineno));
}

template <class F>
SeriesMatrix<F> parse_matrix_section(const F& f, const RawSection& sec, const char* what,
                                     std::size_t forced_cols = 0) {
  std::size_t n = sec.lines.size();
  std::size_t r = 0, c = 0;
  if (forced_cols == 1) {
    r = n;
    c = 1;
  } else {
    while (r * r < n) ++r;
    if (r * r != n)
      throw ParseError(std::string(what) + ": " + std::to_string(n) +
                       " entries do not form a square matrix");
    c = r;
  }
  if (r == 0) throw ParseError(std::string(what) + ": empty section");
  std::vector<Series<F>> entries;
  std::size_t prec = 0;
  entries.reserve(n);
  for (auto& [lineno, text] : sec.lines) {
    entries.push_back(parse_series_line(f, text, lineno));
    prec = std::max(prec, entries.back().precision());
  }
  SeriesMatrix<F> m(f, r, c, std::max<std::size_t>(prec, 1));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = fit(entries[i * c + j], m.precision());
  return m;
}

}  // namespace detail

inline std::shared_ptr<const FieldDescriptor> read_field_descriptor(const std::string& text) {
  auto sections = detail::split_sections(text);
  auto it = sections.find("field");
  if (it == sections.end() || it->second.lines.size() != 1)
    throw ParseError("missing or malformed [field] section");
  auto toks = detail::split_tokens(it->second.lines[0].second);
  if (toks.size() == 1 && toks[0] == "q") return FieldDescriptor::rationals();
  if (toks.size() == 2 && toks[0] == "p") return FieldDescriptor::prime(std::stoull(toks[1]));
  throw ParseError("line " + std::to_string(it->second.lines[0].first) +
                   ": [field] must be 'q' or 'p <modulus>'");
}

template <class F>
ProblemSpec<F> parse_problem(const F& f, const std::string& text) {
  auto sections = detail::split_sections(text);
  for (auto& [name, sec] : sections)
    if (name != "field" && name != "problem" && name != "matrix A" && name != "matrix B" &&
        name != "vector b" && name != "equation" && name != "rhs" && name != "system" &&
        name != "init")
      throw ParseError("unknown section [" + name + "]");
  if (!sections.count("problem")) throw ParseError("missing [problem] section");

  ProblemSpec<F> spec;
  bool have_kind = false, have_n = false;
  for (auto& [lineno, line] : sections["problem"].lines) {
    auto toks = detail::split_tokens(line);
    if (toks.size() != 2)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key value'");
    if (toks[0] == "kind") {
      spec.kind = problem_kind_from(toks[1]);
      have_kind = true;
    } else if (toks[0] == "N") {
      spec.N = std::stoull(toks[1]);
      have_n = true;
    } else if (toks[0] == "class") {
      spec.declared_class = coeff_class_from(toks[1]);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + toks[0] + "'");
    }
  }
  if (!have_kind || !have_n) throw ParseError("[problem] needs both 'kind' and 'N'");

  bool scalar = spec.kind == ProblemKind::scalar_basis || spec.kind == ProblemKind::scalar_one;
  bool system =
      spec.kind == ProblemKind::system_fundamental || spec.kind == ProblemKind::system_one;

  if (system) {
    if (!sections.count("matrix A")) throw ParseError("system problems need [matrix A]");
    spec.A = detail::parse_matrix_section(f, sections["matrix A"], "[matrix A]");
    if (sections.count("matrix B")) {
      if (spec.kind != ProblemKind::system_fundamental)
        throw ParseError("[matrix B] is the forcing of problem I only");
      spec.B = detail::parse_matrix_section(f, sections["matrix B"], "[matrix B]");
      if (spec.B->rows() != spec.A->rows())
        throw DimensionMismatch("[matrix B] dimension differs from [matrix A]");
    }
    if (sections.count("vector b")) {
      if (spec.kind != ProblemKind::system_one)
        throw ParseError("[vector b] is the forcing of problem II only");
      spec.b = detail::parse_matrix_section(f, sections["vector b"], "[vector b]", 1);
      if (spec.b->rows() != spec.A->rows())
        throw DimensionMismatch("[vector b] length differs from [matrix A] dimension");
    }
  } else if (scalar) {
    if (!sections.count("equation")) throw ParseError("scalar problems need [equation]");
    for (auto& [lineno, line] : sections["equation"].lines)
      spec.eq.push_back(detail::parse_series_line(f, line, lineno));
    if (spec.eq.size() < 2) throw ParseError("[equation] needs at least a_0 and a_1");
    if (sections.count("rhs")) {
      if (spec.kind == ProblemKind::scalar_basis)
        throw ParseError("problem i is a basis problem and takes no [rhs]");
      auto& sec = sections["rhs"];
      if (sec.lines.size() != 1) throw ParseError("[rhs] must be a single line");
      spec.rhs = detail::parse_series_line(f, sec.lines[0].second, sec.lines[0].first);
    }
  } else {
    if (!sections.count("system")) throw ParseError("nonlinear problems need [system]");
    std::vector<std::string> lines;
    for (auto& [lineno, line] : sections["system"].lines) lines.push_back(line);
    spec.phi = parse_poly_system(f, lines);
  }

  if (sections.count("init")) {
    auto& sec = sections["init"];
    if (sec.lines.size() != 1) throw ParseError("[init] must be a single line");
    spec.init = detail::parse_scalar_line(f, sec.lines[0].second, sec.lines[0].first);
  }

  std::size_t r = spec.r();
  bool needs_init = spec.kind == ProblemKind::scalar_one ||
                    spec.kind == ProblemKind::system_one || spec.kind == ProblemKind::nonlinear;
  if (needs_init && spec.init.size() != r)
    throw DimensionMismatch("[init] must supply " + std::to_string(r) + " scalars");
  if (!needs_init && !spec.init.empty())
    throw ParseError("problems i and I take no [init] (basis / identity start)");
  return spec;
}

template <class F>
std::string render_problem(const F& f, const ProblemSpec<F>& spec, const FieldDescriptor& fd) {
  std::ostringstream out;
  out << "[field]\n"
      << (fd.is_prime_field() ? "p " + std::to_string(fd.modulus()) : std::string("q"))
      << "\n\n";
  out << "[problem]\nkind " << to_string(spec.kind) << "\nN " << spec.N << "\n";
  if (spec.declared_class) out << "class " << to_string(*spec.declared_class) << "\n";
  auto emit_matrix = [&](const char* name, const SeriesMatrix<F>& m) {
    out << "\n[" << name << "]\n";
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out << to_text(m.at(i, j)) << "\n";
  };
  if (spec.A) emit_matrix("matrix A", *spec.A);
  if (spec.B) emit_matrix("matrix B", *spec.B);
  if (spec.b) emit_matrix("vector b", *spec.b);
  if (!spec.eq.empty()) {
    out << "\n[equation]\n";
    for (const Series<F>& s : spec.eq) out << to_text(s) << "\n";
  }
  if (spec.rhs) out << "\n[rhs]\n" << to_text(*spec.rhs) << "\n";
  if (spec.phi) out << "\n[system]\n" << render_poly_system(f, *spec.phi);
  if (!spec.init.empty()) {
    out << "\n[init]\n";
    for (std::size_t i = 0; i < spec.init.size(); ++i)
      out << (i ? " " : "") << f.to_string(spec.init[i]);
    out << "\n";
  }
  return out.str();
}

// --- dispatch ----------------------------------------------------------------

template <class F>
struct Solution {
  std::vector<std::string> names;
  std::vector<Series<F>> series;  // each at precision N
  Engine engine_used = Engine::automatic;
  bool padded = false;  // input coefficients were shorter than consumed
};

namespace detail {

// dense companion matrix of a_0..a_r at the given precision; the single
// non-integer division of the scalar path is the inversion of a_r
template <class F>
SeriesMatrix<F> companion_matrix(const F& f, const std::vector<Series<F>>& a, std::size_t prec) {
  std::size_t r = a.size() - 1;
  if (a[r].precision() == 0 || f.is_zero(a[r][0]))
    throw NotOrdinaryPoint("leading coefficient vanishes at the expansion point");
  SeriesMatrix<F> c(f, r, r, prec);
  for (std::size_t i = 0; i + 1 < r; ++i) c.at(i, i + 1).set(0, f.one());
  Series<F> inv_ar = series_inverse(a[r], prec);
  for (std::size_t j = 0; j < r; ++j)
    c.at(r - 1, j) = negate(mul(a[j], inv_ar, prec));
  return c;
}

// trim trailing zero coefficient matrices so recurrence cost tracks the
// true degree
template <class F>
SeriesMatrix<F> trim_degree(const SeriesMatrix<F>& a) {
  const F& f = a.field();
  std::size_t keep = 1;
  for (std::size_t k = a.precision(); k-- > 0;) {
    bool nz = false;
    for (std::size_t i = 0; i < a.rows() && !nz; ++i)
      for (std::size_t j = 0; j < a.cols() && !nz; ++j) nz = !f.is_zero(a.at(i, j)[k]);
    if (nz) {
      keep = k + 1;
      break;
    }
  }
  return mat_low(a, std::min(keep, a.precision()));
}

template <class F>
std::vector<typename F::Elem> unit_vector(const F& f, std::size_t r, std::size_t k) {
  std::vector<typename F::Elem> e(r, f.zero());
  e[k] = f.one();
  return e;
}

}  // namespace detail

// Solve spec with the requested engine. auto picks by coefficient class:
// constant homogeneous problems go to the recurrence-free constant path,
// polynomial (and constant inhomogeneous) ones to the linear-cost
// recurrence, series coefficients to Newton (i, I) or divide-and-conquer
// (ii, II), and nonlinear systems to the linearization solver.
template <class F>
Solution<F> dispatch(const F& f, const ProblemSpec<F>& spec, Engine engine,
                     bool verify_nonlinear = true) {
  std::size_t N = spec.N;
  std::size_t r = spec.r();
  if (r == 0) throw DimensionMismatch("problem has no unknowns");
  Solution<F> sol;

  if (spec.kind == ProblemKind::nonlinear) {
    if (engine == Engine::automatic || engine == Engine::dac) {
      auto ev = poly_system_evaluator(f, *spec.phi);
      SeriesVector<F> y = solve_nonlinear(f, ev, spec.init, N, verify_nonlinear);
      sol.engine_used = Engine::dac;
      for (std::size_t i = 0; i < r; ++i) {
        sol.names.push_back("y" + std::to_string(i + 1));
        sol.series.push_back(y.at(i, 0));
      }
      return sol;
    }
    if (engine == Engine::naive) {
      auto ev = naive_poly_evaluator(f, *spec.phi);
      SeriesVector<F> y = picard_solve_nonlinear(f, ev, spec.init, N);
      sol.engine_used = Engine::naive;
      for (std::size_t i = 0; i < r; ++i) {
        sol.names.push_back("y" + std::to_string(i + 1));
        sol.series.push_back(y.at(i, 0));
      }
      return sol;
    }
    throw EngineUnsupported("nonlinear problems support engines auto, dac, naive");
  }

  CoeffClass cls = effective_class(spec);
  bool scalar = spec.kind == ProblemKind::scalar_basis || spec.kind == ProblemKind::scalar_one;
  std::size_t need = N >= 2 ? N - 1 : 1;

  bool homogeneous = true;
  if (spec.b && !spec.b->is_zero()) homogeneous = false;
  if (spec.B && !spec.B->is_zero()) homogeneous = false;
  if (spec.rhs && !spec.rhs->is_zero()) homogeneous = false;

  Engine chosen = engine;
  if (engine == Engine::automatic) {
    if (cls == CoeffClass::constant && homogeneous)
      chosen = Engine::constant;
    else if (cls == CoeffClass::constant || cls == CoeffClass::polynomial)
      chosen = Engine::polycoeff;
    else
      chosen = scalar ? (spec.kind == ProblemKind::scalar_basis ? Engine::newton : Engine::dac)
                      : (spec.kind == ProblemKind::system_fundamental ? Engine::newton
                                                                      : Engine::dac);
  }
  sol.engine_used = chosen;

  // payload views at the precision each engine consumes
  auto padded_A = [&]() {
    if (spec.A->precision() < need) sol.padded = true;
    return mat_fit(*spec.A, need);
  };
  auto vec_b = [&]() {
    if (spec.b) return mat_fit(*spec.b, need);
    return SeriesVector<F>(f, r, 1, need);
  };
  auto col_of_B = [&](std::size_t j) {
    SeriesVector<F> c(f, r, 1, need);
    if (spec.B)
      for (std::size_t i = 0; i < r; ++i) c.at(i, 0) = fit(spec.B->at(i, j), need);
    return c;
  };
  auto scalar_rhs = [&]() {
    if (spec.rhs) return fit(*spec.rhs, need);
    return Series<F>(f, need);
  };
  auto const_eq = [&]() {
    std::vector<typename F::Elem> a;
    for (const Series<F>& s : spec.eq)
      a.push_back(s.precision() ? s[0] : f.zero());
    return a;
  };
  auto push = [&](std::string name, Series<F> s) {
    sol.names.push_back(std::move(name));
    sol.series.push_back(std::move(s));
  };

  switch (chosen) {
    case Engine::newton: {
      if (scalar) {
        SeriesMatrix<F> c = detail::companion_matrix(f, spec.eq, need);
        if (spec.kind == ProblemKind::scalar_basis) {
          SeriesMatrix<F> y = solve_hom(c, N, Mat<F>::identity(f, r)).Y;
          for (std::size_t j = 0; j < r; ++j) push("y" + std::to_string(j + 1), y.at(0, j));
        } else {
          SeriesVector<F> bb(f, r, 1, need);
          if (spec.rhs) {
            Series<F> inv_ar = series_inverse(spec.eq[r], need);
            bb.at(r - 1, 0) = mul(scalar_rhs(), inv_ar, need);
          }
          SeriesVector<F> y = solve_vec(c, bb, N, spec.init);
          push("y", y.at(0, 0));
        }
      } else {
        SeriesMatrix<F> a = padded_A();
        if (spec.kind == ProblemKind::system_fundamental) {
          SeriesMatrix<F> y = homogeneous
                                  ? solve_hom(a, N, Mat<F>::identity(f, r)).Y
                                  : solve_inhom(a, mat_fit(*spec.B, need), N,
                                                Mat<F>::identity(f, r));
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
              push("Y" + std::to_string(i + 1) + std::to_string(j + 1), y.at(i, j));
        } else {
          SeriesVector<F> y = solve_vec(a, vec_b(), N, spec.init);
          for (std::size_t i = 0; i < r; ++i) push("y" + std::to_string(i + 1), y.at(i, 0));
        }
      }
      break;
    }
    case Engine::dac: {
      if (scalar) {
        Series<F> rr = scalar_rhs();
        if (spec.kind == ProblemKind::scalar_basis) {
          for (std::size_t k = 0; k < r; ++k)
            push("y" + std::to_string(k + 1),
                 solve_companion(spec.eq, rr, N, detail::unit_vector(f, r, k)));
        } else {
          push("y", solve_companion(spec.eq, rr, N, spec.init));
        }
      } else {
        SeriesMatrix<F> a = padded_A();
        if (spec.kind == ProblemKind::system_fundamental) {
          for (std::size_t j = 0; j < r; ++j) {
            SeriesVector<F> y = dac_solve(a, col_of_B(j), N, detail::unit_vector(f, r, j));
            for (std::size_t i = 0; i < r; ++i)
              push("Y" + std::to_string(i + 1) + std::to_string(j + 1), y.at(i, 0));
          }
          // row-major output order
          std::vector<std::string> nn(r * r);
          std::vector<Series<F>> ss;
          ss.reserve(r * r);
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
              nn[i * r + j] = "Y" + std::to_string(i + 1) + std::to_string(j + 1);
              ss.push_back(sol.series[j * r + i]);
            }
          sol.names = std::move(nn);
          sol.series = std::move(ss);
        } else {
          SeriesVector<F> y = dac_solve(a, vec_b(), N, spec.init);
          for (std::size_t i = 0; i < r; ++i) push("y" + std::to_string(i + 1), y.at(i, 0));
        }
      }
      break;
    }
    case Engine::constant: {
      if (cls != CoeffClass::constant)
        throw EngineUnsupported("const engine needs constant coefficients");
      if (!homogeneous)
        throw EngineUnsupported("const engine solves homogeneous problems; use polycoeff");
      if (scalar) {
        if (spec.kind == ProblemKind::scalar_basis) {
          auto basis = solve_const_i(f, const_eq(), N);
          for (std::size_t k = 0; k < r; ++k)
            push("y" + std::to_string(k + 1), std::move(basis[k]));
        } else {
          push("y", solve_const_ii(f, const_eq(), spec.init, N));
        }
      } else {
        Mat<F> a0 = spec.A->eval0();
        if (spec.kind == ProblemKind::system_fundamental) {
          SeriesMatrix<F> y = solve_const_I(a0, Mat<F>::identity(f, r), N);
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
              push("Y" + std::to_string(i + 1) + std::to_string(j + 1), y.at(i, j));
        } else {
          SeriesVector<F> y = solve_const_II(a0, spec.init, N);
          for (std::size_t i = 0; i < r; ++i) push("y" + std::to_string(i + 1), y.at(i, 0));
        }
      }
      break;
    }
    case Engine::polycoeff: {
      if (scalar) {
        Series<F> rr = scalar_rhs();
        const Series<F>* rp = spec.rhs ? &rr : nullptr;
        if (spec.kind == ProblemKind::scalar_basis) {
          for (std::size_t k = 0; k < r; ++k)
            push("y" + std::to_string(k + 1),
                 solve_polycoeff_ii(spec.eq, detail::unit_vector(f, r, k), N, rp));
        } else {
          push("y", solve_polycoeff_ii(spec.eq, spec.init, N, rp));
        }
      } else {
        SeriesMatrix<F> a = detail::trim_degree(*spec.A);
        if (spec.kind == ProblemKind::system_fundamental) {
          std::vector<Series<F>> cells(r * r, Series<F>(f, 0));
          for (std::size_t j = 0; j < r; ++j) {
            SeriesVector<F> y =
                solve_polycoeff_II(a, col_of_B(j), detail::unit_vector(f, r, j), N);
            for (std::size_t i = 0; i < r; ++i) cells[i * r + j] = y.at(i, 0);
          }
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
              push("Y" + std::to_string(i + 1) + std::to_string(j + 1),
                   std::move(cells[i * r + j]));
        } else {
          SeriesVector<F> y = solve_polycoeff_II(a, vec_b(), spec.init, N);
          for (std::size_t i = 0; i < r; ++i) push("y" + std::to_string(i + 1), y.at(i, 0));
        }
      }
      break;
    }
    case Engine::naive: {
      if (scalar) {
        Series<F> rr = scalar_rhs();
        if (spec.kind == ProblemKind::scalar_basis) {
          for (std::size_t k = 0; k < r; ++k)
            push("y" + std::to_string(k + 1),
                 naive_solve_scalar(f, spec.eq, rr, detail::unit_vector(f, r, k), N));
        } else {
          push("y", naive_solve_scalar(f, spec.eq, rr, spec.init, N));
        }
      } else {
        SeriesMatrix<F> a = padded_A();
        if (spec.kind == ProblemKind::system_fundamental) {
          std::vector<Series<F>> cells(r * r, Series<F>(f, 0));
          for (std::size_t j = 0; j < r; ++j) {
            SeriesVector<F> y = naive_solve_II(a, col_of_B(j), N, detail::unit_vector(f, r, j));
            for (std::size_t i = 0; i < r; ++i) cells[i * r + j] = y.at(i, 0);
          }
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
              push("Y" + std::to_string(i + 1) + std::to_string(j + 1),
                   std::move(cells[i * r + j]));
        } else {
          SeriesVector<F> y = naive_solve_II(a, vec_b(), N, spec.init);
          for (std::size_t i = 0; i < r; ++i) push("y" + std::to_string(i + 1), y.at(i, 0));
        }
      }
      break;
    }
    default:
      throw EngineUnsupported("engine cannot be resolved");
  }
  return sol;
}

// Residual certificate for a dispatched solution: checks the defining
// congruence of the problem with plain coefficient loops, independent of the
// engine that produced the series.
template <class F>
bool solution_residual_ok(const F& f, const ProblemSpec<F>& spec, const Solution<F>& sol) {
  std::size_t N = spec.N;
  std::size_t r = spec.r();
  if (N < 2) return true;
  auto as_vector = [&](std::size_t offset, std::size_t count, std::size_t cols) {
    SeriesMatrix<F> m(f, count / cols, cols, N);
    for (std::size_t k = 0; k < count; ++k)
      m.at(k / cols, k % cols) = fit(sol.series[offset + k], N);
    return m;
  };
  switch (spec.kind) {
    case ProblemKind::system_fundamental: {
      SeriesMatrix<F> y = as_vector(0, r * r, r);
      SeriesMatrix<F> a = mat_fit(*spec.A, N - 1);
      if (spec.B) return linear_residual_ok(a, mat_fit(*spec.B, N - 1), y, N - 1);
      return linear_residual_ok(a, y, N - 1);
    }
    case ProblemKind::system_one: {
      SeriesVector<F> y = as_vector(0, r, 1);
      SeriesMatrix<F> a = mat_fit(*spec.A, N - 1);
      SeriesVector<F> bb = spec.b ? mat_fit(*spec.b, N - 1) : SeriesVector<F>(f, r, 1, N - 1);
      return linear_residual_ok(a, bb, y, N - 1);
    }
    case ProblemKind::scalar_one: {
      if (N <= r) return true;
      Series<F> rr = spec.rhs ? *spec.rhs : Series<F>(f, 0);
      return scalar_residual_ok(f, spec.eq, rr, fit(sol.series[0], N), N - r);
    }
    case ProblemKind::scalar_basis: {
      if (N <= r) return true;
      Series<F> zero(f, 0);
      for (std::size_t k = 0; k < r; ++k)
        if (!scalar_residual_ok(f, spec.eq, zero, fit(sol.series[k], N), N - r)) return false;
      return true;
    }
    case ProblemKind::nonlinear: {
      SeriesVector<F> y = as_vector(0, r, 1);
      return nonlinear_residual_ok(naive_poly_evaluator(f, *spec.phi), spec.init, y, N - 1);
    }
  }
  return false;
}

// --- output ------------------------------------------------------------------

template <class F>
std::string render_solution_text(const F& f, const Solution<F>& sol) {
  std::ostringstream out;
  out << "# engine: " << to_string(sol.engine_used) << "\n";
  for (std::size_t k = 0; k < sol.series.size(); ++k) {
    out << "# series: " << sol.names[k] << "\n";
    for (std::size_t i = 0; i < sol.series[k].precision(); ++i)
      out << f.to_string(sol.series[k][i]) << "\n";
  }
  return out.str();
}

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

template <class F>
std::string render_solution_json(const F& f, const Solution<F>& sol, std::size_t N) {
  std::ostringstream out;
  out << "{\n  \"engine\": \"" << to_string(sol.engine_used) << "\",\n  \"N\": " << N
      << ",\n  \"series\": [\n";
  for (std::size_t k = 0; k < sol.series.size(); ++k) {
    out << "    {\"name\": \"" << detail::json_escape(sol.names[k]) << "\", \"coeffs\": [";
    for (std::size_t i = 0; i < sol.series[k].precision(); ++i) {
      if (i) out << ", ";
      out << "\"" << detail::json_escape(f.to_string(sol.series[k][i])) << "\"";
    }
    out << "]}" << (k + 1 < sol.series.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

}  // namespace seriesolve
