#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "seriesolve/instances.hpp"
#include "seriesolve/problem.hpp"

namespace seriesolve {

// Benchmark harness: a grid of (engine, problem, r, N) points is solved on
// fixed-seed random instances over the benchmark prime; wall times are
// median-of-repetitions, operation counts come from one dedicated counted
// run (they are deterministic, so one run suffices).

inline constexpr u64 kBenchPrime = 2013265921;  // 2^31 - 2^27 + 1, NTT-friendly

struct BenchPoint {
  Engine engine = Engine::automatic;
  ProblemKind problem = ProblemKind::system_one;
  std::size_t r = 1;
  std::size_t N = 2;
};

struct BenchRecord {
  BenchPoint point;
  double seconds = 0.0;
  u64 field_muls = 0;
  u64 mat_muls = 0;
  std::string error;  // nonempty marks a failed point
};

inline std::size_t bench_threads() {
  const char* env = std::getenv("SERIESOLVE_THREADS");
  if (!env) return 1;
  long v = std::atol(env);
  return v < 1 ? 1 : (std::size_t)v;
}

// grid file: one `engine problem r N` per line, '#' starts a comment
inline std::vector<BenchPoint> parse_bench_grid(const std::string& text) {
  std::vector<BenchPoint> grid;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string engine, problem;
    if (!(ls >> engine)) continue;
    BenchPoint p;
    std::size_t r = 0, n = 0;
    if (!(ls >> problem >> r >> n))
      throw ParseError("grid line " + std::to_string(lineno) +
                       ": expected 'engine problem r N'");
    p.engine = engine_from(engine);
    p.problem = problem_kind_from(problem);
    p.r = r;
    p.N = n;
    if (p.r == 0 || p.N == 0)
      throw ParseError("grid line " + std::to_string(lineno) + ": r and N must be positive");
    grid.push_back(p);
  }
  return grid;
}

// Instance shape follows the engine: the const engine gets degree-0
// coefficients, polycoeff degree 3, everything else full series prefixes.
// Seeded per point, so records are reproducible.
inline ProblemSpec<PrimeField> bench_instance(const PrimeField& f, const BenchPoint& p) {
  std::mt19937_64 rng(0x5eed0000u + p.r * 131 + p.N);
  ProblemSpec<PrimeField> spec;
  spec.kind = p.problem;
  spec.N = p.N;
  std::size_t need = p.N >= 2 ? p.N - 1 : 1;
  std::size_t prec = need;
  if (p.engine == Engine::constant) prec = 1;
  if (p.engine == Engine::polycoeff) prec = std::min<std::size_t>(4, need);
  switch (p.problem) {
    case ProblemKind::system_fundamental:
    case ProblemKind::system_one:
      spec.A = random_series_matrix(f, rng, p.r, p.r, prec);
      if (p.problem == ProblemKind::system_one) spec.init = random_vector(f, rng, p.r);
      break;
    case ProblemKind::scalar_basis:
    case ProblemKind::scalar_one:
      spec.eq = random_scalar_equation(f, rng, p.r, prec - 1);
      if (p.problem == ProblemKind::scalar_one) spec.init = random_vector(f, rng, p.r);
      break;
    case ProblemKind::nonlinear:
      spec.phi = random_quadratic_system(f, rng, p.r);
      spec.init = random_vector(f, rng, p.r);
      break;
  }
  return spec;
}

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

inline BenchRecord run_bench_point(const PrimeField& f, const BenchPoint& p, std::size_t reps) {
  BenchRecord rec;
  rec.point = p;
  try {
    ProblemSpec<PrimeField> spec = bench_instance(f, p);
    std::vector<double> times;
    times.reserve(reps);
    for (std::size_t k = 0; k < reps; ++k) {
      auto t0 = std::chrono::steady_clock::now();
      dispatch(f, spec, p.engine, /*verify_nonlinear=*/false);
      auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    rec.seconds = detail::median(std::move(times));
    OpCounter counter;
    {
      CounterScope scope(counter);
      dispatch(f, spec, p.engine, /*verify_nonlinear=*/false);
    }
    rec.field_muls = counter.field_muls;
    rec.mat_muls = counter.mat_mul_calls;
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

inline std::vector<BenchRecord> run_bench(const std::vector<BenchPoint>& grid, std::size_t reps,
                                          u64 modulus = kBenchPrime,
                                          std::size_t threads = bench_threads()) {
  PrimeField f(modulus);
  std::vector<BenchRecord> records(grid.size());
  if (reps == 0) reps = 1;
  if (threads <= 1 || grid.size() <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) records[i] = run_bench_point(f, grid[i], reps);
    return records;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      records[i] = run_bench_point(f, grid[i], reps);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, grid.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

// schema: engine,problem,r,N,seconds,field_muls,mat_muls; failed points keep
// the schema with `error` in the seconds column (message available on the
// record for the caller to report)
inline std::string render_bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "engine,problem,r,N,seconds,field_muls,mat_muls\n";
  for (const BenchRecord& rec : records) {
    out << to_string(rec.point.engine) << "," << to_string(rec.point.problem) << ","
        << rec.point.r << "," << rec.point.N << ",";
    if (!rec.error.empty()) {
      out << "error,0,0\n";
      continue;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", rec.seconds);
    out << buf << "," << rec.field_muls << "," << rec.mat_muls << "\n";
  }
  return out.str();
}

}  // namespace seriesolve
