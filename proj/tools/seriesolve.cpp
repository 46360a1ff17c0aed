#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "seriesolve/bench.hpp"
#include "seriesolve/problem.hpp"

namespace {

using namespace seriesolve;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const FieldDescriptor> field_from_flag(const std::string& flag) {
  if (flag == "q") return FieldDescriptor::rationals();
  if (flag.rfind("p:", 0) == 0) return FieldDescriptor::prime(std::stoull(flag.substr(2)));
  throw ParseError("--field must be q or p:<modulus>");
}

struct SolveOptions {
  std::string file;
  std::string engine = "auto";
  std::string field;  // empty: use the file's [field]
  std::size_t n_override = 0;
  bool json = false;
};

template <class F>
int solve_with(const F& f, const std::string& text, const SolveOptions& opt,
               std::optional<ProblemKind> expect_kind, Engine engine) {
  ProblemSpec<F> spec = parse_problem(f, text);
  if (opt.n_override > 0) spec.N = opt.n_override;
  if (expect_kind && spec.kind != *expect_kind)
    throw EngineUnsupported("this subcommand expects a problem of kind " +
                            to_string(*expect_kind) + ", file has kind " + to_string(spec.kind));
  Solution<F> sol = dispatch(f, spec, engine);
  if (sol.padded)
    std::cerr << "warning: coefficients shorter than the consumed precision were padded with "
                 "zeros\n";
  std::cout << (opt.json ? render_solution_json(f, sol, spec.N) : render_solution_text(f, sol));
  return 0;
}

int run_solve(const SolveOptions& opt, std::optional<ProblemKind> expect_kind,
              std::optional<Engine> force_engine) {
  std::string text = read_file(opt.file);
  auto fd = opt.field.empty() ? read_field_descriptor(text) : field_from_flag(opt.field);
  Engine engine = force_engine ? *force_engine : engine_from(opt.engine);
  if (fd->is_prime_field()) return solve_with(fd->zp(), text, opt, expect_kind, engine);
  return solve_with(fd->qq(), text, opt, expect_kind, engine);
}

template <class F>
int check_with(const F& f, const std::string& text, const SolveOptions& opt) {
  ProblemSpec<F> spec = parse_problem(f, text);
  if (opt.n_override > 0) spec.N = opt.n_override;
  Solution<F> fast = dispatch(f, spec, Engine::automatic);
  Solution<F> naive = dispatch(f, spec, Engine::naive);
  bool same = fast.series.size() == naive.series.size();
  for (std::size_t k = 0; same && k < fast.series.size(); ++k)
    same = fast.series[k] == naive.series[k];
  bool residual = solution_residual_ok(f, spec, fast);
  std::cout << "engine " << to_string(fast.engine_used) << " vs naive oracle: "
            << (same ? "match" : "MISMATCH") << "\n";
  std::cout << "residual congruence: " << (residual ? "ok" : "VIOLATED") << "\n";
  return same && residual ? 0 : 1;
}

int run_check(const SolveOptions& opt) {
  std::string text = read_file(opt.file);
  auto fd = opt.field.empty() ? read_field_descriptor(text) : field_from_flag(opt.field);
  if (fd->is_prime_field()) return check_with(fd->zp(), text, opt);
  return check_with(fd->qq(), text, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated power-series solutions of differential equations over exact fields"};
  app.require_subcommand(1);

  SolveOptions opt;
  auto add_io = [&](CLI::App* cmd, bool with_engine) {
    cmd->add_option("file", opt.file, "problem file")->required();
    if (with_engine)
      cmd->add_option("--engine", opt.engine,
                      "auto | newton | dac | const | polycoeff | naive");
    cmd->add_option("--N", opt.n_override, "override the precision in the file");
    cmd->add_option("--field", opt.field, "override the field: q or p:<modulus>");
    cmd->add_flag("--json", opt.json, "structured output");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
  add_io(solve, true);

  CLI::App* check =
      app.add_subcommand("check", "solve with the fast engine, compare against the naive "
                                  "oracle, verify residuals; exits nonzero on mismatch");
  add_io(check, false);

  // direct paths onto the special-coefficient solvers
  struct DirectCmd {
    const char* name;
    ProblemKind kind;
    Engine engine;
  };
  const DirectCmd direct[] = {
      {"const-i", ProblemKind::scalar_basis, Engine::constant},
      {"const-ii", ProblemKind::scalar_one, Engine::constant},
      {"const-I", ProblemKind::system_fundamental, Engine::constant},
      {"const-II", ProblemKind::system_one, Engine::constant},
      {"poly-ii", ProblemKind::scalar_one, Engine::polycoeff},
      {"poly-II", ProblemKind::system_one, Engine::polycoeff},
  };
  std::vector<CLI::App*> direct_cmds;
  for (const DirectCmd& d : direct) {
    CLI::App* cmd = app.add_subcommand(
        d.name, std::string("solve a kind-") + to_string(d.kind) + " file with the " +
                    to_string(d.engine) + " engine");
    add_io(cmd, false);
    direct_cmds.push_back(cmd);
  }

  std::string grid_path, out_path = "-";
  std::size_t reps = 3;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark grid, emit CSV");
  bench->add_option("--grid", grid_path, "grid file: engine problem r N per line")->required();
  bench->add_option("--reps", reps, "repetitions per point (median wall time)");
  bench->add_option("--out", out_path, "output CSV path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(opt, std::nullopt, std::nullopt);
    if (check->parsed()) return run_check(opt);
    for (std::size_t i = 0; i < direct_cmds.size(); ++i)
      if (direct_cmds[i]->parsed())
        return run_solve(opt, direct[i].kind, direct[i].engine);
    if (bench->parsed()) {
      auto grid = parse_bench_grid(read_file(grid_path));
      auto records = run_bench(grid, reps);
      for (const BenchRecord& rec : records)
        if (!rec.error.empty())
          std::cerr << "# error at " << to_string(rec.point.engine) << " "
                    << to_string(rec.point.problem) << " r=" << rec.point.r
                    << " N=" << rec.point.N << ": " << rec.error << "\n";
      std::string csv = render_bench_csv(records);
      if (out_path == "-") {
        std::cout << csv;
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << csv;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
