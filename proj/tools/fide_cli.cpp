// fide: command-line front end over the C library.
//
//   fide solve  --problem example1 --N 10 [--alpha 3/4] [--out dir] [--format csv|json]
//   fide sweep  --problem p.prob --N 2,4,8,16 [--metric INTEGRAL_RESIDUAL]
//   fide bench  [--out dir]
//   fide verify [--seed n]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fide/fide.h"

namespace {

namespace fs = std::filesystem;

struct Failure {
  fide_status status;
  std::string message;
};

void check(fide_status s) {
  if (s != FIDE_OK) throw Failure{s, fide_last_error()};
}

struct ProblemDeleter {
  void operator()(fide_problem* p) const { fide_problem_free(p); }
};
struct SolutionDeleter {
  void operator()(fide_solution* s) const { fide_solution_free(s); }
};
using Problem = std::unique_ptr<fide_problem, ProblemDeleter>;
using Solution = std::unique_ptr<fide_solution, SolutionDeleter>;

/// Takes ownership of a library string.
std::string take(char* s) {
  std::string r = s ? s : "";
  fide_string_free(s);
  return r;
}

bool is_bundled(const std::string& name) {
  for (size_t i = 0; i < fide_bundled_count(); ++i)
    if (name == fide_bundled_name(i)) return true;
  return false;
}

/// A path, or the name of a bundled problem when no such file exists.
Problem load(const std::string& spec) {
  fide_problem* p = nullptr;
  if (!fs::exists(spec) && is_bundled(spec))
    check(fide_problem_bundled(spec.c_str(), &p));
  else
    check(fide_problem_from_file(spec.c_str(), &p));
  return Problem(p);
}

std::string problem_name(const fide_problem* p, const std::string& fallback) {
  char* s = nullptr;
  check(fide_problem_name(p, &s));
  std::string n = take(s);
  if (!n.empty()) return n;
  return fs::path(fallback).stem().string();
}

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 0) throw Failure{FIDE_INVALID_ARGUMENT, "bad degree '" + item + "'"};
    out.push_back(v);
  }
  if (out.empty()) throw Failure{FIDE_INVALID_ARGUMENT, "empty degree list"};
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{FIDE_IO_ERROR, "cannot write " + path.string()};
  out << content;
  if (!out) throw Failure{FIDE_IO_ERROR, "write failed for " + path.string()};
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{FIDE_IO_ERROR, "cannot create " + dir + ": " + ec.message()};
  return fs::path(dir);
}

struct Common {
  int precision = 50;
  std::string tol;
  std::string format = "csv";
  std::string out;
};

fide_solve_options options_for(const Common& c, int N) {
  fide_solve_options o;
  fide_solve_options_init(&o);
  o.N = N;
  if (!c.tol.empty()) o.tol = c.tol.c_str();
  return o;
}

/// Exact decimal grid point k/10 as a string.
std::string tenth(int k) { return k == 10 ? "1" : "0." + std::to_string(k); }

std::string eval(const fide_solution* s, const std::string& x) {
  char* v = nullptr;
  check(fide_solution_eval(s, x.c_str(), &v));
  return take(v);
}

Solution solve_or_throw(const fide_problem* p, const fide_solve_options& o) {
  fide_solution* s = nullptr;
  fide_status st = fide_solve(p, &o, &s);
  if (st != FIDE_OK) {
    fide_solution_free(s);
    throw Failure{st, fide_last_error()};
  }
  return Solution(s);
}

int run_solve(const Common& c, const std::string& problem, int N, const std::string& alpha, int points) {
  Problem p = load(problem);
  if (!alpha.empty()) check(fide_problem_set_alpha(p.get(), alpha.c_str()));
  fide_solve_options o = options_for(c, N);
  fide_solution* raw = nullptr;
  fide_status st = fide_solve(p.get(), &o, &raw);
  if (st != FIDE_OK && st != FIDE_MAX_ITERATIONS) throw Failure{st, fide_last_error()};
  Solution s(raw);
  char* table = nullptr;
  char* json = nullptr;
  check(fide_solution_table_csv(s.get(), points, &table));
  check(fide_solution_report_json(s.get(), 0, &json));
  std::string t = take(table), j = take(json);
  if (!c.out.empty()) {
    fs::path dir = prepare_dir(c.out);
    std::string stem = problem_name(p.get(), problem) + "_N" + std::to_string(N);
    write_file(dir / (stem + ".csv"), t);
    write_file(dir / (stem + ".json"), j);
  } else {
    std::cout << (c.format == "json" ? j : t);
  }
  if (st == FIDE_MAX_ITERATIONS) {
    std::cerr << "fide: MAX_ITERATIONS: Newton iteration did not reach the tolerance\n";
    return 2;
  }
  return 0;
}

int run_sweep(const Common& c, const std::string& problem, const std::string& Ns, std::string metric,
              const std::string& alpha, int reference_N) {
  Problem p = load(problem);
  if (!alpha.empty()) check(fide_problem_set_alpha(p.get(), alpha.c_str()));
  if (metric.empty()) metric = fide_problem_has_exact(p.get()) ? "MAX_ERROR" : "INTEGRAL_RESIDUAL";
  std::vector<int> list = parse_list(Ns);
  fide_solve_options o = options_for(c, list.front());
  char* out = nullptr;
  check(fide_sweep(p.get(), list.data(), list.size(), metric.c_str(), reference_N, &o,
                   c.format == "json" ? FIDE_FORMAT_JSON : FIDE_FORMAT_CSV, 0, &out));
  std::string r = take(out);
  if (!c.out.empty()) {
    fs::path dir = prepare_dir(c.out);
    write_file(dir / (problem_name(p.get(), problem) + "_sweep." + c.format), r);
  } else {
    std::cout << r;
  }
  return 0;
}

int run_bench(const Common& c) {
  fs::path dir = prepare_dir(c.out.empty() ? "." : c.out);

  // Example 3 at N = 10 for several orders
  {
    const std::vector<std::string> alphas{"1/4", "1/2", "3/4", "1"};
    std::vector<Solution> sols;
    for (const std::string& a : alphas) {
      Problem p = load("example3");
      check(fide_problem_set_alpha(p.get(), a.c_str()));
      sols.push_back(solve_or_throw(p.get(), options_for(c, 10)));
    }
    std::ostringstream csv;
    csv << "t";
    for (const std::string& a : alphas) csv << ",alpha=" << a;
    csv << '\n';
    for (int k = 0; k <= 10; ++k) {
      csv << tenth(k);
      for (const Solution& s : sols) csv << ',' << eval(s.get(), tenth(k));
      csv << '\n';
    }
    write_file(dir / "table1.csv", csv.str());
  }

  // Example 3, alpha = 1/2: integral-equation residual and distance to N = 64
  {
    Problem p = load("example3");
    const std::vector<int> Ns{2, 4, 8, 16, 32};
    fide_solve_options o = options_for(c, 2);
    char* a = nullptr;
    char* b = nullptr;
    check(fide_sweep(p.get(), Ns.data(), Ns.size(), "INTEGRAL_RESIDUAL", 0, &o, FIDE_FORMAT_CSV, 0, &a));
    check(fide_sweep(p.get(), Ns.data(), Ns.size(), "SELF_REFERENCE", 64, &o, FIDE_FORMAT_CSV, 0, &b));
    std::istringstream ra(take(a)), rb(take(b));
    std::string la, lb;
    std::ostringstream csv;
    csv << "N,INTEGRAL_RESIDUAL,SELF_REFERENCE_N64,status\n";
    std::getline(ra, la);
    std::getline(rb, lb);
    while (std::getline(ra, la) && std::getline(rb, lb)) {
      auto split = [](const std::string& line) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string x;
        while (std::getline(ss, x, ',')) f.push_back(x);
        while (f.size() < 4) f.emplace_back();
        return f;
      };
      auto fa = split(la), fb = split(lb);
      csv << fa[0] << ',' << fa[1] << ',' << fb[1] << ',' << fa[2] << '\n';
    }
    write_file(dir / "table2.csv", csv.str());
  }

  // Example 4 (manufactured, alpha = 1/2)
  {
    Problem p = load("example4");
    const std::vector<int> Ns{8, 32, 64};
    std::vector<Solution> sols;
    for (int N : Ns) sols.push_back(solve_or_throw(p.get(), options_for(c, N)));
    std::ostringstream csv;
    csv << "t,exact";
    for (int N : Ns) csv << ",N=" << N;
    csv << '\n';
    for (int k = 0; k <= 10; ++k) {
      char* e = nullptr;
      check(fide_problem_eval_exact(p.get(), tenth(k).c_str(), &e));
      csv << tenth(k) << ',' << take(e);
      for (const Solution& s : sols) csv << ',' << eval(s.get(), tenth(k));
      csv << '\n';
    }
    write_file(dir / "table3.csv", csv.str());
  }
  std::cout << "wrote table1.csv, table2.csv, table3.csv to " << dir.string() << '\n';
  return 0;
}

int run_verify(const Common& c, unsigned long long seed) {
  char* json = nullptr;
  int ok = 0;
  check(fide_verify(seed, &json, &ok));
  std::string j = take(json);
  if (c.format == "json") {
    std::cout << j;
  } else {
    // one line per suite
    std::istringstream in(j);
    std::string line, name;
    bool passed = false;
    while (std::getline(in, line)) {
      auto value = [&](const std::string& key) {
        auto pos = line.find("\"" + key + "\": ");
        if (pos == std::string::npos) return std::string();
        std::string v = line.substr(pos + key.size() + 4);
        if (!v.empty() && v.back() == ',') v.pop_back();
        if (v.size() >= 2 && v.front() == '"') v = v.substr(1, v.size() - 2);
        return v;
      };
      if (auto v = value("name"); !v.empty()) name = v;
      if (auto v = value("passed"); !v.empty()) passed = v == "true";
      if (auto v = value("detail"); !v.empty() || line.find("\"detail\"") != std::string::npos)
        std::cout << (passed ? "PASS " : "FAIL ") << name << ": " << v << '\n';
    }
  }
  if (!c.out.empty()) write_file(prepare_dir(c.out) / "verify.json", j);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operational Tau solver for nonlinear fractional Fredholm integro-differential equations"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--precision", c.precision, "decimal digits (>= 30)")->check(CLI::Range(30, 100000));
    sub->add_option("--tol", c.tol, "Newton tolerance, e.g. 1e-30");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  std::string problem, alpha, metric, Ns = "10";
  int N = 10, points = 11, reference_N = 64;
  unsigned long long seed = 1234567;

  CLI::App* solve = app.add_subcommand("solve", "solve one problem at one degree");
  solve->add_option("--problem", problem, "problem file or bundled name (example1..example4)")->required();
  solve->add_option("--N", N, "polynomial degree")->check(CLI::NonNegativeNumber);
  solve->add_option("--alpha", alpha, "override the fractional order");
  solve->add_option("--points", points, "rows in the solution table")->check(CLI::Range(2, 100000));
  add_common(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep over a list of degrees");
  sweep->add_option("--problem", problem, "problem file or bundled name")->required();
  sweep->add_option("--N", Ns, "comma-separated ascending degrees");
  sweep->add_option("--alpha", alpha, "override the fractional order");
  sweep->add_option("--metric", metric, "MAX_ERROR, INTEGRAL_RESIDUAL or SELF_REFERENCE")
      ->check(CLI::IsMember({"MAX_ERROR", "INTEGRAL_RESIDUAL", "SELF_REFERENCE"}));
  sweep->add_option("--reference-N", reference_N, "reference degree for SELF_REFERENCE");
  add_common(sweep);

  CLI::App* bench = app.add_subcommand("bench", "write table1.csv, table2.csv and table3.csv");
  add_common(bench);

  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--seed", seed, "random seed");
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    check(fide_set_precision(c.precision));
    if (*solve) return run_solve(c, problem, N, alpha, points);
    if (*sweep) return run_sweep(c, problem, Ns, metric, alpha, reference_N);
    if (*bench) return run_bench(c);
    if (*verify) return run_verify(c, seed);
  } catch (const Failure& f) {
    std::cerr << "fide: " << fide_status_name(f.status) << ": " << f.message << '\n';
    return 1;
  }
  return 1;
}
