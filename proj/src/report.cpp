#include "fide/report.hpp"

#include <sstream>

#include "fide/error.hpp"
#include "json.hpp"

namespace fide {
namespace {

using nlohmann::ordered_json;

std::string num(const Real& v) { return format_sci(v); }

ordered_json reals(const std::vector<Real>& v) {
  ordered_json a = ordered_json::array();
  for (const Real& x : v) a.push_back(num(x));
  return a;
}

std::vector<Real> reals_from(const ordered_json& a) {
  std::vector<Real> v;
  for (const auto& x : a) v.push_back(to_real(x.get<std::string>()));
  return v;
}

Real real_from(const ordered_json& j) { return to_real(j.get<std::string>()); }

}  // namespace

std::string report_to_json(const SolutionReport& r, bool include_runtime) {
  ordered_json j;
  j["problem"] = r.problem;
  j["alpha"] = r.alpha;
  j["N"] = r.N;
  j["precision"] = r.precision;
  j["status"] = to_string(r.status);
  j["tol"] = num(r.tol);
  j["residual_norm"] = num(r.residual_norm);
  j["kernel_degree"] = r.kernel_degree;
  j["kernel_truncation_bound"] = num(r.kernel_truncation_bound);
  j["working_dim"] = r.working_dim;
  j["y_leg"] = reals(r.y_leg.coeffs());
  j["y_mono"] = reals(r.y_mono.coeffs());
  j["tau_residual_legendre"] = reals(r.tau_residual_legendre);
  ordered_json trace = ordered_json::array();
  for (const NewtonStep& s : r.newton_trace) {
    trace.push_back({{"iteration", s.iteration},
                     {"residual_norm", num(s.residual_norm)},
                     {"step_norm", num(s.step_norm)},
                     {"damping", num(s.damping)}});
  }
  j["newton_trace"] = trace;
  if (r.errors_vs_exact) {
    const ErrorReport& e = *r.errors_vs_exact;
    ordered_json ej{{"l2", num(e.l2)}, {"linf", num(e.linf)}, {"h1", num(e.h1)}, {"argmax", num(e.argmax)}};
    ordered_json semi = ordered_json::array();
    for (const auto& [k, v] : e.seminorms) semi.push_back({{"k", k}, {"value", num(v)}});
    ej["seminorms"] = semi;
    j["errors_vs_exact"] = ej;
  } else {
    j["errors_vs_exact"] = nullptr;
  }
  j["flags"] = {{"truncation_loss", r.flags.truncation_loss},
                {"quadrature_warning", r.flags.quadrature_warning},
                {"messages", r.flags.messages}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j.dump(2) + "\n";
}

SolutionReport report_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid report JSON: ") + e.what());
  }
  try {
    SolutionReport r;
    r.problem = j.at("problem").get<std::string>();
    r.alpha = j.at("alpha").get<std::string>();
    r.N = j.at("N").get<int>();
    r.precision = j.at("precision").get<int>();
    const std::string status = j.at("status").get<std::string>();
    r.status = status == "CONVERGED" ? SolveStatus::Converged : SolveStatus::MaxIterations;
    r.tol = real_from(j.at("tol"));
    r.residual_norm = real_from(j.at("residual_norm"));
    r.kernel_degree = j.at("kernel_degree").get<int>();
    r.kernel_truncation_bound = real_from(j.at("kernel_truncation_bound"));
    r.working_dim = j.at("working_dim").get<int>();
    r.y_leg = LegVec<Real>(reals_from(j.at("y_leg")));
    r.y_mono = MonoVec<Real>(reals_from(j.at("y_mono")));
    r.tau_residual_legendre = reals_from(j.at("tau_residual_legendre"));
    for (const auto& s : j.at("newton_trace")) {
      r.newton_trace.push_back(NewtonStep{s.at("iteration").get<int>(), real_from(s.at("residual_norm")),
                                          real_from(s.at("step_norm")), real_from(s.at("damping"))});
    }
    if (!j.at("errors_vs_exact").is_null()) {
      const auto& e = j.at("errors_vs_exact");
      ErrorReport er;
      er.l2 = real_from(e.at("l2"));
      er.linf = real_from(e.at("linf"));
      er.h1 = real_from(e.at("h1"));
      er.argmax = real_from(e.at("argmax"));
      for (const auto& s : e.at("seminorms")) er.seminorms.emplace_back(s.at("k").get<int>(), real_from(s.at("value")));
      r.errors_vs_exact = er;
    }
    const auto& f = j.at("flags");
    r.flags.truncation_loss = f.at("truncation_loss").get<bool>();
    r.flags.quadrature_warning = f.at("quadrature_warning").get<bool>();
    r.flags.messages = f.at("messages").get<std::vector<std::string>>();
    if (j.contains("runtime_seconds")) r.runtime_seconds = j.at("runtime_seconds").get<double>();
    return r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report JSON: ") + e.what());
  }
}

std::string solution_table_csv(const SolutionReport& r, const ProblemSpec& problem, int points) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "table needs at least 2 points");
  std::ostringstream out;
  out << "x,y_N,y_exact,abs_error\n";
  for (int i = 0; i < points; ++i) {
    Real x = Real(i) / (points - 1);
    Real y = r.y_leg.evaluate(x);
    out << num(x) << ',' << num(y) << ',';
    if (problem.exact) {
      Real e = problem.exact->value(x);
      out << num(e) << ',' << num(abs(y - e));
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_to_json(const ConvergenceReport& r, bool include_runtime) {
  ordered_json j;
  j["metric"] = to_string(r.metric);
  if (r.metric == SweepMetric::SelfReference) j["reference_N"] = r.reference_N;
  ordered_json rows = ordered_json::array();
  for (const SweepRow& row : r.rows) {
    ordered_json o{{"N", row.N}, {"status", row.status}, {"iterations", row.iterations}};
    o["value"] = row.value ? ordered_json(num(*row.value)) : ordered_json(nullptr);
    if (include_runtime) o["runtime_seconds"] = row.runtime_seconds;
    rows.push_back(o);
  }
  j["rows"] = rows;
  if (r.fit) {
    j["fit"] = {{"kind", r.fit->kind},
                {"rate", format_sci(r.fit->rate, 6)},
                {"correlation_linear", format_sci(r.fit->correlation_linear, 6)},
                {"correlation_log", format_sci(r.fit->correlation_log, 6)}};
  } else {
    j["fit"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string sweep_to_csv(const ConvergenceReport& r, bool include_runtime) {
  std::ostringstream out;
  out << "N," << to_string(r.metric) << ",status,iterations";
  if (include_runtime) out << ",runtime_seconds";
  out << '\n';
  for (const SweepRow& row : r.rows) {
    out << row.N << ',' << (row.value ? num(*row.value) : std::string()) << ',' << row.status << ','
        << row.iterations;
    if (include_runtime) out << ',' << row.runtime_seconds;
    out << '\n';
  }
  return out.str();
}

}  // namespace fide
