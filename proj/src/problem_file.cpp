#include "fide/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "fide/analysis.hpp"
#include "fide/error.hpp"

namespace fide {
namespace {

#include "bundled_problems.inc"

struct Entry {
  std::string value;
  int line = 0;
  int value_column = 0;
  int key_column = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = a;
  return std::string(s.substr(a, b - a));
}

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"problem", {"name", "alpha", "lambda", "q"}},
      {"kernel", {"k", "degree"}},
      {"source", {"f", "manufactured"}},
      {"initial", {}},
      {"exact", {"y"}},
  };
  return s;
}

bool valid_initial_key(const std::string& k) {
  if (k.size() < 2 || k[0] != 'd') return false;
  for (std::size_t i = 1; i < k.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(k[i]))) return false;
  return k.size() < 5;
}

std::map<std::string, Section> split(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::size_t lead = 0;
    std::string line = trim(raw, &lead);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const int col = static_cast<int>(lead) + 1;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no, col);
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().count(current)) throw ParseError("unknown section [" + current + "]", line_no, col);
      if (sections.count(current)) throw ParseError("duplicate section [" + current + "]", line_no, col);
      sections[current];
    } else {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, col);
      if (current.empty()) throw ParseError("entry outside of any section", line_no, col);
      std::string key = trim(std::string_view(line).substr(0, eq));
      std::size_t vlead = 0;
      std::string value = trim(std::string_view(line).substr(eq + 1), &vlead);
      const auto& allowed = schema().at(current);
      bool known = current == "initial" ? valid_initial_key(key)
                                        : std::find(allowed.begin(), allowed.end(), key) != allowed.end();
      if (!known) throw ParseError("unknown key '" + key + "' in [" + current + "]", line_no, col);
      if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no, col + static_cast<int>(eq) + 1);
      Section& sec = sections[current];
      if (sec.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, col);
      sec[key] = Entry{value, line_no, col + static_cast<int>(eq + 1 + vlead), col};
    }
    if (end == text.size()) break;
  }
  return sections;
}

Expression expression_of(const Entry& e) { return Expression::parse(e.value, e.line, e.value_column); }

Rational rational_of(const Entry& e, const char* what) {
  Expression x = expression_of(e);
  auto r = x.rational_value();
  if (!r) throw ParseError(std::string(what) + " must be a rational constant", e.line, e.value_column);
  return *r;
}

}  // namespace

ProblemSpec parse_problem_text(std::string_view text) {
  auto sections = split(text);
  auto need = [&](const std::string& sec, const std::string& key) -> const Entry& {
    auto s = sections.find(sec);
    if (s == sections.end() || !s->second.count(key)) {
      throw Error(ErrorCode::ValidationError, "missing '" + key + "' in [" + sec + "]");
    }
    return s->second.at(key);
  };
  auto find = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto it = s->second.find(key);
    return it == s->second.end() ? nullptr : &it->second;
  };

  ProblemSpec p;
  if (const Entry* n = find("problem", "name")) p.name = n->value;
  {
    const Entry& a = need("problem", "alpha");
    Rational alpha = rational_of(a, "alpha");
    if (alpha <= 0) throw Error(ErrorCode::ValidationError, "alpha must be positive");
    p.alpha = FracOrder(alpha);
  }
  if (const Entry* l = find("problem", "lambda")) {
    p.lambda = expression_of(*l);
    if (!p.lambda.is_constant()) throw ParseError("lambda must be a constant", l->line, l->value_column);
  }
  if (const Entry* q = find("problem", "q")) {
    Rational r = rational_of(*q, "q");
    if (!is_integer(r) || r < 1 || r > 64) {
      throw Error(ErrorCode::ValidationError, "q must be an integer between 1 and 64");
    }
    p.q = boost::multiprecision::numerator(r).convert_to<int>();
  }

  {
    const Entry& k = need("kernel", "k");
    int degree = -1;
    if (const Entry* d = find("kernel", "degree")) {
      Rational r = rational_of(*d, "degree");
      if (!is_integer(r) || r < 0 || r > 512) throw Error(ErrorCode::ValidationError, "kernel degree out of range");
      degree = boost::multiprecision::numerator(r).convert_to<int>();
    }
    p.kernel = KernelSpec::from_expression(expression_of(k), degree);
  }

  if (sections.count("initial")) {
    const Section& init = sections.at("initial");
    std::map<int, Expression> by_index;
    for (const auto& [key, entry] : init) {
      Expression e = expression_of(entry);
      if (!e.is_constant()) throw ParseError("initial values must be constants", entry.line, entry.value_column);
      by_index.emplace(std::stoi(key.substr(1)), e);
    }
    int expect = 0;
    for (const auto& [i, e] : by_index) {
      if (i != expect) throw Error(ErrorCode::ValidationError, "initial values must be d0, d1, ... without gaps");
      p.init_values.push_back(e);
      ++expect;
    }
  }

  if (const Entry* y = find("exact", "y")) p.exact = ExactSolution::from_expression(expression_of(*y));

  const Entry* f = find("source", "f");
  const Entry* man = find("source", "manufactured");
  if (f && man) throw Error(ErrorCode::ValidationError, "[source] takes either f or manufactured, not both");
  if (f) {
    p.source = SourceSpec::from_expression(expression_of(*f));
  } else if (man) {
    if (man->value != "true" && man->value != "false") {
      throw ParseError("manufactured must be true or false", man->line, man->value_column);
    }
    if (man->value == "true") {
      if (!p.exact) throw Error(ErrorCode::ValidationError, "a manufactured source needs [exact] y");
      p.source = manufacture_source(*p.exact, p);
      p.source.manufactured = true;
    }
  }
  if (!p.source.pointwise && !p.source.manufactured) {
    throw Error(ErrorCode::ValidationError, "missing [source]");
  }
  p.validate();
  return p;
}

ProblemSpec parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

std::vector<std::string> bundled_problem_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : kBundledProblems) names.emplace_back(name);
  return names;
}

std::string bundled_problem_text(const std::string& name) {
  for (const auto& [n, text] : kBundledProblems)
    if (name == n) return text;
  throw Error(ErrorCode::InvalidArgument, "no bundled problem named '" + name + "'");
}

ProblemSpec bundled_problem(const std::string& name) { return parse_problem_text(bundled_problem_text(name)); }

ProblemSpec with_alpha(const ProblemSpec& problem, const Rational& alpha) {
  ProblemSpec p = problem;
  p.alpha = FracOrder(alpha);
  if (p.source.manufactured) {
    if (!p.exact) throw Error(ErrorCode::ValidationError, "a manufactured source needs an exact solution");
    p.source = manufacture_source(*p.exact, p);
  }
  p.validate();
  return p;
}

}  // namespace fide
