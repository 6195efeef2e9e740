#include "fide/scalar.hpp"

#include <atomic>
#include <cctype>
#include <sstream>

#include "fide/error.hpp"

namespace fide {
namespace {

std::atomic<int> g_precision{0};
std::atomic<int> g_extra{0};

void apply_default_precision() {
  Real::default_precision(static_cast<unsigned>(g_precision.load() + kGuardDigits + g_extra.load()));
}

int ensure_initialized() {
  int p = g_precision.load();
  if (p == 0) {
    set_precision(kDefaultPrecision);
    p = g_precision.load();
  }
  return p;
}

}  // namespace

void set_precision(int digits) {
  if (digits < kMinPrecision) {
    throw Error(ErrorCode::InvalidArgument,
                "precision must be at least " + std::to_string(kMinPrecision) + " digits, got " +
                    std::to_string(digits));
  }
  g_precision.store(digits);
  apply_default_precision();
}

int precision() noexcept { return ensure_initialized(); }

int working_digits() noexcept { return ensure_initialized() + kGuardDigits + g_extra.load(); }

int extra_digits() noexcept { return g_extra.load(); }

WorkingDigitsScope::WorkingDigitsScope(int extra) : previous_(g_extra.load()) {
  if (extra < 0) throw Error(ErrorCode::InvalidArgument, "extra digits must be non-negative");
  ensure_initialized();
  g_extra.store(extra);
  apply_default_precision();
}

WorkingDigitsScope::~WorkingDigitsScope() {
  g_extra.store(previous_);
  apply_default_precision();
}

Real ten_to_minus(int k) {
  ensure_initialized();
  return boost::multiprecision::pow(Real(10), Real(-k));
}

Real ten_to_minus(const Real& k) {
  ensure_initialized();
  return boost::multiprecision::pow(Real(10), -k);
}

Real pi() {
  ensure_initialized();
  return boost::multiprecision::acos(Real(-1));
}

Real to_real(const Rational& r) {
  ensure_initialized();
  return Real(r);
}

Real to_real(std::string_view text) {
  ensure_initialized();
  return Real(std::string(text));
}

Rational factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + s + "'");
  };
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den.is_zero()) return fail();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  Integer mantissa = 0;
  int scale = 0;
  bool digits = false;
  bool point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (point) ++scale;
      digits = true;
    } else if (c == '.' && !point) {
      point = true;
    } else {
      break;
    }
  }
  if (!digits) return fail();
  int exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') return fail();
    try {
      std::size_t used = 0;
      exponent = std::stoi(s.substr(pos + 1), &used);
      if (pos + 1 + used != s.size()) return fail();
    } catch (const std::exception&) {
      return fail();
    }
  }
  exponent -= scale;
  Rational value(mantissa);
  Integer ten = 10;
  Integer power = boost::multiprecision::pow(ten, static_cast<unsigned>(std::abs(exponent)));
  value = exponent >= 0 ? value * Rational(power) : value / Rational(power);
  return negative ? Rational(-value) : value;
}

std::string format_sci(const Real& value, int significant) {
  return value.str(significant - 1, std::ios_base::scientific);
}

std::string format_sci(const Real& value) { return format_sci(value, precision()); }

std::string format_rational(const Rational& value) { return value.str(); }

}  // namespace fide
