#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

namespace fide {

/// Run-precision real. Precision is taken from the global setting at
/// construction time.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

inline constexpr int kMinPrecision = 30;
inline constexpr int kDefaultPrecision = 50;
/// Extra decimal digits carried internally on top of the requested precision.
inline constexpr int kGuardDigits = 20;

/// Sets the requested decimal precision p (>= 30). Reals created afterwards
/// carry p + kGuardDigits digits.
void set_precision(int digits);
int precision() noexcept;
/// p + kGuardDigits + extra_digits().
int working_digits() noexcept;
int extra_digits() noexcept;

/// Sets the extra working digits for its lifetime and restores the previous
/// value on exit. Process-wide, like the precision itself.
class WorkingDigitsScope {
 public:
  explicit WorkingDigitsScope(int extra);
  ~WorkingDigitsScope();
  WorkingDigitsScope(const WorkingDigitsScope&) = delete;
  WorkingDigitsScope& operator=(const WorkingDigitsScope&) = delete;

 private:
  int previous_;
};

/// 10^(-k) at working precision.
Real ten_to_minus(int k);
Real ten_to_minus(const Real& k);

Real pi();
Real to_real(const Rational& r);
Real to_real(std::string_view text);

Rational factorial(int n);

/// Parses "3", "-7/10", "0.25", "1e-3" as an exact rational.
Rational parse_rational(std::string_view text);

/// Scientific notation with `significant` significant digits.
std::string format_sci(const Real& value, int significant);
/// Scientific notation with the full requested precision.
std::string format_sci(const Real& value);
std::string format_rational(const Rational& value);

bool is_integer(const Rational& r);

template <class T>
T from_rational(const Rational& r);

template <>
inline Rational from_rational<Rational>(const Rational& r) {
  return r;
}

template <>
inline Real from_rational<Real>(const Rational& r) {
  return to_real(r);
}

inline bool is_zero(const Real& v) { return v.is_zero(); }
inline bool is_zero(const Rational& v) { return v.is_zero(); }

}  // namespace fide
