#pragma once

#include <string>

#include <mpfr.h>

#include "cyclekit/numeric.hpp"

namespace cyclekit {

/// Owning handle around an MPFR float. Every operation rounds to nearest;
/// binary operations produce a result at the larger of the two precisions.
class Real {
 public:
  explicit Real(mpfr_prec_t precision = 256);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real from(const BigInt& value, mpfr_prec_t precision);
  static Real from(const ExactRatio& value, mpfr_prec_t precision);
  static Real from(long value, mpfr_prec_t precision);
  static Real from(double value, mpfr_prec_t precision);

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  /// Same value rounded to a new precision.
  Real rounded(mpfr_prec_t precision) const;

  double to_double() const;
  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
  long exponent() const { return mpfr_get_exp(value_); }

  /// Fixed-point rendering with exactly `decimals` digits after the point.
  std::string fixed(int decimals) const;
  /// Scientific rendering with `digits` significant digits.
  std::string scientific(int digits) const;

 private:
  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);

Real abs(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
/// Correctly rounded ln(q) for q > 0.
Real log(const ExactRatio& q, mpfr_prec_t precision);

/// 2^e at the given precision.
Real power_of_two(long e, mpfr_prec_t precision);

}  // namespace cyclekit
