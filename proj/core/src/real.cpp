#include "cyclekit/real.hpp"

#include <algorithm>
#include <stdexcept>

namespace cyclekit {

Real::Real(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from(const BigInt& value, mpfr_prec_t precision) {
  Real out(precision);
  mpfr_set_z(out.value_, value.get_mpz_t(), MPFR_RNDN);
  return out;
}

Real Real::from(const ExactRatio& value, mpfr_prec_t precision) {
  Real out(precision);
  mpfr_set_q(out.value_, value.get_mpq_t(), MPFR_RNDN);
  return out;
}

Real Real::from(long value, mpfr_prec_t precision) {
  Real out(precision);
  mpfr_set_si(out.value_, value, MPFR_RNDN);
  return out;
}

Real Real::from(double value, mpfr_prec_t precision) {
  Real out(precision);
  mpfr_set_d(out.value_, value, MPFR_RNDN);
  return out;
}

Real Real::rounded(mpfr_prec_t precision) const {
  Real out(precision);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string Real::fixed(int decimals) const {
  char* buffer = nullptr;
  if (mpfr_asprintf(&buffer, "%.*RNf", decimals, value_) < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

std::string Real::scientific(int digits) const {
  char* buffer = nullptr;
  if (mpfr_asprintf(&buffer, "%.*RNe", std::max(digits - 1, 0), value_) < 0) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

namespace {

template <class Op>
Real binary(const Real& a, const Real& b, Op op) {
  Real out(std::max(a.precision(), b.precision()));
  op(out.get(), a.get(), b.get(), MPFR_RNDN);
  return out;
}

}  // namespace

Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

Real operator-(const Real& a) {
  Real out(a.precision());
  mpfr_neg(out.get(), a.get(), MPFR_RNDN);
  return out;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }

Real abs(const Real& x) {
  Real out(x.precision());
  mpfr_abs(out.get(), x.get(), MPFR_RNDN);
  return out;
}

Real log(const Real& x) {
  Real out(x.precision());
  mpfr_log(out.get(), x.get(), MPFR_RNDN);
  return out;
}

Real exp(const Real& x) {
  Real out(x.precision());
  mpfr_exp(out.get(), x.get(), MPFR_RNDN);
  return out;
}

Real log(const ExactRatio& q, mpfr_prec_t precision) {
  if (sgn(q) <= 0) throw std::domain_error("log of a non-positive ratio");
  // Two roundings (the quotient at precision + 32 bits, then the log) keep
  // the total error below one ulp of the result.
  const mpfr_prec_t guard = precision + 32;
  Real q_real = Real::from(q, guard);
  Real out(precision);
  mpfr_log(out.get(), q_real.get(), MPFR_RNDN);
  return out;
}

Real power_of_two(long e, mpfr_prec_t precision) {
  Real out(precision);
  mpfr_set_ui_2exp(out.get(), 1, e, MPFR_RNDN);
  return out;
}

}  // namespace cyclekit
