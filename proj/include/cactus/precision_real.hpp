#pragma once

#include <mpfr.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace cactus {

using BigInt = boost::multiprecision::cpp_int;

/// Mantissa precision (bits) used for newly computed values on this thread.
long working_precision();
void set_working_precision(long bits);

/// Precision floor taken from CACTUS_PRECISION_FLOOR, default 128.
long precision_floor();
/// Largest precision escalation ever attempts.
constexpr long kPrecisionCeiling = 4096;

class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

/// Binary real m * 2^e with an MPFR mantissa m in [1/2, 1) (or zero) and an
/// unbounded exponent, plus a bound on the absolute error expressed in units
/// of 2^e. The exponent is a big integer because the embedding radii shrink
/// doubly exponentially with depth.
class PrecisionReal {
 public:
  PrecisionReal();
  PrecisionReal(long v);  // NOLINT: exact small integers are convenient
  PrecisionReal(const PrecisionReal& o);
  PrecisionReal(PrecisionReal&& o) noexcept;
  PrecisionReal& operator=(const PrecisionReal& o);
  PrecisionReal& operator=(PrecisionReal&& o) noexcept;
  ~PrecisionReal();

  static PrecisionReal from_double(double v);
  /// num/den rounded at working precision.
  static PrecisionReal ratio(long num, long den);
  static PrecisionReal pi();
  /// Exact value of an mpfr number (copied at its own precision).
  static PrecisionReal from_mpfr(const mpfr_t v);

  bool is_exact_zero() const { return mpfr_zero_p(m_) && err_ == 0; }
  /// Nominal value is zero (error may be nonzero).
  bool mantissa_zero() const { return mpfr_zero_p(m_); }
  /// Sign if certified by the error bound, nullopt otherwise.
  std::optional<int> sign() const;
  /// Certified |x| > 0.
  bool certified_nonzero() const { return sign().value_or(0) != 0; }

  const BigInt& exponent() const { return e_; }
  long double error_units() const { return err_; }
  /// Error bound relative to the nominal magnitude (inf for zero mantissa).
  long double relative_error() const;
  long mantissa_precision() const { return mpfr_get_prec(m_); }

  /// Approximate log2 |x|; -inf for zero mantissa.
  double log2_abs() const;
  /// Approximate log2 of the absolute error bound.
  double log2_error() const;
  /// Nominal value as double if representable without underflow.
  double to_double() const;
  /// Writes the nominal value into out (rounded to out's precision); false if
  /// the exponent is outside MPFR's range.
  bool to_mpfr(mpfr_t out) const;

  /// Decimal rendering; values outside MPFR's exponent range are written as
  /// "<mantissa>*2^<exponent>".
  std::string to_decimal(int digits) const;
  /// Exact, canonical text of the nominal value and error (for identity checks).
  std::string canonical() const;

  PrecisionReal operator-() const;
  PrecisionReal abs() const;

  friend PrecisionReal operator+(const PrecisionReal& a, const PrecisionReal& b);
  friend PrecisionReal operator-(const PrecisionReal& a, const PrecisionReal& b);
  friend PrecisionReal operator*(const PrecisionReal& a, const PrecisionReal& b);
  friend PrecisionReal operator/(const PrecisionReal& a, const PrecisionReal& b);
  PrecisionReal& operator+=(const PrecisionReal& b) { return *this = *this + b; }
  PrecisionReal& operator-=(const PrecisionReal& b) { return *this = *this - b; }
  PrecisionReal& operator*=(const PrecisionReal& b) { return *this = *this * b; }

  /// Exact multiplication by 2^k.
  friend PrecisionReal ldexp(const PrecisionReal& a, long k);
  /// Adds an extra absolute error of `bound` (given as a value) to a.
  friend PrecisionReal widen(const PrecisionReal& a, const PrecisionReal& bound);

  friend PrecisionReal sqrt(const PrecisionReal& a);
  friend PrecisionReal sin(const PrecisionReal& a);
  friend PrecisionReal cos(const PrecisionReal& a);
  /// 1 - cos(a), accurate for tiny a.
  friend PrecisionReal one_minus_cos(const PrecisionReal& a);
  friend PrecisionReal asin(const PrecisionReal& a);

  /// Exact dyadic with `bits` mantissa bits that is certified <= a; a must be
  /// certified positive.
  friend PrecisionReal round_down(const PrecisionReal& a, long bits);
  /// Nominal minimum/maximum (deterministic even when undecided).
  friend const PrecisionReal& nominal_min(const PrecisionReal& a, const PrecisionReal& b);
  friend const PrecisionReal& nominal_max(const PrecisionReal& a, const PrecisionReal& b);
  /// Three-way comparison of nominal values, ignoring error bounds.
  friend int nominal_cmp(const PrecisionReal& a, const PrecisionReal& b);
  /// Exact equality of nominal values.
  friend bool same_nominal(const PrecisionReal& a, const PrecisionReal& b);

 private:
  static PrecisionReal elementary_(const PrecisionReal& a, int fn);
  void normalize();

  mpfr_t m_;
  BigInt e_;
  long double err_ = 0;
};

/// Certified sign of a - b, nullopt when the error bounds overlap.
std::optional<int> compare(const PrecisionReal& a, const PrecisionReal& b);

}  // namespace cactus
