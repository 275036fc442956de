#include "cactus/precision_real.hpp"

#include "cactus/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace cactus {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::EdgeInTwoCycles: return "EdgeInTwoCycles";
    case ErrorKind::CutVertexSplitsThreeWays: return "CutVertexSplitsThreeWays";
    case ErrorKind::UnknownRootCycle: return "UnknownRootCycle";
    case ErrorKind::EmptyItemList: return "EmptyItemList";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::PositionCollision: return "PositionCollision";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::DegenerateSegment: return "DegenerateSegment";
    case ErrorKind::MalformedBits: return "MalformedBits";
    case ErrorKind::IncompatibleParams: return "IncompatibleParams";
    case ErrorKind::Stuck: return "Stuck";
    case ErrorKind::HopLimitExceeded: return "HopLimitExceeded";
    case ErrorKind::InfeasibleShape: return "InfeasibleShape";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace {

// Exponent shifts below this are treated as "negligible" and folded into the
// error bound; long double cannot go much lower anyway.
constexpr long kFloorShift = -16000;
// Slack applied to every error bound to absorb rounding in the long double
// error arithmetic itself.
constexpr long double kErrSlack = 1.0L + 0x1p-40L;

thread_local long tl_precision = 0;

void ensure_mpfr_range() {
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    done = true;
  }
}

long clamp_shift(const BigInt& d) {
  if (d < kFloorShift) return kFloorShift - 1;
  if (d > 1000000) return 1000000;
  return d.convert_to<long>();
}

long double small_term(long shift, long double err) {
  // (1 + err) * 2^shift, rounded up; shift may be below the floor.
  if (shift < kFloorShift) shift = kFloorShift;
  return std::ldexp(1.0L + err, static_cast<int>(shift)) * kErrSlack;
}

long double abs_ld(const mpfr_t m) { return std::fabs(mpfr_get_ld(m, MPFR_RNDU)); }

}  // namespace

long working_precision() {
  if (tl_precision == 0) tl_precision = precision_floor();
  return tl_precision;
}

void set_working_precision(long bits) {
  if (bits < 32) bits = 32;
  tl_precision = bits;
}

long precision_floor() {
  static const long floor = [] {
    long v = 128;
    if (const char* s = std::getenv("CACTUS_PRECISION_FLOOR")) {
      char* end = nullptr;
      long parsed = std::strtol(s, &end, 10);
      if (end != s && parsed >= 32 && parsed <= kPrecisionCeiling) v = parsed;
    }
    return v;
  }();
  return floor;
}

PrecisionScope::PrecisionScope(long bits) : saved_(working_precision()) {
  set_working_precision(bits);
}
PrecisionScope::~PrecisionScope() { set_working_precision(saved_); }

PrecisionReal::PrecisionReal() {
  ensure_mpfr_range();
  mpfr_init2(m_, working_precision());
  mpfr_set_zero(m_, 1);
}

PrecisionReal::PrecisionReal(long v) {
  ensure_mpfr_range();
  mpfr_init2(m_, std::max<long>(64, working_precision()));
  mpfr_set_si(m_, v, MPFR_RNDN);
  normalize();
}

PrecisionReal::PrecisionReal(const PrecisionReal& o) : e_(o.e_), err_(o.err_) {
  mpfr_init2(m_, mpfr_get_prec(o.m_));
  mpfr_set(m_, o.m_, MPFR_RNDN);
}

PrecisionReal::PrecisionReal(PrecisionReal&& o) noexcept : e_(std::move(o.e_)), err_(o.err_) {
  mpfr_init2(m_, mpfr_get_prec(o.m_));
  mpfr_swap(m_, o.m_);
}

PrecisionReal& PrecisionReal::operator=(const PrecisionReal& o) {
  if (this != &o) {
    if (mpfr_get_prec(m_) != mpfr_get_prec(o.m_)) mpfr_set_prec(m_, mpfr_get_prec(o.m_));
    mpfr_set(m_, o.m_, MPFR_RNDN);
    e_ = o.e_;
    err_ = o.err_;
  }
  return *this;
}

PrecisionReal& PrecisionReal::operator=(PrecisionReal&& o) noexcept {
  if (this != &o) {
    mpfr_swap(m_, o.m_);
    e_.swap(o.e_);
    err_ = o.err_;
  }
  return *this;
}

PrecisionReal::~PrecisionReal() { mpfr_clear(m_); }

void PrecisionReal::normalize() {
  if (mpfr_zero_p(m_)) {
    err_ *= kErrSlack;
    return;
  }
  mpfr_exp_t k = mpfr_get_exp(m_);
  if (k != 0) {
    mpfr_set_exp(m_, 0);
    e_ += k;
    err_ = std::ldexp(err_, static_cast<int>(std::max<long>(-20000, std::min<long>(20000, -k))));
  }
  err_ *= kErrSlack;
}

PrecisionReal PrecisionReal::from_double(double v) {
  PrecisionReal r;
  mpfr_set_prec(r.m_, std::max<long>(53, working_precision()));
  mpfr_set_d(r.m_, v, MPFR_RNDN);
  r.normalize();
  return r;
}

PrecisionReal PrecisionReal::ratio(long num, long den) {
  PrecisionReal r;
  int t = mpfr_set_si(r.m_, num, MPFR_RNDN);
  t |= mpfr_div_si(r.m_, r.m_, den, MPFR_RNDN);
  r.normalize();
  if (t != 0) r.err_ += std::ldexp(1.0L, -static_cast<int>(mpfr_get_prec(r.m_)));
  return r;
}

PrecisionReal PrecisionReal::pi() {
  PrecisionReal r;
  mpfr_const_pi(r.m_, MPFR_RNDN);
  r.normalize();
  r.err_ += std::ldexp(1.0L, -static_cast<int>(mpfr_get_prec(r.m_)));
  return r;
}

PrecisionReal PrecisionReal::from_mpfr(const mpfr_t v) {
  ensure_mpfr_range();
  PrecisionReal r;
  mpfr_set_prec(r.m_, mpfr_get_prec(v));
  mpfr_set(r.m_, v, MPFR_RNDN);
  r.normalize();
  return r;
}

std::optional<int> PrecisionReal::sign() const {
  if (mpfr_zero_p(m_)) {
    if (err_ == 0) return 0;
    return std::nullopt;
  }
  if (abs_ld(m_) > err_) return mpfr_sgn(m_) > 0 ? 1 : -1;
  return std::nullopt;
}

long double PrecisionReal::relative_error() const {
  if (mpfr_zero_p(m_)) return err_ == 0 ? 0 : std::numeric_limits<long double>::infinity();
  return err_ / abs_ld(m_);
}

double PrecisionReal::log2_abs() const {
  if (mpfr_zero_p(m_)) return -std::numeric_limits<double>::infinity();
  return std::log2(std::fabs(mpfr_get_d(m_, MPFR_RNDN))) + e_.convert_to<double>();
}

double PrecisionReal::log2_error() const {
  if (err_ == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(std::log2(err_)) + e_.convert_to<double>();
}

double PrecisionReal::to_double() const {
  if (mpfr_zero_p(m_)) return 0.0;
  if (e_ < -1070 || e_ > 1020) return e_ < 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::ldexp(mpfr_get_d(m_, MPFR_RNDN), e_.convert_to<int>());
}

bool PrecisionReal::to_mpfr(mpfr_t out) const {
  ensure_mpfr_range();
  if (mpfr_zero_p(m_)) {
    mpfr_set_zero(out, 1);
    return true;
  }
  if (e_ < mpfr_get_emin() + 2 || e_ > mpfr_get_emax() - 2) return false;
  mpfr_mul_2si(out, m_, e_.convert_to<long>(), MPFR_RNDN);
  return true;
}

std::string PrecisionReal::to_decimal(int digits) const {
  ensure_mpfr_range();
  if (digits < 2) digits = 2;
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(m_));
  std::string out;
  char* buf = nullptr;
  if (mpfr_zero_p(m_)) {
    out = "0";
  } else if (e_ > -(1L << 40) && e_ < (1L << 40)) {
    mpfr_mul_2si(t, m_, e_.convert_to<long>(), MPFR_RNDN);
    mpfr_asprintf(&buf, "%.*Re", digits - 1, t);
    out = buf;
    mpfr_free_str(buf);
  } else {
    mpfr_asprintf(&buf, "%.*Re", digits - 1, m_);
    out = std::string(buf) + "*2^" + e_.str();
    mpfr_free_str(buf);
  }
  mpfr_clear(t);
  return out;
}

std::string PrecisionReal::canonical() const {
  std::ostringstream os;
  if (mpfr_zero_p(m_)) {
    os << "0";
  } else {
    mpfr_exp_t ex = 0;
    char* s = mpfr_get_str(nullptr, &ex, 16, 0, m_, MPFR_RNDN);
    os << s << "@" << ex << "p" << e_.str();
    mpfr_free_str(s);
  }
  char eb[64];
  std::snprintf(eb, sizeof eb, "%La", err_);
  os << "~" << eb;
  return os.str();
}

PrecisionReal PrecisionReal::operator-() const {
  PrecisionReal r(*this);
  mpfr_neg(r.m_, r.m_, MPFR_RNDN);
  return r;
}

PrecisionReal PrecisionReal::abs() const {
  PrecisionReal r(*this);
  mpfr_abs(r.m_, r.m_, MPFR_RNDN);
  return r;
}

PrecisionReal operator+(const PrecisionReal& a, const PrecisionReal& b) {
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const long p = working_precision();
  const PrecisionReal& hi = a.e_ >= b.e_ ? a : b;
  const PrecisionReal& lo = a.e_ >= b.e_ ? b : a;
  long shift = clamp_shift(lo.e_ - hi.e_);
  PrecisionReal r;
  if (mpfr_get_prec(r.m_) != p) mpfr_set_prec(r.m_, p);
  r.e_ = hi.e_;
  int inexact = 0;
  if (shift < -(p + 64) || mpfr_zero_p(lo.m_)) {
    inexact = mpfr_set(r.m_, hi.m_, MPFR_RNDN);
    r.err_ = hi.err_ + (mpfr_zero_p(lo.m_) ? std::ldexp(lo.err_, static_cast<int>(std::max(shift, kFloorShift)))
                                           : small_term(shift, lo.err_));
  } else {
    inexact = mpfr_mul_2si(r.m_, lo.m_, shift, MPFR_RNDN);
    inexact |= mpfr_add(r.m_, r.m_, hi.m_, MPFR_RNDN);
    r.err_ = hi.err_ + std::ldexp(lo.err_, static_cast<int>(shift));
    // Rounding of the shifted low operand is covered by the final-op bound
    // only when exact; add one ulp of the shifted operand otherwise.
    if (inexact) r.err_ += std::ldexp(1.0L, -static_cast<int>(p) + 1);
  }
  r.normalize();
  if (inexact) r.err_ += std::ldexp(1.0L, -static_cast<int>(p));
  return r;
}

PrecisionReal operator-(const PrecisionReal& a, const PrecisionReal& b) { return a + (-b); }

PrecisionReal operator*(const PrecisionReal& a, const PrecisionReal& b) {
  const long p = working_precision();
  PrecisionReal r;
  if (mpfr_get_prec(r.m_) != p) mpfr_set_prec(r.m_, p);
  int inexact = mpfr_mul(r.m_, a.m_, b.m_, MPFR_RNDN);
  r.e_ = a.e_ + b.e_;
  long double ma = abs_ld(a.m_), mb = abs_ld(b.m_);
  r.err_ = ma * b.err_ + mb * a.err_ + a.err_ * b.err_;
  r.normalize();
  if (inexact) r.err_ += std::ldexp(1.0L, -static_cast<int>(p));
  return r;
}

PrecisionReal operator/(const PrecisionReal& a, const PrecisionReal& b) {
  const long p = working_precision();
  long double mb = abs_ld(b.m_);
  if (!(mb > b.err_)) throw Error(ErrorKind::PrecisionExhausted, "division by a value not certified nonzero");
  PrecisionReal r;
  if (mpfr_get_prec(r.m_) != p) mpfr_set_prec(r.m_, p);
  int inexact = mpfr_div(r.m_, a.m_, b.m_, MPFR_RNDN);
  r.e_ = a.e_ - b.e_;
  long double ma = abs_ld(a.m_);
  r.err_ = (a.err_ + (ma / mb) * b.err_) / (mb - b.err_);
  r.normalize();
  if (inexact) r.err_ += std::ldexp(1.0L, -static_cast<int>(p));
  return r;
}

PrecisionReal ldexp(const PrecisionReal& a, long k) {
  PrecisionReal r(a);
  r.e_ += k;
  return r;
}

PrecisionReal widen(const PrecisionReal& a, const PrecisionReal& bound) {
  PrecisionReal r(a);
  if (bound.mantissa_zero() && bound.err_ == 0) return r;
  long double mag = abs_ld(bound.m_) + bound.err_;
  long shift = clamp_shift(bound.e_ - a.e_);
  if (shift > 16000) throw Error(ErrorKind::PrecisionExhausted, "error bound dwarfs value");
  r.err_ += std::ldexp(mag, static_cast<int>(std::max(shift, kFloorShift))) * kErrSlack;
  if (shift < kFloorShift) r.err_ += std::ldexp(1.0L, static_cast<int>(kFloorShift));
  return r;
}

PrecisionReal round_down(const PrecisionReal& a, long bits) {
  if (a.sign().value_or(0) <= 0) throw Error(ErrorKind::PrecisionExhausted, "round_down needs a certified positive value");
  PrecisionReal r;
  mpfr_set_prec(r.m_, bits);
  mpfr_t err;
  mpfr_init2(err, 80);
  mpfr_set_ld(err, a.err_ * kErrSlack, MPFR_RNDU);
  mpfr_sub(r.m_, a.m_, err, MPFR_RNDD);
  mpfr_clear(err);
  r.e_ = a.e_;
  r.err_ = 0;
  mpfr_exp_t k = mpfr_get_exp(r.m_);
  mpfr_set_exp(r.m_, 0);
  r.e_ += k;
  return r;
}

PrecisionReal sqrt(const PrecisionReal& a) {
  const long p = working_precision();
  long double ma = abs_ld(a.m_);
  if (mpfr_sgn(a.m_) < 0 && ma > a.err_) throw Error(ErrorKind::PrecisionExhausted, "sqrt of negative value");
  PrecisionReal r;
  if (mpfr_get_prec(r.m_) != p) mpfr_set_prec(r.m_, p);
  BigInt e = a.e_;
  long double em = a.err_;
  mpfr_t m;
  mpfr_init2(m, mpfr_get_prec(a.m_) + 1);
  mpfr_set(m, a.m_, MPFR_RNDN);
  if (boost::multiprecision::abs(e) % 2 == 1) {
    mpfr_mul_2si(m, m, 1, MPFR_RNDN);
    em *= 2;
    e -= 1;
  }
  long double mm = abs_ld(m);
  int inexact = 0;
  if (mpfr_sgn(m) > 0 && mm > em) {
    inexact = mpfr_sqrt(r.m_, m, MPFR_RNDN);
    long double s = std::sqrt(mm);
    r.err_ = em / (s + std::sqrt(mm - em));
  } else {
    // value in [-em, mm+em]; sqrt lies in [0, sqrt(mm+em)]
    mpfr_set_zero(r.m_, 1);
    r.err_ = std::sqrt(mm + em);
  }
  mpfr_clear(m);
  r.e_ = e / 2;
  r.normalize();
  if (inexact) r.err_ += std::ldexp(1.0L, -static_cast<int>(p));
  return r;
}

PrecisionReal PrecisionReal::elementary_(const PrecisionReal& a, int fn) {
  const bool is_asin = fn != 0;
  const long p = working_precision();
  if (a.mantissa_zero()) {
    PrecisionReal r(a);
    if (is_asin) r.err_ *= 1.2L;  // |asin x| <= 1.2|x| for |x| <= 1/2
    return r;
  }
  if (a.e_ > 4) throw Error(ErrorKind::InvalidInput, "argument too large for elementary function");
  long e = clamp_shift(a.e_);
  if (e < kFloorShift || 2 * e < -(p + 16)) {
    // sin x = x - x^3/6 + ..., asin x = x + x^3/6 + ...: relative truncation <= 2^(2e).
    PrecisionReal r(a);
    long double trunc = std::ldexp(1.0L, static_cast<int>(std::max<long>(2 * e, kFloorShift)));
    r.err_ = (r.err_ * (is_asin ? 1.2L : 1.0L) + trunc) * kErrSlack;
    return r;
  }
  mpfr_t x;
  mpfr_init2(x, mpfr_get_prec(a.m_));
  a.to_mpfr(x);
  PrecisionReal r;
  if (mpfr_get_prec(r.m_) != p) mpfr_set_prec(r.m_, p);
  long double deriv = 1.0L;
  int inexact = 0;
  if (!is_asin) {
    inexact = mpfr_sin(r.m_, x, MPFR_RNDN);
  } else {
    long double ax = std::fabs(mpfr_get_ld(x, MPFR_RNDU)) + std::ldexp(a.err_, static_cast<int>(e));
    if (ax >= 1.0L) {
      mpfr_clear(x);
      throw Error(ErrorKind::PrecisionExhausted, "asin argument not certified inside [-1,1]");
    }
    deriv = 1.0L / std::sqrt(1.0L - ax * ax);
    inexact = mpfr_asin(r.m_, x, MPFR_RNDN);
  }
  mpfr_clear(x);
  r.e_ = 0;
  r.normalize();
  long rel = clamp_shift(BigInt(e) - r.e_);
  if (rel > 16000) rel = 16000;
  r.err_ += std::ldexp(deriv * a.err_, static_cast<int>(std::max(rel, kFloorShift))) * kErrSlack;
  if (inexact) r.err_ += std::ldexp(1.0L, -static_cast<int>(p));
  return r;
}

PrecisionReal sin(const PrecisionReal& a) { return PrecisionReal::elementary_(a, 0); }
PrecisionReal asin(const PrecisionReal& a) { return PrecisionReal::elementary_(a, 1); }

PrecisionReal one_minus_cos(const PrecisionReal& a) {
  PrecisionReal s = sin(ldexp(a, -1));
  return ldexp(s * s, 1);
}

PrecisionReal cos(const PrecisionReal& a) { return PrecisionReal(1) - one_minus_cos(a); }

const PrecisionReal& nominal_min(const PrecisionReal& a, const PrecisionReal& b) {
  return nominal_cmp(a, b) <= 0 ? a : b;
}
const PrecisionReal& nominal_max(const PrecisionReal& a, const PrecisionReal& b) {
  return nominal_cmp(a, b) >= 0 ? a : b;
}

int nominal_cmp(const PrecisionReal& a, const PrecisionReal& b) {
  int sa = mpfr_sgn(a.m_), sb = mpfr_sgn(b.m_);
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  // same sign: compare exponents then mantissas
  int mag;
  if (a.e_ != b.e_) {
    mag = a.e_ < b.e_ ? -1 : 1;
  } else {
    int c = mpfr_cmpabs(a.m_, b.m_);
    mag = c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return sa > 0 ? mag : -mag;
}

bool same_nominal(const PrecisionReal& a, const PrecisionReal& b) {
  if (mpfr_zero_p(a.m_) && mpfr_zero_p(b.m_)) return true;
  return a.e_ == b.e_ && mpfr_equal_p(a.m_, b.m_);
}

std::optional<int> compare(const PrecisionReal& a, const PrecisionReal& b) { return (a - b).sign(); }

}  // namespace cactus
