#include "doctest.h"

#include "cactus/errors.hpp"
#include "cactus/precision_real.hpp"

#include <mpfr.h>

#include <random>

using cactus::PrecisionReal;

namespace {

// Reference value at 1024 bits, for arguments inside MPFR's normal range.
struct Ref {
  mpfr_t v;
  Ref() { mpfr_init2(v, 1024); }
  ~Ref() { mpfr_clear(v); }
};

// |x - ref| <= error bound of x
bool encloses(const PrecisionReal& x, const mpfr_t ref) {
  mpfr_t nx, d;
  mpfr_init2(nx, 1024);
  mpfr_init2(d, 1024);
  REQUIRE(x.to_mpfr(nx));
  mpfr_sub(d, nx, ref, MPFR_RNDN);
  mpfr_abs(d, d, MPFR_RNDN);
  long e2 = 0;
  double md = mpfr_zero_p(d) ? 0 : mpfr_get_d_2exp(&e2, d, MPFR_RNDN);
  bool ok = md == 0 || std::log2(std::fabs(md)) + static_cast<double>(e2) <= x.log2_error() + 1e-9;
  mpfr_clear(nx);
  mpfr_clear(d);
  return ok;
}

}  // namespace

TEST_CASE("exact integers and signs") {
  PrecisionReal a(5), b(-3);
  CHECK(a.sign() == 1);
  CHECK(b.sign() == -1);
  CHECK((a + b).to_double() == 2.0);
  CHECK((a * b).to_double() == -15.0);
  CHECK((a - a).sign() == 0);
  CHECK(compare(a, b) == 1);
}

TEST_CASE("arithmetic encloses high-precision reference") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    double x = U(rng), y = U(rng);
    if (std::fabs(y) < 1e-3) continue;
    PrecisionReal px = PrecisionReal::from_double(x) / PrecisionReal(3);
    PrecisionReal py = PrecisionReal::from_double(y) / PrecisionReal(7);
    Ref rx, ry, r;
    mpfr_set_d(rx.v, x, MPFR_RNDN);
    mpfr_div_si(rx.v, rx.v, 3, MPFR_RNDN);
    mpfr_set_d(ry.v, y, MPFR_RNDN);
    mpfr_div_si(ry.v, ry.v, 7, MPFR_RNDN);
    mpfr_add(r.v, rx.v, ry.v, MPFR_RNDN);
    CHECK(encloses(px + py, r.v));
    mpfr_mul(r.v, rx.v, ry.v, MPFR_RNDN);
    CHECK(encloses(px * py, r.v));
    mpfr_div(r.v, rx.v, ry.v, MPFR_RNDN);
    CHECK(encloses(px / py, r.v));
    mpfr_sin(r.v, rx.v, MPFR_RNDN);
    CHECK(encloses(sin(px), r.v));
    mpfr_cos(r.v, rx.v, MPFR_RNDN);
    mpfr_ui_sub(r.v, 1, r.v, MPFR_RNDN);
    CHECK(encloses(one_minus_cos(px), r.v));
    mpfr_abs(r.v, rx.v, MPFR_RNDN);
    mpfr_sqrt(r.v, r.v, MPFR_RNDN);
    CHECK(encloses(sqrt(px.abs()), r.v));
    if (std::fabs(x / 3) < 0.9) {
      mpfr_asin(r.v, rx.v, MPFR_RNDN);
      CHECK(encloses(asin(px), r.v));
    }
  }
}

TEST_CASE("cancellation is reflected in the error bound") {
  PrecisionReal third = PrecisionReal(1) / PrecisionReal(3);
  PrecisionReal z = (third * PrecisionReal(3)) - PrecisionReal(1);
  CHECK_FALSE(z.sign().has_value());
}

TEST_CASE("huge negative exponents") {
  PrecisionReal tiny = ldexp(PrecisionReal(3), -1000000000L);
  tiny = ldexp(tiny, -1000000000L);
  CHECK(tiny.sign() == 1);
  CHECK(tiny.log2_abs() == doctest::Approx(-2000000000.0 + std::log2(3.0)));
  // sin x ~ x, 1 - cos x ~ x^2/2 at this scale
  PrecisionReal s = sin(tiny);
  CHECK(compare(s, tiny) != 1);
  CHECK(s.relative_error() < 1e-30);
  PrecisionReal omc = one_minus_cos(tiny);
  PrecisionReal expect = ldexp(tiny * tiny, -1);
  CHECK(std::fabs(omc.log2_abs() - expect.log2_abs()) < 1e-12);
  // 1 + tiny rounds to 1 but the difference is still tracked in the bound
  PrecisionReal one = PrecisionReal(1) + tiny;
  CHECK(compare(one, PrecisionReal(1)) != -1);
  // products of two tiny numbers keep full relative precision
  PrecisionReal q = (tiny * tiny) / tiny;
  CHECK(q.relative_error() < 1e-30);
  CHECK(std::fabs(q.log2_abs() - tiny.log2_abs()) < 1e-12);
  PrecisionReal r = sqrt(tiny * tiny);
  CHECK(std::fabs(r.log2_abs() - tiny.log2_abs()) < 1e-12);
  CHECK(compare(tiny, ldexp(tiny, -1)) == 1);
}

TEST_CASE("precision scope escalates mantissa width") {
  PrecisionReal a, b;
  {
    cactus::PrecisionScope scope(512);
    a = PrecisionReal(1) / PrecisionReal(3);
  }
  b = PrecisionReal(1) / PrecisionReal(3);
  CHECK(a.mantissa_precision() == 512);
  CHECK(a.relative_error() < b.relative_error());
}

TEST_CASE("division by an uncertified value throws") {
  PrecisionReal third = PrecisionReal(1) / PrecisionReal(3);
  PrecisionReal z = third * PrecisionReal(3) - PrecisionReal(1);
  CHECK_THROWS_AS(PrecisionReal(1) / z, cactus::Error);
}
