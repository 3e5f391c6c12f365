#include "core/real.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace isocalc {

namespace {

constexpr double kBitsPerDigit = 3.3219280948873623;  // log2(10)

struct MpfrString {
  char* text = nullptr;
  ~MpfrString() {
    if (text != nullptr) mpfr_free_str(text);
  }
};

// Digits of |x| (no sign) plus decimal exponent, x = 0.d1d2... * 10^exp.
std::pair<std::string, long> decimal_digits(mpfr_srcptr x, int significant, mpfr_rnd_t rnd) {
  mpfr_exp_t exponent = 0;
  MpfrString s;
  s.text = mpfr_get_str(nullptr, &exponent, 10, static_cast<size_t>(significant), x, rnd);
  if (s.text == nullptr) throw std::runtime_error("mpfr_get_str failed");
  std::string digits(s.text);
  if (!digits.empty() && digits.front() == '-') digits.erase(0, 1);
  return {digits, static_cast<long>(exponent)};
}

}  // namespace

mpfr_prec_t Precision::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(digits_ * kBitsPerDigit)) + 8;
}

Precision Precision::from_bits(mpfr_prec_t bits) {
  return Precision(static_cast<int>(std::floor(static_cast<double>(bits - 8) / kBitsPerDigit)));
}

Real::Real(Precision p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Precision p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(double value, Precision p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::parse(std::string_view text, Precision p) {
  std::string owned(text);
  Real r(p);
  char* end = nullptr;
  if (!owned.empty()) mpfr_strtofr(r.value_, owned.c_str(), &end, 10, MPFR_RNDN);
  if (end == nullptr || end == owned.c_str() || *end != '\0' || !r.is_finite()) {
    throw std::invalid_argument("not a decimal number: '" + owned + "'");
  }
  return r;
}

Real Real::pi(Precision p) {
  Real r(p);
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

Real Real::euler_e(Precision p) {
  Real one(1L, p);
  return exp(one);
}

Real Real::at(Precision p) const {
  Real r(p);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

std::string Real::to_decimal(int significant) const {
  if (significant < 1) throw std::invalid_argument("significant digits must be >= 1");
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";

  auto [digits, exponent] = decimal_digits(value_, significant, MPFR_RNDZ);
  std::string out = sign() < 0 ? "-" : "";
  const long n = static_cast<long>(digits.size());
  if (exponent <= -6 || exponent > 24) {
    out += digits.substr(0, 1);
    if (n > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(exponent - 1);
  } else if (exponent <= 0) {
    out += "0." + std::string(static_cast<size_t>(-exponent), '0') + digits;
  } else if (exponent < n) {
    out += digits.substr(0, static_cast<size_t>(exponent)) + "." + digits.substr(static_cast<size_t>(exponent));
  } else {
    out += digits + std::string(static_cast<size_t>(exponent - n), '0');
  }
  return out;
}

std::string Real::to_scientific(int significant) const {
  if (significant < 1) throw std::invalid_argument("significant digits must be >= 1");
  if (!is_finite()) return to_decimal(1);
  if (is_zero()) return "0";
  auto [digits, exponent] = decimal_digits(value_, significant, MPFR_RNDA);
  std::string out = sign() < 0 ? "-" : "";
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(exponent - 1);
  return out;
}

long Real::decimal_exponent() const {
  if (is_zero() || !is_finite()) return 0;
  return decimal_digits(value_, 2, MPFR_RNDZ).second;
}

void Real::widen_to(const Real& other) {
  if (other.bits() > bits()) mpfr_prec_round(value_, other.bits(), MPFR_RNDN);
}

Real& Real::operator+=(const Real& rhs) {
  widen_to(rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  widen_to(rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  widen_to(rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  widen_to(rhs);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

Real operator-(long lhs, const Real& rhs) {
  Real r(rhs.precision());
  mpfr_set_prec(r.value_, rhs.bits());
  mpfr_si_sub(r.value_, lhs, rhs.value_, MPFR_RNDN);
  return r;
}

Real operator/(long lhs, const Real& rhs) {
  Real r(rhs.precision());
  mpfr_set_prec(r.value_, rhs.bits());
  mpfr_si_div(r.value_, lhs, rhs.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

Real abs(Real x) {
  mpfr_abs(x.get(), x.get(), MPFR_RNDN);
  return x;
}

Real log(const Real& x) {
  Real r(x);
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log1p(const Real& x) {
  Real r(x);
  mpfr_log1p(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x);
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x);
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, unsigned long n) {
  Real r(x);
  mpfr_pow_ui(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pow10(long exponent, Precision p) {
  Real r(p);
  mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent), MPFR_RNDN);
  if (exponent < 0) mpfr_ui_div(r.get(), 1, r.get(), MPFR_RNDN);
  return r;
}

}  // namespace isocalc
