#ifndef ISOCALC_CORE_REAL_HPP_
#define ISOCALC_CORE_REAL_HPP_

#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace isocalc {

/// Working precision measured in decimal digits.
///
/// Every public computation takes a Precision; internally it is widened by
/// kGuardDigits before any evaluation happens.
class Precision {
 public:
  static constexpr int kGuardDigits = 10;
  static constexpr int kDefaultDigits = 64;

  constexpr Precision() = default;
  explicit constexpr Precision(int digits) : digits_(digits) {}

  constexpr int digits() const { return digits_; }
  mpfr_prec_t bits() const;

  constexpr Precision plus(int extra) const { return Precision(digits_ + extra); }
  constexpr Precision guarded() const { return plus(kGuardDigits); }

  static Precision from_bits(mpfr_prec_t bits);

  friend constexpr auto operator<=>(Precision, Precision) = default;

 private:
  int digits_ = kDefaultDigits;
};

/// Arbitrary precision real number (RAII owner of an mpfr_t).
///
/// Arithmetic between two values runs at the larger of the two precisions.
/// Assignment adopts the precision of the right-hand side.
class Real {
 public:
  explicit Real(Precision p = Precision());
  Real(long value, Precision p);
  Real(double value, Precision p);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parses a decimal literal; throws std::invalid_argument on malformed text.
  static Real parse(std::string_view text, Precision p);
  static Real pi(Precision p);
  static Real euler_e(Precision p);

  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }
  Precision precision() const { return Precision::from_bits(bits()); }
  Real at(Precision p) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Decimal rendering truncated (toward zero) to `significant` digits.
  std::string to_decimal(int significant) const;
  /// Scientific rendering rounded away from zero, for error bounds.
  std::string to_scientific(int significant) const;
  /// Decimal exponent e with 10^(e-1) <= |x| < 10^e; 0 for zero.
  long decimal_exponent() const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  Real operator-() const;

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
  friend Real operator+(Real lhs, long rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, long rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, long rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, long rhs) { return lhs /= rhs; }
  friend Real operator+(long lhs, Real rhs) { return rhs += lhs; }
  friend Real operator*(long lhs, Real rhs) { return rhs *= lhs; }
  friend Real operator-(long lhs, const Real& rhs);
  friend Real operator/(long lhs, const Real& rhs);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b);

 private:
  void widen_to(const Real& other);

  mpfr_t value_;
};

Real abs(Real x);
Real log(const Real& x);
Real log1p(const Real& x);
Real exp(const Real& x);
Real sqrt(const Real& x);
Real pow(const Real& x, unsigned long n);
Real max(const Real& a, const Real& b);

/// 10^exponent at precision p.
Real pow10(long exponent, Precision p);

}  // namespace isocalc

#endif  // ISOCALC_CORE_REAL_HPP_
