#ifndef ISOCALC_CORE_LOG_POWER_HPP_
#define ISOCALC_CORE_LOG_POWER_HPP_

#include <vector>

#include "core/real.hpp"

namespace isocalc {

enum class Direction { forward, backward };
enum class Fidelity { exact, approximate };

struct DerivativeKind {
  Direction direction;
  Fidelity fidelity;
};

/// coefficient * ln(x)^log_power / x^inverse_power
struct LogMonomial {
  long long coefficient;
  int log_power;
  int inverse_power;

  friend bool operator==(const LogMonomial&, const LogMonomial&) = default;
};

long long binomial(int n, int r);

/// Local unit-step derivatives of F(x) = (ln x)^k at integer points.
///
/// Exact derivatives are the true differences F(x+1) - F(x) and
/// F(x) - F(x-1), always evaluated in factored form. Approximate derivatives
/// replace ln(x+1) by ln x + 1/x (and ln(x-1) by ln x - 1/x), which is what
/// the substitution (1 + 1/x)^x = e yields:
///
///   forward:  (ln x + 1/x)^k - ln^k x = sum_j C(k,j) ln^(k-j) x / x^j
///   backward: ln^k x - (ln x - 1/x)^k = sum_j C(k,j) (-1)^(j+1) ln^(k-j) x / x^j
///
/// Backward variants need x >= 2; the one exception is the k = 1 approximate
/// backward derivative 1/x, which is defined at x = 1.
class LogPowerFamily {
 public:
  // Binomial coefficients stay within 64 bits up to here.
  static constexpr int kMaxK = 60;

  explicit LogPowerFamily(int k);

  int k() const { return k_; }

  Real exact_forward(long long x, Precision p = Precision()) const;
  Real exact_backward(long long x, Precision p = Precision()) const;
  Real approx_forward(long long x, Precision p = Precision()) const;
  Real approx_backward(long long x, Precision p = Precision()) const;

  // Same quantities through the power-difference route; used to validate
  // the binomial expansion.
  Real approx_forward_power_form(long long x, Precision p = Precision()) const;
  Real approx_backward_power_form(long long x, Precision p = Precision()) const;

  /// approx_forward - exact_forward; its sum over x >= 1 is gamma_k.
  Real forward_term_error(long long x, Precision p = Precision()) const;
  /// exact_backward - approx_backward; its sum over x >= 2 is gamma'_k.
  Real backward_term_error(long long x, Precision p = Precision()) const;

  Real derivative(DerivativeKind kind, long long x, Precision p = Precision()) const;

  /// k ln^(k-1)(x) / x.
  Real extreme_derivative(long long x, Precision p = Precision()) const;

  /// Monomials of the approximate derivative, ordered by inverse_power 1..k.
  std::vector<LogMonomial> approx_expansion(Direction direction) const;

 private:
  void require_forward_domain(long long x) const;
  void require_backward_domain(long long x) const;
  Real binomial_sum(long long x, Precision work, int sign_pattern) const;

  int k_;
};

}  // namespace isocalc

#endif  // ISOCALC_CORE_LOG_POWER_HPP_
