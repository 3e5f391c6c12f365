#include "core/log_power.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace isocalc {

namespace {

// Extra digits for the approx - exact subtraction: both sides are of size
// k ln^(k-1)(x)/x while the difference is O(ln^(k-2)(x)/x^2).
int cancellation_digits(long long x, int k) {
  return static_cast<int>(std::ceil(std::log10(static_cast<double>(x) + 1.0))) + k + 2;
}

// a^(k-1) + a^(k-2) b + ... + b^(k-1)
Real mixed_power_sum(const Real& a, const Real& b, int k) {
  Real sum(0L, a.precision());
  Real a_pow(1L, a.precision());
  for (int i = 0; i < k; ++i) {
    sum += a_pow * pow(b, static_cast<unsigned long>(k - 1 - i));
    a_pow *= a;
  }
  return sum;
}

}  // namespace

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  long long c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

LogPowerFamily::LogPowerFamily(int k) : k_(k) {
  if (k < 1 || k > kMaxK) throw std::invalid_argument("log power k must be in [1, 60]");
}

void LogPowerFamily::require_forward_domain(long long x) const {
  if (x < 1) throw DomainError("forward derivative of ln^" + std::to_string(k_) + " needs x >= 1");
}

void LogPowerFamily::require_backward_domain(long long x) const {
  if (x < 2) throw DomainError("backward derivative of ln^" + std::to_string(k_) + " needs x >= 2 (ln 0)");
}

Real LogPowerFamily::exact_forward(long long x, Precision p) const {
  require_forward_domain(x);
  const Precision work = p.guarded();
  const Real xw(static_cast<long>(x), work);
  const Real ratio_log = log1p(1L / xw);  // ln((x+1)/x)
  return ratio_log * mixed_power_sum(log(xw + 1L), log(xw), k_);
}

Real LogPowerFamily::exact_backward(long long x, Precision p) const {
  require_backward_domain(x);
  const Precision work = p.guarded();
  const Real xw(static_cast<long>(x), work);
  const Real below = xw - 1L;
  const Real ratio_log = log1p(1L / below);  // ln(x/(x-1))
  return ratio_log * mixed_power_sum(log(xw), log(below), k_);
}

// sign_pattern +1: all coefficients positive; -1: alternating (-1)^(j+1).
Real LogPowerFamily::binomial_sum(long long x, Precision work, int sign_pattern) const {
  const Real xw(static_cast<long>(x), work);
  const Real ln_x = log(xw);
  const Real inv = 1L / xw;
  Real sum(work);
  Real inv_pow(1L, work);
  for (int j = 1; j <= k_; ++j) {
    inv_pow *= inv;
    Real term = inv_pow * pow(ln_x, static_cast<unsigned long>(k_ - j));
    term *= static_cast<long>(binomial(k_, j));
    if (sign_pattern < 0 && j % 2 == 0) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return sum;
}

Real LogPowerFamily::approx_forward(long long x, Precision p) const {
  require_forward_domain(x);
  return binomial_sum(x, p.guarded(), +1);
}

Real LogPowerFamily::approx_backward(long long x, Precision p) const {
  if (k_ == 1 && x >= 1) return binomial_sum(x, p.guarded(), -1);
  require_backward_domain(x);
  return binomial_sum(x, p.guarded(), -1);
}

Real LogPowerFamily::approx_forward_power_form(long long x, Precision p) const {
  require_forward_domain(x);
  const Precision work = p.guarded().plus(cancellation_digits(x, k_));
  const Real xw(static_cast<long>(x), work);
  const Real ln_x = log(xw);
  const auto k = static_cast<unsigned long>(k_);
  return (pow(ln_x + 1L / xw, k) - pow(ln_x, k)).at(p.guarded());
}

Real LogPowerFamily::approx_backward_power_form(long long x, Precision p) const {
  if (k_ != 1) require_backward_domain(x);
  if (x < 1) throw DomainError("approximate backward derivative needs x >= 1");
  const Precision work = p.guarded().plus(cancellation_digits(x, k_));
  const Real xw(static_cast<long>(x), work);
  const Real ln_x = log(xw);
  const auto k = static_cast<unsigned long>(k_);
  return (pow(ln_x, k) - pow(ln_x - 1L / xw, k)).at(p.guarded());
}

Real LogPowerFamily::forward_term_error(long long x, Precision p) const {
  require_forward_domain(x);
  const Precision work = p.plus(cancellation_digits(x, k_));
  return (approx_forward(x, work) - exact_forward(x, work)).at(p.guarded());
}

Real LogPowerFamily::backward_term_error(long long x, Precision p) const {
  require_backward_domain(x);
  const Precision work = p.plus(cancellation_digits(x, k_));
  return (exact_backward(x, work) - approx_backward(x, work)).at(p.guarded());
}

Real LogPowerFamily::derivative(DerivativeKind kind, long long x, Precision p) const {
  if (kind.direction == Direction::forward) {
    return kind.fidelity == Fidelity::exact ? exact_forward(x, p) : approx_forward(x, p);
  }
  return kind.fidelity == Fidelity::exact ? exact_backward(x, p) : approx_backward(x, p);
}

Real LogPowerFamily::extreme_derivative(long long x, Precision p) const {
  require_forward_domain(x);
  const Real xw(static_cast<long>(x), p.guarded());
  return k_ * pow(log(xw), static_cast<unsigned long>(k_ - 1)) / xw;
}

std::vector<LogMonomial> LogPowerFamily::approx_expansion(Direction direction) const {
  std::vector<LogMonomial> terms;
  terms.reserve(static_cast<size_t>(k_));
  for (int j = 1; j <= k_; ++j) {
    long long c = binomial(k_, j);
    if (direction == Direction::backward && j % 2 == 0) c = -c;
    terms.push_back({c, k_ - j, j});
  }
  return terms;
}

}  // namespace isocalc
