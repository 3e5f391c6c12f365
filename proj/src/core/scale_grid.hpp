#ifndef ISOCALC_CORE_SCALE_GRID_HPP_
#define ISOCALC_CORE_SCALE_GRID_HPP_

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/real.hpp"

namespace isocalc {

/// Discretization context for a limit-free difference quotient.
///
/// The step is h = 1 / base^gap, kept as an exact rational; the increment
/// is dx = multiplier * h. gap = 0 gives the unit-step local calculus and a
/// large gap approaches the standard derivative.
class ScaleGrid {
 public:
  /// Throws std::invalid_argument unless base >= 2, gap >= 0, multiplier >= 1.
  ScaleGrid(int base, int gap, long multiplier = 1);

  static ScaleGrid local(int base = 10) { return ScaleGrid(base, 0); }

  int base() const { return base_; }
  int gap() const { return gap_; }
  long multiplier() const { return multiplier_; }
  bool is_local() const { return gap_ == 0; }

  /// base^gap, the exact denominator of the step.
  const mpz_class& step_denominator() const { return denominator_; }
  mpq_class step() const;
  mpq_class increment() const;

  /// The increment materialized at precision p.
  Real increment(Precision p) const;

 private:
  int base_;
  int gap_;
  long multiplier_;
  mpz_class denominator_;
};

/// A real function with a lower domain bound. Evaluation runs at the
/// precision of its argument.
struct RealFunction {
  std::string name;
  std::function<Real(const Real&)> evaluate;
  double domain_lower = -1e308;
  bool lower_open = false;

  bool in_domain(const Real& x) const;
  /// Throws DomainError outside the domain.
  Real operator()(const Real& x) const;
};

/// (ln x)^k on x > 0; k = 1 is ln itself.
RealFunction log_power_function(int k);
/// k (ln x)^(k-1) / x, the standard derivative of log_power_function(k).
RealFunction log_power_derivative_function(int k);
RealFunction power_function(unsigned long n);
RealFunction affine_function(const Real& slope, const Real& intercept);

/// (F(x + dx) - F(x)) / dx with dx taken from the grid. No limit is taken.
/// Throws DomainError or PrecisionError (dx below the resolution of x).
Real difference_quotient(const RealFunction& f, const Real& x, const ScaleGrid& grid, Precision p = Precision());

Real forward_derivative(const RealFunction& f, long long x, Precision p = Precision());
Real backward_derivative(const RealFunction& f, long long x, Precision p = Precision());

using TermFunction = std::function<Real(long long, Precision)>;

/// f(x0) + f(x0 + 1) + ... + f(x0 + n - 1); n >= 1.
Real barrow_forward_sum(const TermFunction& f, long long x0, long long n, Precision p = Precision());
/// f(x0) + f(x0 + 1) + ... + f(x0 + n); n >= 0.
Real barrow_backward_sum(const TermFunction& f, long long x0, long long n, Precision p = Precision());

struct ProbeRow {
  int gap;
  Real step;
  Real quotient;
  Real analytic;
  Real error;
  std::optional<Real> error_ratio;  // error / previous row's error
};

/// Difference quotients of f at x for each gap, compared against the caller's
/// analytic derivative.
std::vector<ProbeRow> extreme_convergence_probe(const RealFunction& f, const RealFunction& derivative, const Real& x,
                                                int base, std::span<const int> gaps, Precision p = Precision());

}  // namespace isocalc

#endif  // ISOCALC_CORE_SCALE_GRID_HPP_
