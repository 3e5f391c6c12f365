#include "core/scale_grid.hpp"

#include <algorithm>
#include <stdexcept>

#include "core/errors.hpp"

namespace isocalc {

ScaleGrid::ScaleGrid(int base, int gap, long multiplier) : base_(base), gap_(gap), multiplier_(multiplier) {
  if (base < 2) throw std::invalid_argument("grid base must be >= 2");
  if (gap < 0) throw std::invalid_argument("grid gap must be >= 0");
  if (multiplier < 1) throw std::invalid_argument("grid multiplier must be >= 1");
  mpz_ui_pow_ui(denominator_.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(gap));
}

mpq_class ScaleGrid::step() const {
  mpq_class h(mpz_class(1), denominator_);
  h.canonicalize();
  return h;
}

mpq_class ScaleGrid::increment() const {
  mpq_class dx(mpz_class(multiplier_), denominator_);
  dx.canonicalize();
  return dx;
}

Real ScaleGrid::increment(Precision p) const {
  Real dx(p);
  mpfr_set_q(dx.get(), increment().get_mpq_t(), MPFR_RNDN);
  return dx;
}

bool RealFunction::in_domain(const Real& x) const {
  if (!x.is_finite()) return false;
  const Real lo(domain_lower, x.precision());
  return lower_open ? x > lo : x >= lo;
}

Real RealFunction::operator()(const Real& x) const {
  if (!in_domain(x)) throw DomainError(name + ": argument " + x.to_decimal(12) + " outside the domain");
  return evaluate(x);
}

RealFunction log_power_function(int k) {
  if (k < 1) throw std::invalid_argument("log power k must be >= 1");
  const std::string name = k == 1 ? "ln" : "ln^" + std::to_string(k);
  return {name, [k](const Real& x) { return pow(log(x), static_cast<unsigned long>(k)); }, 0.0, true};
}

RealFunction log_power_derivative_function(int k) {
  if (k < 1) throw std::invalid_argument("log power k must be >= 1");
  return {"d/dx ln^" + std::to_string(k),
          [k](const Real& x) { return k * pow(log(x), static_cast<unsigned long>(k - 1)) / x; }, 0.0, true};
}

RealFunction power_function(unsigned long n) {
  return {"x^" + std::to_string(n), [n](const Real& x) { return pow(x, n); }};
}

RealFunction affine_function(const Real& slope, const Real& intercept) {
  return {"affine", [slope, intercept](const Real& x) { return slope * x + intercept; }};
}

Real difference_quotient(const RealFunction& f, const Real& x, const ScaleGrid& grid, Precision p) {
  const Precision guarded = p.guarded();
  const Real dx_probe = grid.increment(guarded);
  const long gap = x.is_zero() ? 0 : x.decimal_exponent() - dx_probe.decimal_exponent();
  if (gap >= guarded.digits() || (x + dx_probe).at(guarded) == x.at(guarded)) {
    throw PrecisionError("increment " + dx_probe.to_scientific(3) + " is below the resolution of x at " +
                         std::to_string(guarded.digits()) + " digits");
  }
  // F(x + dx) - F(x) cancels about `gap` leading digits.
  const Precision work = guarded.plus(static_cast<int>(std::max(0L, gap)));
  const Real xw = x.at(work);
  const Real dx = grid.increment(work);
  return (f(xw + dx) - f(xw)) / dx;
}

Real forward_derivative(const RealFunction& f, long long x, Precision p) {
  const Precision work = p.guarded();
  const Real xw(static_cast<long>(x), work);
  return f(xw + 1L) - f(xw);
}

Real backward_derivative(const RealFunction& f, long long x, Precision p) {
  const Precision work = p.guarded();
  const Real xw(static_cast<long>(x), work);
  return f(xw) - f(xw - 1L);
}

Real barrow_forward_sum(const TermFunction& f, long long x0, long long n, Precision p) {
  if (n < 1) throw std::invalid_argument("forward Barrow sum needs n >= 1");
  const Precision work = p.guarded();
  Real sum(work);
  for (long long i = 0; i < n; ++i) sum += f(x0 + i, work);
  return sum;
}

Real barrow_backward_sum(const TermFunction& f, long long x0, long long n, Precision p) {
  if (n < 0) throw std::invalid_argument("backward Barrow sum needs n >= 0");
  const Precision work = p.guarded();
  Real sum(work);
  for (long long i = 0; i <= n; ++i) sum += f(x0 + i, work);
  return sum;
}

std::vector<ProbeRow> extreme_convergence_probe(const RealFunction& f, const RealFunction& derivative, const Real& x,
                                                int base, std::span<const int> gaps, Precision p) {
  const Precision work = p.guarded();
  const Real xw = x.at(work);
  const Real analytic = derivative(xw);
  std::vector<ProbeRow> rows;
  rows.reserve(gaps.size());
  for (const int gap : gaps) {
    const ScaleGrid grid(base, gap);
    Real step(work);
    mpfr_set_q(step.get(), grid.step().get_mpq_t(), MPFR_RNDN);
    Real quotient = difference_quotient(f, xw, grid, p);
    Real error = abs(quotient - analytic);
    std::optional<Real> ratio;
    if (!rows.empty() && !rows.back().error.is_zero()) ratio = error / rows.back().error;
    rows.push_back({gap, std::move(step), std::move(quotient), analytic, std::move(error), std::move(ratio)});
  }
  return rows;
}

}  // namespace isocalc
