#ifndef ISOCALC_CORE_SERIES_HPP_
#define ISOCALC_CORE_SERIES_HPP_

#include <gmpxx.h>

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "core/real.hpp"

namespace isocalc {

enum class SeriesMethod { direct, richardson, euler_maclaurin, composite };

std::string_view to_string(SeriesMethod method);

/// Value of an infinite sum or limit together with a claimed bound on
/// |value - limit|. Bounds are tested estimates, not interval arithmetic.
struct SeriesResult {
  Real value;
  Real error_bound;
  long long terms_used = 0;
  SeriesMethod method = SeriesMethod::direct;
};

struct TailPolicy {
  int target_digits = 30;            // stop when the estimated error is below 10^-target_digits
  long long max_terms = 50'000'000;  // hard cap on summed terms
  int euler_maclaurin_order = 0;     // 2 * number of Bernoulli corrections; 0 picks automatically
  long long head_terms = 0;          // Euler-Maclaurin head length; 0 picks automatically
  int threads = 1;

  /// Precision at which everything under this policy is evaluated.
  Precision working() const { return Precision(target_digits).guarded(); }
  Real tolerance() const;
  void validate() const;
};

/// B_{2n} as an exact rational. Values are computed once and cached for
/// the life of the process; the cache is safe for concurrent readers.
mpq_class bernoulli_b2n(int n);

using SeriesTerm = std::function<Real(long long, Precision)>;

/// Sum of term(first), ..., term(first + count - 1). Terms are grouped into
/// fixed-size blocks, blocks may run on several threads, and block sums are
/// reduced in ascending order, so the result does not depend on `threads`.
Real blocked_sum(const SeriesTerm& term, long long first, long long count, Precision p, int threads = 1);

/// Cumulative sums term(first) + ... + term(n) for every n in `ends`
/// (ascending, each >= first). Same determinism contract as blocked_sum.
std::vector<Real> sampled_partial_sums(const SeriesTerm& term, long long first, std::span<const long long> ends,
                                       Precision p, int threads = 1);

/// Partial sums with a doubling-window stopping rule: with S_N the sum of the
/// first N terms, stop as soon as |S_2N - S_N| < 10^-target_digits and return
/// S_2N with bound 2 |S_2N - S_N|.
/// Throws NonConvergenceError once max_terms would be exceeded.
SeriesResult direct_sum(const SeriesTerm& term, long long start, const TailPolicy& policy);

/// Finite sum of c * ln(t)^a / t^p terms with p >= 1, closed under
/// differentiation. This is the function class that Euler-Maclaurin is
/// applied to.
class LogSeries {
 public:
  struct Term {
    Real coefficient;
    int log_power;
    int inverse_power;
  };

  LogSeries() = default;
  explicit LogSeries(Precision p) : precision_(p) {}

  void add(const Real& coefficient, int log_power, int inverse_power);
  void add(long coefficient, int log_power, int inverse_power);

  const std::vector<Term>& terms() const { return terms_; }
  Precision precision() const { return precision_; }
  int max_log_power() const;
  int min_inverse_power() const;

  Real operator()(const Real& t) const;
  LogSeries derivative() const;

  /// Tail integral from n to infinity. Terms with p = 1 diverge; they
  /// contribute the negated antiderivative -ln(n)^(a+1)/(a+1) instead, which
  /// turns the Euler-Maclaurin sum into the constant of the divergent part.
  Real regularized_tail_integral(const Real& n) const;

 private:
  std::vector<Term> terms_;
  Precision precision_;
};

/// Euler-Maclaurin evaluation of sum_{x>=1} f(x), regularized for the
/// p = 1 terms (see LogSeries::regularized_tail_integral):
///   sum_{x<N} f(x) + tail(N) + f(N)/2 - sum_i B_2i/(2i)! f^(2i-1)(N)
/// The bound is twice the first omitted correction.
SeriesResult euler_maclaurin_sum(const LogSeries& f, const TailPolicy& policy);

/// sum_{x>=1} ln(x)^a / x^j; j >= 2, else DivergenceError.
SeriesResult log_moment_sum(int a, int j, const TailPolicy& policy);

/// lim_{N->inf} sum_{x<=N} ln(x)^a / x - ln(N)^(a+1) / (a+1).
/// a = 0 is Euler's constant; in general this is the Stieltjes constant.
SeriesResult stieltjes_like_limit(int a, const TailPolicy& policy);

/// ln(N)^log_power / N^inverse_power.
struct BasisFunction {
  int log_power;
  int inverse_power;
};

/// {1/N, 1/N^2, ..., 1/N^orders}
std::vector<BasisFunction> inverse_power_basis(int orders);
/// {ln^i N / N^j : 0 <= i < log_powers, 1 <= j <= orders}
std::vector<BasisFunction> log_power_basis(int log_powers, int orders);

struct Sample {
  long long n;
  Real value;
};

/// Generalized Richardson extrapolation: fits
///   A_N = L + sum_b c_b basis_b(N)
/// by exact linear solves over the samples and reports L. The fit is repeated
/// with the highest orders dropped; the error estimate is the change caused
/// by the last order. For every order the log powers in use must be 0..m.
/// Throws UnreliableExtrapolationError when those changes do not shrink.
SeriesResult richardson_limit(std::span<const Sample> samples, std::span<const BasisFunction> basis,
                              const TailPolicy& policy);

using Sequence = std::function<Real(long long, Precision)>;

SeriesResult richardson_limit(const Sequence& sequence, std::span<const BasisFunction> basis,
                              std::span<const long long> sample_points, const TailPolicy& policy);

}  // namespace isocalc

#endif  // ISOCALC_CORE_SERIES_HPP_
