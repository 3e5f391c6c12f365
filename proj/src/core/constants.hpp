#ifndef ISOCALC_CORE_CONSTANTS_HPP_
#define ISOCALC_CORE_CONSTANTS_HPP_

#include <string>
#include <vector>

#include "core/real.hpp"
#include "core/series.hpp"

namespace isocalc {

enum class ConstantKind { gamma, gamma_prime, lambda1, e_threshold };

struct ConstantId {
  ConstantKind kind;
  int k = 1;  // gamma / gamma_prime only

  static ConstantId gamma(int k);
  static ConstantId gamma_prime(int k);
  static ConstantId lambda1() { return {ConstantKind::lambda1, 1}; }
};

std::string to_string(ConstantKind kind);

struct ComputeOptions {
  int threads = 1;
  long long max_terms = 50'000'000;
  int max_digits = 200;
};

/// gamma_k = sum_{x>=1} (approximate - exact) forward derivative of ln^k.
///
/// Production path: Richardson extrapolation of the telescoped partial sums
///   A_N = sum_{x<=N} approx_forward(k, x) - ln^k(N + 1)
/// in the basis ln^i(N)/N^j, i < k. The result is cross-checked against
/// gamma_oracle; disagreement beyond the combined bounds throws
/// ConsistencyError.
SeriesResult gamma(int k, int digits, const ComputeOptions& options = {});

/// gamma'_k = sum_{x>=2} (exact - approximate) backward derivative of ln^k,
/// extrapolated from B_N = ln^k(N) - sum_{2<=x<=N} approx_backward(k, x) and
/// cross-checked against gamma_prime_oracle.
SeriesResult gamma_prime(int k, int digits, const ComputeOptions& options = {});

/// Independent route through the binomial expansion of the approximate
/// derivative:
///   gamma_k = k S(k-1) + sum_{j=2..k} C(k,j) M(k-j, j)
/// with S the Stieltjes-like limit and M the log-moment sum.
SeriesResult gamma_oracle(int k, int digits, const ComputeOptions& options = {});

///   gamma'_k = -k (S(k-1) - [k=1]) + sum_{j=2..k} C(k,j) (-1)^j (M(k-j, j) - [j=k])
/// The bracketed terms remove the x = 1 contributions, since the backward
/// sums start at x = 2.
SeriesResult gamma_prime_oracle(int k, int digits, const ComputeOptions& options = {});

struct Lambda1Paths {
  SeriesResult log_moment;  // 3 (1 - sum ln x / x^2)
  SeriesResult identity;    // (7 - (gamma_3 + gamma'_3)) / 2
};

/// Both evaluations of lambda_1; throws ConsistencyError if they disagree
/// beyond their combined bounds.
Lambda1Paths lambda1_paths(int digits, const ComputeOptions& options = {});
SeriesResult lambda1(int digits, const ComputeOptions& options = {});

/// e - (1 + 1/t)^t at precision p.
Real e_gap(long long t, Precision p);

/// Smallest integer t >= 1 with e - (1 + 1/t)^t < epsilon. Throws
/// std::invalid_argument for epsilon <= 0 and CapError when t would exceed cap.
long long e_threshold(const Real& epsilon, long long cap = 1'000'000'000'000LL);

struct IdentityReport {
  std::string name;
  Real lhs;
  Real rhs;
  Real residual;
  Real tolerance;
  bool passed;
};

/// The five identities relating the family members, each side evaluated by
/// a separate route. Failures are reported, never thrown.
std::vector<IdentityReport> verify_identities(int digits, const ComputeOptions& options = {});

struct BarrowRow {
  long long n;
  Real approx_sum;  // sum_{x<=n} approx_forward(k, x)
  Real endpoint;    // ln^k(n + 1)
  Real residual;    // approx_sum - endpoint, tends to gamma_k
};

std::vector<BarrowRow> barrow_residual_table(int k, long long n_max, Precision p = Precision(30));

}  // namespace isocalc

#endif  // ISOCALC_CORE_CONSTANTS_HPP_
