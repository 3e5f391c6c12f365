#include "core/constants.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/log_power.hpp"

namespace isocalc {

namespace {

// Absolute digits targeted internally for a request of `digits` significant
// digits; covers |gamma_k| up to 10^4 plus a margin for truncated output.
int absolute_target(int digits) { return digits + 6; }

void require_digits(int digits, const ComputeOptions& options) {
  if (digits < 1 || digits > options.max_digits) {
    throw std::invalid_argument("digits must be in [1, " + std::to_string(options.max_digits) + "]");
  }
}

void require_k(int k) {
  if (k < 1 || k > LogPowerFamily::kMaxK) throw std::invalid_argument("k must be in [1, 60]");
}

TailPolicy policy_for(int digits, const ComputeOptions& options) {
  TailPolicy policy;
  policy.target_digits = absolute_target(digits);
  policy.max_terms = options.max_terms;
  policy.threads = options.threads;
  return policy;
}

// Test hook for the end-to-end exit-code checks: ISOCALC_FAULT_INJECTION=oracle
// skews the oracle routes, =identity skews one side of the Basel identity.
bool fault_injected(const char* which) {
  const char* v = std::getenv("ISOCALC_FAULT_INJECTION");
  return v != nullptr && std::string(v) == which;
}

SeriesResult skew_if_injected(SeriesResult r) {
  if (fault_injected("oracle")) r.value += Real::parse("1e-3", r.value.precision());
  return r;
}

void require_agreement(const std::string& what, const SeriesResult& a, const SeriesResult& b, int digits) {
  const Real diff = abs(a.value - b.value);
  const Real allowed = a.error_bound + b.error_bound;
  if (diff > allowed) {
    const int shown = absolute_target(digits);
    throw ConsistencyError(what + ": independent evaluations differ by " + diff.to_scientific(3) +
                               " (combined bound " + allowed.to_scientific(3) + ")",
                           a.value.to_decimal(shown), b.value.to_decimal(shown));
  }
}

// Richardson extrapolation of the telescoped partial sums of the approximate
// derivative. Forward: A_N = sum_{1<=x<=N} approx_fwd - ln^k(N+1).
// Backward: B_N = ln^k(N) - sum_{2<=x<=N} approx_bwd.
SeriesResult extrapolate_telescoped(int k, Direction direction, int digits, const ComputeOptions& options) {
  const LogPowerFamily family(k);
  TailPolicy policy = policy_for(digits, options);
  const int target = policy.target_digits;
  const long long first = direction == Direction::forward ? 1 : 2;

  std::optional<UnreliableExtrapolationError> last_failure;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const long long n0 = 500LL * k << attempt;
    const int orders = static_cast<int>(std::ceil((target + 3) / std::log10(static_cast<double>(n0)))) + 1;
    const int unknowns = 1 + k * orders;
    // The fit loses roughly three digits per unknown to conditioning.
    const Precision work(target + 20 + 3 * unknowns);
    const long long step = std::max<long long>(1, n0 / unknowns);
    if (n0 + step * unknowns > options.max_terms) {
      throw NonConvergenceError("telescoped extrapolation needs more than max_terms terms", "", n0 + step * unknowns);
    }

    std::vector<long long> ends;
    for (int i = 0; i < unknowns; ++i) ends.push_back(n0 + i * step);

    const SeriesTerm term = [&family, direction](long long x, Precision p) {
      return direction == Direction::forward ? family.approx_forward(x, p) : family.approx_backward(x, p);
    };
    const std::vector<Real> sums = sampled_partial_sums(term, first, ends, work, options.threads);

    std::vector<Sample> samples;
    samples.reserve(ends.size());
    for (size_t i = 0; i < ends.size(); ++i) {
      const Real n(static_cast<long>(ends[i]), work);
      if (direction == Direction::forward) {
        samples.push_back({ends[i], sums[i] - pow(log(n + 1L), static_cast<unsigned long>(k))});
      } else {
        samples.push_back({ends[i], pow(log(n), static_cast<unsigned long>(k)) - sums[i]});
      }
    }

    try {
      const auto basis = log_power_basis(k, orders);
      SeriesResult result = richardson_limit(samples, basis, policy);
      if (result.error_bound < policy.tolerance()) return result;
      last_failure.emplace("extrapolation bound " + result.error_bound.to_scientific(3) + " above target");
    } catch (const UnreliableExtrapolationError& e) {
      last_failure = e;
    }
  }
  throw *last_failure;
}

SeriesResult scaled(SeriesResult r, long factor) {
  r.value *= factor;
  r.error_bound *= factor < 0 ? -factor : factor;
  return r;
}

SeriesResult combine(const std::vector<std::pair<long, SeriesResult>>& parts, Precision p, SeriesMethod method) {
  SeriesResult total{Real(p), Real(p), 0, method};
  for (const auto& [factor, part] : parts) {
    const SeriesResult s = scaled(part, factor);
    total.value += s.value;
    total.error_bound += s.error_bound;
    total.terms_used += s.terms_used;
  }
  return total;
}

}  // namespace

ConstantId ConstantId::gamma(int k) {
  require_k(k);
  return {ConstantKind::gamma, k};
}

ConstantId ConstantId::gamma_prime(int k) {
  require_k(k);
  return {ConstantKind::gamma_prime, k};
}

std::string to_string(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::gamma:
      return "gamma";
    case ConstantKind::gamma_prime:
      return "gamma_prime";
    case ConstantKind::lambda1:
      return "lambda1";
    case ConstantKind::e_threshold:
      return "e_threshold";
  }
  return "unknown";
}

SeriesResult gamma_oracle(int k, int digits, const ComputeOptions& options) {
  require_k(k);
  require_digits(digits, options);
  const TailPolicy policy = policy_for(digits, options);
  std::vector<std::pair<long, SeriesResult>> parts;
  parts.emplace_back(k, stieltjes_like_limit(k - 1, policy));
  for (int j = 2; j <= k; ++j) parts.emplace_back(binomial(k, j), log_moment_sum(k - j, j, policy));
  return combine(parts, policy.working(), SeriesMethod::euler_maclaurin);
}

SeriesResult gamma_prime_oracle(int k, int digits, const ComputeOptions& options) {
  require_k(k);
  require_digits(digits, options);
  const TailPolicy policy = policy_for(digits, options);
  const Precision work = policy.working();
  std::vector<std::pair<long, SeriesResult>> parts;
  parts.emplace_back(-k, stieltjes_like_limit(k - 1, policy));
  for (int j = 2; j <= k; ++j) {
    const long sign = j % 2 == 0 ? 1 : -1;
    parts.emplace_back(sign * binomial(k, j), log_moment_sum(k - j, j, policy));
  }
  SeriesResult total = combine(parts, work, SeriesMethod::euler_maclaurin);
  // x = 1 terms: ln^(k-1)(1)/1 = [k=1] and ln^(k-j)(1)/1 = [j=k].
  if (k == 1) total.value += 1L;
  if (k >= 2) total.value -= k % 2 == 0 ? 1L : -1L;
  return total;
}

SeriesResult gamma(int k, int digits, const ComputeOptions& options) {
  require_k(k);
  require_digits(digits, options);
  SeriesResult production = extrapolate_telescoped(k, Direction::forward, digits, options);
  require_agreement("gamma_" + std::to_string(k), production, skew_if_injected(gamma_oracle(k, digits, options)),
                    digits);
  return production;
}

SeriesResult gamma_prime(int k, int digits, const ComputeOptions& options) {
  require_k(k);
  require_digits(digits, options);
  SeriesResult production = extrapolate_telescoped(k, Direction::backward, digits, options);
  require_agreement("gamma'_" + std::to_string(k), production,
                    skew_if_injected(gamma_prime_oracle(k, digits, options)), digits);
  return production;
}

Lambda1Paths lambda1_paths(int digits, const ComputeOptions& options) {
  require_digits(digits, options);
  const TailPolicy policy = policy_for(digits, options);
  const Precision work = policy.working();

  const SeriesResult moment = log_moment_sum(1, 2, policy);
  SeriesResult via_moment{3L * (1L - moment.value), 3L * moment.error_bound, moment.terms_used,
                          SeriesMethod::euler_maclaurin};

  const SeriesResult g3 = gamma(3, digits, options);
  const SeriesResult gp3 = gamma_prime(3, digits, options);
  SeriesResult via_identity{(Real(7L, work) - g3.value - gp3.value) / 2L, (g3.error_bound + gp3.error_bound) / 2L,
                            g3.terms_used + gp3.terms_used, SeriesMethod::composite};

  require_agreement("lambda_1", via_moment, via_identity, digits);
  return {std::move(via_moment), std::move(via_identity)};
}

SeriesResult lambda1(int digits, const ComputeOptions& options) { return lambda1_paths(digits, options).log_moment; }

Real e_gap(long long t, Precision p) {
  if (t < 1) throw std::invalid_argument("e_gap needs t >= 1");
  const Real tw(static_cast<long>(t), p);
  return Real::euler_e(p) - exp(tw * log1p(1L / tw));
}

long long e_threshold(const Real& epsilon, long long cap) {
  if (!(epsilon > 0L)) throw std::invalid_argument("epsilon must be > 0");
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  // gap(t) ~ e/(2t): resolving it against epsilon needs about
  // -log10(epsilon) + log10(t) significant digits.
  const int digits = std::max(30, static_cast<int>(-epsilon.decimal_exponent()) +
                                      static_cast<int>(std::log10(static_cast<double>(cap))) + 25);
  const Precision p(digits);
  const Real eps = epsilon.at(p);
  auto below = [&](long long t) { return e_gap(t, p) < eps; };

  if (below(1)) return 1;
  long long lo = 1;  // gap(lo) >= eps
  long long hi = 2;
  while (!below(hi)) {
    lo = hi;
    if (hi > cap / 2) throw CapError("e threshold exceeds cap " + std::to_string(cap));
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (below(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (hi > cap) throw CapError("e threshold exceeds cap " + std::to_string(cap));
  return hi;
}

std::vector<IdentityReport> verify_identities(int digits, const ComputeOptions& options) {
  require_digits(digits, options);
  const TailPolicy policy = policy_for(digits, options);
  const Precision work = policy.working();
  const Real tolerance = pow10(3 - digits, work);
  const Real pi = Real::pi(work);

  std::vector<IdentityReport> reports;
  auto report = [&](std::string name, const std::function<std::pair<Real, Real>()>& sides) {
    try {
      auto [lhs, rhs] = sides();
      Real residual = abs(lhs - rhs);
      const bool passed = residual <= tolerance;
      reports.push_back({std::move(name), std::move(lhs), std::move(rhs), std::move(residual), tolerance, passed});
    } catch (const std::exception&) {
      Real nan(work);
      mpfr_set_nan(nan.get());
      reports.push_back({std::move(name), nan, nan, nan, tolerance, false});
    }
  };

  std::optional<SeriesResult> g3;
  std::optional<SeriesResult> gp3;
  auto gamma3_sum = [&] {
    if (!g3) g3 = gamma(3, digits, options);
    if (!gp3) gp3 = gamma_prime(3, digits, options);
    return g3->value + gp3->value;
  };

  report("gamma + gamma' = 1", [&] {
    return std::pair{gamma(1, digits, options).value + gamma_prime(1, digits, options).value, Real(1L, work)};
  });
  report("gamma_2 + gamma'_2 = pi^2/3 - 1", [&] {
    return std::pair{gamma(2, digits, options).value + gamma_prime(2, digits, options).value, pi * pi / 3L - 1L};
  });
  report("gamma_3 + gamma'_3 = 6 sum ln(x)/x^2 + 1",
         [&] { return std::pair{gamma3_sum(), 6L * log_moment_sum(1, 2, policy).value + 1L}; });
  report("gamma_3 + gamma'_3 = 7 - 2 lambda_1", [&] {
    const Real lambda = 3L * (1L - log_moment_sum(1, 2, policy).value);
    return std::pair{gamma3_sum(), 7L - 2L * lambda};
  });
  report("sum 1/x^2 = pi^2/6", [&] {
    Real rhs = pi * pi / 6L;
    if (fault_injected("identity")) rhs += Real::parse("1e-3", work);
    return std::pair{log_moment_sum(0, 2, policy).value, rhs};
  });
  return reports;
}

std::vector<BarrowRow> barrow_residual_table(int k, long long n_max, Precision p) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const LogPowerFamily family(k);
  const Precision work = p.guarded();
  std::vector<BarrowRow> rows;
  rows.reserve(static_cast<size_t>(n_max));
  Real sum(work);
  for (long long n = 1; n <= n_max; ++n) {
    sum += family.approx_forward(n, work);
    Real endpoint = pow(log(Real(static_cast<long>(n + 1), work)), static_cast<unsigned long>(k));
    Real residual = sum - endpoint;
    rows.push_back({n, sum, std::move(endpoint), std::move(residual)});
  }
  return rows;
}

}  // namespace isocalc
