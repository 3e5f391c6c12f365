#include "core/series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "core/errors.hpp"

namespace isocalc {

namespace {

constexpr long long kBlockSize = 2048;
constexpr long long kMinDirectTerms = 16;

// Runs fn(block) for every block in [0, blocks); fn must only touch its own
// block's output slot.
template <typename Fn>
void for_each_block(long long blocks, int threads, Fn&& fn) {
  const long long workers = std::min<long long>(std::max(threads, 1), blocks);
  if (workers <= 1) {
    for (long long b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (long long w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (long long b = next++; b < blocks; b = next++) {
          try {
            fn(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = blocks;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Real real_from_rational(const mpq_class& q, Precision p) {
  Real r(p);
  mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

// Smallest relative error we can expect from a long sum at precision p.
Real rounding_floor(Precision p, long long terms) {
  return pow10(-(p.digits() - 2), p) * static_cast<long>(std::max<long long>(terms, 1));
}

}  // namespace

std::string_view to_string(SeriesMethod method) {
  switch (method) {
    case SeriesMethod::direct:
      return "direct";
    case SeriesMethod::richardson:
      return "richardson";
    case SeriesMethod::euler_maclaurin:
      return "euler_maclaurin";
    case SeriesMethod::composite:
      return "composite";
  }
  return "unknown";
}

Real TailPolicy::tolerance() const { return pow10(-target_digits, working()); }

void TailPolicy::validate() const {
  if (target_digits < 1) throw std::invalid_argument("target_digits must be >= 1");
  if (max_terms < 1) throw std::invalid_argument("max_terms must be >= 1");
  if (euler_maclaurin_order < 0 || euler_maclaurin_order % 2 != 0) {
    throw std::invalid_argument("euler_maclaurin_order must be a non-negative even number");
  }
  if (head_terms < 0) throw std::invalid_argument("head_terms must be >= 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

mpq_class bernoulli_b2n(int n) {
  if (n < 0) throw std::invalid_argument("Bernoulli index must be >= 0");
  static std::mutex mutex;
  static std::vector<mpq_class> cache{mpq_class(1)};  // B_0, B_1, B_2, ...

  std::lock_guard lock(mutex);
  const size_t wanted = static_cast<size_t>(2 * n) + 1;
  while (cache.size() < wanted) {
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    const unsigned long m = cache.size();
    mpq_class acc(0);
    mpz_class c(1);  // C(m+1, 0)
    for (unsigned long j = 0; j < m; ++j) {
      acc += mpq_class(c) * cache[j];
      c = c * (m + 1 - j) / (j + 1);
    }
    mpq_class b = -acc / mpq_class(static_cast<long>(m + 1));
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[static_cast<size_t>(2 * n)];
}

Real blocked_sum(const SeriesTerm& term, long long first, long long count, Precision p, int threads) {
  Real total(p);
  if (count <= 0) return total;
  const long long blocks = (count + kBlockSize - 1) / kBlockSize;
  std::vector<Real> partial(static_cast<size_t>(blocks), Real(p));
  for_each_block(blocks, threads, [&](long long b) {
    const long long begin = first + b * kBlockSize;
    const long long end = std::min(first + count, begin + kBlockSize);
    Real s(p);
    for (long long x = begin; x < end; ++x) s += term(x, p);
    partial[static_cast<size_t>(b)] = std::move(s);
  });
  for (const Real& s : partial) total += s;
  return total;
}

std::vector<Real> sampled_partial_sums(const SeriesTerm& term, long long first, std::span<const long long> ends,
                                       Precision p, int threads) {
  if (ends.empty()) return {};
  if (!std::is_sorted(ends.begin(), ends.end()) || ends.front() < first) {
    throw std::invalid_argument("sample ends must be ascending and >= first");
  }
  const long long count = ends.back() - first + 1;
  const long long blocks = (count + kBlockSize - 1) / kBlockSize;

  struct BlockResult {
    Real total;
    std::vector<Real> at_ends;  // in-block running sums for the ends in this block
  };
  std::vector<BlockResult> results(static_cast<size_t>(blocks), BlockResult{Real(p), {}});

  for_each_block(blocks, threads, [&](long long b) {
    const long long begin = first + b * kBlockSize;
    const long long end = std::min(first + count, begin + kBlockSize);
    auto it = std::lower_bound(ends.begin(), ends.end(), begin);
    BlockResult r{Real(p), {}};
    for (long long x = begin; x < end; ++x) {
      r.total += term(x, p);
      while (it != ends.end() && *it == x) {
        r.at_ends.push_back(r.total);
        ++it;
      }
    }
    results[static_cast<size_t>(b)] = std::move(r);
  });

  std::vector<Real> sums;
  sums.reserve(ends.size());
  Real prefix(p);
  for (const BlockResult& r : results) {
    for (const Real& s : r.at_ends) sums.push_back(prefix + s);
    prefix += r.total;
  }
  return sums;
}

SeriesResult direct_sum(const SeriesTerm& term, long long start, const TailPolicy& policy) {
  policy.validate();
  // Extra digits so rounding over max_terms additions stays below the target.
  const Precision work =
      policy.working().plus(static_cast<int>(std::ceil(std::log10(static_cast<double>(policy.max_terms)))));
  const Real tol = policy.tolerance();

  long long n = std::min(kMinDirectTerms, policy.max_terms);
  Real sum = blocked_sum(term, start, n, work, policy.threads);
  while (true) {
    if (2 * n > policy.max_terms) {
      throw NonConvergenceError("direct sum did not converge within " + std::to_string(policy.max_terms) + " terms",
                                sum.to_decimal(work.digits()), n);
    }
    const Real window = blocked_sum(term, start + n, n, work, policy.threads);
    sum += window;
    n *= 2;
    if (abs(window) < tol) {
      Real bound = 2L * abs(window) + rounding_floor(work, n) * max(abs(sum), Real(1L, work));
      return {std::move(sum), std::move(bound), n, SeriesMethod::direct};
    }
  }
}

void LogSeries::add(const Real& coefficient, int log_power, int inverse_power) {
  if (log_power < 0) throw std::invalid_argument("log power must be >= 0");
  if (inverse_power < 1) throw std::invalid_argument("inverse power must be >= 1");
  for (Term& t : terms_) {
    if (t.log_power == log_power && t.inverse_power == inverse_power) {
      t.coefficient += coefficient;
      return;
    }
  }
  terms_.push_back({coefficient.at(precision_), log_power, inverse_power});
}

void LogSeries::add(long coefficient, int log_power, int inverse_power) {
  add(Real(coefficient, precision_), log_power, inverse_power);
}

int LogSeries::max_log_power() const {
  int m = 0;
  for (const Term& t : terms_) m = std::max(m, t.log_power);
  return m;
}

int LogSeries::min_inverse_power() const {
  int m = 1 << 30;
  for (const Term& t : terms_) m = std::min(m, t.inverse_power);
  return m;
}

Real LogSeries::operator()(const Real& t) const {
  const Real tw = t.at(precision_);
  const Real ln_t = log(tw);
  Real sum(precision_);
  for (const Term& term : terms_) {
    sum += term.coefficient * pow(ln_t, static_cast<unsigned long>(term.log_power)) /
           pow(tw, static_cast<unsigned long>(term.inverse_power));
  }
  return sum;
}

LogSeries LogSeries::derivative() const {
  // d/dt ln^a t / t^p = a ln^(a-1) t / t^(p+1) - p ln^a t / t^(p+1)
  LogSeries d(precision_);
  for (const Term& t : terms_) {
    if (t.log_power > 0) d.add(t.coefficient * static_cast<long>(t.log_power), t.log_power - 1, t.inverse_power + 1);
    d.add(t.coefficient * static_cast<long>(-t.inverse_power), t.log_power, t.inverse_power + 1);
  }
  return d;
}

Real LogSeries::regularized_tail_integral(const Real& n) const {
  const Real nw = n.at(precision_);
  const Real ln_n = log(nw);
  Real total(precision_);
  for (const Term& t : terms_) {
    const auto a = static_cast<unsigned long>(t.log_power);
    if (t.inverse_power == 1) {
      total -= t.coefficient * pow(ln_n, a + 1) / static_cast<long>(a + 1);
      continue;
    }
    // int_n^inf ln^a u / u^(s+1) du = n^-s sum_i a!/(a-i)! ln^(a-i) n / s^(i+1)
    const long s = t.inverse_power - 1;
    Real inner(precision_);
    Real falling(1L, precision_);  // a!/(a-i)!
    Real s_pow(s, precision_);     // s^(i+1)
    for (unsigned long i = 0; i <= a; ++i) {
      inner += falling * pow(ln_n, a - i) / s_pow;
      falling *= static_cast<long>(a - i);
      s_pow *= s;
    }
    total += t.coefficient * inner / pow(nw, static_cast<unsigned long>(s));
  }
  return total;
}

SeriesResult euler_maclaurin_sum(const LogSeries& f_in, const TailPolicy& policy) {
  policy.validate();
  if (f_in.terms().empty()) return {Real(policy.working()), Real(policy.working()), 1, SeriesMethod::euler_maclaurin};

  const Precision work = policy.working();
  LogSeries f(work);
  for (const auto& t : f_in.terms()) f.add(t.coefficient, t.log_power, t.inverse_power);

  const Real tol = policy.tolerance();
  const bool fixed_order = policy.euler_maclaurin_order > 0;
  const int fixed_corrections = policy.euler_maclaurin_order / 2;
  long long head = policy.head_terms > 0 ? policy.head_terms : std::max<long long>(20, policy.target_digits);

  while (true) {
    if (head > policy.max_terms) {
      throw NonConvergenceError("Euler-Maclaurin head exceeded max_terms", "", head);
    }
    const Real n(static_cast<long>(head), work);
    const SeriesTerm term = [&f](long long x, Precision p) { return f(Real(static_cast<long>(x), p)); };
    Real value = blocked_sum(term, 1, head - 1, work, policy.threads);
    value += f.regularized_tail_integral(n);
    value += f(n) / 2L;

    // Corrections -B_2i/(2i)! f^(2i-1)(N); stop at the first one below the
    // tolerance (automatic order) or after the requested count.
    LogSeries d = f.derivative();
    mpz_class factorial(1);  // (2i)!
    Real previous_size(work);
    bool diverging = false;
    int corrections = 0;
    Real omitted(work);
    for (int i = 1;; ++i) {
      factorial *= (2 * i - 1) * (2 * i);
      const Real coeff = real_from_rational(bernoulli_b2n(i) / mpq_class(factorial), work);
      const Real correction = coeff * d(n);
      const Real size = abs(correction);
      const bool stop = fixed_order ? i > fixed_corrections : size < tol / 10L;
      if (stop || (!fixed_order && i > 1 && size > previous_size)) {
        diverging = !fixed_order && !(size < tol / 10L);
        omitted = size;
        break;
      }
      value -= correction;
      ++corrections;
      previous_size = size;
      d = d.derivative().derivative();
    }
    if (diverging && policy.head_terms == 0) {
      head *= 2;
      continue;
    }
    Real bound = 2L * omitted + rounding_floor(work, head) * max(abs(value), Real(1L, work));
    return {std::move(value), std::move(bound), head - 1 + corrections, SeriesMethod::euler_maclaurin};
  }
}

SeriesResult log_moment_sum(int a, int j, const TailPolicy& policy) {
  if (a < 0) throw std::invalid_argument("log power must be >= 0");
  if (j < 2) throw DivergenceError("sum of ln^a(x)/x^" + std::to_string(j) + " diverges (need j >= 2)");
  LogSeries f(policy.working());
  f.add(1L, a, j);
  return euler_maclaurin_sum(f, policy);
}

SeriesResult stieltjes_like_limit(int a, const TailPolicy& policy) {
  if (a < 0) throw std::invalid_argument("log power must be >= 0");
  LogSeries f(policy.working());
  f.add(1L, a, 1);
  return euler_maclaurin_sum(f, policy);
}

std::vector<BasisFunction> inverse_power_basis(int orders) { return log_power_basis(1, orders); }

std::vector<BasisFunction> log_power_basis(int log_powers, int orders) {
  std::vector<BasisFunction> basis;
  for (int j = 1; j <= orders; ++j) {
    for (int i = 0; i < log_powers; ++i) basis.push_back({i, j});
  }
  return basis;
}

namespace {

// Solves A x = b by Gaussian elimination with partial pivoting and returns x[0].
Real solve_first_unknown(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col].is_zero()) throw UnreliableExtrapolationError("singular extrapolation system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      const Real factor = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Real> x(n, Real(b[0].precision()));
  for (size_t i = n; i-- > 0;) {
    Real acc = b[i];
    for (size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x[0];
}

}  // namespace

SeriesResult richardson_limit(std::span<const Sample> samples, std::span<const BasisFunction> basis,
                              const TailPolicy& policy) {
  policy.validate();
  if (samples.empty()) throw std::invalid_argument("richardson_limit needs samples");

  // Group by order; each order must use log powers 0..m.
  std::map<int, int> logs_per_order;
  for (const BasisFunction& f : basis) {
    if (f.inverse_power < 1 || f.log_power < 0) throw std::invalid_argument("invalid basis function");
    logs_per_order[f.inverse_power] = std::max(logs_per_order[f.inverse_power], f.log_power + 1);
  }
  for (const auto& [order, logs] : logs_per_order) {
    int seen = 0;
    for (const BasisFunction& f : basis) seen += f.inverse_power == order ? 1 : 0;
    if (seen != logs) throw std::invalid_argument("basis log powers must be 0..m for every order");
  }
  std::vector<std::pair<int, int>> orders(logs_per_order.begin(), logs_per_order.end());
  std::vector<size_t> unknowns{1};
  for (const auto& [order, logs] : orders) unknowns.push_back(unknowns.back() + static_cast<size_t>(logs));
  const size_t levels = orders.size();
  if (samples.size() < unknowns.back()) {
    throw std::invalid_argument("richardson_limit needs at least " + std::to_string(unknowns.back()) + " samples");
  }

  Precision work = samples.front().value.precision();
  long long n_ref = samples.front().n;
  long long n_max = samples.front().n;
  for (const Sample& s : samples) {
    work = std::max(work, s.value.precision());
    n_ref = std::min(n_ref, s.n);
    n_max = std::max(n_max, s.n);
  }
  if (n_ref < 1) throw std::invalid_argument("sample points must be >= 1");

  // Column values ln(N/N_ref)^i * (N_ref/N)^j span the same space as
  // ln^i N / N^j when every order carries log powers 0..m.
  auto row_for = [&](const Sample& s, size_t level) {
    const Real ratio = Real(static_cast<long>(n_ref), work) / Real(static_cast<long>(s.n), work);
    const Real ell = -log(ratio);
    std::vector<Real> row{Real(1L, work)};
    for (size_t o = 0; o < level; ++o) {
      const Real u = pow(ratio, static_cast<unsigned long>(orders[o].first));
      for (int i = 0; i < orders[o].second; ++i) row.push_back(u * pow(ell, static_cast<unsigned long>(i)));
    }
    return row;
  };

  auto extrapolate = [&](size_t level) {
    const size_t m = unknowns[level];
    std::vector<std::vector<Real>> a;
    std::vector<Real> b;
    for (size_t i = 0; i < m; ++i) {
      // spread the m equations over the whole sample range
      const size_t idx = m == 1 ? samples.size() - 1 : (i * (samples.size() - 1) + (m - 1) / 2) / (m - 1);
      a.push_back(row_for(samples[idx], level));
      b.push_back(samples[idx].value.at(work));
    }
    return solve_first_unknown(std::move(a), std::move(b));
  };

  const size_t first_level = levels >= 3 ? levels - 3 : 0;
  std::vector<Real> estimates;
  for (size_t level = first_level; level <= levels; ++level) estimates.push_back(extrapolate(level));

  std::vector<Real> deltas;
  for (size_t i = 1; i < estimates.size(); ++i) deltas.push_back(abs(estimates[i] - estimates[i - 1]));

  const Real floor = policy.tolerance() / 100L;
  for (size_t i = 1; i < deltas.size(); ++i) {
    if (deltas[i] > deltas[i - 1] && !(deltas[i] < floor)) {
      throw UnreliableExtrapolationError("extrapolation deltas grow: " + deltas[i - 1].to_scientific(3) + " -> " +
                                         deltas[i].to_scientific(3));
    }
  }

  Real value = estimates.back();
  Real bound = deltas.empty() ? Real(work) : deltas.back();
  bound += rounding_floor(policy.working(), 1) * max(abs(value), Real(1L, work));
  return {std::move(value), std::move(bound), n_max, SeriesMethod::richardson};
}

SeriesResult richardson_limit(const Sequence& sequence, std::span<const BasisFunction> basis,
                              std::span<const long long> sample_points, const TailPolicy& policy) {
  const Precision work = policy.working().plus(10 + 3 * static_cast<int>(basis.size()));
  std::vector<Sample> samples;
  samples.reserve(sample_points.size());
  for (const long long n : sample_points) samples.push_back({n, sequence(n, work)});
  return richardson_limit(samples, basis, policy);
}

}  // namespace isocalc
