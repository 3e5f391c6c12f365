#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/log_power.hpp"
#include "core/scale_grid.hpp"
#include "core/series.hpp"
#include "isocalc/isocalc.h"

struct isocalc_context {
  isocalc::ComputeOptions options;
  std::string last_error;
};

struct isocalc_result {
  isocalc::SeriesResult series;
};

struct isocalc_table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

namespace {

using isocalc::Precision;
using isocalc::Real;

constexpr const char* kDomainMarker = "domain-error";

template <typename Fn>
isocalc_status guarded(isocalc_context* ctx, Fn&& fn) {
  if (ctx == nullptr) return ISOCALC_ERR_INVALID_ARGUMENT;
  auto fail = [ctx](isocalc_status status, const char* what) {
    ctx->last_error = what;
    return status;
  };
  try {
    const isocalc_status status = fn();
    if (status == ISOCALC_OK) ctx->last_error.clear();
    return status;
  } catch (const isocalc::DomainError& e) {
    return fail(ISOCALC_ERR_DOMAIN, e.what());
  } catch (const isocalc::PrecisionError& e) {
    return fail(ISOCALC_ERR_PRECISION, e.what());
  } catch (const isocalc::DivergenceError& e) {
    return fail(ISOCALC_ERR_DIVERGENCE, e.what());
  } catch (const isocalc::NonConvergenceError& e) {
    return fail(ISOCALC_ERR_NON_CONVERGENCE, e.what());
  } catch (const isocalc::UnreliableExtrapolationError& e) {
    return fail(ISOCALC_ERR_UNRELIABLE_EXTRAPOLATION, e.what());
  } catch (const isocalc::ConsistencyError& e) {
    const std::string detail = std::string(e.what()) + " [" + e.first() + " vs " + e.second() + "]";
    return fail(ISOCALC_ERR_CONSISTENCY, detail.c_str());
  } catch (const isocalc::CapError& e) {
    return fail(ISOCALC_ERR_CAP, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ISOCALC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(ISOCALC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ISOCALC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ISOCALC_ERR_INTERNAL, e.what());
  }
}

isocalc_status copy_out(const std::string& text, char* buffer, size_t size) {
  if (buffer == nullptr || size <= text.size()) return ISOCALC_ERR_BUFFER_TOO_SMALL;
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return ISOCALC_OK;
}

void require_digits(int digits, const isocalc_context* ctx) {
  if (digits < 1 || digits > ctx->options.max_digits) {
    throw std::invalid_argument("digits must be in [1, " + std::to_string(ctx->options.max_digits) + "]");
  }
}

// "ln" -> 1, "ln2" -> 2, ...
int parse_log_power_name(const char* function) {
  if (function == nullptr) throw std::invalid_argument("function name is NULL");
  const std::string name(function);
  if (name == "ln") return 1;
  if (name.size() > 2 && name.compare(0, 2, "ln") == 0 &&
      name.find_first_not_of("0123456789", 2) == std::string::npos && name.size() <= 4) {
    const int k = std::stoi(name.substr(2));
    if (k >= 1 && k <= isocalc::LogPowerFamily::kMaxK) return k;
  }
  throw std::invalid_argument("unknown function '" + name + "' (expected ln, ln2, ln3, ...)");
}

Real parse_real(const char* text, Precision p) {
  if (text == nullptr) throw std::invalid_argument("number is NULL");
  return Real::parse(text, p);
}

isocalc::DerivativeKind kind_of(isocalc_derivative which) {
  using isocalc::Direction;
  using isocalc::Fidelity;
  switch (which) {
    case ISOCALC_EXACT_FORWARD:
      return {Direction::forward, Fidelity::exact};
    case ISOCALC_APPROX_FORWARD:
      return {Direction::forward, Fidelity::approximate};
    case ISOCALC_EXACT_BACKWARD:
      return {Direction::backward, Fidelity::exact};
    case ISOCALC_APPROX_BACKWARD:
      return {Direction::backward, Fidelity::approximate};
    default:
      throw std::invalid_argument("not a plain derivative kind");
  }
}

Real evaluate_derivative(const isocalc::LogPowerFamily& family, isocalc_derivative which, long long x, Precision p) {
  switch (which) {
    case ISOCALC_FORWARD_ERROR:
      return family.forward_term_error(x, p);
    case ISOCALC_BACKWARD_ERROR:
      return family.backward_term_error(x, p);
    case ISOCALC_EXACT_FORWARD:
    case ISOCALC_APPROX_FORWARD:
    case ISOCALC_EXACT_BACKWARD:
    case ISOCALC_APPROX_BACKWARD:
      return family.derivative(kind_of(which), x, p);
  }
  throw std::invalid_argument("unknown derivative kind");
}

isocalc_status store_result(isocalc::SeriesResult series, isocalc_result** out) {
  *out = new isocalc_result{std::move(series)};
  return ISOCALC_OK;
}

}  // namespace

extern "C" {

const char* isocalc_version(void) { return "1.0.0"; }

const char* isocalc_status_string(isocalc_status status) {
  switch (status) {
    case ISOCALC_OK:
      return "ok";
    case ISOCALC_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case ISOCALC_ERR_DOMAIN:
      return "domain error";
    case ISOCALC_ERR_PRECISION:
      return "precision error";
    case ISOCALC_ERR_DIVERGENCE:
      return "divergent series";
    case ISOCALC_ERR_NON_CONVERGENCE:
      return "no convergence within max_terms";
    case ISOCALC_ERR_UNRELIABLE_EXTRAPOLATION:
      return "unreliable extrapolation";
    case ISOCALC_ERR_CONSISTENCY:
      return "consistency error";
    case ISOCALC_ERR_CAP:
      return "cap exceeded";
    case ISOCALC_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case ISOCALC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

isocalc_context* isocalc_context_create(void) { return new (std::nothrow) isocalc_context{}; }

void isocalc_context_destroy(isocalc_context* ctx) { delete ctx; }

isocalc_status isocalc_context_set_threads(isocalc_context* ctx, int threads) {
  return guarded(ctx, [&] {
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    ctx->options.threads = threads;
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_context_set_max_terms(isocalc_context* ctx, long long max_terms) {
  return guarded(ctx, [&] {
    if (max_terms < 1) throw std::invalid_argument("max_terms must be >= 1");
    ctx->options.max_terms = max_terms;
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_context_set_max_digits(isocalc_context* ctx, int max_digits) {
  return guarded(ctx, [&] {
    if (max_digits < 1) throw std::invalid_argument("max_digits must be >= 1");
    ctx->options.max_digits = max_digits;
    return ISOCALC_OK;
  });
}

const char* isocalc_context_last_error(const isocalc_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

isocalc_status isocalc_gamma(isocalc_context* ctx, int k, int digits, isocalc_result** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    return store_result(isocalc::gamma(k, digits, ctx->options), out);
  });
}

isocalc_status isocalc_gamma_prime(isocalc_context* ctx, int k, int digits, isocalc_result** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    return store_result(isocalc::gamma_prime(k, digits, ctx->options), out);
  });
}

isocalc_status isocalc_gamma_oracle(isocalc_context* ctx, int k, int digits, isocalc_result** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    return store_result(isocalc::gamma_oracle(k, digits, ctx->options), out);
  });
}

isocalc_status isocalc_gamma_prime_oracle(isocalc_context* ctx, int k, int digits, isocalc_result** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    return store_result(isocalc::gamma_prime_oracle(k, digits, ctx->options), out);
  });
}

isocalc_status isocalc_lambda1(isocalc_context* ctx, int digits, isocalc_result** log_moment_path,
                               isocalc_result** identity_path) {
  return guarded(ctx, [&] {
    isocalc::Lambda1Paths paths = isocalc::lambda1_paths(digits, ctx->options);
    if (log_moment_path != nullptr) *log_moment_path = new isocalc_result{std::move(paths.log_moment)};
    if (identity_path != nullptr) *identity_path = new isocalc_result{std::move(paths.identity)};
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_log_moment_sum(isocalc_context* ctx, int a, int j, int digits, isocalc_result** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    require_digits(digits, ctx);
    isocalc::TailPolicy policy;
    policy.target_digits = digits + 6;
    policy.max_terms = ctx->options.max_terms;
    policy.threads = ctx->options.threads;
    return store_result(isocalc::log_moment_sum(a, j, policy), out);
  });
}

isocalc_status isocalc_stieltjes_like_limit(isocalc_context* ctx, int a, int digits, isocalc_result** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    require_digits(digits, ctx);
    isocalc::TailPolicy policy;
    policy.target_digits = digits + 6;
    policy.max_terms = ctx->options.max_terms;
    policy.threads = ctx->options.threads;
    return store_result(isocalc::stieltjes_like_limit(a, policy), out);
  });
}

void isocalc_result_destroy(isocalc_result* result) { delete result; }

isocalc_status isocalc_result_value(const isocalc_result* result, int digits, char* buffer, size_t size) {
  if (result == nullptr || digits < 1) return ISOCALC_ERR_INVALID_ARGUMENT;
  return copy_out(result->series.value.to_decimal(digits), buffer, size);
}

isocalc_status isocalc_result_error_bound(const isocalc_result* result, char* buffer, size_t size) {
  if (result == nullptr) return ISOCALC_ERR_INVALID_ARGUMENT;
  return copy_out(result->series.error_bound.to_scientific(2), buffer, size);
}

long long isocalc_result_terms_used(const isocalc_result* result) {
  return result == nullptr ? -1 : result->series.terms_used;
}

const char* isocalc_result_method(const isocalc_result* result) {
  return result == nullptr ? "" : isocalc::to_string(result->series.method).data();
}

isocalc_status isocalc_e_threshold(isocalc_context* ctx, const char* epsilon, long long* t) {
  return guarded(ctx, [&] {
    if (t == nullptr) throw std::invalid_argument("t is NULL");
    *t = isocalc::e_threshold(parse_real(epsilon, Precision(60)));
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_log_power_derivative(isocalc_context* ctx, int k, long long x, isocalc_derivative which,
                                            int digits, char* buffer, size_t size) {
  return guarded(ctx, [&] {
    require_digits(digits, ctx);
    const isocalc::LogPowerFamily family(k);
    return copy_out(evaluate_derivative(family, which, x, Precision(digits)).to_decimal(digits), buffer, size);
  });
}

isocalc_status isocalc_difference_quotient(isocalc_context* ctx, const char* function, const char* x, int base,
                                           int gap, long multiplier, int digits, char* buffer, size_t size) {
  return guarded(ctx, [&] {
    require_digits(digits, ctx);
    const Precision p(digits);
    const auto f = isocalc::log_power_function(parse_log_power_name(function));
    const isocalc::ScaleGrid grid(base, gap, multiplier);
    return copy_out(isocalc::difference_quotient(f, parse_real(x, p.guarded()), grid, p).to_decimal(digits), buffer,
                    size);
  });
}

isocalc_status isocalc_barrow_sum(isocalc_context* ctx, int k, isocalc_derivative which, long long x0, long long n,
                                  int digits, char* buffer, size_t size) {
  return guarded(ctx, [&] {
    require_digits(digits, ctx);
    const isocalc::LogPowerFamily family(k);
    const isocalc::TermFunction term = [&family, which](long long x, Precision p) {
      return evaluate_derivative(family, which, x, p);
    };
    const bool forward =
        which == ISOCALC_EXACT_FORWARD || which == ISOCALC_APPROX_FORWARD || which == ISOCALC_FORWARD_ERROR;
    const Precision p(digits);
    const Real sum = forward ? isocalc::barrow_forward_sum(term, x0, n, p) : isocalc::barrow_backward_sum(term, x0, n, p);
    return copy_out(sum.to_decimal(digits), buffer, size);
  });
}

isocalc_status isocalc_grid_probe(isocalc_context* ctx, const char* function, const char* x, int base,
                                  const int* gaps, size_t gap_count, int digits, isocalc_table** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    if (gaps == nullptr || gap_count == 0) throw std::invalid_argument("no gaps given");
    require_digits(digits, ctx);
    const Precision p(digits);
    const int k = parse_log_power_name(function);
    const auto rows = isocalc::extreme_convergence_probe(isocalc::log_power_function(k),
                                                         isocalc::log_power_derivative_function(k),
                                                         parse_real(x, p.guarded()), base,
                                                         std::span<const int>(gaps, gap_count), p);
    auto table = std::make_unique<isocalc_table>();
    table->columns = {"m", "step", "quotient", "analytic", "error", "error_ratio"};
    for (const auto& r : rows) {
      table->rows.push_back({std::to_string(r.gap), r.step.to_decimal(digits), r.quotient.to_decimal(digits),
                             r.analytic.to_decimal(digits), r.error.to_decimal(digits),
                             r.error_ratio ? r.error_ratio->to_decimal(digits) : "-"});
    }
    *out = table.release();
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_verify_identities(isocalc_context* ctx, int digits, isocalc_table** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    const auto reports = isocalc::verify_identities(digits, ctx->options);
    auto table = std::make_unique<isocalc_table>();
    table->columns = {"identity", "lhs", "rhs", "residual", "tolerance", "pass"};
    for (const auto& r : reports) {
      table->rows.push_back({r.name, r.lhs.to_decimal(digits), r.rhs.to_decimal(digits), r.residual.to_scientific(2),
                             r.tolerance.to_scientific(2), r.passed ? "pass" : "fail"});
    }
    *out = table.release();
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_derivative_table(isocalc_context* ctx, int k, long long x_from, long long x_to, int digits,
                                        isocalc_table** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    if (x_from < 1 || x_to < x_from) throw std::invalid_argument("x range must satisfy 1 <= from <= to");
    if (x_to - x_from >= 1'000'000) throw std::invalid_argument("x range longer than 10^6 rows");
    require_digits(digits, ctx);
    const isocalc::LogPowerFamily family(k);
    const Precision p(digits);
    auto table = std::make_unique<isocalc_table>();
    table->columns = {"x", "exact_fwd", "approx_fwd", "fwd_error", "exact_bwd", "approx_bwd", "bwd_error"};
    constexpr isocalc_derivative kinds[] = {ISOCALC_EXACT_FORWARD,  ISOCALC_APPROX_FORWARD,
                                            ISOCALC_FORWARD_ERROR,  ISOCALC_EXACT_BACKWARD,
                                            ISOCALC_APPROX_BACKWARD, ISOCALC_BACKWARD_ERROR};
    for (long long x = x_from; x <= x_to; ++x) {
      std::vector<std::string> row{std::to_string(x)};
      for (const auto which : kinds) {
        try {
          row.push_back(evaluate_derivative(family, which, x, p).to_decimal(digits));
        } catch (const isocalc::DomainError&) {
          row.emplace_back(kDomainMarker);
        }
      }
      table->rows.push_back(std::move(row));
    }
    *out = table.release();
    return ISOCALC_OK;
  });
}

isocalc_status isocalc_barrow_residual_table(isocalc_context* ctx, int k, long long n_max, int digits,
                                             isocalc_table** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) throw std::invalid_argument("out is NULL");
    require_digits(digits, ctx);
    const auto rows = isocalc::barrow_residual_table(k, n_max, Precision(digits));
    auto table = std::make_unique<isocalc_table>();
    table->columns = {"n", "approx_sum", "endpoint", "residual"};
    for (const auto& r : rows) {
      table->rows.push_back({std::to_string(r.n), r.approx_sum.to_decimal(digits), r.endpoint.to_decimal(digits),
                             r.residual.to_decimal(digits)});
    }
    *out = table.release();
    return ISOCALC_OK;
  });
}

void isocalc_table_destroy(isocalc_table* table) { delete table; }

size_t isocalc_table_rows(const isocalc_table* table) { return table == nullptr ? 0 : table->rows.size(); }

size_t isocalc_table_columns(const isocalc_table* table) { return table == nullptr ? 0 : table->columns.size(); }

const char* isocalc_table_column_name(const isocalc_table* table, size_t column) {
  if (table == nullptr || column >= table->columns.size()) return nullptr;
  return table->columns[column].c_str();
}

const char* isocalc_table_cell(const isocalc_table* table, size_t row, size_t column) {
  if (table == nullptr || row >= table->rows.size() || column >= table->columns.size()) return nullptr;
  return table->rows[row][column].c_str();
}

}  // extern "C"
