// isocalc: command-line front end over the isocalc C library.
//
// Exit codes: 0 ok, 1 identity check failed, 2 usage, 3 consistency error
// between independent routes, 4 any other computation failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isocalc/isocalc.h"
#include "support/cache.hpp"
#include "support/config.hpp"
#include "support/report.hpp"

namespace {

using isocalc::cli::CacheRecord;
using isocalc::cli::Report;

enum Exit : int { kOk = 0, kIdentityFailed = 1, kUsage = 2, kConsistency = 3, kComputation = 4 };

struct Failure {
  int exit_code;
  std::string message;
};

struct ContextDeleter {
  void operator()(isocalc_context* c) const { isocalc_context_destroy(c); }
};
struct ResultDeleter {
  void operator()(isocalc_result* r) const { isocalc_result_destroy(r); }
};
struct TableDeleter {
  void operator()(isocalc_table* t) const { isocalc_table_destroy(t); }
};
using ContextPtr = std::unique_ptr<isocalc_context, ContextDeleter>;
using ResultPtr = std::unique_ptr<isocalc_result, ResultDeleter>;
using TablePtr = std::unique_ptr<isocalc_table, TableDeleter>;

int exit_code_for(isocalc_status status) {
  switch (status) {
    case ISOCALC_OK:
      return kOk;
    case ISOCALC_ERR_INVALID_ARGUMENT:
    case ISOCALC_ERR_DOMAIN:
      return kUsage;
    case ISOCALC_ERR_CONSISTENCY:
      return kConsistency;
    default:
      return kComputation;
  }
}

void check(const isocalc_context* ctx, isocalc_status status, const std::string& what) {
  if (status == ISOCALC_OK) return;
  std::string message = what + ": " + isocalc_status_string(status);
  const std::string detail = isocalc_context_last_error(ctx);
  if (!detail.empty()) message += " (" + detail + ")";
  throw Failure{exit_code_for(status), message};
}

struct Options {
  std::optional<int> digits;
  std::string format = "text";
  std::string config_path;
  std::optional<int> threads;
  std::optional<long long> max_terms;
  std::string cache_path;
  bool no_timestamp = false;
};

struct Session {
  ContextPtr ctx;
  int digits = 0;
  std::unique_ptr<isocalc::cli::Cache> cache;
  bool cache_dirty = false;
};

std::string value_string(const isocalc_result* r, int digits) {
  std::vector<char> buf(ISOCALC_BUFFER_SIZE(digits));
  if (isocalc_result_value(r, digits, buf.data(), buf.size()) != ISOCALC_OK) {
    throw Failure{kComputation, "cannot format value"};
  }
  return buf.data();
}

std::string bound_string(const isocalc_result* r) {
  char buf[64];
  if (isocalc_result_error_bound(r, buf, sizeof buf) != ISOCALC_OK) throw Failure{kComputation, "cannot format bound"};
  return buf;
}

CacheRecord record_of(const std::string& kind, const std::string& key, int digits, const isocalc_result* r) {
  return {kind, key, digits, value_string(r, digits), bound_string(r), isocalc_result_method(r),
          isocalc::cli::iso8601_now()};
}

template <typename Compute>
CacheRecord cached(Session& s, const std::string& kind, const std::string& key, Compute&& compute) {
  if (s.cache) {
    if (auto hit = s.cache->find(kind, key, s.digits)) return *hit;
  }
  CacheRecord record = compute();
  if (s.cache) {
    s.cache->put(record);
    s.cache_dirty = true;
  }
  return record;
}

std::vector<std::string> row_of(const std::string& quantity, const CacheRecord& r) {
  return {quantity, r.value, r.bound, r.method};
}

void run_constants(Session& s, Report& report, const std::vector<int>& ks, bool with_lambda1,
                   const std::string& epsilon) {
  report.columns = {"quantity", "value", "error_bound", "method"};
  report.truncated = {false, true, false, false};
  isocalc_context* ctx = s.ctx.get();
  for (const int k : ks) {
    const std::string key = std::to_string(k);
    const auto g = cached(s, "gamma", key, [&] {
      isocalc_result* raw = nullptr;
      check(ctx, isocalc_gamma(ctx, k, s.digits, &raw), "gamma_" + key);
      const ResultPtr r(raw);
      return record_of("gamma", key, s.digits, r.get());
    });
    report.rows.push_back(row_of("gamma_" + key, g));
    const auto gp = cached(s, "gamma_prime", key, [&] {
      isocalc_result* raw = nullptr;
      check(ctx, isocalc_gamma_prime(ctx, k, s.digits, &raw), "gamma'_" + key);
      const ResultPtr r(raw);
      return record_of("gamma_prime", key, s.digits, r.get());
    });
    report.rows.push_back(row_of("gamma'_" + key, gp));
  }
  if (with_lambda1) {
    auto moment = s.cache ? s.cache->find("lambda1", "-", s.digits) : std::nullopt;
    auto identity = s.cache ? s.cache->find("lambda1_identity", "-", s.digits) : std::nullopt;
    if (!moment || !identity) {
      isocalc_result* a = nullptr;
      isocalc_result* b = nullptr;
      check(ctx, isocalc_lambda1(ctx, s.digits, &a, &b), "lambda_1");
      const ResultPtr ra(a), rb(b);
      moment = record_of("lambda1", "-", s.digits, ra.get());
      identity = record_of("lambda1_identity", "-", s.digits, rb.get());
      if (s.cache) {
        s.cache->put(*moment);
        s.cache->put(*identity);
        s.cache_dirty = true;
      }
    }
    report.rows.push_back(row_of("lambda_1", *moment));
    report.rows.push_back(row_of("lambda_1 via gamma_3 + gamma'_3", *identity));
  }
  if (!epsilon.empty()) {
    const auto t = cached(s, "e_threshold", epsilon, [&] {
      long long value = 0;
      check(ctx, isocalc_e_threshold(ctx, epsilon.c_str(), &value), "e_threshold");
      return CacheRecord{"e_threshold", epsilon, s.digits, std::to_string(value), "0", "search",
                         isocalc::cli::iso8601_now()};
    });
    report.rows.push_back(row_of("e_threshold(" + epsilon + ")", t));
  }
}

void fill_from_table(Report& report, const isocalc_table* table, const std::vector<bool>& truncated) {
  report.columns.clear();
  report.rows.clear();
  const std::size_t ncol = isocalc_table_columns(table);
  for (std::size_t c = 0; c < ncol; ++c) report.columns.emplace_back(isocalc_table_column_name(table, c));
  for (std::size_t r = 0; r < isocalc_table_rows(table); ++r) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c < ncol; ++c) row.emplace_back(isocalc_table_cell(table, r, c));
    report.rows.push_back(std::move(row));
  }
  report.truncated = truncated;
}

int run_verify(Session& s, Report& report) {
  isocalc_table* raw = nullptr;
  check(s.ctx.get(), isocalc_verify_identities(s.ctx.get(), s.digits, &raw), "verify");
  const TablePtr table(raw);
  fill_from_table(report, table.get(), {false, true, true, false, false, false});
  for (const auto& row : report.rows) {
    if (row.back() != "pass") return kIdentityFailed;
  }
  return kOk;
}

void run_derivatives(Session& s, Report& report, int k, long long from, long long to, long long residual_n) {
  isocalc_table* raw = nullptr;
  if (residual_n > 0) {
    check(s.ctx.get(), isocalc_barrow_residual_table(s.ctx.get(), k, residual_n, s.digits, &raw), "residual table");
    const TablePtr table(raw);
    fill_from_table(report, table.get(), {false, true, true, true});
    return;
  }
  check(s.ctx.get(), isocalc_derivative_table(s.ctx.get(), k, from, to, s.digits, &raw), "derivative table");
  const TablePtr table(raw);
  fill_from_table(report, table.get(), {false, true, true, true, true, true, true});
}

void run_grid(Session& s, Report& report, const std::string& function, const std::string& x, int base,
              const std::vector<int>& gaps) {
  isocalc_table* raw = nullptr;
  check(s.ctx.get(),
        isocalc_grid_probe(s.ctx.get(), function.c_str(), x.c_str(), base, gaps.data(), gaps.size(), s.digits, &raw),
        "grid probe");
  const TablePtr table(raw);
  fill_from_table(report, table.get(), {false, true, true, true, true, true});
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

std::vector<int> int_list_or_usage(const std::string& text, const char* flag) {
  try {
    return isocalc::cli::parse_int_list(text);
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, std::string(flag) + ": " + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-precision local derivatives of (ln x)^k and the constants they generate.", "isocalc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(isocalc_version()));

  Options opt;
  app.add_option("--digits", opt.digits, "Significant digits of every printed value")->check(CLI::Range(1, 100000));
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--config", opt.config_path, "key = value file with digits, max_terms, cache, threads");
  app.add_option("--threads", opt.threads, "Worker threads; output does not depend on it")->check(CLI::PositiveNumber);
  app.add_option("--max-terms", opt.max_terms, "Cap on summed terms per series")->check(CLI::PositiveNumber);
  app.add_option("--cache", opt.cache_path, "Constant cache file");
  app.add_flag("--no-timestamp", opt.no_timestamp, "Omit wall time and timestamp");

  auto* constants = app.add_subcommand("constants", "Compute gamma_k and gamma'_k, optionally lambda_1 and t(eps)");
  std::string k_list = "1";
  bool with_lambda1 = false;
  std::string epsilon;
  constants->add_option("--k", k_list, "k values, e.g. 1,2,3 or 1..5");
  constants->add_flag("--lambda1", with_lambda1, "Also compute lambda_1 by both routes");
  constants->add_option("--e-threshold", epsilon, "Smallest t with e - (1+1/t)^t < EPS");

  auto* verify = app.add_subcommand("verify", "Check the identities linking the constants");

  auto* derivatives = app.add_subcommand("derivatives", "Tabulate local derivatives of (ln x)^k");
  int deriv_k = 1;
  long long x_from = 1;
  long long x_to = 10;
  long long residual_n = 0;
  derivatives->add_option("--k", deriv_k, "Power k")->check(CLI::Range(1, 60));
  derivatives->add_option("--from", x_from, "First x")->check(CLI::PositiveNumber);
  derivatives->add_option("--to", x_to, "Last x")->check(CLI::PositiveNumber);
  derivatives->add_option("--residual", residual_n, "Instead, tabulate Barrow residuals for n = 1..N")
      ->check(CLI::PositiveNumber);

  auto* grid = app.add_subcommand("grid", "Difference quotients over shrinking grid steps 1/base^m");
  std::string function = "ln";
  std::string grid_x = "2";
  int base = 2;
  std::string m_list = "0..10";
  grid->add_option("--function", function, "ln, ln2 or ln3")->check(CLI::IsMember({"ln", "ln2", "ln3"}));
  grid->add_option("--x", grid_x, "Evaluation point");
  grid->add_option("--base", base, "Grid base")->check(CLI::Range(2, 1000000));
  grid->add_option("--m", m_list, "Gaps, e.g. 0..10 or 0,4,8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    isocalc::cli::Config config;
    if (!opt.config_path.empty()) {
      try {
        config = isocalc::cli::load_config(opt.config_path);
      } catch (const isocalc::cli::ConfigError& e) {
        throw Failure{kUsage, e.what()};
      }
    }

    Session s;
    s.ctx.reset(isocalc_context_create());
    if (!s.ctx) throw Failure{kComputation, "cannot create context"};
    const int default_digits = verify->parsed() ? 12 : 30;
    s.digits = opt.digits.value_or(config.digits.value_or(default_digits));
    if (const auto threads = opt.threads ? opt.threads : config.threads) {
      check(s.ctx.get(), isocalc_context_set_threads(s.ctx.get(), *threads), "--threads");
    }
    if (const auto max_terms = opt.max_terms ? opt.max_terms : config.max_terms) {
      check(s.ctx.get(), isocalc_context_set_max_terms(s.ctx.get(), *max_terms), "--max-terms");
    }

    // verify always recomputes, so it never reads the cache.
    const std::string cache_path = opt.cache_path.empty() ? config.cache.value_or("") : opt.cache_path;
    if (!cache_path.empty() && !verify->parsed()) {
      s.cache = std::make_unique<isocalc::cli::Cache>(cache_path);
      for (const auto& warning : s.cache->load()) std::cerr << "isocalc: warning: " << warning << '\n';
    }

    Report report;
    const auto timestamp = isocalc::cli::iso8601_now();
    const auto start = std::chrono::steady_clock::now();
    int status = kOk;

    if (constants->parsed()) {
      const auto ks = int_list_or_usage(k_list, "--k");
      report.command = "constants";
      report.inputs = {{"k", join(ks)}, {"digits", std::to_string(s.digits)}};
      if (with_lambda1) report.inputs.emplace_back("lambda1", "yes");
      if (!epsilon.empty()) report.inputs.emplace_back("e_threshold", epsilon);
      run_constants(s, report, ks, with_lambda1, epsilon);
    } else if (verify->parsed()) {
      report.command = "verify";
      report.inputs = {{"digits", std::to_string(s.digits)}};
      status = run_verify(s, report);
    } else if (derivatives->parsed()) {
      report.command = "derivatives";
      report.inputs = {{"k", std::to_string(deriv_k)}, {"digits", std::to_string(s.digits)}};
      if (residual_n > 0) {
        report.inputs.emplace_back("residual_n", std::to_string(residual_n));
      } else {
        report.inputs.emplace_back("x", std::to_string(x_from) + ".." + std::to_string(x_to));
      }
      run_derivatives(s, report, deriv_k, x_from, x_to, residual_n);
    } else {
      const auto gaps = int_list_or_usage(m_list, "--m");
      report.command = "grid";
      report.inputs = {{"function", function},
                       {"x", grid_x},
                       {"base", std::to_string(base)},
                       {"m", join(gaps)},
                       {"digits", std::to_string(s.digits)}};
      run_grid(s, report, function, grid_x, base, gaps);
    }

    if (!opt.no_timestamp) {
      report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.timestamp = timestamp;
    }
    std::cout << isocalc::cli::render(report, isocalc::cli::parse_format(opt.format));

    if (s.cache && s.cache_dirty) {
      try {
        s.cache->save();
      } catch (const std::exception& e) {
        std::cerr << "isocalc: warning: " << e.what() << '\n';
      }
    }
    if (status == kIdentityFailed) std::cerr << "isocalc: identity check failed\n";
    return status;
  } catch (const Failure& f) {
    std::cerr << "isocalc: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "isocalc: " << e.what() << '\n';
    return kComputation;
  }
}
