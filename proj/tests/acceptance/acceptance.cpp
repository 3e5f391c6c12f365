// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and time limits are fixed here.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "core/constants.hpp"
#include "core/log_power.hpp"
#include "core/scale_grid.hpp"
#include "isocalc/isocalc.h"

namespace {

using namespace isocalc;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> check;
};

class Context {
 public:
  Context() : ctx_(isocalc_context_create()) {}
  ~Context() { isocalc_context_destroy(ctx_); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
  isocalc_context* get() const { return ctx_; }

 private:
  isocalc_context* ctx_;
};

std::string value_string(isocalc_result* r, int digits) {
  std::vector<char> buf(ISOCALC_BUFFER_SIZE(digits));
  if (isocalc_result_value(r, digits, buf.data(), buf.size()) != ISOCALC_OK) return "<format error>";
  return buf.data();
}

using Getter = isocalc_status (*)(isocalc_context*, int, int, isocalc_result**);

// Value printed through the C interface at `digits`, or the error text.
std::string printed(Getter get, int k, int digits) {
  Context ctx;
  isocalc_result* r = nullptr;
  const isocalc_status s = get(ctx.get(), k, digits, &r);
  if (s != ISOCALC_OK) return std::string("<") + isocalc_status_string(s) + ": " + isocalc_context_last_error(ctx.get()) + ">";
  std::string out = value_string(r, digits);
  isocalc_result_destroy(r);
  return out;
}

Outcome string_match(const std::string& what, const std::string& got, const std::string& expected) {
  return {got == expected, what + " printed " + got + ", expected " + expected};
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(ISOCALC_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return "<popen failed>";
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) out += "<exit " + std::to_string(WEXITSTATUS(status)) + ">";
  return out;
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> list;

  list.push_back({1, "gamma(1) at 12 digits", 5.0,
                  [] { return string_match("gamma_1", printed(isocalc_gamma, 1, 12), "0.577215664901"); }});

  list.push_back({2, "gamma'(1) at 12 digits", 5.0, [] {
                    return string_match("gamma'_1", printed(isocalc_gamma_prime, 1, 12), "0.422784335099");
                  }});

  list.push_back(
      {3, "gamma(2) at 9 digits", 30.0, [] { return string_match("gamma_2", printed(isocalc_gamma, 2, 9), "1.49930237"); }});

  list.push_back({4, "gamma(3) and gamma'(3) at 8 digits", 120.0, [] {
                    // 60 s for each of the two values.
                    const auto timed = [](Getter get, const char* name, const char* expected) {
                      const auto start = std::chrono::steady_clock::now();
                      Outcome o = string_match(name, printed(get, 3, 8), expected);
                      if (std::chrono::steady_clock::now() - start > std::chrono::seconds(60)) {
                        o = {false, o.detail + " (over 60 s)"};
                      }
                      return o;
                    };
                    const auto a = timed(isocalc_gamma, "gamma_3", "3.9856304");
                    const auto b = timed(isocalc_gamma_prime, "gamma'_3", "2.6396589");
                    return Outcome{a.pass && b.pass, a.detail + "; " + b.detail};
                  }});

  list.push_back({5, "lambda_1 at 7 digits by both routes", 30.0, [] {
                    Context ctx;
                    isocalc_result* moment = nullptr;
                    isocalc_result* identity = nullptr;
                    const isocalc_status s = isocalc_lambda1(ctx.get(), 7, &moment, &identity);
                    if (s != ISOCALC_OK) return Outcome{false, isocalc_context_last_error(ctx.get())};
                    const std::string a = value_string(moment, 7);
                    const std::string b = value_string(identity, 7);
                    const Precision p(40);
                    const Real gap = abs(Real::parse(value_string(moment, 30), p) - Real::parse(value_string(identity, 30), p));
                    isocalc_result_destroy(moment);
                    isocalc_result_destroy(identity);
                    const bool agree = gap < Real::parse("1e-7", p);
                    return Outcome{a == "0.1873553" && b == "0.1873553" && agree,
                                   "log-moment " + a + ", identity " + b + ", expected 0.1873553; |difference| " +
                                       gap.to_scientific(2) + (agree ? " < 1e-7" : " >= 1e-7")};
                  }});

  list.push_back({6, "identity suite at 12 digits", 180.0, [] {
                    Context ctx;
                    isocalc_table* t = nullptr;
                    if (isocalc_verify_identities(ctx.get(), 12, &t) != ISOCALC_OK) {
                      return Outcome{false, isocalc_context_last_error(ctx.get())};
                    }
                    bool ok = isocalc_table_rows(t) == 5;
                    std::string worst = "0";
                    Real max_residual(0L, Precision(20));
                    for (size_t r = 0; r < isocalc_table_rows(t); ++r) {
                      const Real residual = Real::parse(isocalc_table_cell(t, r, 3), Precision(20));
                      ok = ok && std::string(isocalc_table_cell(t, r, 5)) == "pass" &&
                           residual < Real::parse("1e-10", Precision(20));
                      if (residual > max_residual) max_residual = residual;
                    }
                    isocalc_table_destroy(t);
                    return Outcome{ok, "5 identities, largest residual " + max_residual.to_scientific(2) + " (< 1e-10 required)"};
                  }});

  list.push_back({7, "gamma vs oracle, k = 1..5, 30 digits", 600.0, [] {
                    bool ok = true;
                    std::string detail;
                    for (int k = 1; k <= 5; ++k) {
                      const auto g = gamma(k, 30);
                      const auto o = gamma_oracle(k, 30);
                      const Real diff = abs(g.value - o.value);
                      const Real bound = g.error_bound + o.error_bound;
                      ok = ok && diff <= bound;
                      detail += "k=" + std::to_string(k) + " " + diff.to_scientific(2) + "<=" + bound.to_scientific(2) + " ";
                    }
                    return Outcome{ok, detail};
                  }});

  list.push_back({8, "telescoping, 200 random cases at 40 digits", 60.0, [] {
                    std::mt19937_64 rng(8);
                    std::uniform_int_distribution<int> kd(1, 5), xd(1, 100), nd(1, 1000);
                    const Precision p(40);
                    const Real tol = pow10(2 - p.digits(), Precision(60));
                    Real worst(0L, Precision(60));
                    for (int c = 0; c < 200; ++c) {
                      const LogPowerFamily fam(kd(rng));
                      const auto F = log_power_function(fam.k());
                      const long long n = nd(rng);
                      const long long x0 = xd(rng);
                      const long long b0 = std::max(2LL, x0);
                      const TermFunction fwd = [&](long long x, Precision q) { return fam.exact_forward(x, q); };
                      const TermFunction bwd = [&](long long x, Precision q) { return fam.exact_backward(x, q); };
                      const auto at = [&](long long x) { return F(Real(static_cast<long>(x), p.guarded())); };
                      worst = max(worst, abs(barrow_forward_sum(fwd, x0, n, p) - (at(x0 + n) - at(x0))));
                      worst = max(worst, abs(barrow_backward_sum(bwd, b0, n, p) - (at(b0 + n) - at(b0 - 1))));
                    }
                    return Outcome{worst <= tol, "worst |sum - endpoints| " + worst.to_scientific(2) + " vs 1e-38"};
                  }});

  list.push_back({9, "0 < 1/x - ln(1+1/x) < 1/(2x^2) on [1, 1e5]", 60.0, [] {
                    const LogPowerFamily k1(1);
                    const Precision p(30);
                    for (long long x = 1; x <= 100000; ++x) {
                      const Real e = k1.forward_term_error(x, p);
                      const Real xr(static_cast<long>(x), p);
                      if (!(e > 0L) || !(e < 1L / (2L * xr * xr))) return Outcome{false, "fails at x = " + std::to_string(x)};
                    }
                    return Outcome{true, "100000 points"};
                  }});

  list.push_back({10, "grid error ratios for ln at x = 2, base 2", 10.0, [] {
                    std::vector<int> gaps;
                    for (int m = 3; m <= 20; ++m) gaps.push_back(m);
                    const Precision p(40);
                    const auto rows = extreme_convergence_probe(log_power_function(1), log_power_derivative_function(1),
                                                                Real(2L, p), 2, gaps, p);
                    double lo = 1, hi = 0;
                    for (const auto& row : rows) {
                      if (row.gap < 4) continue;
                      const double r = row.error_ratio ? row.error_ratio->to_double() : -1;
                      lo = std::min(lo, r);
                      hi = std::max(hi, r);
                    }
                    return Outcome{lo >= 0.4 && hi <= 0.6,
                                   "ratios in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] for m = 4..20"};
                  }});

  list.push_back({11, "e_threshold(1e-3) and brute-force scan", 10.0, [] {
                    const Precision p(50);
                    const Real eps = Real::parse("1e-3", p);
                    const long long t = e_threshold(eps);
                    bool ok = e_gap(t, p) < eps && e_gap(t - 1, p) >= eps;
                    std::string detail = "t(1e-3) = " + std::to_string(t);
                    for (const char* text : {"0.5", "0.3", "0.1", "0.05", "0.01", "0.005", "0.002", "0.001"}) {
                      const Real e = Real::parse(text, p);
                      long long scan = 1;
                      while (!(e_gap(scan, p) < e)) ++scan;
                      if (e_threshold(e) != scan) {
                        ok = false;
                        detail += "; mismatch at " + std::string(text);
                      }
                    }
                    return Outcome{ok, detail + "; scan agrees for 8 epsilons"};
                  }});

  list.push_back({12, "constants output identical for --threads 1 and 8", 600.0, [] {
                    const std::string args = "constants --k 1..5 --digits 30 --lambda1 --no-timestamp";
                    const std::string one = run_cli(args + " --threads 1");
                    const std::string eight = run_cli(args + " --threads 8");
                    return Outcome{one == eight && one.find("<exit") == std::string::npos,
                                   std::to_string(one.size()) + " bytes, " + (one == eight ? "identical" : "different")};
                  }});
  return list;
}

}  // namespace

int main() {
  int failed = 0;
  for (const auto& c : criteria()) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failed;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", seconds, c.limit_seconds);
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " | " << outcome.detail << " | "
              << timing << (in_time ? "" : " (too slow)") << '\n';
  }
  std::cout << (12 - failed) << "/12 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
