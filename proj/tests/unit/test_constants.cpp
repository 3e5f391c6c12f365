#include "doctest.h"

#include <string>
#include <vector>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/log_power.hpp"
#include "core/series.hpp"

using namespace isocalc;

namespace {

Real ref(const std::string& text) { return Real::parse(text, Precision(80)); }

// Independent values: k S(k-1) + sum C(k,j) M(k-j,j) with S the Stieltjes
// constants and M(a,j) = (-1)^a zeta^(a)(j), evaluated in mpmath at 80 digits.
const char* const kGammaK[] = {
    "0.577215664901532860606512090082402431042159335939923598805767",
    "1.49930237588087298675124241489622255094347722453812253253755",
    "3.98563057652850859105386928710940733638136973988096640980647",
    "13.8187249487283051288285232932544229163865499680107256485214",
    "63.792038136435653824744030839049165476726844255802532214547",
};
const char* const kGammaPrimeK[] = {
    "0.422784335098467139393487909917597568957840664060076401194233",
    "0.790565757815579886193587918395827827494422577875474342933571",
    "2.63965894936655393116157528029778253100579199180801314550613",
    "11.2172843302807835352537883488861094670964811847367606757824",
    "57.899990579386497286623087167582210469585091811802624124431",
};
constexpr const char* kLambda1 = "0.1873552370524687388922777162964050663064191341555102223437";

}  // namespace

TEST_CASE("gamma_k printed values") {
  CHECK(gamma(1, 12).value.to_decimal(12) == "0.577215664901");
  CHECK(gamma(2, 9).value.to_decimal(9) == "1.49930237");
  CHECK(gamma(1, 12).method == SeriesMethod::richardson);
  CHECK(gamma_prime(3, 8).value.to_decimal(8) == "2.6396589");
}

TEST_CASE("gamma_k and gamma'_k against frozen references at 30 digits") {
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const auto g = gamma(k, 30);
    CHECK(abs(g.value - ref(kGammaK[k - 1])) <= g.error_bound);
    CHECK(g.error_bound < pow10(-30, Precision(40)) * max(Real(1L, Precision(40)), abs(g.value)));
    const auto gp = gamma_prime(k, 30);
    CHECK(abs(gp.value - ref(kGammaPrimeK[k - 1])) <= gp.error_bound);
    CHECK(gp.value > 0L);
  }
}

TEST_CASE("gamma'_2 from the pi^2/3 identity") {
  TailPolicy p;
  p.target_digits = 30;
  const Real pi = Real::pi(Precision(50));
  const Real expected = pi * pi / 6L - 1L - 2L * stieltjes_like_limit(1, p).value;
  CHECK(abs(gamma_prime(2, 25).value - expected) < pow10(-24, Precision(40)));
}

TEST_CASE("oracle decomposition") {
  CHECK(gamma_oracle(1, 20).value.to_decimal(20) == stieltjes_like_limit(0, TailPolicy{}).value.to_decimal(20));
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const auto o = gamma_oracle(k, 30);
    CHECK(abs(o.value - ref(kGammaK[k - 1])) <= o.error_bound);
    const auto op = gamma_prime_oracle(k, 30);
    CHECK(abs(op.value - ref(kGammaPrimeK[k - 1])) <= op.error_bound);
    const auto g = gamma(k, 30);
    CHECK(abs(g.value - o.value) <= g.error_bound + o.error_bound);
  }
}

TEST_CASE("oracle decomposition matches brute-force partial sums") {
  // sum_{x<=N} forward_term_error(k, x) plus the tail estimated from the
  // next N terms; only a few digits, but with no shared code path.
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    const LogPowerFamily fam(k);
    const Precision p(30);
    const SeriesTerm term = [&](long long x, Precision q) { return fam.forward_term_error(x, q); };
    const Real head = blocked_sum(term, 1, 20000, p, 4);
    const Real more = blocked_sum(term, 20001, 20000, p, 4);
    // Terms go like c ln^(k-1) x / x^2, so the tail past 2N is roughly the
    // last window; the log factor leaves a few 1e-4 of slack at k = 3.
    const Real estimate = head + 2L * more;
    const Real o = gamma_oracle(k, 12).value;
    CHECK(abs(estimate - o) / o < Real::parse("1e-3", p));
  }
}

TEST_CASE("lambda_1 paths") {
  const auto paths = lambda1_paths(20);
  CHECK(abs(paths.log_moment.value - ref(kLambda1)) <= paths.log_moment.error_bound);
  CHECK(abs(paths.identity.value - ref(kLambda1)) <= paths.identity.error_bound);
  CHECK(abs(paths.log_moment.value - paths.identity.value) < Real::parse("1e-19", Precision(30)));
  CHECK(lambda1(20).value.to_decimal(8) == "0.18735523");
}

TEST_CASE("e_threshold matches a brute-force scan") {
  const Precision p(50);
  for (const char* eps : {"0.7", "0.5", "0.3", "0.2", "0.1", "0.05", "0.01", "0.003", "0.001"}) {
    CAPTURE(eps);
    const Real e = Real::parse(eps, p);
    long long scan = 1;
    while (!(e_gap(scan, p) < e)) ++scan;
    CHECK(e_threshold(e) == scan);
  }
  CHECK(e_threshold(Real::parse("0.3", p)) == 4);
  CHECK(e_threshold(Real::parse("5", p)) == 1);
}

TEST_CASE("e_threshold at 1e-6 brackets the gap") {
  const Precision p(60);
  const Real eps = Real::parse("1e-6", p);
  const long long t = e_threshold(eps);
  CHECK(e_gap(t, p) < eps);
  CHECK(e_gap(t - 1, p) >= eps);
  CHECK(t > 1'359'000);
  CHECK(t < 1'360'000);
}

TEST_CASE("e_threshold errors") {
  CHECK_THROWS_AS(e_threshold(Real(0L, Precision(20))), std::invalid_argument);
  CHECK_THROWS_AS(e_threshold(Real(-1L, Precision(20))), std::invalid_argument);
  CHECK_THROWS_AS(e_threshold(Real::parse("1e-9", Precision(20)), 1000), CapError);
}

TEST_CASE("(1 + 1/x)^x increases") {
  const Precision p(40);
  for (long long t = 1; t < 200; ++t) CHECK(e_gap(t + 1, p) < e_gap(t, p));
}

TEST_CASE("identities at 12 digits") {
  const auto reports = verify_identities(12);
  REQUIRE(reports.size() == 5);
  for (const auto& r : reports) {
    CAPTURE(r.name);
    CHECK(r.passed);
    CHECK(r.residual < Real::parse("1e-12", Precision(20)));
    CHECK(r.passed == (r.residual <= r.tolerance));
  }
  const Real pi = Real::pi(Precision(30));
  CHECK(abs(reports[1].rhs - (pi * pi / 3L - 1L)) < Real::parse("1e-25", Precision(30)));
}

TEST_CASE("identities at 30 digits") {
  for (const auto& r : verify_identities(30)) {
    CAPTURE(r.name);
    CHECK(r.passed);
  }
}

TEST_CASE("Barrow residual table") {
  const auto rows = barrow_residual_table(1, 200);
  REQUIRE(rows.size() == 200);
  const Real g = ref(kGammaK[0]);
  CHECK(abs(rows[0].residual - (1L - log(Real(2L, Precision(40))))) < Real::parse("1e-28", Precision(40)));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].residual > rows[i - 1].residual);
    CHECK(rows[i].residual < g);
  }

  const auto big = barrow_residual_table(1, 10000);
  CHECK(abs(big.back().residual - g) < Real::parse("5e-5", Precision(20)));

  const auto k2 = barrow_residual_table(2, 1000);
  CHECK(abs(k2.back().residual - ref(kGammaK[1])) < Real::parse("1e-2", Precision(20)));
}

TEST_CASE("backward term errors are positive") {
  const Precision p(30);
  for (int k = 1; k <= 5; ++k) {
    const LogPowerFamily fam(k);
    for (long long x = 2; x <= 10000; x += (x < 300 ? 1 : 53)) REQUIRE(fam.backward_term_error(x, p) > 0L);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(gamma(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(gamma(1, 0), std::invalid_argument);
  ComputeOptions small;
  small.max_digits = 20;
  CHECK_THROWS_AS(gamma(1, 21, small), std::invalid_argument);
  CHECK(to_string(ConstantKind::gamma_prime) == "gamma_prime");
}
