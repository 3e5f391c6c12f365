#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "support/cache.hpp"
#include "support/config.hpp"
#include "support/report.hpp"

using namespace isocalc::cli;

TEST_CASE("config parsing") {
  std::istringstream in("# defaults\n digits = 40 \nthreads=4\n\nmax_terms = 1000 # inline\ncache = /tmp/x.tsv\n");
  const Config c = parse_config(in);
  CHECK(c.digits == 40);
  CHECK(c.threads == 4);
  CHECK(c.max_terms == 1000);
  CHECK(c.cache == "/tmp/x.tsv");

  std::istringstream unknown("colour = red\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream bad("digits = -3\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  std::istringstream noeq("digits 3\n");
  CHECK_THROWS_AS(parse_config(noeq), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/isocalc.conf"), ConfigError);
}

TEST_CASE("integer lists") {
  CHECK(parse_int_list("3") == std::vector<int>{3});
  CHECK(parse_int_list("1,2,5") == std::vector<int>{1, 2, 5});
  CHECK(parse_int_list("0..3,7") == std::vector<int>{0, 1, 2, 3, 7});
  CHECK_THROWS_AS(parse_int_list("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_list("5..1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_list(""), std::invalid_argument);
}

TEST_CASE("cache records round-trip") {
  const CacheRecord r{"gamma", "2", 30, "1.49930237588087298675124241489", "1.6e-44", "richardson",
                      "2026-01-02T03:04:05Z"};
  const auto back = parse_record(format_record(r));
  REQUIRE(back.has_value());
  CHECK(back->value == r.value);
  CHECK(back->digits == 30);
  CHECK_FALSE(parse_record("gamma\t2\t30\t1.4\t1e-3\trichardson").has_value());
  CHECK_FALSE(parse_record("gamma\t2\tx\t1.4\t1e-3\trichardson\t2026-01-02T03:04:05Z").has_value());
  CHECK_FALSE(parse_record("pizza\t2\t30\t1.4\t1e-3\trichardson\t2026-01-02T03:04:05Z").has_value());
  CHECK_FALSE(parse_record("gamma\t2\t30\t1.4z\t1e-3\trichardson\t2026-01-02T03:04:05Z").has_value());
  CHECK_FALSE(parse_record("gamma\t2\t30\t1.4\t1e-3\trichardson\tyesterday").has_value());
}

TEST_CASE("cache file survives corruption") {
  const auto path = std::filesystem::temp_directory_path() / "isocalc_support_test.tsv";
  {
    std::ofstream out(path);
    out << kCacheHeader << "\n"
        << "gamma\t1\t12\t0.577215664901\t1.3e-26\trichardson\t2026-01-02T03:04:05Z\n"
        << "garbage line\n"
        << "gamma\t1\t12\t0.5772\n";
  }
  Cache cache(path);
  const auto warnings = cache.load();
  CHECK(warnings.size() == 2);
  REQUIRE(cache.find("gamma", "1", 12).has_value());
  CHECK_FALSE(cache.find("gamma", "1", 13).has_value());

  cache.put({"gamma_prime", "1", 12, "0.422784335098", "1.1e-26", "richardson", iso8601_now()});
  cache.save();
  Cache reread(path);
  CHECK(reread.load().empty());
  CHECK(reread.find("gamma_prime", "1", 12)->value == "0.422784335098");

  {
    std::ofstream out(path);
    out << "not a cache\n";
  }
  Cache headerless(path);
  CHECK(headerless.load().size() == 1);
  CHECK_FALSE(headerless.find("gamma", "1", 12).has_value());
  std::filesystem::remove(path);

  Cache missing(std::filesystem::temp_directory_path() / "isocalc_support_missing.tsv");
  CHECK(missing.load().empty());
}

TEST_CASE("formats carry identical cells") {
  Report r;
  r.command = "constants";
  r.inputs = {{"k", "1"}, {"digits", "12"}};
  r.columns = {"quantity", "value", "error_bound", "method"};
  r.truncated = {false, true, false, false};
  r.rows = {{"gamma_1", "0.577215664901", "1.3e-26", "richardson"}, {"t", "4", "0", "search"}};

  const std::string text = render(r, Format::text);
  CHECK(text.find("0.577215664901…") != std::string::npos);
  CHECK(text.find("4…") == std::string::npos);
  CHECK(text.find("wall time") == std::string::npos);

  const std::string csv = render(r, Format::csv);
  CHECK(csv.find("gamma_1,0.577215664901,1.3e-26,richardson\n") != std::string::npos);
  CHECK(csv.find("…") == std::string::npos);

  const auto json = nlohmann::json::parse(render(r, Format::json));
  CHECK(json["rows"][0]["value"] == "0.577215664901");
  CHECK(json["inputs"]["digits"] == "12");
  CHECK_FALSE(json.contains("timestamp"));

  r.wall_seconds = 0.5;
  r.timestamp = "2026-01-02T03:04:05Z";
  CHECK(nlohmann::json::parse(render(r, Format::json))["wall_time_s"] == "0.500");
  CHECK(render(r, Format::csv).find("# timestamp: 2026-01-02T03:04:05Z") != std::string::npos);

  CHECK(parse_format("csv") == Format::csv);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("csv quoting") {
  Report r;
  r.command = "verify";
  r.columns = {"identity", "pass"};
  r.truncated = {false, false};
  r.rows = {{"a, \"b\"", "pass"}};
  CHECK(render(r, Format::csv).find("\"a, \"\"b\"\"\",pass") != std::string::npos);
}
