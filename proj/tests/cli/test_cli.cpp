#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr folded into a file so stdout stays clean.
Run run(const std::string& args, std::string* err = nullptr, const std::string& env = "") {
  const auto err_path = std::filesystem::temp_directory_path() / "isocalc_cli_test.err";
  const std::string cmd = (env.empty() ? "" : env + " ") + std::string(ISOCALC_CLI) + " " + args + " 2>" + err_path.string();
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  if (err != nullptr) {
    std::ifstream in(err_path);
    std::stringstream ss;
    ss << in.rdbuf();
    *err = ss.str();
  }
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::string> csv_cells(const std::string& csv) {
  std::vector<std::string> cells;
  std::istringstream lines(csv);
  std::string line;
  bool header = true;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
  }
  return cells;
}

std::vector<std::string> json_cells(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<std::string> cells;
  for (const auto& row : doc["rows"]) {
    for (const auto& column : doc["columns"]) cells.push_back(row[column.get<std::string>()].get<std::string>());
  }
  return cells;
}

}  // namespace

TEST_CASE("constants at 12 digits") {
  const auto r = run("constants --k 1 --digits 12 --no-timestamp");
  CHECK(r.status == 0);
  CHECK(r.out.find("0.577215664901…") != std::string::npos);
  CHECK(r.out.find("0.422784335098…") != std::string::npos);
  CHECK(r.out.find("wall time") == std::string::npos);
  CHECK(run("constants --k 1 --digits 12").out.find("wall time") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("constants --k 1 --digits 0").status == 2);
  CHECK(run("constants --k x").status == 2);
  CHECK(run("constants --k 0").status == 2);
  CHECK(run("grid --function sin").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("constants --format xml").status == 2);
  CHECK(run("constants --digits 500").status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("verify") {
  std::string err;
  const auto r = run("verify --no-timestamp", &err);
  CHECK(r.status == 0);
  CHECK(r.out.find("digits: 12") != std::string::npos);
  const auto doc = nlohmann::json::parse(run("verify --format json --no-timestamp").out);
  REQUIRE(doc["rows"].size() == 5);
  for (const auto& row : doc["rows"]) CHECK(row["pass"] == "pass");
}

TEST_CASE("format parity") {
  const std::vector<std::string> commands = {
      "constants --k 1,2 --digits 15 --lambda1 --e-threshold 0.01",
      "verify --digits 12",
      "derivatives --k 2 --from 1 --to 6 --digits 12",
      "derivatives --k 1 --residual 20 --digits 12",
      "grid --function ln2 --x 3 --base 10 --m 0..5 --digits 20",
  };
  for (const auto& c : commands) {
    CAPTURE(c);
    const auto csv = run(c + " --no-timestamp --format csv");
    const auto json = run(c + " --no-timestamp --format json");
    REQUIRE(csv.status == 0);
    REQUIRE(json.status == 0);
    CHECK(csv_cells(csv.out) == json_cells(json.out));
    CHECK(csv.out.find("…") == std::string::npos);
  }
}

TEST_CASE("derivatives table") {
  const auto doc = nlohmann::json::parse(run("derivatives --k 1 --from 1 --to 5 --digits 10 --format json").out);
  CHECK(doc["rows"][0]["fwd_error"] == "0.3068528194");
  const auto k2 = nlohmann::json::parse(run("derivatives --k 2 --from 1 --to 2 --format json").out);
  CHECK(k2["rows"][0]["exact_bwd"] == "domain-error");
  CHECK(k2["rows"][0]["bwd_error"] == "domain-error");
  const auto far = nlohmann::json::parse(run("derivatives --k 1 --from 100 --to 100 --digits 5 --format json").out);
  CHECK(far["rows"][0]["fwd_error"] == "0.000049669");
}

TEST_CASE("grid table") {
  const auto doc = nlohmann::json::parse(run("grid --function ln --x 2 --base 2 --m 0..10 --format json").out);
  REQUIRE(doc["rows"].size() == 11);
  for (std::size_t i = 4; i < 11; ++i) {
    const double ratio = std::stod(doc["rows"][i]["error_ratio"].get<std::string>());
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
  }
  const auto b10 = nlohmann::json::parse(run("grid --x 2 --base 10 --m 0 --digits 6 --format json").out);
  const auto b2 = nlohmann::json::parse(run("grid --x 2 --base 2 --m 0 --digits 6 --format json").out);
  CHECK(b10["rows"][0]["quotient"] == "0.405465");
  CHECK(b10["rows"][0]["quotient"] == b2["rows"][0]["quotient"]);
}

TEST_CASE("thread count does not change output") {
  const std::string c = "constants --k 1..4 --digits 30 --lambda1 --no-timestamp";
  const auto one = run(c + " --threads 1");
  const auto eight = run(c + " --threads 8");
  CHECK(one.status == 0);
  CHECK(one.out == eight.out);
}

TEST_CASE("config file and overrides") {
  const auto dir = std::filesystem::temp_directory_path() / "isocalc_cli_config";
  std::filesystem::create_directories(dir);
  const auto conf = dir / "isocalc.conf";
  {
    std::ofstream out(conf);
    out << "# test\ndigits = 9\nthreads = 2\n";
  }
  const auto r = run("constants --k 2 --format json --no-timestamp --config " + conf.string());
  CHECK(nlohmann::json::parse(r.out)["rows"][0]["value"] == "1.49930237");
  const auto o = run("constants --k 2 --digits 5 --format json --no-timestamp --config " + conf.string());
  CHECK(nlohmann::json::parse(o.out)["rows"][0]["value"] == "1.4993");
  {
    std::ofstream out(conf);
    out << "digits = many\n";
  }
  CHECK(run("constants --config " + conf.string()).status == 2);
  CHECK(run("constants --config " + (dir / "missing.conf").string()).status == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache is advisory") {
  const auto dir = std::filesystem::temp_directory_path() / "isocalc_cli_cache";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto cache = (dir / "constants.tsv").string();
  const std::string c = "constants --k 1,2 --digits 20 --no-timestamp --cache " + cache;

  const auto first = run(c);
  REQUIRE(first.status == 0);
  std::ifstream in(cache);
  std::string header;
  std::getline(in, header);
  CHECK(header == "#isocalc-cache v1");
  CHECK(run(c).out == first.out);

  {
    std::ofstream out(cache, std::ios::app);
    out << "gamma\t1\t20\tnot-a-number\n\x01\x02\n";
  }
  std::string err;
  const auto again = run(c, &err);
  CHECK(again.status == 0);
  CHECK(again.out == first.out);
  CHECK(err.find("warning") != std::string::npos);

  {
    std::ofstream out(cache, std::ios::trunc);
    out << "\x7f garbage \t\t\n";
  }
  const auto rebuilt = run(c, &err);
  CHECK(rebuilt.status == 0);
  CHECK(rebuilt.out == first.out);

  {
    std::ofstream out(cache, std::ios::trunc);
    out << "corrupted";
  }
  const auto v = run("verify --no-timestamp --cache " + cache);
  CHECK(v.status == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("computation failures exit 4") {
  CHECK(run("constants --e-threshold 1e-14").status == 4);
  CHECK(run("constants --k 1 --digits 40 --max-terms 10").status == 4);
}

TEST_CASE("injected faults map to their exit codes") {
  CHECK(run("constants --k 1 --digits 12", nullptr, "ISOCALC_FAULT_INJECTION=oracle").status == 3);
  const auto v = run("verify --no-timestamp", nullptr, "ISOCALC_FAULT_INJECTION=identity");
  CHECK(v.status == 1);
  CHECK(v.out.find("fail") != std::string::npos);
}
