#include "support/cache.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <regex>
#include <stdexcept>

namespace isocalc::cli {
namespace {

const std::regex& decimal_pattern() {
  static const std::regex re(R"(-?[0-9]+(\.[0-9]+)?(e[+-]?[0-9]+)?)");
  return re;
}

const std::regex& timestamp_pattern() {
  static const std::regex re(R"([0-9]{4}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:[0-9]{2}Z)");
  return re;
}

bool known_kind(const std::string& kind) {
  return kind == "gamma" || kind == "gamma_prime" || kind == "lambda1" || kind == "lambda1_identity" ||
         kind == "e_threshold";
}

bool known_method(const std::string& method) {
  return method == "direct" || method == "richardson" || method == "euler_maclaurin" || method == "composite" ||
         method == "search";
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string format_record(const CacheRecord& r) {
  return r.kind + '\t' + r.key + '\t' + std::to_string(r.digits) + '\t' + r.value + '\t' + r.bound + '\t' +
         r.method + '\t' + r.timestamp;
}

std::optional<CacheRecord> parse_record(const std::string& line) {
  const auto f = split_tabs(line);
  if (f.size() != 7) return std::nullopt;
  CacheRecord r{f[0], f[1], 0, f[3], f[4], f[5], f[6]};
  if (!known_kind(r.kind) || r.key.empty() || !known_method(r.method)) return std::nullopt;
  if (f[2].empty() || f[2].size() > 6 || f[2].find_first_not_of("0123456789") != std::string::npos) {
    return std::nullopt;
  }
  r.digits = std::stoi(f[2]);
  if (r.digits < 1) return std::nullopt;
  if (!std::regex_match(r.value, decimal_pattern()) || !std::regex_match(r.bound, decimal_pattern())) {
    return std::nullopt;
  }
  if (!std::regex_match(r.timestamp, timestamp_pattern())) return std::nullopt;
  return r;
}

Cache::Cache(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<std::string> Cache::load() {
  std::vector<std::string> warnings;
  std::lock_guard lock(mutex_);
  records_.clear();
  std::ifstream in(path_);
  if (!in) {
    if (std::filesystem::exists(path_)) warnings.push_back("cache " + path_.string() + " is unreadable; ignoring it");
    return warnings;
  }
  std::string line;
  if (!std::getline(in, line) || line != kCacheHeader) {
    warnings.push_back("cache " + path_.string() + " has no '" + kCacheHeader + "' header; ignoring it");
    return warnings;
  }
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    if (auto record = parse_record(line)) {
      records_.push_back(std::move(*record));
    } else {
      warnings.push_back("cache " + path_.string() + ":" + std::to_string(number) + ": malformed record skipped");
    }
  }
  return warnings;
}

std::optional<CacheRecord> Cache::find(const std::string& kind, const std::string& key, int digits) const {
  std::lock_guard lock(mutex_);
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    if (it->kind == kind && it->key == key && it->digits == digits) return *it;
  }
  return std::nullopt;
}

void Cache::put(CacheRecord record) {
  std::lock_guard lock(mutex_);
  std::erase_if(records_, [&](const CacheRecord& r) {
    return r.kind == record.kind && r.key == record.key && r.digits == record.digits;
  });
  records_.push_back(std::move(record));
}

void Cache::save() const {
  std::lock_guard lock(mutex_);
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache " + tmp.string());
    out << kCacheHeader << '\n';
    for (const auto& r : records_) out << format_record(r) << '\n';
    if (!out) throw std::runtime_error("cannot write cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path_);
}

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace isocalc::cli
