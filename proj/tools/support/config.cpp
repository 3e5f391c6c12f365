#include "support/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace isocalc::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Int>
std::optional<Int> to_int(const std::string& text) {
  Int value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

template <typename Int>
Int positive(const std::string& key, const std::string& value, int line) {
  const auto parsed = to_int<Int>(value);
  if (!parsed || *parsed < 1) {
    throw ConfigError("config line " + std::to_string(line) + ": " + key + " must be a positive integer, got '" +
                      value + "'");
  }
  return *parsed;
}

}  // namespace

Config parse_config(std::istream& in) {
  Config config;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "digits") {
      config.digits = positive<int>(key, value, line);
    } else if (key == "max_terms") {
      config.max_terms = positive<long long>(key, value, line);
    } else if (key == "threads") {
      config.threads = positive<int>(key, value, line);
    } else if (key == "cache") {
      if (value.empty()) throw ConfigError("config line " + std::to_string(line) + ": empty cache path");
      config.cache = value;
    } else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    item = trim(item);
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const auto v = to_int<int>(item);
      if (!v) throw std::invalid_argument("not an integer: '" + item + "'");
      out.push_back(*v);
      continue;
    }
    const auto lo = to_int<int>(trim(item.substr(0, dots)));
    const auto hi = to_int<int>(trim(item.substr(dots + 2)));
    if (!lo || !hi || *hi < *lo) throw std::invalid_argument("bad range: '" + item + "'");
    if (static_cast<long long>(*hi) - *lo > 100000) throw std::invalid_argument("range too long: '" + item + "'");
    for (int v = *lo; v <= *hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace isocalc::cli
