#ifndef ISOCALC_TOOLS_CONFIG_HPP_
#define ISOCALC_TOOLS_CONFIG_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isocalc::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key = value lines; '#' starts a comment. Every key is optional.
struct Config {
  std::optional<int> digits;
  std::optional<long long> max_terms;
  std::optional<std::string> cache;
  std::optional<int> threads;
};

Config parse_config(std::istream& in);
Config load_config(const std::filesystem::path& path);

// "3", "1,2,5", "0..10" or any comma-separated mix of these.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace isocalc::cli

#endif  // ISOCALC_TOOLS_CONFIG_HPP_
