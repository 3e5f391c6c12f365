#ifndef ISOCALC_TOOLS_REPORT_HPP_
#define ISOCALC_TOOLS_REPORT_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace isocalc::cli {

enum class Format { text, csv, json };

Format parse_format(const std::string& name);

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::string> columns;
  // Columns holding decimals cut at the requested digits; text output marks
  // them with a trailing ellipsis.
  std::vector<bool> truncated;
  std::vector<std::vector<std::string>> rows;
  std::optional<double> wall_seconds;
  std::optional<std::string> timestamp;
};

// All three formats carry the same cell strings; only the framing differs.
std::string render(const Report& report, Format format);

}  // namespace isocalc::cli

#endif  // ISOCALC_TOOLS_REPORT_HPP_
