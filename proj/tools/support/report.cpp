#include "support/report.hpp"

#include <algorithm>
#include <cstdio>
#include "json.hpp"
#include <stdexcept>

namespace isocalc::cli {
namespace {

constexpr const char* kEllipsis = "…";

std::string wall_time(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  return buf;
}

// Integers (row labels, exact zeros) are never cut.
bool is_cut_decimal(const std::string& cell) {
  const std::size_t i = (!cell.empty() && cell[0] == '-') ? 1 : 0;
  return i < cell.size() && cell[i] >= '0' && cell[i] <= '9' && cell.find_first_of(".e") != std::string::npos;
}

// Display width, counting UTF-8 continuation bytes as zero.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string render_text(const Report& r) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : r.rows) {
    std::vector<std::string> shown = row;
    for (std::size_t c = 0; c < shown.size() && c < r.truncated.size(); ++c) {
      if (r.truncated[c] && is_cut_decimal(shown[c])) shown[c] += kEllipsis;
    }
    cells.push_back(std::move(shown));
  }
  std::vector<std::size_t> widths;
  for (const auto& name : r.columns) widths.push_back(width(name));
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) out += std::string(widths[c] - width(row[c]) + 2, ' ');
    }
    return out + '\n';
  };

  std::string out = "isocalc " + r.command + '\n';
  for (const auto& [key, value] : r.inputs) out += "  " + key + ": " + value + '\n';
  out += '\n';
  out += line(r.columns);
  std::vector<std::string> rule;
  for (auto w : widths) rule.emplace_back(w, '-');
  out += line(rule);
  for (const auto& row : cells) out += line(row);
  if (r.wall_seconds || r.timestamp) out += '\n';
  if (r.wall_seconds) out += "wall time: " + wall_time(*r.wall_seconds) + " s\n";
  if (r.timestamp) out += "timestamp: " + *r.timestamp + '\n';
  return out;
}

std::string render_csv(const Report& r) {
  std::string out = "# command: " + r.command + '\n';
  for (const auto& [key, value] : r.inputs) out += "# " + key + ": " + value + '\n';
  if (r.wall_seconds) out += "# wall_time_s: " + wall_time(*r.wall_seconds) + '\n';
  if (r.timestamp) out += "# timestamp: " + *r.timestamp + '\n';
  auto line = [](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + csv_cell(row[c]);
    return s + '\n';
  };
  out += line(r.columns);
  for (const auto& row : r.rows) out += line(row);
  return out;
}

std::string render_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["command"] = r.command;
  doc["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : r.inputs) doc["inputs"][key] = value;
  doc["columns"] = r.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < r.columns.size(); ++c) obj[r.columns[c]] = row[c];
    doc["rows"].push_back(std::move(obj));
  }
  if (r.wall_seconds) doc["wall_time_s"] = wall_time(*r.wall_seconds);
  if (r.timestamp) doc["timestamp"] = *r.timestamp;
  return doc.dump(2, ' ', false) + '\n';
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "text") return Format::text;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + name + "'");
}

std::string render(const Report& report, Format format) {
  switch (format) {
    case Format::text:
      return render_text(report);
    case Format::csv:
      return render_csv(report);
    case Format::json:
      return render_json(report);
  }
  return {};
}

}  // namespace isocalc::cli
