#ifndef ISOCALC_TOOLS_CACHE_HPP_
#define ISOCALC_TOOLS_CACHE_HPP_

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace isocalc::cli {

// One line per record, tab separated:
//   kind  k-or-epsilon  digits  value  bound  method  timestamp
struct CacheRecord {
  std::string kind;
  std::string key;
  int digits = 0;
  std::string value;
  std::string bound;
  std::string method;
  std::string timestamp;
};

inline constexpr const char* kCacheHeader = "#isocalc-cache v1";

std::string format_record(const CacheRecord& record);
// nullopt for anything malformed.
std::optional<CacheRecord> parse_record(const std::string& line);

// File-backed memo of computed constants. A bad file never fails a run:
// unreadable parts are dropped with a warning and recomputed.
class Cache {
 public:
  explicit Cache(std::filesystem::path path);

  // Returns the warnings for skipped lines; a missing file is not a warning.
  std::vector<std::string> load();
  std::optional<CacheRecord> find(const std::string& kind, const std::string& key, int digits) const;
  void put(CacheRecord record);
  // Writes atomically through a sibling temp file.
  void save() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::vector<CacheRecord> records_;
};

std::string iso8601_now();

}  // namespace isocalc::cli

#endif  // ISOCALC_TOOLS_CACHE_HPP_
