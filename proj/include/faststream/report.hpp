#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace faststream {

// Ordered `key: value` lines. Keys are stable so reports diff cleanly.
class Report {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }
  void set(std::string key, double value);
  void set(std::string key, std::uint64_t value);
  void set(std::string key, int value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }

  // Appends every entry of `other` with `prefix` prepended to the key.
  void merge(const Report& other, std::string_view prefix = {});

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  const std::string* find(std::string_view key) const;

  void write(std::ostream& out, std::string_view line_prefix = {}) const;
  std::string str(std::string_view line_prefix = {}) const;

  // Wall-clock fields vary between runs and are excluded from reproducibility
  // comparisons: keys ending in "_seconds" and the "speedup" key.
  static bool is_timing_key(std::string_view key);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Writes to a sibling temporary file and renames it over `path`, so a
// reader never sees a partial artifact. Throws std::runtime_error.
void write_file_atomically(const std::filesystem::path& path,
                           std::string_view content);

}  // namespace faststream
