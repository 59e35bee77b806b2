#include "faststream/report.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace faststream {

void Report::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void Report::set(std::string key, double value) {
  set(std::move(key), format_double(value));
}

void Report::set(std::string key, std::uint64_t value) {
  set(std::move(key), std::to_string(value));
}

void Report::merge(const Report& other, std::string_view prefix) {
  for (const auto& [k, v] : other.entries_) set(std::string(prefix) + k, v);
}

const std::string* Report::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void Report::write(std::ostream& out, std::string_view line_prefix) const {
  for (const auto& [k, v] : entries_) out << line_prefix << k << ": " << v << '\n';
}

std::string Report::str(std::string_view line_prefix) const {
  std::ostringstream out;
  write(out, line_prefix);
  return out.str();
}

bool Report::is_timing_key(std::string_view key) {
  return key.ends_with("_seconds") || key == "speedup";
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

void write_file_atomically(const std::filesystem::path& path,
                           std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

}  // namespace faststream
