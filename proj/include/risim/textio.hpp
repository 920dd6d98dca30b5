#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace risim {

/// Filesystem failures, kept distinct from validation errors so the CLI can
/// report them with a dedicated exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Parses a full string as a double; throws on trailing garbage or overflow.
inline double parse_double(std::string_view s, std::string_view what) {
  const std::string text(trim(s));
  if (text.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty number");
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + text + "'");
  }
  return value;
}

inline long parse_long(std::string_view s, std::string_view what) {
  const std::string text(trim(s));
  if (text.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty integer");
  }
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad integer '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument(std::string(what) + ": bad integer '" + text + "'");
  }
  return value;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  const std::string text(trim(s));
  if (text.empty() || text[0] == '-') {
    throw std::invalid_argument(std::string(what) + ": bad unsigned '" + text + "'");
  }
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad unsigned '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument(std::string(what) + ": bad unsigned '" + text + "'");
  }
  return value;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return buffer.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed on '" + path + "'");
}

/// printf-style formatting into a std::string.
template <typename... Args>
std::string format(const char* fmt, Args... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  if (n < 0) throw std::runtime_error("format: encoding error");
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, fmt, args...);
  return out;
}

/// Shortest decimal form that round-trips a double exactly.
inline std::string format_exact(double v) { return format("%.17g", v); }

}  // namespace risim
