#pragma once

// Value-vector files.
//
//   txt   : one decimal value per line ('.' decimal point), UTF-8; blank
//           lines and text after '#' are ignored.
//   f64le : 8-byte little-endian unsigned count, then that many
//           little-endian IEEE-754 doubles.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gammamix/errors.hpp"

namespace gammamix {

enum class VectorFormat { txt, f64le };

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(where + ": cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

inline std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline void store_le64(std::uint64_t v, unsigned char* p) {
  for (int i = 0; i < 8; ++i) {
    p[i] = static_cast<unsigned char>(v & 0xFF);
    v >>= 8;
  }
}

}  // namespace detail

inline std::vector<double> read_txt(std::istream& in, const std::string& name = "input") {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const double v = detail::parse_double(s, name + ":" + std::to_string(lineno));
    if (!std::isfinite(v)) throw FormatError(name + ":" + std::to_string(lineno) + ": non-finite value");
    out.push_back(v);
  }
  return out;
}

inline std::vector<double> read_f64le(std::istream& in, const std::string& name = "input") {
  unsigned char header[8];
  if (!in.read(reinterpret_cast<char*>(header), 8)) {
    throw FormatError(name + ": missing 8-byte count header");
  }
  const std::uint64_t count = detail::load_le64(header);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  unsigned char buf[8];
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!in.read(reinterpret_cast<char*>(buf), 8)) {
      throw FormatError(name + ": expected " + std::to_string(count) + " values, got " +
                        std::to_string(i));
    }
    const double v = std::bit_cast<double>(detail::load_le64(buf));
    if (!std::isfinite(v)) throw FormatError(name + ": non-finite value at index " + std::to_string(i));
    out.push_back(v);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(name + ": trailing bytes after " + std::to_string(count) + " values");
  }
  return out;
}

inline void write_f64le(std::ostream& out, std::span<const double> values) {
  unsigned char buf[8];
  detail::store_le64(values.size(), buf);
  out.write(reinterpret_cast<const char*>(buf), 8);
  for (double v : values) {
    detail::store_le64(std::bit_cast<std::uint64_t>(v), buf);
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_txt(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_double(v) << '\n';
}

inline std::vector<double> read_vector(const std::string& path, VectorFormat fmt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return fmt == VectorFormat::txt ? read_txt(in, path) : read_f64le(in, path);
}

}  // namespace gammamix
