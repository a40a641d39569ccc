#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace storeim::ipv4 {

inline std::string format(std::uint32_t v) {
  return std::to_string(v >> 24) + '.' + std::to_string((v >> 16) & 0xFF) + '.' + std::to_string((v >> 8) & 0xFF) +
         '.' + std::to_string(v & 0xFF);
}

/// Strict dotted quad: four decimal octets, no leading '+' or spaces.
inline std::optional<std::uint32_t> parse(std::string_view s) {
  std::uint32_t v = 0;
  for (int part = 0; part < 4; ++part) {
    if (part > 0) {
      if (s.empty() || s.front() != '.') return std::nullopt;
      s.remove_prefix(1);
    }
    unsigned octet = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, octet);
    if (ec != std::errc{} || p == s.data() || p - s.data() > 3 || octet > 255) return std::nullopt;
    s.remove_prefix(static_cast<std::size_t>(p - s.data()));
    v = (v << 8) | octet;
  }
  if (!s.empty()) return std::nullopt;
  return v;
}

inline std::uint32_t byteswap(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
}

}  // namespace storeim::ipv4
