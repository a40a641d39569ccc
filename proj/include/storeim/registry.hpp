#pragma once

// Textual .reg exports: parsing, re-serialization, and the two branches of
// interest (package InstallTime and Skype's persisted storage items).

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "storeim/error.hpp"
#include "storeim/evidence.hpp"
#include "storeim/locator.hpp"

namespace storeim::registry {

enum class ValueKind { string, dword, qword, binary };

inline std::string_view to_string(ValueKind k) {
  constexpr std::string_view kNames[] = {"string", "dword", "qword", "binary"};
  return kNames[static_cast<int>(k)];
}

struct RegValue {
  std::string name;  // "" is the default value (@)
  ValueKind kind{ValueKind::string};
  std::string text;                 // string kind
  std::vector<std::uint8_t> bytes;  // dword (4, little-endian), qword and binary
  int hex_type{-1};                 // N of hex(N):, -1 for plain hex:

  std::uint32_t dword() const {
    std::uint32_t v = 0;
    for (std::size_t i = bytes.size(); i-- > 0;) v = v << 8 | bytes[i];
    return v;
  }
  friend bool operator==(const RegValue&, const RegValue&) = default;
};

struct RegKey {
  std::string path;
  std::vector<RegValue> values;

  const RegValue* value(std::string_view name) const {
    for (const auto& v : values)
      if (locator::detail::iequals(v.name, name)) return &v;
    return nullptr;
  }
  friend bool operator==(const RegKey&, const RegKey&) = default;
};

struct SyntaxError {
  std::size_t line{0};
  std::string message;
  friend bool operator==(const SyntaxError&, const SyntaxError&) = default;
};

struct RegExport {
  std::string header;
  std::vector<RegKey> keys;  // file order; a repeated key is merged into its first occurrence
  std::vector<SyntaxError> errors;

  const RegKey* find_key(std::string_view path) const {
    for (const auto& k : keys)
      if (locator::detail::iequals(k.path, path)) return &k;
    return nullptr;
  }
};

inline constexpr std::string_view kHeader5 = "Windows Registry Editor Version 5.00";
inline constexpr std::string_view kHeader4 = "REGEDIT4";

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

/// Regedit 5 writes UTF-16LE with a BOM; everything else is taken as UTF-8.
inline std::string decode_text(std::string_view raw) {
  if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0xFF && static_cast<unsigned char>(raw[1]) == 0xFE) {
    std::string out;
    out.reserve(raw.size() / 2);
    for (std::size_t i = 2; i + 1 < raw.size(); i += 2) {
      std::uint32_t cu = static_cast<unsigned char>(raw[i]) | static_cast<unsigned char>(raw[i + 1]) << 8;
      if (cu >= 0xD800 && cu < 0xDC00 && i + 3 < raw.size()) {
        const std::uint32_t lo = static_cast<unsigned char>(raw[i + 2]) | static_cast<unsigned char>(raw[i + 3]) << 8;
        if (lo >= 0xDC00 && lo < 0xE000) {
          cu = 0x10000 + ((cu - 0xD800) << 10) + (lo - 0xDC00);
          i += 2;
        }
      }
      append_utf8(out, cu);
    }
    return out;
  }
  if (raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
  return std::string(raw);
}

inline std::string_view ltrim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

inline std::string_view rtrim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Reads a quoted string starting at s[pos] == '"'. Returns the position
/// after the closing quote, or npos when unterminated.
inline std::size_t read_quoted(std::string_view s, std::size_t pos, std::string& out) {
  for (std::size_t i = pos + 1; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out += s[++i];
    } else if (s[i] == '"') {
      return i + 1;
    } else {
      out += s[i];
    }
  }
  return std::string_view::npos;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

inline bool parse_hex_bytes(std::string_view s, std::vector<std::uint8_t>& out) {
  s = rtrim(ltrim(s));
  if (s.empty()) return true;
  for (auto part : locator::detail::split(s, ',')) {
    part = rtrim(ltrim(part));
    if (part.size() != 2) return false;
    const int hi = storeim::detail::hex_value(part[0]);
    const int lo = storeim::detail::hex_value(part[1]);
    if (hi < 0 || lo < 0) return false;
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return true;
}

inline std::optional<std::string> parse_data(std::string_view data, RegValue& v) {
  data = rtrim(ltrim(data));
  if (!data.empty() && data.front() == '"') {
    const auto end = read_quoted(data, 0, v.text);
    if (end == std::string_view::npos) return "unterminated string value";
    if (!rtrim(data.substr(end)).empty()) return "trailing text after string value";
    v.kind = ValueKind::string;
    return std::nullopt;
  }
  const auto lower = locator::detail::lower(data.substr(0, std::min<std::size_t>(data.size(), 8)));
  if (lower.rfind("dword:", 0) == 0) {
    const auto digits = data.substr(6);
    if (digits.size() != 8) return "dword needs eight hex digits";
    std::uint32_t x = 0;
    for (char c : digits) {
      const int h = storeim::detail::hex_value(c);
      if (h < 0) return "non-hex dword digit";
      x = x << 4 | static_cast<std::uint32_t>(h);
    }
    v.kind = ValueKind::dword;
    for (int i = 0; i < 4; ++i) v.bytes.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    return std::nullopt;
  }
  if (lower.rfind("hex", 0) == 0) {
    std::size_t colon = data.find(':');
    if (colon == std::string_view::npos) return "hex value without ':'";
    const auto tag = data.substr(3, colon - 3);
    if (tag.empty()) {
      v.hex_type = -1;
    } else {
      if (tag.size() < 3 || tag.front() != '(' || tag.back() != ')') return "malformed hex(N) type";
      const auto n = tag.substr(1, tag.size() - 2);
      int t = 0;
      for (char c : n) {
        const int h = storeim::detail::hex_value(c);
        if (h < 0) return "malformed hex(N) type";
        t = t * 16 + h;
      }
      v.hex_type = t;
    }
    if (!parse_hex_bytes(data.substr(colon + 1), v.bytes)) return "malformed hex byte list";
    v.kind = v.hex_type == 0xb ? ValueKind::qword : ValueKind::binary;
    if (v.kind == ValueKind::qword && v.bytes.size() != 8) return "hex(b) value must hold 8 bytes";
    return std::nullopt;
  }
  if (data == "-") return "value deletion entries are not evidence; ignored";
  return "unrecognized value data";
}

}  // namespace detail

inline RegExport parse_reg_export(std::string_view raw) {
  const auto text = detail::decode_text(raw);
  const auto lines = locator::detail::split(text, '\n');
  RegExport exp;
  std::size_t i = 0;
  while (i < lines.size() && detail::rtrim(detail::ltrim(lines[i])).empty()) ++i;
  const auto header = i < lines.size() ? detail::rtrim(detail::ltrim(lines[i])) : std::string_view{};
  if (header != kHeader5 && header != kHeader4)
    throw Error(Errc::NotRegExport, "missing 'Windows Registry Editor Version 5.00' or 'REGEDIT4' header");
  exp.header = std::string(header);

  RegKey* current = nullptr;
  for (++i; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string logical(detail::rtrim(lines[i]));
    if (detail::ltrim(logical).empty() || detail::ltrim(logical).front() == ';') continue;
    while (!logical.empty() && logical.back() == '\\' && i + 1 < lines.size()) {
      logical.pop_back();
      logical += detail::ltrim(detail::rtrim(lines[++i]));
    }
    std::string_view line = detail::ltrim(logical);

    if (line.front() == '[') {
      if (line.back() != ']') {
        exp.errors.push_back({line_no, "unterminated key header"});
        current = nullptr;
        continue;
      }
      const auto path = line.substr(1, line.size() - 2);
      if (!path.empty() && path.front() == '-') {
        exp.errors.push_back({line_no, "key deletion entry ignored"});
        current = nullptr;
        continue;
      }
      auto* existing = const_cast<RegKey*>(exp.find_key(path));
      if (!existing) {
        exp.keys.push_back({std::string(path), {}});
        existing = &exp.keys.back();
      }
      current = existing;
      continue;
    }
    if (!current) {
      exp.errors.push_back({line_no, "value outside any key"});
      continue;
    }
    RegValue v;
    std::size_t after = 0;
    if (line.front() == '@') {
      after = 1;
    } else if (line.front() == '"') {
      after = detail::read_quoted(line, 0, v.name);
      if (after == std::string_view::npos) {
        exp.errors.push_back({line_no, "unterminated value name"});
        continue;
      }
    } else {
      exp.errors.push_back({line_no, "expected a key header or value"});
      continue;
    }
    const auto rest = detail::ltrim(line.substr(after));
    if (rest.empty() || rest.front() != '=') {
      exp.errors.push_back({line_no, "missing '=' after value name"});
      continue;
    }
    if (auto err = detail::parse_data(rest.substr(1), v)) {
      exp.errors.push_back({line_no, *err});
      continue;
    }
    current->values.push_back(std::move(v));
  }
  return exp;
}

/// Regedit-style text, CRLF line ends, binary wrapped near 80 columns.
inline std::string to_reg_text(const RegExport& exp) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(exp.header.empty() ? kHeader5 : std::string_view(exp.header));
  out += "\r\n\r\n";
  for (const auto& key : exp.keys) {
    out += "[" + key.path + "]\r\n";
    for (const auto& v : key.values) {
      std::string line = v.name.empty() ? "@=" : detail::quote(v.name) + "=";
      if (v.kind == ValueKind::string) {
        out += line + detail::quote(v.text) + "\r\n";
        continue;
      }
      if (v.kind == ValueKind::dword) {
        const auto x = v.dword();
        line += "dword:";
        for (int s = 28; s >= 0; s -= 4) line += kHex[(x >> s) & 0xF];
        out += line + "\r\n";
        continue;
      }
      if (v.kind == ValueKind::qword) {
        line += "hex(b):";
      } else if (v.hex_type < 0) {
        line += "hex:";
      } else {
        std::array<char, 8> buf{};
        const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v.hex_type, 16);
        line += "hex(" + std::string(buf.data(), r.ptr) + "):";
      }
      for (std::size_t b = 0; b < v.bytes.size(); ++b) {
        line += kHex[v.bytes[b] >> 4];
        line += kHex[v.bytes[b] & 0xF];
        if (b + 1 < v.bytes.size()) {
          line += ',';
          if (line.size() > 75) {
            out += line + "\\\r\n";
            line = "  ";
          }
        }
      }
      out += line + "\r\n";
    }
    out += "\r\n";
  }
  return out;
}

// ---- InstallTime ------------------------------------------------------------------

enum class Interpretation { little_endian_binary, big_endian_hex };

inline std::string_view to_string(Interpretation i) {
  return i == Interpretation::little_endian_binary ? "little-endian-binary" : "big-endian-hex";
}

struct InstallRecord {
  locator::PackageIdentity package;
  Timestamp install_time;
  std::string key_path;
  Interpretation interpretation{Interpretation::little_endian_binary};
  bool plausible{true};
  std::vector<std::string> warnings;
};

// [2000-01-01, 2100-01-01) in unix milliseconds.
inline constexpr std::int64_t kPlausibleFromMs = 946684800000;
inline constexpr std::int64_t kPlausibleToMs = 4102444800000;

inline bool plausible(const Timestamp& t) {
  return t.unix_millis() >= kPlausibleFromMs && t.unix_millis() < kPlausibleToMs;
}

namespace detail {

inline std::optional<std::array<std::uint8_t, 8>> eight_bytes(const RegValue& v) {
  std::array<std::uint8_t, 8> b{};
  if (v.kind == ValueKind::string) {
    const auto hex = locator::detail::trim(v.text);
    if (hex.size() != 16) return std::nullopt;
    for (std::size_t i = 0; i < 8; ++i) {
      const int hi = storeim::detail::hex_value(hex[2 * i]);
      const int lo = storeim::detail::hex_value(hex[2 * i + 1]);
      if (hi < 0 || lo < 0) return std::nullopt;
      b[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return b;
  }
  if (v.kind == ValueKind::dword || v.bytes.size() != 8) return std::nullopt;
  std::copy(v.bytes.begin(), v.bytes.end(), b.begin());
  return b;
}

inline std::optional<Timestamp> try_filetime(std::uint64_t ticks) {
  try {
    return Timestamp::from_filetime(ticks);
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Key path components split on '\'.
inline std::vector<std::string_view> key_segments(std::string_view path) { return locator::detail::split(path, '\\'); }

inline bool same_package(const locator::PackageIdentity& a, const locator::PackageIdentity& b) {
  return locator::detail::iequals(a.name, b.name) && a.publisher_id == b.publisher_id && a.version == b.version &&
         a.arch == b.arch;
}

}  // namespace detail

/// Decodes an 8-byte InstallTime both ways and keeps the reading inside the
/// plausibility window.
inline InstallRecord decode_install_time(const RegValue& v) {
  const auto bytes = detail::eight_bytes(v);
  if (!bytes) throw Error(Errc::MalformedHex, "InstallTime is not an 8-byte value");
  const auto le = detail::try_filetime(Timestamp::ticks_from_bytes(*bytes, ByteOrder::little));
  const auto be = detail::try_filetime(Timestamp::ticks_from_bytes(*bytes, ByteOrder::big));
  const bool le_ok = le && plausible(*le);
  const bool be_ok = be && plausible(*be);

  InstallRecord rec;
  if (le_ok && be_ok && le->unix_millis() != be->unix_millis())
    throw Error(Errc::AmbiguousInterpretation, "InstallTime reads as " + le->to_iso() + " (little-endian) and " +
                                                   be->to_iso() + " (big-endian); both plausible");
  if (le_ok || be_ok) {
    // A string value is displayed hex, so big-endian is its native reading.
    const bool prefer_be = be_ok && (!le_ok || v.kind == ValueKind::string);
    rec.interpretation = prefer_be ? Interpretation::big_endian_hex : Interpretation::little_endian_binary;
    rec.install_time = prefer_be ? *be : *le;
    return rec;
  }
  const bool native_be = v.kind == ValueKind::string;
  const auto& first = native_be ? be : le;
  const auto& second = native_be ? le : be;
  if (!first && !second) throw Error(Errc::OutOfRange, "InstallTime decodes to no representable instant either way");
  const bool use_first = first.has_value();
  rec.interpretation = (use_first == native_be) ? Interpretation::big_endian_hex : Interpretation::little_endian_binary;
  rec.install_time = use_first ? *first : *second;
  rec.plausible = false;
  rec.warnings.push_back("InstallTime outside 2000..2100 under both byte orders; reporting " +
                         std::string(to_string(rec.interpretation)) + " reading " + rec.install_time.to_iso());
  return rec;
}

/// Finds ...\Repository\Families\<family>\<full id> and decodes InstallTime.
/// A family-form `pkg` matches any installed version of that family.
inline InstallRecord find_install_time(const RegExport& exp, const locator::PackageIdentity& pkg) {
  for (const auto& key : exp.keys) {
    const auto segs = detail::key_segments(key.path);
    if (segs.size() < 4) continue;
    const auto n = segs.size();
    if (!locator::detail::iequals(segs[n - 3], "Families") || !locator::detail::iequals(segs[n - 4], "Repository"))
      continue;
    auto id = locator::try_parse_package_id(segs[n - 1]);
    if (!id || id->form != locator::PackageForm::full) continue;
    const bool match = pkg.form == locator::PackageForm::full
                           ? detail::same_package(*id, pkg)
                           : locator::detail::iequals(id->name, pkg.name) && id->publisher_id == pkg.publisher_id;
    if (!match) continue;
    const auto* value = key.value("InstallTime");
    if (!value) throw Error(Errc::PackageKeyNotFound, key.path + " has no InstallTime value");
    auto rec = decode_install_time(*value);
    rec.package = *id;
    rec.key_path = key.path;
    if (!locator::detail::iequals(segs[n - 2], id->family()))
      rec.warnings.push_back("family segment '" + std::string(segs[n - 2]) + "' does not match " + id->family());
    return rec;
  }
  throw Error(Errc::PackageKeyNotFound, "no Repository\\Families key for " + pkg.to_string());
}

/// Every Repository\Families\<family>\<full id> key carrying InstallTime,
/// in file order. Keys that fail to decode become warnings.
inline Extraction<InstallRecord> find_install_times(const RegExport& exp) {
  Extraction<InstallRecord> out;
  for (const auto& key : exp.keys) {
    const auto segs = detail::key_segments(key.path);
    const auto n = segs.size();
    if (n < 4 || !locator::detail::iequals(segs[n - 3], "Families") ||
        !locator::detail::iequals(segs[n - 4], "Repository"))
      continue;
    auto id = locator::try_parse_package_id(segs[n - 1]);
    const auto* value = key.value("InstallTime");
    if (!id || id->form != locator::PackageForm::full || !value) continue;
    try {
      auto rec = decode_install_time(*value);
      rec.package = *id;
      rec.key_path = key.path;
      if (!locator::detail::iequals(segs[n - 2], id->family()))
        rec.warnings.push_back("family segment '" + std::string(segs[n - 2]) + "' does not match " + id->family());
      out.records.push_back(std::move(rec));
    } catch (const Error& e) {
      out.warnings.push_back(key.path + ": " + e.what());
    }
  }
  return out;
}

// ---- persisted storage items ------------------------------------------------------

struct PersistedItem {
  std::string guid;
  std::string file_path;
  Timestamp last_updated;
  std::string key_path;
  std::optional<std::string> package_family;  // the SystemAppData\<package> segment
};

inline bool is_guid(std::string_view s) {
  if (s.size() == 38) {
    if (s.front() != '{' || s.back() != '}') return false;
    s = s.substr(1, 36);
  }
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool dash = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash ? s[i] != '-' : storeim::detail::hex_value(s[i]) < 0) return false;
  }
  return true;
}

inline Extraction<PersistedItem> find_persisted_items(const RegExport& exp) {
  Extraction<PersistedItem> out;
  for (const auto& key : exp.keys) {
    const auto segs = detail::key_segments(key.path);
    const auto n = segs.size();
    if (n < 3 || !locator::detail::iequals(segs[n - 2], "ManagedByApp") ||
        !locator::detail::iequals(segs[n - 3], "PersistedStorageItemTable"))
      continue;
    if (!is_guid(segs[n - 1])) {
      out.warnings.push_back(key.path + ": subkey is not a GUID; skipped");
      continue;
    }
    const auto* path = key.value("FilePath");
    if (!path || path->kind != ValueKind::string) {
      out.warnings.push_back(key.path + ": no FilePath string; skipped");
      continue;
    }
    const auto* updated = key.value("LastUpdatedTime");
    const auto bytes = updated ? detail::eight_bytes(*updated) : std::nullopt;
    std::optional<Timestamp> when;
    if (bytes) {
      // REG_QWORD storage is little-endian; displayed-hex strings are big-endian.
      const auto order = updated->kind == ValueKind::string ? ByteOrder::big : ByteOrder::little;
      when = detail::try_filetime(Timestamp::ticks_from_bytes(*bytes, order));
    }
    if (!when) {
      out.warnings.push_back(key.path + ": LastUpdatedTime missing or not an 8-byte FILETIME; skipped");
      continue;
    }
    PersistedItem item{std::string(segs[n - 1]), path->text, *when, key.path, std::nullopt};
    if (n >= 4 && locator::try_parse_package_id(segs[n - 4])) item.package_family = std::string(segs[n - 4]);
    out.records.push_back(std::move(item));
  }
  return out;
}

}  // namespace storeim::registry
