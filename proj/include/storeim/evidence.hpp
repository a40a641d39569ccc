#pragma once

// Core value types shared by every extractor: timestamps that remember how
// they were encoded on disk, provenance, and normalized timeline events.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "storeim/error.hpp"

namespace storeim {

enum class TimeEncoding { unix_seconds, unix_millis, filetime_100ns, iso_text };
enum class EpochUnit { seconds, millis };
enum class ByteOrder { big, little };

namespace detail {

// Howard Hinnant's civil-calendar algorithms (proleptic Gregorian).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

constexpr bool is_leap(std::int64_t y) noexcept {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) noexcept {
  constexpr std::array<unsigned, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

inline void append_padded(std::string& out, std::int64_t v, int width) {
  std::string digits = std::to_string(v);
  if (static_cast<int>(digits.size()) < width) out.append(width - digits.size(), '0');
  out += digits;
}

inline bool parse_uint(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

inline int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

/// Milliseconds between 1970-01-01 and 1601-01-01.
inline constexpr std::int64_t kFiletimeEpochOffsetMs = 11644473600000;
/// 100-ns ticks between 1601-01-01 and 1970-01-01.
inline constexpr std::uint64_t kFiletimeUnixEpochTicks = 116444736000000000ULL;
inline constexpr std::int64_t kMinInstantMs = -kFiletimeEpochOffsetMs;  // 1601-01-01T00:00:00Z
inline constexpr std::int64_t kMaxInstantMs = 253402300799000;          // 9999-12-31T23:59:59Z

/// Epoch-unit fallback for columns whose unit is not known per table.
constexpr EpochUnit infer_epoch_unit(std::uint64_t value) noexcept {
  return value >= 1'000'000'000'000ULL ? EpochUnit::millis : EpochUnit::seconds;
}

/// A UTC instant at millisecond resolution that also keeps the raw value it
/// was decoded from, so it can be re-encoded exactly.
class Timestamp {
 public:
  Timestamp() = default;

  static Timestamp from_unix(std::uint64_t value, EpochUnit unit) {
    std::int64_t ms = 0;
    if (unit == EpochUnit::seconds) {
      if (value > static_cast<std::uint64_t>(kMaxInstantMs / 1000))
        throw Error(Errc::OutOfRange, "unix seconds " + std::to_string(value) + " beyond 9999");
      ms = static_cast<std::int64_t>(value) * 1000;
    } else {
      if (value > static_cast<std::uint64_t>(kMaxInstantMs))
        throw Error(Errc::OutOfRange, "unix millis " + std::to_string(value) + " beyond 9999");
      ms = static_cast<std::int64_t>(value);
    }
    Timestamp t;
    t.ms_ = ms;
    t.encoding_ = unit == EpochUnit::seconds ? TimeEncoding::unix_seconds : TimeEncoding::unix_millis;
    t.raw_int_ = value;
    return t;
  }

  /// FILETIME ticks (100 ns since 1601). Sub-millisecond ticks are dropped
  /// from the instant but retained for re-encoding.
  static Timestamp from_filetime(std::uint64_t ticks) {
    const auto ms = static_cast<std::int64_t>(ticks / 10000) - kFiletimeEpochOffsetMs;
    if (ms > kMaxInstantMs)
      throw Error(Errc::OutOfRange, "FILETIME " + std::to_string(ticks) + " beyond 9999");
    Timestamp t;
    t.ms_ = ms;
    t.encoding_ = TimeEncoding::filetime_100ns;
    t.raw_int_ = ticks;
    t.sub_ms_ticks_ = static_cast<std::uint16_t>(ticks % 10000);
    return t;
  }

  static Timestamp from_filetime_hex(std::string_view hex, ByteOrder order) {
    if (hex.size() != 16)
      throw Error(Errc::MalformedHex, "FILETIME hex must be 16 characters, got " +
                                          std::to_string(hex.size()));
    std::array<std::uint8_t, 8> bytes{};
    for (std::size_t i = 0; i < 8; ++i) {
      const int hi = detail::hex_value(hex[2 * i]);
      const int lo = detail::hex_value(hex[2 * i + 1]);
      if (hi < 0 || lo < 0) throw Error(Errc::MalformedHex, "non-hex character in '" + std::string(hex) + "'");
      bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return from_filetime(ticks_from_bytes(bytes, order));
  }

  static std::uint64_t ticks_from_bytes(const std::array<std::uint8_t, 8>& bytes, ByteOrder order) noexcept {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t idx = order == ByteOrder::big ? i : 7 - i;
      v = v << 8 | bytes[idx];
    }
    return v;
  }

  /// Accepts YYYY-MM-DD, optionally followed by 'T' or ' ' and HH:MM:SS,
  /// up to three fraction digits, and a trailing 'Z'.
  static Timestamp from_iso_text(std::string_view text) {
    auto fail = [&] { return Error(Errc::InvalidArgument, "unrecognized date-time text '" + std::string(text) + "'"); };
    auto num = [&](std::size_t pos, std::size_t len) -> std::uint64_t {
      std::uint64_t v = 0;
      if (pos + len > text.size()) throw fail();
      for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') throw fail();
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
      }
      return v;
    };
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') throw fail();
    const auto year = static_cast<std::int64_t>(num(0, 4));
    const auto month = static_cast<unsigned>(num(5, 2));
    const auto day = static_cast<unsigned>(num(8, 2));
    if (year < 1601 || month < 1 || month > 12 || day < 1 || day > detail::days_in_month(year, month))
      throw Error(Errc::OutOfRange, "date out of range in '" + std::string(text) + "'");

    IsoStyle style;
    std::uint64_t hh = 0, mi = 0, ss = 0, frac = 0;
    std::size_t pos = 10;
    if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
      style.separator = text[pos];
      if (text.size() < pos + 9 || text[pos + 3] != ':' || text[pos + 6] != ':') throw fail();
      hh = num(pos + 1, 2);
      mi = num(pos + 4, 2);
      ss = num(pos + 7, 2);
      if (hh > 23 || mi > 59 || ss > 59) throw Error(Errc::OutOfRange, "time of day out of range in '" + std::string(text) + "'");
      pos += 9;
      if (pos < text.size() && text[pos] == '.') {
        std::size_t digits = 0;
        ++pos;
        while (pos + digits < text.size() && text[pos + digits] >= '0' && text[pos + digits] <= '9') ++digits;
        if (digits == 0 || digits > 3) throw fail();
        frac = num(pos, digits);
        for (std::size_t i = digits; i < 3; ++i) frac *= 10;
        style.fraction_digits = static_cast<std::uint8_t>(digits);
        pos += digits;
      }
    }
    if (pos < text.size() && text[pos] == 'Z') {
      style.zulu = true;
      ++pos;
    }
    if (pos != text.size()) throw fail();

    const std::int64_t days = detail::days_from_civil(year, month, day);
    const std::int64_t ms = days * 86400000 + static_cast<std::int64_t>(hh * 3600000 + mi * 60000 + ss * 1000 + frac);
    if (ms > kMaxInstantMs) throw Error(Errc::OutOfRange, "'" + std::string(text) + "' beyond 9999-12-31T23:59:59Z");
    Timestamp t;
    t.ms_ = ms;
    t.encoding_ = TimeEncoding::iso_text;
    t.raw_text_ = std::string(text);
    t.style_ = style;
    return t;
  }

  /// Rebuilds a Timestamp from the (encoding, raw) pair used by the report
  /// serializers.
  static Timestamp from_raw(TimeEncoding encoding, std::string_view raw) {
    if (encoding == TimeEncoding::iso_text) return from_iso_text(raw);
    std::uint64_t v = 0;
    if (!detail::parse_uint(raw, v)) throw Error(Errc::InvalidArgument, "raw timestamp '" + std::string(raw) + "' is not an unsigned integer");
    switch (encoding) {
      case TimeEncoding::unix_seconds: return from_unix(v, EpochUnit::seconds);
      case TimeEncoding::unix_millis: return from_unix(v, EpochUnit::millis);
      default: return from_filetime(v);
    }
  }

  std::int64_t unix_millis() const noexcept { return ms_; }
  TimeEncoding encoding() const noexcept { return encoding_; }
  bool has_text_raw() const noexcept { return encoding_ == TimeEncoding::iso_text; }
  std::uint64_t raw_integer() const noexcept { return raw_int_; }
  const std::string& raw_text() const noexcept { return raw_text_; }

  /// Raw value as it was read from evidence, integers rendered in decimal.
  std::string raw_string() const { return has_text_raw() ? raw_text_ : std::to_string(raw_int_); }

  /// Re-derives the raw value from the instant and encoding alone.
  std::string reencode() const {
    switch (encoding_) {
      case TimeEncoding::unix_seconds: return std::to_string(ms_ / 1000);
      case TimeEncoding::unix_millis: return std::to_string(ms_);
      case TimeEncoding::filetime_100ns:
        return std::to_string(static_cast<std::uint64_t>(ms_ + kFiletimeEpochOffsetMs) * 10000 + sub_ms_ticks_);
      case TimeEncoding::iso_text: return render(style_);
    }
    return {};
  }

  /// Canonical rendering: YYYY-MM-DDTHH:MM:SS.mmmZ
  std::string to_iso() const { return render(IsoStyle{'T', 3, true}); }

  /// Same instant shifted by whole seconds, keeping unix-seconds encoding.
  Timestamp plus_seconds(std::uint64_t seconds) const {
    return from_unix(static_cast<std::uint64_t>(detail::floor_div(ms_, 1000)) + seconds, EpochUnit::seconds);
  }

  friend bool operator==(const Timestamp&, const Timestamp&) = default;

 private:
  struct IsoStyle {
    char separator{'\0'};  // '\0' = date only
    std::uint8_t fraction_digits{0};
    bool zulu{false};
    friend bool operator==(const IsoStyle&, const IsoStyle&) = default;
  };

  std::string render(const IsoStyle& style) const {
    const std::int64_t days = detail::floor_div(ms_, 86400000);
    const std::int64_t in_day = ms_ - days * 86400000;
    const auto date = detail::civil_from_days(days);
    std::string out;
    out.reserve(24);
    detail::append_padded(out, date.year, 4);
    out += '-';
    detail::append_padded(out, date.month, 2);
    out += '-';
    detail::append_padded(out, date.day, 2);
    if (style.separator != '\0') {
      out += style.separator;
      detail::append_padded(out, in_day / 3600000, 2);
      out += ':';
      detail::append_padded(out, in_day / 60000 % 60, 2);
      out += ':';
      detail::append_padded(out, in_day / 1000 % 60, 2);
      if (style.fraction_digits > 0) {
        std::string frac;
        detail::append_padded(frac, in_day % 1000, 3);
        out += '.';
        out += frac.substr(0, style.fraction_digits);
      }
    }
    if (style.zulu) out += 'Z';
    return out;
  }

  std::int64_t ms_{0};
  TimeEncoding encoding_{TimeEncoding::unix_millis};
  std::uint64_t raw_int_{0};
  std::string raw_text_;
  std::uint16_t sub_ms_ticks_{0};
  IsoStyle style_{};
};

inline Timestamp ts_from_unix(std::uint64_t value, EpochUnit unit) { return Timestamp::from_unix(value, unit); }
inline Timestamp ts_from_filetime_hex(std::string_view hex, ByteOrder order) {
  return Timestamp::from_filetime_hex(hex, order);
}

/// Calendar date without time of day (birthdays).
struct Date {
  int year{0};
  unsigned month{0};
  unsigned day{0};

  /// Accepts "YYYY-MM-DD" with optional trailing time text, or the packed
  /// integer form YYYYMMDD used by Skype.
  static std::optional<Date> parse(std::string_view text) {
    std::uint64_t packed = 0;
    if (text.size() == 8 && detail::parse_uint(text, packed)) return from_packed(packed);
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    std::uint64_t y = 0, m = 0, d = 0;
    if (!detail::parse_uint(text.substr(0, 4), y) || !detail::parse_uint(text.substr(5, 2), m) ||
        !detail::parse_uint(text.substr(8, 2), d))
      return std::nullopt;
    return make(static_cast<int>(y), static_cast<unsigned>(m), static_cast<unsigned>(d));
  }

  static std::optional<Date> from_packed(std::uint64_t v) {
    return make(static_cast<int>(v / 10000), static_cast<unsigned>(v / 100 % 100), static_cast<unsigned>(v % 100));
  }

  std::string to_string() const {
    std::string out;
    detail::append_padded(out, year, 4);
    out += '-';
    detail::append_padded(out, month, 2);
    out += '-';
    detail::append_padded(out, day, 2);
    return out;
  }

  friend bool operator==(const Date&, const Date&) = default;

 private:
  static std::optional<Date> make(int y, unsigned m, unsigned d) {
    if (y < 1 || m < 1 || m > 12 || d < 1 || d > detail::days_in_month(y, m)) return std::nullopt;
    return Date{y, m, d};
  }
};

enum class Channel { filesystem, database, registry, carved, network, ingested_csv };

struct Provenance {
  std::string evidence_path;
  std::optional<std::uint64_t> byte_offset;
  std::string extractor;
  Channel channel{Channel::filesystem};

  Provenance() = default;
  Provenance(std::string path, std::string extractor_id, Channel ch,
             std::optional<std::uint64_t> offset = std::nullopt)
      : evidence_path(std::move(path)), byte_offset(offset), extractor(std::move(extractor_id)), channel(ch) {
    if (evidence_path.empty()) throw Error(Errc::InvalidArgument, "provenance needs an evidence path");
    if (byte_offset.has_value() != (channel == Channel::carved))
      throw Error(Errc::InvalidArgument, "byte offset is required for carved evidence and only for it");
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Flag raised when a database has an uncommitted write-ahead log beside it.
inline constexpr std::string_view kWalNotApplied = "wal-present-not-applied";

/// Records recovered from one evidence source, with non-fatal diagnostics.
template <typename T>
struct Extraction {
  std::vector<T> records;
  std::vector<std::string> warnings;
  std::vector<std::string> flags;
};

enum class App { facebook, skype, other };

// Order matters: it is the secondary timeline sort key.
enum class EventKind {
  AppInstall,
  AppLaunch,
  Login,
  ContactAdd,
  MessageSent,
  MessageReceived,
  MessageUndetermined,
  FileTransfer,
  FileDownload,
  CallStart,
  CallEnd,
  VideoMessage,
  Notification,
  Uninstall,
  NetworkSession,
  FsJournal,
  AppActivity,
};

struct TimelineEvent {
  Timestamp when;
  EventKind kind{EventKind::AppActivity};
  App app{App::other};
  std::optional<std::string> actor;
  std::optional<std::string> counterpart;
  std::string summary;
  Provenance provenance;
  // Collapsed exact duplicates; not part of the event identity.
  std::uint32_t occurrences{1};

  bool same_event(const TimelineEvent& o) const {
    return when == o.when && kind == o.kind && app == o.app && actor == o.actor &&
           counterpart == o.counterpart && summary == o.summary && provenance == o.provenance;
  }
  friend bool operator==(const TimelineEvent&, const TimelineEvent&) = default;
};

// ---------------------------------------------------------------------------
// Enum names used by every serializer.

namespace detail {
template <typename E, std::size_t N>
struct EnumNames {
  std::array<std::pair<E, std::string_view>, N> entries;

  constexpr std::string_view name(E e) const {
    for (const auto& [v, n] : entries)
      if (v == e) return n;
    return "?";
  }
  constexpr std::optional<E> parse(std::string_view s) const {
    for (const auto& [v, n] : entries)
      if (n == s) return v;
    return std::nullopt;
  }
};
}  // namespace detail

inline constexpr detail::EnumNames<TimeEncoding, 4> kEncodingNames{{{
    {TimeEncoding::unix_seconds, "unix_seconds"},
    {TimeEncoding::unix_millis, "unix_millis"},
    {TimeEncoding::filetime_100ns, "filetime_100ns"},
    {TimeEncoding::iso_text, "iso_text"},
}}};

inline constexpr detail::EnumNames<Channel, 6> kChannelNames{{{
    {Channel::filesystem, "filesystem"},
    {Channel::database, "database"},
    {Channel::registry, "registry"},
    {Channel::carved, "carved"},
    {Channel::network, "network"},
    {Channel::ingested_csv, "ingested_csv"},
}}};

inline constexpr detail::EnumNames<App, 3> kAppNames{{{
    {App::facebook, "facebook"},
    {App::skype, "skype"},
    {App::other, "other"},
}}};

inline constexpr detail::EnumNames<EventKind, 17> kEventKindNames{{{
    {EventKind::AppInstall, "AppInstall"},
    {EventKind::AppLaunch, "AppLaunch"},
    {EventKind::Login, "Login"},
    {EventKind::ContactAdd, "ContactAdd"},
    {EventKind::MessageSent, "MessageSent"},
    {EventKind::MessageReceived, "MessageReceived"},
    {EventKind::MessageUndetermined, "MessageUndetermined"},
    {EventKind::FileTransfer, "FileTransfer"},
    {EventKind::FileDownload, "FileDownload"},
    {EventKind::CallStart, "CallStart"},
    {EventKind::CallEnd, "CallEnd"},
    {EventKind::VideoMessage, "VideoMessage"},
    {EventKind::Notification, "Notification"},
    {EventKind::Uninstall, "Uninstall"},
    {EventKind::NetworkSession, "NetworkSession"},
    {EventKind::FsJournal, "FsJournal"},
    {EventKind::AppActivity, "AppActivity"},
}}};

inline std::string_view to_string(TimeEncoding e) { return kEncodingNames.name(e); }
inline std::string_view to_string(Channel c) { return kChannelNames.name(c); }
inline std::string_view to_string(App a) { return kAppNames.name(a); }
inline std::string_view to_string(EventKind k) { return kEventKindNames.name(k); }

}  // namespace storeim
