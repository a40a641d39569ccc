#pragma once

// Skype Store app: main.db (per account), shared.xml and config.xml.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "storeim/evidence.hpp"
#include "storeim/ipv4.hpp"
#include "storeim/sqlite_reader.hpp"
#include "storeim/xml_scan.hpp"

namespace storeim::skype {

// ---- message classification -------------------------------------------------

enum class MessageKind {
  Conference,
  VideoSessionStarted,
  VideoSessionEnded,
  ContactAsk,
  Blocked,
  EmoticonSent,
  TextSent,
  ContactDetailsSent,
  SmsSent,
  VoiceMessageSent,
  FileSent,
  BirthdayNote,
  Unknown,
};

inline std::string_view to_string(MessageKind k) {
  constexpr std::string_view kNames[] = {"Conference",   "VideoSessionStarted", "VideoSessionEnded", "ContactAsk",
                                         "Blocked",      "EmoticonSent",        "TextSent",          "ContactDetailsSent",
                                         "SmsSent",      "VoiceMessageSent",    "FileSent",          "BirthdayNote",
                                         "Unknown"};
  return kNames[static_cast<int>(k)];
}

struct Classification {
  MessageKind kind{MessageKind::Unknown};
  std::int64_t code{0};  // the raw type, kept for Unknown
  bool group_chat{false};
  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Message `type` codes as documented for main.db. Total: anything else is
/// Unknown(code). chatmsg_type and chatmsg_status do not change the kind.
inline Classification classify_message(std::int64_t type_code, std::optional<std::int64_t> /*chatmsg_type*/ = {},
                                       std::optional<std::int64_t> /*chatmsg_status*/ = {},
                                       std::optional<std::int64_t> participant_count = {}) {
  Classification c;
  c.code = type_code;
  c.group_chat = participant_count.has_value() && *participant_count > 2;
  switch (type_code) {
    case 4: c.kind = MessageKind::Conference; break;
    case 30: c.kind = MessageKind::VideoSessionStarted; break;
    case 39: c.kind = MessageKind::VideoSessionEnded; break;
    case 50:
    case 51: c.kind = MessageKind::ContactAsk; break;
    case 53: c.kind = MessageKind::Blocked; break;
    case 60: c.kind = MessageKind::EmoticonSent; break;
    case 61: c.kind = MessageKind::TextSent; break;
    case 63: c.kind = MessageKind::ContactDetailsSent; break;
    case 64: c.kind = MessageKind::SmsSent; break;
    case 67: c.kind = MessageKind::VoiceMessageSent; break;
    case 68: c.kind = MessageKind::FileSent; break;
    case 110: c.kind = MessageKind::BirthdayNote; break;
    default: c.kind = MessageKind::Unknown; break;
  }
  return c;
}

// ---- body_xml -----------------------------------------------------------------

struct FileAttachmentXml {
  std::string name;
  std::uint64_t size{0};
  std::int64_t index{0};
  std::string tid;
  friend bool operator==(const FileAttachmentXml&, const FileAttachmentXml&) = default;
};

struct VideoMessageNotice {
  std::string sid;
  std::string public_link;
  std::optional<std::string> secret_code;
  friend bool operator==(const VideoMessageNotice&, const VideoMessageNotice&) = default;
};

struct BodyFiles {
  std::vector<FileAttachmentXml> files;
};
struct BodyVideoMessage {
  VideoMessageNotice notice;
};
struct BodyPartList {
  std::string raw;
  std::string type;  // "started", "ended", ...
};
struct BodyPlainText {
  std::string text;
};
using BodyXml = std::variant<BodyFiles, BodyVideoMessage, BodyPartList, BodyPlainText>;

struct ParsedBody {
  BodyXml body;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string_view root_name(std::string_view text) {
  const auto t = xml::trim(text);
  if (t.size() < 2 || t[0] != '<') return {};
  std::size_t i = 1;
  while (i < t.size() && xml::detail::name_char(t[i])) ++i;
  return t.substr(1, i - 1);
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  return storeim::detail::parse_uint(xml::trim(s), out);
}

inline std::optional<std::string> scrape_secret_code(std::string_view text) {
  constexpr std::string_view kMarker = "secret code";
  const auto at = text.find(kMarker);
  if (at == std::string_view::npos) return std::nullopt;
  auto rest = text.substr(at + kMarker.size());
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
  std::size_t n = 0;
  while (n < rest.size() && !std::isspace(static_cast<unsigned char>(rest[n])) && rest[n] != '<') ++n;
  if (n == 0) return std::nullopt;
  return std::string(rest.substr(0, n));
}

}  // namespace detail

/// Never throws: anything not recognized is returned as plain text.
inline ParsedBody parse_body_xml(std::string_view text) {
  ParsedBody out;
  const auto root = detail::root_name(text);
  const auto fallback = [&](std::string why) {
    if (!why.empty()) out.warnings.push_back(std::move(why));
    out.body = BodyPlainText{std::string(text)};
    return out;
  };

  if (root == "files") {
    BodyFiles files;
    auto files_tag = xml::next_tag(text, 0, "files");
    bool closed = true;
    if (!files_tag) return fallback("body_xml <files> start tag is unterminated");
    auto inner = xml::inner_raw(text, *files_tag, &closed);
    if (!closed) {
      out.warnings.push_back("body_xml <files> element is not closed");
      inner = std::string_view(text).substr(files_tag->end);
    }
    std::size_t pos = 0;
    while (auto f = xml::next_tag(inner, pos, "file")) {
      bool file_closed = true;
      const auto raw_name = xml::inner_raw(inner, *f, &file_closed);
      pos = f->end;
      FileAttachmentXml a;
      a.name = xml::decode_entities(xml::trim(raw_name));
      std::uint64_t size = 0, index = 0;
      const auto size_attr = f->attr("size");
      const auto index_attr = f->attr("index");
      if (!size_attr || !detail::parse_u64(*size_attr, size) || !index_attr || !detail::parse_u64(*index_attr, index)) {
        out.warnings.push_back("body_xml <file> '" + a.name + "' lacks a numeric size or index");
        continue;
      }
      a.size = size;
      a.index = static_cast<std::int64_t>(index);
      a.tid = f->attr("tid").value_or("");
      const bool dup = std::any_of(files.files.begin(), files.files.end(),
                                   [&](const FileAttachmentXml& e) { return e.index == a.index; });
      if (dup) out.warnings.push_back("body_xml repeats file index " + std::to_string(a.index));
      files.files.push_back(std::move(a));
    }
    out.body = std::move(files);
    return out;
  }

  if (root == "videomessage") {
    auto tag = xml::next_tag(text, 0, "videomessage");
    if (!tag) return fallback("body_xml <videomessage> start tag is unterminated");
    VideoMessageNotice v;
    v.sid = tag->attr("sid").value_or("");
    v.public_link = tag->attr("publiclink").value_or("");
    if (v.sid.empty()) return fallback("body_xml <videomessage> has no sid");
    v.secret_code = detail::scrape_secret_code(xml::inner_raw(text, *tag));
    out.body = BodyVideoMessage{std::move(v)};
    return out;
  }

  if (root == "partlist") {
    auto tag = xml::next_tag(text, 0, "partlist");
    BodyPartList p;
    p.raw = std::string(text);
    if (tag) p.type = tag->attr("type").value_or("");
    else out.warnings.push_back("body_xml <partlist> start tag is unterminated");
    out.body = std::move(p);
    return out;
  }

  return fallback({});
}

// ---- network state ------------------------------------------------------------

struct SupernodeEntry {
  std::string ip;
  std::uint16_t port{0};
  friend bool operator==(const SupernodeEntry&, const SupernodeEntry&) = default;
};

/// `LastIP` and friends store an IPv4 address as one decimal integer. The
/// natural reading is network (big-endian) order; little is kept for
/// cross-checking.
inline std::string decode_decimal_ip(std::uint32_t value, ByteOrder order = ByteOrder::big) {
  return ipv4::format(order == ByteOrder::big ? value : ipv4::byteswap(value));
}

inline constexpr std::string_view kHostCachePrefix = "0400050041050200";

/// Each supernode entry is the 8-byte marker 04 00 05 00 41 05 02 00 followed
/// by 4 address bytes and a big-endian port. The scan only considers
/// byte-aligned positions; material between entries is skipped.
inline Extraction<SupernodeEntry> decode_hostcache(std::string_view hex) {
  Extraction<SupernodeEntry> out;
  std::string clean;
  clean.reserve(hex.size());
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (storeim::detail::hex_value(c) < 0)
      throw Error(Errc::MalformedHex, std::string("HostCache contains non-hex character '") + c + "'");
    clean += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (clean.size() % 2 != 0) {
    out.warnings.push_back("HostCache has odd length " + std::to_string(clean.size()) + ", trailing nibble ignored");
    clean.pop_back();
  }
  auto byte_at = [&](std::size_t i) {
    return static_cast<unsigned>(storeim::detail::hex_value(clean[i]) * 16 + storeim::detail::hex_value(clean[i + 1]));
  };
  std::size_t pos = 0;
  while ((pos = clean.find(kHostCachePrefix, pos)) != std::string::npos) {
    if (pos % 2 != 0) {
      ++pos;
      continue;
    }
    const auto start = pos + kHostCachePrefix.size();
    if (clean.size() - start < 12) {
      out.warnings.push_back("HostCache entry at hex offset " + std::to_string(pos) + " is truncated");
      break;
    }
    const std::uint32_t ip = (byte_at(start) << 24) | (byte_at(start + 2) << 16) | (byte_at(start + 4) << 8) |
                             byte_at(start + 6);
    const auto port = static_cast<std::uint16_t>((byte_at(start + 8) << 8) | byte_at(start + 10));
    out.records.push_back({ipv4::format(ip), port});
    pos = start + 12;
  }
  return out;
}

/// Inverse of decode_hostcache, used by the fixture forge.
inline std::string encode_hostcache_entry(const SupernodeEntry& e) {
  const auto ip = ipv4::parse(e.ip);
  if (!ip) throw Error(Errc::InvalidArgument, "not a dotted quad: " + e.ip);
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out(kHostCachePrefix);
  auto put = [&](unsigned b) {
    out += kHex[b >> 4];
    out += kHex[b & 15];
  };
  put(*ip >> 24), put((*ip >> 16) & 0xFF), put((*ip >> 8) & 0xFF), put(*ip & 0xFF);
  put(e.port >> 8), put(e.port & 0xFF);
  return out;
}

struct SkypeNetworkState {
  std::optional<std::string> last_ip;
  std::optional<std::uint16_t> listening_port;
  std::optional<SupernodeEntry> supernode;
  std::vector<SupernodeEntry> hostcache;
  std::optional<std::string> default_skypename;
  std::optional<std::string> node_id;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::optional<std::uint16_t> parse_port(std::string_view s) {
  std::uint64_t v = 0;
  if (!parse_u64(s, v) || v > 65535) return std::nullopt;
  return static_cast<std::uint16_t>(v);
}

inline std::string text_of(std::string_view bytes) {
  // UTF-8 BOM is dropped; other text is taken as-is.
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  return std::string(bytes);
}

}  // namespace detail

inline SkypeNetworkState parse_shared_xml(std::string_view bytes) {
  const auto text = detail::text_of(bytes);
  SkypeNetworkState st;
  bool any = false;

  if (auto v = xml::element_text(text, "LastIP")) {
    any = true;
    std::uint64_t n = 0;
    if (detail::parse_u64(*v, n) && n <= 0xFFFFFFFFull) st.last_ip = decode_decimal_ip(static_cast<std::uint32_t>(n));
    else st.warnings.push_back("LastIP '" + *v + "' is not a 32-bit decimal");
  }
  if (auto v = xml::element_text(text, "ListeningPort")) {
    any = true;
    st.listening_port = detail::parse_port(*v);
    if (!st.listening_port) st.warnings.push_back("ListeningPort '" + *v + "' is out of range");
  }
  if (auto v = xml::element_text(text, "Supernode")) {
    any = true;
    const auto colon = v->rfind(':');
    std::optional<std::uint16_t> port;
    if (colon != std::string::npos) port = detail::parse_port(std::string_view(*v).substr(colon + 1));
    if (colon != std::string::npos && port && ipv4::parse(std::string_view(*v).substr(0, colon)))
      st.supernode = SupernodeEntry{v->substr(0, colon), *port};
    else
      st.warnings.push_back("Supernode '" + *v + "' is not ip:port");
  }
  if (auto v = xml::element_text(text, "HostCache")) {
    any = true;
    try {
      auto hc = decode_hostcache(*v);
      st.hostcache = std::move(hc.records);
      for (auto& w : hc.warnings) st.warnings.push_back(std::move(w));
    } catch (const Error& e) {
      st.warnings.push_back(e.what());
    }
  }
  if (auto v = xml::element_text(text, "Default")) {
    any = true;
    if (!v->empty()) st.default_skypename = *v;
  }
  if (auto v = xml::element_text(text, "NodeID")) {
    any = true;
    if (!v->empty()) st.node_id = *v;
  }
  if (!any) throw Error(Errc::NoRecognizedTags, "shared.xml has none of LastIP, ListeningPort, Supernode, HostCache");
  return st;
}

/// config.xml escapes characters of account names used as tag names:
/// ".2E" stands for '.'. Only that escape is documented; others are kept.
inline std::string unescape_tag_name(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name.substr(i, 3) == ".2E") {
      out += '.';
      i += 2;
    } else {
      out += name[i];
    }
  }
  return out;
}

struct ConfigContact {
  std::string name;
  std::string raw_value;  // format undocumented, e.g. "4857bb98:2"
  friend bool operator==(const ConfigContact&, const ConfigContact&) = default;
};

struct SkypeConfig {
  std::optional<std::int64_t> serial;
  std::optional<Timestamp> last_used;
  std::vector<ConfigContact> contacts;
  std::vector<std::string> warnings;

  std::vector<std::string> contact_names() const {
    std::vector<std::string> out;
    for (const auto& c : contacts) out.push_back(c.name);
    return out;
  }
};

inline SkypeConfig parse_config_xml(std::string_view bytes) {
  const auto text = detail::text_of(bytes);
  SkypeConfig cfg;
  bool any = false;
  if (auto root = xml::next_tag(text, 0, "config")) {
    any = true;
    std::uint64_t n = 0;
    if (auto s = root->attr("serial"); s && detail::parse_u64(*s, n)) cfg.serial = static_cast<std::int64_t>(n);
  }
  if (auto v = xml::element_text(text, "LastUsed")) {
    any = true;
    std::uint64_t n = 0;
    try {
      if (!detail::parse_u64(*v, n)) throw Error(Errc::InvalidArgument, "LastUsed '" + *v + "' is not an integer");
      cfg.last_used = Timestamp::from_unix(n, EpochUnit::seconds);
    } catch (const Error& e) {
      cfg.warnings.push_back(e.what());
    }
  }
  std::size_t pos = 0;
  while (auto u = xml::next_tag(text, pos, "u")) {
    any = true;
    for (auto& [tag, value] : xml::children(text, *u)) cfg.contacts.push_back({unescape_tag_name(tag.name), value});
    pos = u->end;
  }
  if (!any) throw Error(Errc::NoRecognizedTags, "config.xml has no config, LastUsed or u element");
  return cfg;
}

// ---- main.db --------------------------------------------------------------------

struct SkypeAccount {
  std::string skypename;
  std::optional<std::string> liveid;
  std::string fullname;
  std::optional<Date> birthday;
  std::optional<std::int64_t> gender;
  std::optional<std::string> country, province, city, emails, mood_text;
  std::optional<Timestamp> registration_time;
  Provenance provenance;
};

struct SkypeContact {
  std::string skypename, fullname, displayname;
  std::optional<Date> birthday;
  std::optional<std::int64_t> gender;
  std::optional<std::string> languages, country, city, phone_mobile, emails;
  std::optional<Timestamp> last_online, last_used;
  Provenance provenance;
};

struct SkypeMessage {
  std::int64_t id{0};
  std::int64_t convo_id{0};
  std::string chatname;
  std::string author;
  std::string from_dispname;
  std::optional<std::string> dialog_partner;
  Timestamp when;
  std::int64_t type_code{0};
  std::optional<std::int64_t> chatmsg_type, chatmsg_status, participant_count;
  std::string body_xml;
  std::optional<std::string> identities, reason;
  Classification kind;
  Provenance provenance;
};

enum class TransferDirection { receiving, transferring, undetermined };

inline std::string_view to_string(TransferDirection d) {
  switch (d) {
    case TransferDirection::receiving: return "receiving";
    case TransferDirection::transferring: return "transferring";
    default: return "undetermined";
  }
}

struct SkypeTransfer {
  std::int64_t id{0};
  std::string partner_handle, partner_dispname;
  std::int64_t type_code{0};
  TransferDirection direction{TransferDirection::undetermined};
  std::int64_t status_code{0};  // semantics undocumented, reported raw
  std::optional<std::string> failure_reason;
  std::optional<Timestamp> start, finish;  // 0 in the table means "not set"
  std::string filepath, filename;
  std::uint64_t filesize{0}, bytes_transferred{0};
  Provenance provenance;
};

struct SkypeCall {
  std::int64_t id{0};
  Timestamp begin;
  std::string host_identity;
  std::optional<std::int64_t> duration_s;
  bool is_incoming{false};
  std::string name;
  std::optional<bool> unseen_missed;
  Provenance provenance;
};

struct SkypeCallMember {
  std::string call_name;
  std::string identity, dispname;
  std::string guid_raw;
  std::optional<std::string> guid_user, guid_correspondent, guid_call;
  std::optional<std::string> ip_address;
  std::optional<Timestamp> start;
  std::optional<std::int64_t> duration_s;
  Provenance provenance;
};

struct SkypeVideoMessage {
  std::string sid;
  std::optional<std::string> local_path, vod_path;
  std::string public_link;
  std::string author;
  std::int64_t progress{0};
  std::optional<Timestamp> reaction_time;
  Provenance provenance;
};

struct SkypeDataset {
  std::optional<std::string> owner;  // <Skype name> directory holding main.db
  std::vector<SkypeAccount> accounts;
  std::vector<SkypeContact> contacts;
  std::vector<SkypeMessage> messages;
  std::vector<SkypeTransfer> transfers;
  std::vector<SkypeCall> calls;
  std::vector<SkypeCallMember> call_members;
  std::vector<SkypeVideoMessage> video_messages;
  std::vector<std::string> warnings;
  std::vector<std::string> flags;
};

/// Splits "<user>-<correspondent>-<call name>" when exactly two hyphens
/// delimit three non-empty parts.
inline bool split_call_guid(std::string_view raw, std::string& a, std::string& b, std::string& c) {
  if (std::count(raw.begin(), raw.end(), '-') != 2) return false;
  const auto h1 = raw.find('-');
  const auto h2 = raw.find('-', h1 + 1);
  a = raw.substr(0, h1);
  b = raw.substr(h1 + 1, h2 - h1 - 1);
  c = raw.substr(h2 + 1);
  return !a.empty() && !b.empty() && !c.empty();
}

namespace detail {

struct RowReader {
  const sqlite::Table& t;
  const sqlite::Row& r;

  std::string text(std::string_view col) const { return sqlite::as_text(t.get(r, col)).value_or(""); }
  std::optional<std::string> opt_text(std::string_view col) const {
    auto v = sqlite::as_text(t.get(r, col));
    if (v && v->empty()) return std::nullopt;
    return v;
  }
  std::optional<std::int64_t> opt_int(std::string_view col) const { return sqlite::as_int(t.get(r, col)); }
  std::int64_t integer(std::string_view col) const { return opt_int(col).value_or(0); }
  std::uint64_t count(std::string_view col) const {
    // filesize and bytestransferred are TEXT columns in some app versions
    const auto& v = t.get(r, col);
    if (auto i = sqlite::as_int(v); i && *i >= 0) return static_cast<std::uint64_t>(*i);
    std::uint64_t n = 0;
    if (auto s = sqlite::as_text(v); s && storeim::detail::parse_uint(*s, n)) return n;
    return 0;
  }
  /// Seconds epoch; NULL and 0 both mean absent.
  std::optional<Timestamp> opt_time(std::string_view col) const {
    const auto v = opt_int(col);
    if (!v || *v == 0) return std::nullopt;
    if (*v < 0) throw Error(Errc::OutOfRange, std::string(col) + " is negative");
    return Timestamp::from_unix(static_cast<std::uint64_t>(*v), EpochUnit::seconds);
  }
  std::optional<Date> date(std::string_view col) const {
    const auto& v = t.get(r, col);
    if (auto i = sqlite::as_int(v); i && *i > 0) return Date::from_packed(static_cast<std::uint64_t>(*i));
    if (auto s = sqlite::as_text(v)) return Date::parse(*s);
    return std::nullopt;
  }
};

template <typename Fn>
void for_rows(const sqlite::Database& db, std::string_view table, SkypeDataset& ds, Fn&& fn) {
  const auto t = db.read_table(table);
  for (const auto& w : t.warnings) ds.warnings.push_back(std::string(table) + ": " + w);
  for (const auto& row : t.rows) {
    try {
      fn(RowReader{t, row});
    } catch (const Error& e) {
      ds.warnings.push_back(std::string(table) + " row " + std::to_string(row.rowid) + ": " + e.what());
    }
  }
}

}  // namespace detail

/// The account directory in LocalState\<Skype name>\main.db.
inline std::optional<std::string> owner_from_path(const std::filesystem::path& main_db) {
  const auto account_dir = main_db.parent_path();
  std::string parent = account_dir.parent_path().filename().string();
  std::transform(parent.begin(), parent.end(), parent.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto dir = account_dir.filename().string();
  if (parent != "localstate" || dir.empty()) return std::nullopt;
  return dir;
}

inline constexpr std::string_view kMainDbTables[] = {"Accounts", "Contacts", "Messages", "Transfers",
                                                     "Calls",    "CallMembers", "VideoMessages"};

inline SkypeDataset extract_main_db(const sqlite::Database& db) {
  SkypeDataset ds;
  const std::string path = db.label();
  ds.owner = owner_from_path(path);
  if (db.wal_present()) ds.flags.emplace_back(kWalNotApplied);

  std::size_t present = 0;
  for (auto t : kMainDbTables) {
    if (db.has_table(t)) ++present;
    else ds.warnings.push_back("main.db has no " + std::string(t) + " table");
  }
  if (present == 0) throw Error(Errc::AllTablesMissing, path + " has none of the main.db tables");

  auto prov = [&](const char* what) { return Provenance(path, std::string("skype.") + what, Channel::database); };

  if (db.has_table("Accounts"))
    detail::for_rows(db, "Accounts", ds, [&](const detail::RowReader& r) {
      SkypeAccount a;
      a.skypename = r.text("skypename");
      if (a.skypename.empty()) throw Error(Errc::InvalidArgument, "skypename is empty");
      a.liveid = r.opt_text("liveid_membername");
      a.fullname = r.text("fullname");
      a.birthday = r.date("birthday");
      a.gender = r.opt_int("gender");
      a.country = r.opt_text("country");
      a.province = r.opt_text("province");
      a.city = r.opt_text("city");
      a.emails = r.opt_text("emails");
      a.mood_text = r.opt_text("mood_text");
      a.registration_time = r.opt_time("registration_timestamp");
      a.provenance = prov("accounts");
      ds.accounts.push_back(std::move(a));
    });

  if (db.has_table("Contacts"))
    detail::for_rows(db, "Contacts", ds, [&](const detail::RowReader& r) {
      SkypeContact c;
      c.skypename = r.text("skypename");
      if (c.skypename.empty()) throw Error(Errc::InvalidArgument, "skypename is empty");
      c.fullname = r.text("fullname");
      c.displayname = r.text("displayname");
      c.birthday = r.date("birthday");
      c.gender = r.opt_int("gender");
      c.languages = r.opt_text("languages");
      c.country = r.opt_text("country");
      c.city = r.opt_text("city");
      c.phone_mobile = r.opt_text("phone_mobile");
      c.emails = r.opt_text("emails");
      c.last_online = r.opt_time("lastonline_timestamp");
      c.last_used = r.opt_time("lastused_timestamp");
      c.provenance = prov("contacts");
      ds.contacts.push_back(std::move(c));
    });

  if (db.has_table("Messages"))
    detail::for_rows(db, "Messages", ds, [&](const detail::RowReader& r) {
      SkypeMessage m;
      m.id = r.opt_int("id").value_or(r.r.rowid);
      m.convo_id = r.integer("convo_id");
      m.chatname = r.text("chatname");
      m.author = r.text("author");
      m.from_dispname = r.text("from_dispname");
      m.dialog_partner = r.opt_text("dialog_partner");
      auto when = r.opt_time("timestamp");
      if (!when) throw Error(Errc::InvalidArgument, "timestamp is missing");
      m.when = *when;
      m.type_code = r.integer("type");
      m.chatmsg_type = r.opt_int("chatmsg_type");
      m.chatmsg_status = r.opt_int("chatmsg_status");
      m.participant_count = r.opt_int("participant_count");
      m.body_xml = r.text("body_xml");
      m.identities = r.opt_text("identities");
      m.reason = r.opt_text("reason");
      m.kind = classify_message(m.type_code, m.chatmsg_type, m.chatmsg_status, m.participant_count);
      m.provenance = prov("messages");
      ds.messages.push_back(std::move(m));
    });

  if (db.has_table("Transfers"))
    detail::for_rows(db, "Transfers", ds, [&](const detail::RowReader& r) {
      SkypeTransfer x;
      x.id = r.opt_int("id").value_or(r.r.rowid);
      x.partner_handle = r.text("partner_handle");
      x.partner_dispname = r.text("partner_dispname");
      x.type_code = r.integer("type");
      x.direction = x.type_code == 1   ? TransferDirection::receiving
                    : x.type_code == 2 ? TransferDirection::transferring
                                       : TransferDirection::undetermined;
      if (x.direction == TransferDirection::undetermined)
        ds.warnings.push_back("Transfers row " + std::to_string(r.r.rowid) + ": type " + std::to_string(x.type_code) +
                              " has no documented direction");
      x.status_code = r.integer("status");
      x.failure_reason = r.opt_text("failurereason");
      x.start = r.opt_time("starttime");
      x.finish = r.opt_time("finishtime");
      x.filepath = r.text("filepath");
      x.filename = r.text("filename");
      x.filesize = r.count("filesize");
      x.bytes_transferred = r.count("bytestransferred");
      x.provenance = prov("transfers");
      ds.transfers.push_back(std::move(x));
    });

  if (db.has_table("Calls"))
    detail::for_rows(db, "Calls", ds, [&](const detail::RowReader& r) {
      SkypeCall c;
      c.id = r.opt_int("id").value_or(r.r.rowid);
      auto begin = r.opt_time("begin_timestamp");
      if (!begin) throw Error(Errc::InvalidArgument, "begin_timestamp is missing");
      c.begin = *begin;
      c.host_identity = r.text("host_identity");
      c.duration_s = r.opt_int("duration");
      if (c.duration_s && *c.duration_s < 0) throw Error(Errc::OutOfRange, "duration is negative");
      c.is_incoming = r.integer("is_incoming") != 0;
      c.name = r.text("name");
      if (auto u = r.opt_int("is_unseen_missed")) c.unseen_missed = *u != 0;
      c.provenance = prov("calls");
      ds.calls.push_back(std::move(c));
    });

  if (db.has_table("CallMembers"))
    detail::for_rows(db, "CallMembers", ds, [&](const detail::RowReader& r) {
      SkypeCallMember m;
      m.call_name = r.text("call_name");
      m.identity = r.text("identity");
      m.dispname = r.text("dispname");
      m.guid_raw = r.text("guid");
      std::string a, b, c;
      if (split_call_guid(m.guid_raw, a, b, c)) m.guid_user = a, m.guid_correspondent = b, m.guid_call = c;
      m.ip_address = r.opt_text("ip_address");
      m.start = r.opt_time("start_timestamp");
      m.duration_s = r.opt_int("call_duration");
      m.provenance = prov("call_members");
      ds.call_members.push_back(std::move(m));
    });

  if (db.has_table("VideoMessages"))
    detail::for_rows(db, "VideoMessages", ds, [&](const detail::RowReader& r) {
      SkypeVideoMessage v;
      v.sid = r.text("sharing_id");
      v.local_path = r.opt_text("local_path");
      v.vod_path = r.opt_text("vod_path");
      v.public_link = r.text("public_link");
      v.author = r.text("author");
      v.progress = r.integer("progress");
      if (v.progress < 0 || v.progress > 100) throw Error(Errc::OutOfRange, "progress outside 0..100");
      v.reaction_time = r.opt_time("reaction_timestamp");
      v.provenance = prov("video_messages");
      ds.video_messages.push_back(std::move(v));
    });

  return ds;
}

inline SkypeDataset extract_main_db(const std::filesystem::path& path) {
  return extract_main_db(sqlite::Database::open(path));
}

}  // namespace storeim::skype
