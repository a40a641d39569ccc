#pragma once

// Facebook Store-app cache databases (LocalState\<uid>\DB\*.sqlite).
//
// Analytics, Friends, Messages (messages + users) and Notifications are
// schema-parsed. FriendRequests and Stories are only inventoried: their
// table layouts are not known well enough to decode.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storeim/evidence.hpp"
#include "storeim/sqlite_reader.hpp"

namespace storeim::facebook {

enum class AnalyticsName { login, chat_turned_on, message_sent_attempt, message_send_state, file_downloaded, other };

inline AnalyticsName classify_analytics_name(std::string_view name) {
  if (name == "login") return AnalyticsName::login;
  if (name == "chat_turned_on") return AnalyticsName::chat_turned_on;
  if (name == "message_sent_attempt") return AnalyticsName::message_sent_attempt;
  if (name == "message_send_state") return AnalyticsName::message_send_state;
  if (name == "file_downloaded") return AnalyticsName::file_downloaded;
  return AnalyticsName::other;
}

struct FbAnalyticsEvent {
  std::int64_t row_id{0};
  Timestamp when;
  std::string log_type;
  AnalyticsName name{AnalyticsName::other};
  std::string name_text;  // verbatim, also for `other`
  std::string module;
  std::string extra;
  Provenance provenance;
};

struct FbFriend {
  std::string uid;
  std::string name, first_name, middle_name, last_name;
  std::string contact_email;
  std::string phones;  // raw JSON text
  std::string profile_url;
  double communication_rank{0};
  std::optional<Date> birthday;
  Provenance provenance;
};

struct FbAttachment {
  std::string name;
  std::uint64_t size{0};
  std::string id;
  std::string mime;
  std::int64_t type_code{0};
  std::optional<std::string> url, preview_url;
  std::optional<std::uint32_t> width, height;
  friend bool operator==(const FbAttachment&, const FbAttachment&) = default;
};

struct FbMessage {
  std::int64_t row_id{0};
  std::string mid;
  std::string thread_id;
  std::string body;
  std::string sender_uid;
  std::string sender_name;
  std::string sender_email;
  std::string sender_raw;
  std::vector<std::string> tags;
  Timestamp when;
  std::vector<FbAttachment> attachments;
  std::string attachments_raw;
  Provenance provenance;
};

struct FbUser {
  std::string id;
  std::string email;
  std::string name;
  std::optional<Timestamp> last_active;
  Provenance provenance;
};

/// The notifications table stores an `unread` column, while the app's own
/// documentation reads '1' as read. Both readings are surfaced; none is
/// picked.
struct FbNotification {
  std::string notification_id;
  std::string sender_id;
  std::string title_text;
  std::string href;
  int unread_flag{0};
  std::optional<Timestamp> updated, created;
  Provenance provenance;

  bool read_if_one_means_read() const { return unread_flag == 1; }
  bool read_if_column_means_unread() const { return unread_flag == 0; }
};

namespace detail {

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline std::string text_of(const sqlite::Table& t, const sqlite::Row& r, std::string_view col) {
  return sqlite::as_text(t.get(r, col)).value_or("");
}

inline const sqlite::Value& first_present(const sqlite::Table& t, const sqlite::Row& r,
                                          std::initializer_list<std::string_view> cols) {
  for (auto c : cols)
    if (t.has_column(c)) return t.get(r, c);
  static const sqlite::Value kNull{};
  return kNull;
}

// Integer epoch with a table-specific unit, or date-time text.
inline std::optional<Timestamp> time_of(const sqlite::Value& v, std::optional<EpochUnit> unit) {
  if (sqlite::is_null(v)) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (!s->empty() && std::all_of(s->begin(), s->end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const auto n = std::stoull(*s);
      return Timestamp::from_unix(n, unit.value_or(infer_epoch_unit(n)));
    }
    return Timestamp::from_iso_text(*s);
  }
  const auto n = sqlite::as_int(v);
  if (!n || *n < 0) throw Error(Errc::OutOfRange, "negative or non-numeric epoch value");
  const auto u = static_cast<std::uint64_t>(*n);
  return Timestamp::from_unix(u, unit.value_or(infer_epoch_unit(u)));
}

inline std::string json_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  if (j.is_null()) return {};
  return j.dump();
}

template <typename Record>
Extraction<Record> open_table(const sqlite::Database& db, std::string_view table, sqlite::Table& out) {
  Extraction<Record> ex;
  out = db.read_table(table);
  ex.warnings = out.warnings;
  if (db.wal_present()) ex.flags.emplace_back(kWalNotApplied);
  return ex;
}

// Tags are a JSON array of strings; the app has also been seen writing a
// brace-wrapped variant, for which quoted strings are scraped instead.
inline std::vector<std::string> parse_tags(std::string_view text, bool& lenient) {
  lenient = false;
  std::vector<std::string> tags;
  if (text.empty()) return tags;
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_array()) {
    bool ok = true;
    for (const auto& e : j) {
      if (!e.is_string()) ok = false;
      else tags.push_back(e.get<std::string>());
    }
    if (ok) return tags;
    tags.clear();
  }
  lenient = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '"') continue;
    const auto end = text.find('"', i + 1);
    if (end == std::string_view::npos) break;
    tags.emplace_back(text.substr(i + 1, end - i - 1));
    i = end;
  }
  return tags;
}

}  // namespace detail

/// Decodes the `attachments` JSON of a messages row. The array may be wrapped
/// in one extra level of brackets.
inline std::vector<FbAttachment> parse_fb_attachments(std::string_view json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw Error(Errc::MalformedJson, "attachments field is not a JSON array");
  std::vector<const nlohmann::json*> objects;
  for (const auto& e : j) {
    if (e.is_array()) {
      for (const auto& inner : e)
        if (inner.is_object()) objects.push_back(&inner);
    } else if (e.is_object()) {
      objects.push_back(&e);
    }
  }
  std::vector<FbAttachment> out;
  for (const auto* o : objects) {
    FbAttachment a;
    if (auto it = o->find("name"); it != o->end()) a.name = detail::json_text(*it);
    if (auto it = o->find("size"); it != o->end()) {
      if (it->is_number_unsigned() || (it->is_number_integer() && it->get<std::int64_t>() >= 0))
        a.size = it->get<std::uint64_t>();
      else if (it->is_string() && detail::all_digits(it->get<std::string>()))
        a.size = std::stoull(it->get<std::string>());
      else
        throw Error(Errc::MalformedJson, "attachment size is not a non-negative integer");
    }
    if (auto it = o->find("id"); it != o->end()) a.id = detail::json_text(*it);
    if (auto it = o->find("mime"); it != o->end()) a.mime = detail::json_text(*it);
    if (auto it = o->find("type"); it != o->end() && it->is_number_integer()) a.type_code = it->get<std::int64_t>();
    if (auto it = o->find("url"); it != o->end() && it->is_string()) a.url = it->get<std::string>();
    if (auto it = o->find("preview"); it != o->end() && it->is_string()) a.preview_url = it->get<std::string>();
    if (auto it = o->find("width"); it != o->end() && it->is_number_unsigned()) a.width = it->get<std::uint32_t>();
    if (auto it = o->find("height"); it != o->end() && it->is_number_unsigned()) a.height = it->get<std::uint32_t>();
    out.push_back(std::move(a));
  }
  return out;
}

inline Extraction<FbAnalyticsEvent> extract_analytics(const sqlite::Database& db) {
  sqlite::Table t;
  auto ex = detail::open_table<FbAnalyticsEvent>(db, "analytics_logs", t);
  for (const auto& row : t.rows) {
    try {
      FbAnalyticsEvent e;
      e.row_id = row.rowid;
      const auto when = detail::time_of(t.get(row, "time"), EpochUnit::millis);
      if (!when) throw Error(Errc::InvalidArgument, "time is NULL");
      e.when = *when;
      e.log_type = detail::text_of(t, row, "log_type");
      e.name_text = detail::text_of(t, row, "name");
      e.name = classify_analytics_name(e.name_text);
      e.module = detail::text_of(t, row, "module");
      e.extra = detail::text_of(t, row, "extra");
      e.provenance = Provenance(db.label(), "facebook.analytics", Channel::database);
      ex.records.push_back(std::move(e));
    } catch (const Error& err) {
      ex.warnings.push_back("analytics_logs row " + std::to_string(row.rowid) + ": " + err.what());
    }
  }
  return ex;
}

inline Extraction<FbFriend> extract_friends(const sqlite::Database& db) {
  sqlite::Table t;
  auto ex = detail::open_table<FbFriend>(db, "friends", t);
  for (const auto& row : t.rows) {
    FbFriend f;
    f.uid = detail::text_of(t, row, "uid");
    if (!detail::all_digits(f.uid)) {
      ex.warnings.push_back("friends row " + std::to_string(row.rowid) + ": uid '" + f.uid + "' is not numeric");
      continue;
    }
    f.name = detail::text_of(t, row, "name");
    f.first_name = detail::text_of(t, row, "first_name");
    f.middle_name = detail::text_of(t, row, "middle_name");
    f.last_name = detail::text_of(t, row, "last_name");
    f.contact_email = detail::text_of(t, row, "contact_email");
    f.phones = detail::text_of(t, row, "phones");
    f.profile_url = detail::text_of(t, row, "profile_url");
    f.communication_rank = sqlite::as_real(t.get(row, "communication_rank")).value_or(0.0);
    if (auto b = sqlite::as_text(detail::first_present(t, row, {"birthday_date", "birthday"}))) {
      f.birthday = Date::parse(*b);
      if (!f.birthday && !b->empty())
        ex.warnings.push_back("friends row " + std::to_string(row.rowid) + ": unparsed birthday '" + *b + "'");
    }
    f.provenance = Provenance(db.label(), "facebook.friends", Channel::database);
    ex.records.push_back(std::move(f));
  }
  return ex;
}

inline Extraction<FbMessage> extract_messages(const sqlite::Database& db) {
  sqlite::Table t;
  auto ex = detail::open_table<FbMessage>(db, "messages", t);
  for (const auto& row : t.rows) {
    const std::string where = "messages row " + std::to_string(row.rowid) + ": ";
    FbMessage m;
    m.row_id = row.rowid;
    m.mid = detail::text_of(t, row, "id");
    m.thread_id = detail::text_of(t, row, "thread_id");
    m.body = detail::text_of(t, row, "body");
    try {
      const auto when = detail::time_of(t.get(row, "timestamp"), EpochUnit::millis);
      if (!when) throw Error(Errc::InvalidArgument, "timestamp is NULL");
      m.when = *when;
    } catch (const Error& err) {
      ex.warnings.push_back(where + err.what());
      continue;
    }

    m.sender_raw = detail::text_of(t, row, "sender");
    if (!m.sender_raw.empty()) {
      const auto j = nlohmann::json::parse(m.sender_raw, nullptr, false);
      if (j.is_object()) {
        if (auto it = j.find("user_id"); it != j.end()) m.sender_uid = detail::json_text(*it);
        if (auto it = j.find("name"); it != j.end()) m.sender_name = detail::json_text(*it);
        if (auto it = j.find("email"); it != j.end()) m.sender_email = detail::json_text(*it);
      } else {
        ex.warnings.push_back(where + "sender JSON malformed, raw text kept");
      }
    }

    bool lenient = false;
    m.tags = detail::parse_tags(detail::text_of(t, row, "tags"), lenient);
    if (lenient) ex.warnings.push_back(where + "tags are not a JSON string array, quoted values scraped");

    m.attachments_raw = detail::text_of(t, row, "attachments");
    if (!m.attachments_raw.empty()) {
      try {
        m.attachments = parse_fb_attachments(m.attachments_raw);
      } catch (const Error& err) {
        ex.warnings.push_back(where + err.what() + ", raw text kept");
      }
    }
    m.provenance = Provenance(db.label(), "facebook.messages", Channel::database);
    ex.records.push_back(std::move(m));
  }
  return ex;
}

inline Extraction<FbUser> extract_users(const sqlite::Database& db) {
  sqlite::Table t;
  auto ex = detail::open_table<FbUser>(db, "users", t);
  for (const auto& row : t.rows) {
    const std::string where = "users row " + std::to_string(row.rowid) + ": ";
    FbUser u;
    u.id = detail::text_of(t, row, "id");
    if (!detail::all_digits(u.id)) {
      ex.warnings.push_back(where + "id '" + u.id + "' is not numeric");
      continue;
    }
    u.email = detail::text_of(t, row, "email");
    u.name = detail::text_of(t, row, "name");
    try {
      u.last_active = detail::time_of(
          detail::first_present(t, row, {"last_active_timestamp", "last_active_time", "last_active"}),
          EpochUnit::seconds);
    } catch (const Error& err) {
      ex.warnings.push_back(where + err.what());
    }
    u.provenance = Provenance(db.label(), "facebook.users", Channel::database);
    ex.records.push_back(std::move(u));
  }
  return ex;
}

inline Extraction<FbNotification> extract_notifications(const sqlite::Database& db) {
  sqlite::Table t;
  auto ex = detail::open_table<FbNotification>(db, "notifications", t);
  for (const auto& row : t.rows) {
    const std::string where = "notifications row " + std::to_string(row.rowid) + ": ";
    FbNotification n;
    n.notification_id = detail::text_of(t, row, "notification_id");
    n.sender_id = detail::text_of(t, row, "sender_id");
    n.title_text = detail::text_of(t, row, "title_text");
    n.href = detail::text_of(t, row, "href");
    const auto flag = sqlite::as_int(t.get(row, "unread"));
    if (!flag || (*flag != 0 && *flag != 1)) {
      ex.warnings.push_back(where + "unread flag is not 0 or 1");
      continue;
    }
    n.unread_flag = static_cast<int>(*flag);
    try {
      n.updated = detail::time_of(t.get(row, "updated_time"), std::nullopt);
      n.created = detail::time_of(t.get(row, "created_time"), std::nullopt);
    } catch (const Error& err) {
      ex.warnings.push_back(where + err.what());
    }
    n.provenance = Provenance(db.label(), "facebook.notifications", Channel::database);
    ex.records.push_back(std::move(n));
  }
  return ex;
}

/// The numeric Facebook id owning a database, taken from the
/// LocalState\<id>\DB\ path layout.
inline std::optional<std::string> owner_from_path(const std::filesystem::path& db_path) {
  const auto db_dir = db_path.parent_path();
  std::string dir_name = db_dir.filename().string();
  std::transform(dir_name.begin(), dir_name.end(), dir_name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (dir_name != "db") return std::nullopt;
  const auto id = db_dir.parent_path().filename().string();
  if (!detail::all_digits(id)) return std::nullopt;
  return id;
}

/// Everything recovered from one or more Facebook cache databases.
struct FacebookDataset {
  std::optional<std::string> owner_uid;
  Extraction<FbAnalyticsEvent> analytics;
  Extraction<FbFriend> friends;
  Extraction<FbMessage> messages;
  Extraction<FbUser> users;
  Extraction<FbNotification> notifications;
  std::vector<std::string> inventoried;  // databases located but not schema-parsed
  std::vector<std::string> warnings;

  void merge(FacebookDataset&& o) {
    if (!owner_uid) owner_uid = std::move(o.owner_uid);
    auto append = [](auto& dst, auto&& src) {
      for (auto& r : src.records) dst.records.push_back(std::move(r));
      for (auto& w : src.warnings) dst.warnings.push_back(std::move(w));
      for (auto& f : src.flags)
        if (std::find(dst.flags.begin(), dst.flags.end(), f) == dst.flags.end()) dst.flags.push_back(std::move(f));
    };
    append(analytics, std::move(o.analytics));
    append(friends, std::move(o.friends));
    append(messages, std::move(o.messages));
    append(users, std::move(o.users));
    append(notifications, std::move(o.notifications));
    for (auto& s : o.inventoried) inventoried.push_back(std::move(s));
    for (auto& w : o.warnings) warnings.push_back(std::move(w));
  }
};

/// Runs every extractor whose table the database contains. Tables that are
/// absent are skipped, so the six cache files can be handed in any order.
inline FacebookDataset extract_database(const std::filesystem::path& path) {
  const auto db = sqlite::Database::open(path);
  FacebookDataset ds;
  ds.owner_uid = owner_from_path(path);
  bool parsed = false;
  if (db.has_table("analytics_logs")) ds.analytics = extract_analytics(db), parsed = true;
  if (db.has_table("friends")) ds.friends = extract_friends(db), parsed = true;
  if (db.has_table("messages")) ds.messages = extract_messages(db), parsed = true;
  if (db.has_table("users")) ds.users = extract_users(db), parsed = true;
  if (db.has_table("notifications")) ds.notifications = extract_notifications(db), parsed = true;
  if (!parsed) {
    ds.inventoried.push_back(path.string());
    ds.warnings.push_back(path.string() + ": no documented Facebook table, inventoried only");
  }
  return ds;
}

}  // namespace storeim::facebook
