#pragma once

// Deterministic evidence-tree generator. A seed fixes every byte written and
// the manifest of records an extractor is expected to recover from it. The
// reference case rows are always present; seeded extras surround them.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storeim/forge/case_data.hpp"
#include "storeim/forge/pcap_writer.hpp"
#include "storeim/forge/sqlite_writer.hpp"
#include "storeim/pipeline.hpp"
#include "storeim/records_json.hpp"
#include "storeim/timeline.hpp"

namespace storeim::forge {

namespace fs = std::filesystem;
namespace known = storeim::case_data;

inline constexpr int kManifestFormat = 1;

/// mt19937_64 reduced with modulo; std distributions are not portable
/// across standard libraries, and the output must be.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : g_() % n; }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return (g_() & 1) != 0; }
  template <class C>
  const auto& pick(const C& c) {
    return c[static_cast<std::size_t>(below(std::size(c)))];
  }
  std::string hex(std::size_t n, bool upper = false) {
    const char* digits = upper ? "0123456789ABCDEF" : "0123456789abcdef";
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += digits[below(16)];
    return s;
  }
  std::string digits(std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + below(10));
    return s;
  }

 private:
  std::mt19937_64 g_;
};

namespace detail {

inline void write_file(const fs::path& p, std::string_view bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + p.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "short write to " + p.string());
}

inline Timestamp secs(std::uint64_t s) { return Timestamp::from_unix(s, EpochUnit::seconds); }
inline Timestamp millis(std::uint64_t ms) { return Timestamp::from_unix(ms, EpochUnit::millis); }

// "YYYY-MM-DD HH:MM:SS", the wall-clock text the apps and the journal use.
inline std::string wall_text(std::uint64_t unix_s) {
  const auto iso = secs(unix_s).to_iso();
  return iso.substr(0, 10) + " " + iso.substr(11, 8);
}

inline std::string s(std::string_view v) { return std::string(v); }

inline std::string dotted(std::uint32_t ip) {
  return std::to_string(ip >> 24) + "." + std::to_string((ip >> 16) & 0xFF) + "." + std::to_string((ip >> 8) & 0xFF) +
         "." + std::to_string(ip & 0xFF);
}

inline SqlValue opt_value(const std::optional<std::string>& v) {
  return v ? SqlValue(*v) : SqlValue(std::monostate{});
}
inline SqlValue opt_value(const std::optional<std::int64_t>& v) {
  return v ? SqlValue(*v) : SqlValue(std::monostate{});
}

inline constexpr std::string_view kFirstNames[] = {"Aaron", "Beth", "Chen", "Dara", "Eli", "Farah", "Gus", "Hana"};
inline constexpr std::string_view kLastNames[] = {"Moss", "Quill", "Rahman", "Stone", "Tan", "Vega", "Wren", "Young"};
inline constexpr std::string_view kWords[] = {"meet", "later", "file", "ok", "see", "thanks", "tomorrow", "send",
                                              "call", "now", "where", "here", "done", "check", "again", "soon"};

inline std::string sentence(Rng& rng) {
  std::string out;
  const auto n = rng.range(2, 7);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += rng.pick(kWords);
  }
  return out;
}

}  // namespace detail

// ---- capture builder ----------------------------------------------------------------

struct CaptureSpec {
  std::string bytes;
  std::vector<pcap::Flow> flows;  // in assembly order: first_us ascending
  std::vector<pcap::FlowLabel> labels;
  std::size_t matching{0};  // flows that get a label other than Other
};

namespace detail {

struct Target {
  std::string_view ip;
  std::uint16_t port;
  pcap::Label label;
};

inline constexpr Target kCatalogTargets[] = {
    {"31.13.76.102", 443, pcap::Label::FacebookChat},        {"31.13.79.246", 443, pcap::Label::FacebookChat},
    {"31.13.70.1", 443, pcap::Label::FacebookUpload},        {"31.13.70.7", 443, pcap::Label::FacebookCdnDownload},
    {"23.62.109.216", 80, pcap::Label::AkamaiCdn},           {"173.252.120.6", 443, pcap::Label::FacebookCore},
    {"23.58.43.27", 80, pcap::Label::SymantecOcsp},          {"91.190.216.51", 443, pcap::Label::SkypeRst},
    {"91.190.218.7", 443, pcap::Label::SkypeRst},            {"65.54.184.60", 443, pcap::Label::MicrosoftLive},
    {"108.162.232.204", 80, pcap::Label::GlobalSignOcsp},    {"192.229.145.200", 80, pcap::Label::EdgeCastCrl},
};

inline std::uint32_t ip_of(std::string_view dotted_quad) {
  std::uint32_t out = 0, part = 0;
  for (char c : dotted_quad) {
    if (c == '.') out = out << 8 | part, part = 0;
    else part = part * 10 + static_cast<std::uint32_t>(c - '0');
  }
  return out << 8 | part;
}

}  // namespace detail

/// `total` flows between one workstation and remote hosts, `matching` of
/// which hit the builtin catalog by address, SNI or the supernode port.
inline CaptureSpec build_capture(Rng& rng, std::size_t total, std::size_t matching, std::int64_t start_us,
                                 bool big_endian = false, bool nanosecond = false) {
  using pcap::Basis;
  using pcap::Label;
  matching = std::min(matching, total);
  CaptureSpec spec;
  spec.matching = matching;
  PcapWriter w(big_endian, nanosecond);
  const std::uint32_t local = detail::ip_of("192.168.220.176");

  // Matching flows are spread over the sequence, not front-loaded.
  std::vector<bool> is_match(total, false);
  for (std::size_t i = 0; i < matching; ++i) is_match[i] = true;
  for (std::size_t i = total; i > 1; --i) std::swap(is_match[i - 1], is_match[rng.below(i)]);

  std::size_t placed = 0;
  for (std::size_t i = 0; i < total; ++i) {
    std::uint32_t remote = 0;
    std::uint16_t rport = 0;
    auto proto = pcap::Proto::tcp;
    std::optional<std::string> sni;
    pcap::FlowLabel label{Label::Other, Basis::unlabeled, ""};
    if (is_match[i]) {
      // The first two matches are always the chat edge and a supernode
      // lookup, so every capture exercises both.
      const auto pick = placed < 2 ? (placed == 0 ? 2 : 0) : rng.below(4);
      const bool chat_edge = placed++ == 0;
      switch (pick) {
        case 0:
          remote = detail::ip_of("203.0.113.0") + static_cast<std::uint32_t>(rng.range(1, 254));
          rport = pcap::kSupernodeLookupPort;
          label = {Label::SkypeSupernodeLookup, Basis::port_heuristic, ""};
          break;
        case 1:
          remote = detail::ip_of("198.51.100.0") + static_cast<std::uint32_t>(rng.range(1, 254));
          rport = 443;
          sni = "5-edge-chat.facebook.com";
          label = {Label::FacebookChat, Basis::sni, ""};
          break;
        default: {
          const auto& t = chat_edge ? detail::kCatalogTargets[0] : rng.pick(detail::kCatalogTargets);
          remote = detail::ip_of(t.ip);
          rport = t.port;
          label = {t.label, Basis::ip_catalog, ""};
        }
      }
    } else {
      remote = detail::ip_of("198.18.0.0") + static_cast<std::uint32_t>(rng.range(1, 65534));
      proto = rng.below(3) == 0 ? pcap::Proto::udp : pcap::Proto::tcp;
      do rport = static_cast<std::uint16_t>(rng.range(1, 65535));
      while (rport == pcap::kSupernodeLookupPort);
    }
    const auto lport = static_cast<std::uint16_t>(49152 + i % 16000);
    const pcap::Endpoint client{local, lport}, server{remote, rport};

    pcap::Flow f;
    f.proto = proto;
    f.a = std::min(client, server);
    f.b = std::max(client, server);
    f.sni = sni;
    std::int64_t ts = start_us + static_cast<std::int64_t>(i) * 2'000'000 + static_cast<std::int64_t>(rng.below(1'000'000));
    f.first_us = ts;
    const auto packets = rng.range(1, 5);
    for (std::uint64_t k = 0; k < packets; ++k) {
      if (k) ts += static_cast<std::int64_t>(rng.range(1, 100'000));
      const bool outbound = k % 2 == 0;
      std::string payload = (k == 0 && sni) ? client_hello(*sni) : std::string(rng.below(200), 'x');
      const auto& src = outbound ? client : server;
      const auto& dst = outbound ? server : client;
      const auto len = w.add(ts, static_cast<std::uint8_t>(proto), src.ip, src.port, dst.ip, dst.port, payload);
      auto& dir = (src == f.a) ? f.a_to_b : f.b_to_a;
      ++dir.packets;
      dir.bytes += len;
      if (!dir.first_us) dir.first_us = ts;
      dir.last_us = ts;
    }
    f.last_us = ts;
    spec.flows.push_back(std::move(f));
    spec.labels.push_back(label);
  }
  spec.bytes = w.bytes();
  return spec;
}

// ---- the tree -------------------------------------------------------------------------

struct Forged {
  pipeline::Collection expected;
  std::vector<TimelineEvent> events;  // merge_sort order
  nlohmann::json manifest;
};

namespace detail {

inline const std::string kUser = "Users/anonymous";
inline const std::string kPackages = kUser + "/AppData/Local/Packages";
inline const std::string kFbLocal = kPackages + "/" + s(known::kFacebookFamily) + "/LocalState";
inline const std::string kFbDb = kFbLocal + "/" + s(known::kSuspectFbUid) + "/DB";
inline const std::string kSkLocal = kPackages + "/" + s(known::kSkypeFamily) + "/LocalState";
inline const std::string kSkAccount = kSkLocal + "/" + s(known::kSuspectSkype);
inline const std::string kDownloads = kUser + "/Downloads";
inline const std::string kWinDownloads = "C:\\Users\\anonymous\\Downloads\\";

class TreeForge {
 public:
  TreeForge(fs::path out, std::uint64_t seed) : out_(std::move(out)), seed_(seed), rng_(seed) {}

  Forged run() {
    facebook();
    skype();
    installs();
    downloads();
    registry();
    memory();
    capture();
    journal();
    misc();

    std::sort(exp_.artifacts.begin(), exp_.artifacts.end(), [](const auto& a, const auto& b) {
      if (a.path != b.path) return a.path < b.path;
      if (a.role != b.role) return a.role < b.role;
      return a.rule < b.rule;
    });
    std::sort(exp_.zones.begin(), exp_.zones.end(),
              [](const auto& a, const auto& b) { return a.source_path < b.source_path; });

    Forged f;
    f.events = timeline::merge_sort(pipeline::events(exp_).records);
    f.manifest = {{"format", kManifestFormat}, {"seed", seed_}, {"expected", records::to_json(exp_)}};
    auto evs = nlohmann::json::array();
    for (const auto& e : f.events) evs.push_back(nlohmann::json::parse(timeline::to_json(e).dump()));
    f.manifest["events"] = evs;
    f.expected = std::move(exp_);
    write_file(out_ / "manifest.json", f.manifest.dump(2) + "\n");
    return f;
  }

 private:
  fs::path at(const std::string& rel) const { return out_ / rel; }

  void dir(const std::string& rel) { fs::create_directories(at(rel)); }

  void artifact(locator::Role role, const std::string& rel, std::string_view rule, std::optional<std::string_view> pkg,
                std::optional<std::string_view> account = std::nullopt) {
    locator::ArtifactPath a;
    a.role = role;
    a.path = rel;
    a.rule = std::string(rule);
    if (pkg) a.package = locator::parse_package_id(*pkg);
    if (account) a.account = std::string(*account);
    exp_.artifacts.push_back(std::move(a));
  }

  Provenance db_prov(const std::string& rel, const char* extractor) {
    return Provenance(rel, extractor, Channel::database);
  }

  // ---- Facebook ----

  void facebook() {
    using locator::Role;
    dir(kFbDb);
    artifact(Role::LocalStateDir, kFbLocal, "local-state", known::kFacebookFamily);
    facebook::FacebookDataset ds;
    ds.owner_uid = s(known::kSuspectFbUid);

    for (std::string_view name : {"Analytics.sqlite", "FriendRequests.sqlite", "Friends.sqlite", "Messages.sqlite",
                                  "Notifications.sqlite", "Stories.sqlite"})
      artifact(Role::CacheDb, kFbDb + "/" + s(name), "facebook-cache-db", known::kFacebookFamily, known::kSuspectFbUid);

    fb_analytics(ds);
    {
      SqliteWriter db(at(kFbDb + "/FriendRequests.sqlite"));
      db.exec("CREATE TABLE friend_requests (uid TEXT, name TEXT, time INTEGER)");
      db.insert("INSERT INTO friend_requests VALUES (?,?,?)",
                {s(known::kVictimFbUid), std::string("Jack Jeffrey"), std::int64_t{1423763320}});
    }
    fb_friends(ds);
    fb_messages(ds);
    fb_notifications(ds);
    {
      SqliteWriter db(at(kFbDb + "/Stories.sqlite"));
      db.exec("CREATE TABLE stories (id TEXT, payload TEXT)");
      db.insert("INSERT INTO stories VALUES (?,?)", {std::string("S:" + rng_.digits(15)), std::string("{}")});
    }
    exp_.facebook.push_back(std::move(ds));
  }

  void fb_analytics(facebook::FacebookDataset& ds) {
    const auto rel = kFbDb + "/Analytics.sqlite";
    SqliteWriter db(at(rel));
    db.exec("CREATE TABLE analytics_logs (id INTEGER PRIMARY KEY, time INTEGER, log_type TEXT, name TEXT, "
            "module TEXT, extra TEXT)");
    struct Row {
      std::int64_t id;
      std::uint64_t ms;
      std::string log_type, name, module, extra;
    };
    std::vector<Row> rows{{known::kLoginRow.id, known::kLoginRow.time_ms, s(known::kLoginRow.log_type),
                           s(known::kLoginRow.name), s(known::kLoginRow.module), s(known::kLoginRow.extra)}};
    constexpr std::string_view kNames[] = {"file_downloaded", "app_foreground", "app_background", "navigation",
                                           "photo_view"};
    std::uint64_t t = known::kLoginRow.time_ms;
    const auto extra = rng_.range(3, 8);
    for (std::uint64_t i = 0; i < extra; ++i) {
      t += rng_.range(1000, 600000);
      const auto name = s(rng_.pick(kNames));
      rows.push_back({static_cast<std::int64_t>(i + 2), t, "client_event", name, "orca_" + name.substr(0, 4),
                      R"({"seq":)" + std::to_string(i) + "}"});
    }
    for (const auto& r : rows) {
      db.insert("INSERT INTO analytics_logs VALUES (?,?,?,?,?,?)",
                {r.id, static_cast<std::int64_t>(r.ms), r.log_type, r.name, r.module, r.extra});
      facebook::FbAnalyticsEvent e;
      e.row_id = r.id;
      e.when = millis(r.ms);
      e.log_type = r.log_type;
      e.name_text = r.name;
      e.name = facebook::classify_analytics_name(r.name);
      e.module = r.module;
      e.extra = r.extra;
      e.provenance = db_prov(rel, "facebook.analytics");
      ds.analytics.records.push_back(std::move(e));
    }
  }

  void fb_friends(facebook::FacebookDataset& ds) {
    const auto rel = kFbDb + "/Friends.sqlite";
    SqliteWriter db(at(rel));
    db.exec("CREATE TABLE friends (uid TEXT, name TEXT, first_name TEXT, middle_name TEXT, last_name TEXT, "
            "contact_email TEXT, phones TEXT, profile_url TEXT, communication_rank REAL, birthday_date TEXT)");
    struct Row {
      std::string uid, name, first, middle, last, email, phones, url;
      double rank;
      std::string birthday;
      std::optional<Date> date;
    };
    const auto& k = known::kKelvinFriend;
    std::vector<Row> rows{
        {s(k.uid), s(k.name), s(k.first), s(k.middle), s(k.last), s(k.email), s(k.phones), s(k.profile_url), k.rank,
         s(k.birthday), Date{1990, 1, 1}},
        {s(known::kVictimFbUid), "Jack Jeffrey", "Jack", "", "Jeffrey", "", "[]", "https://www.facebook.com/jack.jeffrey.9",
         0.00125, "", std::nullopt},
    };
    const auto extra = rng_.range(0, 4);
    for (std::uint64_t i = 0; i < extra; ++i) {
      const auto first = s(rng_.pick(kFirstNames)), last = s(rng_.pick(kLastNames));
      Row r{"1000" + rng_.digits(11), first + " " + last, first, "", last, "", "[]", "", 0, "", std::nullopt};
      r.rank = static_cast<double>(rng_.range(1, 99999)) / 1048576.0;
      if (rng_.coin()) {
        const auto y = static_cast<int>(rng_.range(1970, 2000));
        const auto m = static_cast<unsigned>(rng_.range(1, 12));
        const auto d = static_cast<unsigned>(rng_.range(1, 28));
        r.date = Date{y, m, d};
        r.birthday = r.date->to_string() + " 00:00:00";
      }
      r.url = "https://www.facebook.com/profile.php?id=" + r.uid;
      rows.push_back(std::move(r));
    }
    for (const auto& r : rows) {
      db.insert("INSERT INTO friends VALUES (?,?,?,?,?,?,?,?,?,?)",
                {r.uid, r.name, r.first, r.middle, r.last, r.email, r.phones, r.url, r.rank, r.birthday});
      facebook::FbFriend f;
      f.uid = r.uid;
      f.name = r.name;
      f.first_name = r.first;
      f.middle_name = r.middle;
      f.last_name = r.last;
      f.contact_email = r.email;
      f.phones = r.phones;
      f.profile_url = r.url;
      f.communication_rank = r.rank;
      f.birthday = r.date;
      f.provenance = db_prov(rel, "facebook.friends");
      ds.friends.records.push_back(std::move(f));
    }
  }

  static std::vector<facebook::FbAttachment> case_attachments() {
    // Known values; url and preview are long, so read them
    // from the document rather than repeat them.
    const auto doc = nlohmann::json::parse(known::kAttachmentsJson);
    facebook::FbAttachment photo{"10934517_391924760981228_2133990913_n.jpg", 0, "391924760981228", "image/jpeg", 4,
                                 doc[0][0]["url"].get<std::string>(), doc[0][0]["preview"].get<std::string>(), 742,
                                 960};
    facebook::FbAttachment pdf{"VictimToSuspect.pdf", 31747, "391924720981232", "application/pdf", 7,
                               std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    return {photo, pdf};
  }

  void fb_messages(facebook::FacebookDataset& ds) {
    const auto rel = kFbDb + "/Messages.sqlite";
    SqliteWriter db(at(rel));
    db.exec("CREATE TABLE messages (id TEXT, thread_id TEXT, body TEXT, sender TEXT, tags TEXT, timestamp INTEGER, "
            "attachments TEXT)");
    db.exec("CREATE TABLE users (id TEXT, email TEXT, name TEXT, first_name TEXT, last_name TEXT, is_pushable INTEGER, "
            "last_active_timestamp INTEGER)");

    struct Row {
      std::int64_t rowid;
      std::string body, uid, name, tags;
      std::uint64_t ms;
      bool attach;
      std::vector<std::string> tag_list;
    };
    std::vector<Row> rows;
    for (const auto& m : known::kMessageRows) {
      std::vector<std::string> tl{"inbox", "read"};
      if (m.sender_uid == known::kSuspectFbUid) tl.push_back("sent");
      tl.push_back("source:chat");
      rows.push_back({m.rowid, s(m.body), s(m.sender_uid), s(m.sender_name), s(m.tags), m.timestamp_ms,
                      m.has_attachments, tl});
    }
    // The case data lists rows newest first; the table holds them by rowid.
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rowid < b.rowid; });
    std::uint64_t t = known::kMessageRows[0].timestamp_ms;
    const auto extra = rng_.range(2, 8);
    for (std::uint64_t i = 0; i < extra; ++i) {
      t += rng_.range(2000, 900000);
      const bool mine = rng_.coin();
      std::vector<std::string> tl{"inbox", "read"};
      if (mine) tl.push_back("sent");
      tl.push_back("source:chat");
      rows.push_back({static_cast<std::int64_t>(20 + i), sentence(rng_), s(mine ? known::kSuspectFbUid : known::kVictimFbUid),
                      mine ? "Kelvin Sky" : "Jack Jeffrey", nlohmann::json(tl).dump(), t, false, tl});
    }
    for (const auto& r : rows) {
      const auto mid = "mid." + std::to_string(r.ms) + ":" + rng_.hex(18);
      const std::string email = r.uid + "@facebook.com";
      const nlohmann::json sender = {{"user_id", r.uid}, {"name", r.name}, {"email", email}};
      db.insert("INSERT INTO messages (rowid, id, thread_id, body, sender, tags, timestamp, attachments) "
                "VALUES (?,?,?,?,?,?,?,?)",
                {r.rowid, mid, s(known::kThreadId), r.body, sender.dump(), r.tags, static_cast<std::int64_t>(r.ms),
                 r.attach ? SqlValue(s(known::kAttachmentsJson)) : SqlValue(std::monostate{})});
      facebook::FbMessage m;
      m.row_id = r.rowid;
      m.mid = mid;
      m.thread_id = s(known::kThreadId);
      m.body = r.body;
      m.sender_uid = r.uid;
      m.sender_name = r.name;
      m.sender_email = email;
      m.sender_raw = sender.dump();
      m.tags = r.tag_list;
      m.when = millis(r.ms);
      if (r.attach) {
        m.attachments = case_attachments();
        m.attachments_raw = s(known::kAttachmentsJson);
      }
      m.provenance = db_prov(rel, "facebook.messages");
      ds.messages.records.push_back(std::move(m));
    }

    for (const auto& u : known::kUserRows) {
      db.insert("INSERT INTO users VALUES (?,?,?,?,?,?,?)",
                {s(u.id), s(u.email), s(u.name), s(u.first), s(u.last), std::int64_t{u.pushable},
                 static_cast<std::int64_t>(u.last_active_s)});
      ds.users.records.push_back({s(u.id), s(u.email), s(u.name), secs(u.last_active_s), db_prov(rel, "facebook.users")});
    }
  }

  void fb_notifications(facebook::FacebookDataset& ds) {
    const auto rel = kFbDb + "/Notifications.sqlite";
    SqliteWriter db(at(rel));
    db.exec("CREATE TABLE notifications (notification_id TEXT, object_id TEXT, object_type TEXT, sender_id TEXT, "
            "title_text TEXT, href TEXT, unread INTEGER, updated_time, created_time)");
    for (const auto& n : known::kNotificationRows) {
      db.insert("INSERT INTO notifications VALUES (?,?,?,?,?,?,?,?,?)",
                {s(n.notification_id), s(n.object_id), s(n.object_type), s(n.sender_id), s(n.title_text), s(n.href),
                 std::int64_t{n.unread}, s(n.updated), s(n.created)});
      facebook::FbNotification x;
      x.notification_id = s(n.notification_id);
      x.sender_id = s(n.sender_id);
      x.title_text = s(n.title_text);
      x.href = s(n.href);
      x.unread_flag = n.unread;
      x.updated = Timestamp::from_iso_text(n.updated);
      x.created = Timestamp::from_iso_text(n.created);
      x.provenance = db_prov(rel, "facebook.notifications");
      ds.notifications.records.push_back(std::move(x));
    }
    // Later notifications carry integer epoch seconds, as newer app builds write.
    std::uint64_t t = 1423766100;
    const auto extra = rng_.range(0, 3);
    for (std::uint64_t i = 0; i < extra; ++i) {
      t += rng_.range(60, 7200);
      const auto id = std::to_string(19230000 + rng_.below(9999));
      const auto title = "Jack Jeffrey commented: " + sentence(rng_);
      const auto unread = static_cast<int>(rng_.below(2));
      const auto created = t - rng_.range(1, 300);
      db.insert("INSERT INTO notifications VALUES (?,?,?,?,?,?,?,?,?)",
                {id, s(known::kSuspectFbUid), std::string("stream"), s(known::kVictimFbUid), title, std::string(""),
                 std::int64_t{unread}, static_cast<std::int64_t>(t), static_cast<std::int64_t>(created)});
      facebook::FbNotification x;
      x.notification_id = id;
      x.sender_id = s(known::kVictimFbUid);
      x.title_text = title;
      x.unread_flag = unread;
      x.updated = secs(t);
      x.created = secs(created);
      x.provenance = db_prov(rel, "facebook.notifications");
      ds.notifications.records.push_back(std::move(x));
    }
  }

  // ---- Skype ----

  void skype() {
    using locator::Role;
    dir(kSkAccount);
    artifact(Role::LocalStateDir, kSkLocal, "local-state", known::kSkypeFamily);
    artifact(Role::MainDb, kSkAccount + "/main.db", "skype-main-db", known::kSkypeFamily, known::kSuspectSkype);
    artifact(Role::ConfigXml, kSkAccount + "/config.xml", "skype-config-xml", known::kSkypeFamily, known::kSuspectSkype);
    artifact(Role::SharedXml, kSkLocal + "/shared.xml", "skype-shared-xml", known::kSkypeFamily);
    for (auto [name, role, rule] : {std::tuple{"Chatsync", Role::ChatsyncDir, "skype-chatsync"},
                                    std::tuple{"ReceiveStorage", Role::ReceiveStorage, "skype-receive-storage"},
                                    std::tuple{"SendingStorage", Role::SendingStorage, "skype-sending-storage"},
                                    std::tuple{"media", Role::MediaDir, "skype-media"},
                                    std::tuple{"thumbnails", Role::ThumbnailsDir, "skype-thumbnails"}}) {
      dir(kSkAccount + "/" + name);
      artifact(role, kSkAccount + "/" + name, rule, known::kSkypeFamily, known::kSuspectSkype);
    }
    dir(kSkLocal + "/avatars");
    artifact(Role::AvatarsDir, kSkLocal + "/avatars", "skype-avatars", known::kSkypeFamily);

    main_db();
    shared_xml();
    config_xml();
  }

  void main_db() {
    const auto rel = kSkAccount + "/main.db";
    SqliteWriter db(at(rel));
    db.exec("CREATE TABLE Accounts (id INTEGER PRIMARY KEY, skypename TEXT, liveid_membername TEXT, fullname TEXT, "
            "birthday INTEGER, gender INTEGER, country TEXT, province TEXT, city TEXT, emails TEXT, mood_text TEXT, "
            "registration_timestamp INTEGER)");
    db.exec("CREATE TABLE Contacts (id INTEGER PRIMARY KEY, skypename TEXT, fullname TEXT, displayname TEXT, "
            "birthday INTEGER, gender INTEGER, languages TEXT, country TEXT, city TEXT, phone_mobile TEXT, emails TEXT, "
            "lastonline_timestamp INTEGER, lastused_timestamp INTEGER)");
    db.exec("CREATE TABLE Messages (id INTEGER PRIMARY KEY, convo_id INTEGER, chatname TEXT, author TEXT, "
            "from_dispname TEXT, dialog_partner TEXT, timestamp INTEGER, type INTEGER, chatmsg_type INTEGER, "
            "chatmsg_status INTEGER, participant_count INTEGER, body_xml TEXT, identities TEXT, reason TEXT)");
    db.exec("CREATE TABLE Transfers (id INTEGER PRIMARY KEY, partner_handle TEXT, partner_dispname TEXT, type INTEGER, "
            "status INTEGER, failurereason INTEGER, starttime INTEGER, finishtime INTEGER, filepath TEXT, "
            "filename TEXT, filesize TEXT, bytestransferred TEXT)");
    db.exec("CREATE TABLE Calls (id INTEGER PRIMARY KEY, begin_timestamp INTEGER, host_identity TEXT, duration INTEGER, "
            "is_incoming INTEGER, name TEXT, is_unseen_missed INTEGER)");
    db.exec("CREATE TABLE CallMembers (id INTEGER PRIMARY KEY, call_name TEXT, identity TEXT, dispname TEXT, guid TEXT, "
            "ip_address TEXT, start_timestamp INTEGER, call_duration INTEGER)");
    db.exec("CREATE TABLE VideoMessages (id INTEGER PRIMARY KEY, sharing_id TEXT, local_path TEXT, vod_path TEXT, "
            "public_link TEXT, author TEXT, progress INTEGER, reaction_timestamp INTEGER)");

    skype::SkypeDataset ds;
    ds.owner = s(known::kSuspectSkype);

    {
      skype::SkypeAccount a;
      a.skypename = s(known::kSuspectSkype);
      a.liveid = "adam.thomson11@outlook.com";
      a.fullname = "Adam Thomson";
      a.birthday = Date{1985, 3, 12};
      a.gender = 1;
      a.country = "au";
      a.city = "Melbourne";
      a.emails = a.liveid;
      const auto reg = 1421670000 + rng_.below(3600);
      a.registration_time = secs(reg);
      a.provenance = db_prov(rel, "skype.accounts");
      db.insert("INSERT INTO Accounts VALUES (1,?,?,?,?,?,?,?,?,?,?,?)",
                {a.skypename, *a.liveid, a.fullname, std::int64_t{19850312}, std::int64_t{1}, *a.country,
                 std::monostate{}, *a.city, *a.emails, std::monostate{}, static_cast<std::int64_t>(reg)});
      ds.accounts.push_back(std::move(a));
    }

    auto add_contact = [&](std::string name, std::string full, std::optional<std::int64_t> gender,
                           std::optional<std::string> country, std::uint64_t online) {
      skype::SkypeContact c;
      c.skypename = std::move(name);
      c.fullname = full;
      c.displayname = full;
      c.gender = gender;
      c.languages = "en";
      c.country = country;
      if (online) c.last_online = secs(online);
      c.provenance = db_prov(rel, "skype.contacts");
      db.insert("INSERT INTO Contacts (skypename, fullname, displayname, birthday, gender, languages, country, city, "
                "phone_mobile, emails, lastonline_timestamp, lastused_timestamp) VALUES (?,?,?,?,?,?,?,?,?,?,?,?)",
                {c.skypename, c.fullname, c.displayname, std::monostate{}, opt_value(c.gender), std::string("en"),
                 opt_value(c.country), std::monostate{}, std::monostate{}, std::monostate{},
                 static_cast<std::int64_t>(online), std::int64_t{0}});
      ds.contacts.push_back(std::move(c));
    };
    add_contact("echo123", "Echo / Sound Test Service", std::nullopt, std::nullopt, 0);
    add_contact(s(known::kVictimSkype), "Harold Cornwall", 1, "gb", 1421686100 + rng_.below(5000));
    const auto extra_contacts = rng_.range(0, 3);
    std::vector<std::string> contact_names{"echo123", s(known::kVictimSkype)};
    for (std::uint64_t i = 0; i < extra_contacts; ++i) {
      const auto first = s(rng_.pick(kFirstNames)), last = s(rng_.pick(kLastNames));
      auto name = locator::detail::lower(first) + "." + locator::detail::lower(last) + rng_.digits(2);
      contact_names.push_back(name);
      add_contact(name, first + " " + last, std::nullopt, std::nullopt, 1421600000 + rng_.below(90000));
    }
    contact_names_ = contact_names;

    // Messages: the case rows, then seeded chat after the last call.
    auto add_message = [&](std::int64_t id, const std::string& chatname, const std::string& author,
                           const std::string& disp, const std::string& partner, std::uint64_t ts, std::int64_t type,
                           std::optional<std::int64_t> status, const std::string& body, const std::string& identities,
                           const std::string& reason) {
      skype::SkypeMessage m;
      m.id = id;
      m.convo_id = chatname.starts_with('#') ? 2 : 1;
      m.chatname = chatname;
      m.author = author;
      m.from_dispname = disp;
      if (!partner.empty()) m.dialog_partner = partner;
      m.when = secs(ts);
      m.type_code = type;
      m.chatmsg_status = status;
      m.body_xml = body;
      if (!identities.empty()) m.identities = identities;
      if (!reason.empty()) m.reason = reason;
      m.kind = skype::Classification{kind_of(type), type, false};
      m.provenance = db_prov(rel, "skype.messages");
      db.insert("INSERT INTO Messages VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?)",
                {id, m.convo_id, chatname, author, disp, partner.empty() ? SqlValue() : SqlValue(partner),
                 static_cast<std::int64_t>(ts), type, std::monostate{}, opt_value(status), std::monostate{}, body,
                 identities.empty() ? SqlValue() : SqlValue(identities),
                 reason.empty() ? SqlValue() : SqlValue(reason)});
      ds.messages.push_back(std::move(m));
    };
    for (const auto& r : known::kSkypeMessages) {
      const auto body = r.id == 59 ? s(known::kFilesBodyXml) : s(r.body_xml);
      add_message(r.id, s(r.chatname), s(r.author), s(r.from_dispname), s(r.dialog_partner), r.timestamp, r.type,
                  r.chatmsg_status ? std::optional<std::int64_t>(r.chatmsg_status) : std::nullopt, body,
                  s(r.identities), s(r.reason));
    }
    constexpr std::int64_t kTypes[] = {61, 61, 61, 60, 64, 67, 63, 110, 53, 4, 201};
    const std::string group = "#harold.cornwall1/$adam.thomson11;2fd5ca8c5a2b8a4a";
    std::uint64_t t = known::kCalls.back().begin + 120;
    const auto extra_messages = rng_.range(2, 9);
    for (std::uint64_t i = 0; i < extra_messages; ++i) {
      t += rng_.range(5, 900);
      const bool mine = rng_.coin();
      const auto type = rng_.pick(kTypes);
      add_message(static_cast<std::int64_t>(200 + i), group, s(mine ? known::kSuspectSkype : known::kVictimSkype),
                  mine ? "Adam Thomson" : "Harold Cornwall", s(known::kVictimSkype), t, type,
                  mine ? std::optional<std::int64_t>(2) : std::nullopt, sentence(rng_), "", "");
    }

    // Transfers
    auto add_transfer = [&](std::int64_t id, std::int64_t type, std::uint64_t start, std::uint64_t finish,
                            const std::string& path, const std::string& name, std::uint64_t size) {
      skype::SkypeTransfer x;
      x.id = id;
      x.partner_handle = s(known::kVictimSkype);
      x.partner_dispname = "Harold Cornwall";
      x.type_code = type;
      x.direction = type == 1 ? skype::TransferDirection::receiving : skype::TransferDirection::transferring;
      x.status_code = 8;
      x.start = secs(start);
      x.finish = secs(finish);
      x.filepath = path;
      x.filename = name;
      x.filesize = x.bytes_transferred = size;
      x.provenance = db_prov(rel, "skype.transfers");
      db.insert("INSERT INTO Transfers VALUES (?,?,?,?,?,?,?,?,?,?,?,?)",
                {id, x.partner_handle, x.partner_dispname, type, std::int64_t{8}, std::monostate{},
                 static_cast<std::int64_t>(start), static_cast<std::int64_t>(finish), path, name,
                 std::to_string(size), std::to_string(size)});
      ds.transfers.push_back(std::move(x));
    };
    for (std::size_t i = 0; i < known::kTransfers.size(); ++i) {
      const auto& x = known::kTransfers[i];
      add_transfer(x.id, 2, known::kTransferStart, known::kTransferStart + 3 + i,
                   "C:\\Users\\anonymous\\Documents\\" + s(x.filename), s(x.filename), x.filesize);
    }
    add_transfer(60, 1, 1421685875, 1421685877, kWinDownloads + "VictimToSuspect.txt", "VictimToSuspect.txt", 2734);
    const auto extra_transfers = rng_.range(0, 2);
    std::uint64_t tt = known::kCalls.back().begin + 60;
    for (std::uint64_t i = 0; i < extra_transfers; ++i) {
      tt += rng_.range(10, 600);
      const auto name = "scan_" + rng_.digits(4) + ".jpg";
      const auto type = static_cast<std::int64_t>(rng_.range(1, 2));
      add_transfer(static_cast<std::int64_t>(300 + i), type, tt, tt + rng_.range(1, 30),
                   (type == 1 ? kWinDownloads : std::string("C:\\Users\\anonymous\\Pictures\\")) + name, name,
                   rng_.range(1000, 900000));
    }

    // Calls and their members
    for (const auto& c : known::kCalls) {
      skype::SkypeCall call;
      call.id = c.id;
      call.begin = secs(c.begin);
      call.host_identity = s(c.host_identity);
      if (c.duration >= 0) call.duration_s = c.duration;
      call.is_incoming = c.is_incoming != 0;
      call.name = s(c.name);
      call.provenance = db_prov(rel, "skype.calls");
      db.insert("INSERT INTO Calls VALUES (?,?,?,?,?,?,?)",
                {c.id, static_cast<std::int64_t>(c.begin), call.host_identity, opt_value(call.duration_s),
                 std::int64_t{c.is_incoming}, call.name, std::monostate{}});
      ds.calls.push_back(std::move(call));

      skype::SkypeCallMember m;
      m.call_name = s(c.name);
      m.identity = s(known::kVictimSkype);
      m.dispname = "Harold Cornwall";
      const auto tag = rng_.hex(8);
      m.guid_raw = s(known::kSuspectSkype) + "-" + s(known::kVictimSkype) + "-" + tag;
      m.guid_user = s(known::kSuspectSkype);
      m.guid_correspondent = s(known::kVictimSkype);
      m.guid_call = tag;
      m.ip_address = dotted(static_cast<std::uint32_t>(rng_.range(0x01000001, 0xDFFFFFFE)));
      if (c.duration >= 0) {
        m.start = secs(c.begin + 2);
        m.duration_s = c.duration;
      }
      m.provenance = db_prov(rel, "skype.call_members");
      db.insert("INSERT INTO CallMembers (call_name, identity, dispname, guid, ip_address, start_timestamp, "
                "call_duration) VALUES (?,?,?,?,?,?,?)",
                {m.call_name, m.identity, m.dispname, m.guid_raw, *m.ip_address,
                 c.duration >= 0 ? SqlValue(static_cast<std::int64_t>(c.begin + 2)) : SqlValue(),
                 opt_value(m.duration_s)});
      ds.call_members.push_back(std::move(m));
    }

    {
      skype::SkypeVideoMessage v;
      v.sid = s(known::kVideoSid);
      v.vod_path = "https://vm.skype.com/vod/" + v.sid + ".mp4";
      v.public_link = s(known::kVideoPublicLink);
      v.author = s(known::kSuspectSkype);
      v.progress = 100;
      v.reaction_time = secs(known::kVideoReactionTime);
      v.provenance = db_prov(rel, "skype.video_messages");
      db.insert("INSERT INTO VideoMessages VALUES (1,?,?,?,?,?,?,?)",
                {v.sid, std::monostate{}, *v.vod_path, v.public_link, v.author, std::int64_t{100},
                 static_cast<std::int64_t>(known::kVideoReactionTime)});
      ds.video_messages.push_back(std::move(v));
    }
    exp_.skype.push_back(std::move(ds));
  }

  static skype::MessageKind kind_of(std::int64_t type) {
    using K = skype::MessageKind;
    switch (type) {
      case 4: return K::Conference;
      case 30: return K::VideoSessionStarted;
      case 39: return K::VideoSessionEnded;
      case 50:
      case 51: return K::ContactAsk;
      case 53: return K::Blocked;
      case 60: return K::EmoticonSent;
      case 61: return K::TextSent;
      case 63: return K::ContactDetailsSent;
      case 64: return K::SmsSent;
      case 67: return K::VoiceMessageSent;
      case 68: return K::FileSent;
      case 110: return K::BirthdayNote;
      default: return K::Unknown;
    }
  }

  struct SharedDoc {
    std::string text;
    skype::SkypeNetworkState state;
  };

  SharedDoc make_shared_xml(bool case_values) {
    SharedDoc d;
    std::vector<skype::SupernodeEntry> cache{{"111.221.77.158", 40001}, {"65.55.223.24", 33033}};
    const auto extra = rng_.range(0, 4);
    for (std::uint64_t i = 0; i < extra; ++i)
      cache.push_back({dotted(static_cast<std::uint32_t>(rng_.range(0x01000001, 0xDFFFFFFE))),
                       static_cast<std::uint16_t>(rng_.range(1024, 65535))});
    std::string hc = "41C80105";
    for (const auto& e : cache) hc += skype::encode_hostcache_entry(e) + "D001040002B188F4A505";
    const std::uint32_t last_ip = case_values ? known::kLastIpDecimal : static_cast<std::uint32_t>(rng_.range(0x01000001, 0xDFFFFFFE));
    const std::uint16_t port = case_values ? known::kListeningPort : static_cast<std::uint16_t>(rng_.range(1024, 65535));
    const skype::SupernodeEntry super{"111.221.77.148", 40028};
    const auto node = rng_.hex(16, true);

    d.text = "<?xml version=\"1.0\"?>\r\n<config version=\"1.0\" serial=\"" + std::to_string(rng_.range(10, 999)) +
             "\" timestamp=\"1421686251.6\">\r\n<Lib>\r\n<Account>\r\n<Default>" + s(known::kSuspectSkype) +
             "</Default>\r\n</Account>\r\n<Connection>\r\n<HostCache>" + hc + "</HostCache>\r\n<LastIP>" +
             std::to_string(last_ip) + "</LastIP>\r\n<ListeningPort>" + std::to_string(port) +
             "</ListeningPort>\r\n<NodeID>" + node + "</NodeID>\r\n<Supernode>" + super.ip + ":" +
             std::to_string(super.port) + "</Supernode>\r\n</Connection>\r\n</Lib>\r\n</config>\r\n";
    // LastIP is the address as a big-endian 32-bit integer.
    d.state.last_ip = dotted(last_ip);
    d.state.listening_port = port;
    d.state.supernode = super;
    d.state.hostcache = cache;
    d.state.default_skypename = s(known::kSuspectSkype);
    d.state.node_id = node;
    return d;
  }

  struct ConfigDoc {
    std::string text;
    skype::SkypeConfig config;
  };

  ConfigDoc make_config_xml() {
    ConfigDoc d;
    const auto serial = static_cast<std::int64_t>(rng_.range(10, 500));
    const auto last_used = known::kConfigLastUsed + rng_.below(86400);
    d.text = "<?xml version=\"1.0\" ?>\r\n<config version=\"1.0\" serial=\"" + std::to_string(serial) +
             "\" timestamp=\"1421686251.63\">\r\n<Account>\r\n  <LastPartnerId>830</LastPartnerId>\r\n  <LastUsed>" +
             std::to_string(last_used) + "</LastUsed>\r\n  <LocalData>4215</LocalData>\r\n</Account>\r\n<u>\r\n";
    for (const auto& name : contact_names_) {
      std::string tag;
      for (char c : name) tag += c == '.' ? std::string(".2E") : std::string(1, c);
      const auto value = rng_.hex(8) + ":2";
      d.text += "  <" + tag + ">" + value + "</" + tag + ">\r\n";
      d.config.contacts.push_back({name, value});
    }
    d.text += "</u>\r\n<UI>\r\n</UI>\r\n</config>\r\n";
    d.config.serial = serial;
    d.config.last_used = secs(last_used);
    return d;
  }

  void shared_xml() {
    const auto rel = kSkLocal + "/shared.xml";
    auto d = make_shared_xml(true);
    write_file(at(rel), d.text);
    exp_.shared.push_back({rel, std::move(d.state)});
  }

  void config_xml() {
    const auto rel = kSkAccount + "/config.xml";
    auto d = make_config_xml();
    write_file(at(rel), d.text);
    exp_.configs.push_back({rel, std::move(d.config)});
  }

  // ---- install dirs, downloads, registry ----

  void installs() {
    using locator::Role;
    for (auto pkg : {known::kFacebookPackage, known::kSkypePackage}) {
      const auto rel = "Program Files/WindowsApps/" + s(pkg);
      write_file(at(rel + "/AppxManifest.xml"), "<?xml version=\"1.0\" encoding=\"utf-8\"?>\r\n<Package/>\r\n");
      artifact(Role::AppInstallDir, rel, "install-dir", pkg);
    }
    const std::string old = "Microsoft.SkypeApp_2.0.0.4000_x86__kzf8qxf38zg5c";
    dir("Program Files/WindowsApps/Deleted/" + old);
    artifact(Role::DeletedInstallDir, "Program Files/WindowsApps/Deleted/" + old, "deleted-install-dir", old);

    const auto cache = kPackages + "/" + s(known::kFacebookFamily) + "/AC/INetCache/" + rng_.hex(8, true);
    write_file(at(cache + "/VictimToSuspect[1].txt"), "victim to suspect\r\n");
    artifact(Role::NetCacheDir, cache, "net-cache", known::kFacebookFamily);

    const auto dl = kDownloads + "/" + s(known::kSkypeFamily) + "/App";
    dir(dl);
    artifact(Role::DownloadsDir, dl, "skype-downloads", known::kSkypeFamily);
  }

  void downloads() {
    std::vector<std::string> names{"VictimToSuspect.txt", "VictimToSuspect.zip", "VictimToSuspect.pdf",
                                   "VictimToSuspect.rtf"};
    const auto extra = rng_.range(0, 3);
    for (std::uint64_t i = 0; i < extra; ++i) names.push_back("photo_" + rng_.digits(6) + ".jpg");
    for (const auto& n : names) {
      const auto rel = kDownloads + "/" + n;
      write_file(at(rel), "content of " + n + "\r\n");
      const std::string body = "[ZoneTransfer]\r\nZoneId=3\r\n";
      std::string bytes;
      if (rng_.coin()) {
        bytes = "\xFF\xFE";
        for (char c : body) bytes += c, bytes += '\0';
      } else {
        bytes = body;
      }
      write_file(at(rel + ":Zone.Identifier"), bytes);
      artifact(locator::Role::ZoneIdentifierSidecar, rel + ":Zone.Identifier", "zone-identifier-sidecar", std::nullopt);
      exp_.zones.push_back({3, rel});
    }
    downloaded_ = names;
  }

  static std::vector<std::uint8_t> le_bytes(std::uint64_t v) {
    std::vector<std::uint8_t> b(8);
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
    return b;
  }

  static std::uint64_t ticks(std::uint64_t unix_s) { return (unix_s + 11644473600ULL) * 10000000ULL; }

  void registry() {
    const std::string rel = "evidence/appmodel.reg";
    registry::RegExport exp;
    exp.header = s(registry::kHeader5);
    RegistryFile expected{rel, {}, {}, {}};

    const auto base = s(known::kRegistryRepositoryBase);
    // Facebook: REG_QWORD, stored little-endian.
    const auto fb_install = 1421539200 + rng_.below(3 * 86400);
    {
      exp.keys.push_back({base + "\\" + s(known::kFacebookFamily), {}});
      registry::RegKey k{base + "\\" + s(known::kFacebookFamily) + "\\" + s(known::kFacebookPackage), {}};
      registry::RegValue v;
      v.name = "InstallTime";
      v.kind = registry::ValueKind::qword;
      v.bytes = le_bytes(ticks(fb_install));
      v.hex_type = 0xb;
      k.values.push_back(v);
      registry::RegValue root;
      root.name = "PackageRootFolder";
      root.text = "C:\\Program Files\\WindowsApps\\" + s(known::kFacebookPackage);
      k.values.push_back(root);
      exp.keys.push_back(k);
      registry::InstallRecord r;
      r.package = locator::parse_package_id(known::kFacebookPackage);
      r.install_time = Timestamp::from_filetime(ticks(fb_install));
      r.key_path = k.path;
      r.interpretation = registry::Interpretation::little_endian_binary;
      expected.installs.records.push_back(r);
    }
    // Skype: the same FILETIME written as displayed hex text, big-endian.
    const auto sk_install = 1421539200 + rng_.below(3 * 86400);
    {
      exp.keys.push_back({base + "\\" + s(known::kSkypeFamily), {}});
      registry::RegKey k{base + "\\" + s(known::kSkypeFamily) + "\\" + s(known::kSkypePackage), {}};
      registry::RegValue v;
      v.name = "InstallTime";
      v.kind = registry::ValueKind::string;
      static constexpr char kHex[] = "0123456789ABCDEF";
      const auto t = ticks(sk_install);
      for (int sh = 60; sh >= 0; sh -= 4) v.text += kHex[(t >> sh) & 0xF];
      k.values.push_back(v);
      exp.keys.push_back(k);
      registry::InstallRecord r;
      r.package = locator::parse_package_id(known::kSkypePackage);
      r.install_time = Timestamp::from_filetime(t);
      r.key_path = k.path;
      r.interpretation = registry::Interpretation::big_endian_hex;
      expected.installs.records.push_back(r);
    }
    {
      registry::RegKey k{"HKEY_USERS\\S-1-5-21-3623811015-3361044348-30300820-1013\\Software\\Classes\\Local "
                         "Settings\\Software\\Microsoft\\Windows\\CurrentVersion\\AppModel\\PolicyCache",
                         {}};
      registry::RegValue v;
      v.name = "Version";
      v.kind = registry::ValueKind::dword;
      v.bytes = {static_cast<std::uint8_t>(rng_.range(1, 9)), 0, 0, 0};
      k.values.push_back(v);
      exp.keys.push_back(k);
    }
    // Files the Skype app handed to the file picker.
    const auto items = rng_.range(1, 4);
    std::uint64_t t = 1421685877;
    for (std::uint64_t i = 0; i < items; ++i) {
      t += rng_.range(5, 600);
      const auto guid = "{" + rng_.hex(8, true) + "-" + rng_.hex(4, true) + "-" + rng_.hex(4, true) + "-" +
                        rng_.hex(4, true) + "-" + rng_.hex(12, true) + "}";
      const auto path = kWinDownloads + downloaded_[static_cast<std::size_t>(rng_.below(downloaded_.size()))];
      registry::RegKey k{s(known::kRegistryPersistedBase) + "\\" + guid, {}};
      registry::RegValue p;
      p.name = "FilePath";
      p.text = path;
      registry::RegValue u;
      u.name = "LastUpdatedTime";
      u.kind = registry::ValueKind::qword;
      u.bytes = le_bytes(ticks(t));
      u.hex_type = 0xb;
      k.values = {p, u};
      exp.keys.push_back(k);
      expected.persisted.records.push_back(
          {guid, path, Timestamp::from_filetime(ticks(t)), k.path, s(known::kSkypeFamily)});
    }
    write_file(at(rel), registry::to_reg_text(exp));
    exp_.registries.push_back(std::move(expected));
  }

  using RegistryFile = pipeline::RegistryFile;

  // ---- memory image ----

  void memory() {
    const std::string rel = "evidence/memory.raw";
    struct Plant {
      std::string bytes;
      int kind;  // 0 config, 1 shared, 2 chat, 3 payload header
      carver::ChatFragment chat;
    };
    std::vector<Plant> plants;
    plants.push_back({s(known::kOrcaFragment), 2,
                      case_chat()});
    const auto n_config = rng_.range(1, 3), n_shared = rng_.range(1, 2), n_chat = rng_.range(0, 3),
               n_header = rng_.range(1, 3);
    for (std::uint64_t i = 0; i < n_config; ++i) plants.push_back({make_config_xml().text, 0, {}});
    for (std::uint64_t i = 0; i < n_shared; ++i) plants.push_back({make_shared_xml(false).text, 1, {}});
    for (std::uint64_t i = 0; i < n_chat; ++i) {
      auto [text, frag] = make_chat();
      plants.push_back({std::move(text), 2, std::move(frag)});
    }
    constexpr std::string_view kTypes[] = {"Control/ClearTyping", "Control/Typing", "Text"};
    for (std::uint64_t i = 0; i < n_header; ++i) {
      const bool is_case = i == 0;
      const auto name = is_case ? std::string("Harold Cornwall") : s(rng_.pick(kFirstNames)) + " " + s(rng_.pick(kLastNames));
      std::string h = is_case ? s(known::kPayloadHeader)
                             : "Messaging: 2.0\r\nMessage-Type: " + s(rng_.pick(kTypes)) + "\r\nIM-Display-Name: " + name +
                                   "\r\nContent-Type: Application/Message\r\nContent-Length: 0\r\n\r\n";
      plants.push_back({std::move(h), 3, {}});
    }
    for (std::size_t i = plants.size(); i > 1; --i) std::swap(plants[i - 1], plants[rng_.below(i)]);

    std::size_t planted = 0;
    for (const auto& p : plants) planted += p.bytes.size();
    const std::size_t size = (192u << 10) + static_cast<std::size_t>(rng_.below(128u << 10)) + planted;
    std::vector<std::size_t> cuts;
    for (std::size_t i = 0; i < plants.size(); ++i) cuts.push_back(static_cast<std::size_t>(rng_.below(size - planted + 1)));
    std::sort(cuts.begin(), cuts.end());

    // Filler never holds ASCII, so nothing in it can complete a pattern.
    std::string img(size, '\0');
    for (auto& c : img) {
      const auto r = rng_.below(8);
      c = r == 0 ? '\0' : static_cast<char>(0x80 | rng_.below(0x80));
    }

    pipeline::MemoryImage mem{rel, {}, {}, {}};
    std::size_t before = 0;
    const auto terms = carver::default_terms();
    for (std::size_t i = 0; i < plants.size(); ++i) {
      const auto off = cuts[i] + before;
      auto& p = plants[i];
      img.replace(off, p.bytes.size(), p.bytes);
      before += p.bytes.size();
      if (p.kind == 0 || p.kind == 1)
        mem.carved.objects.push_back({p.kind == 0 ? "config-xml" : "shared-xml", off, p.bytes.size(), p.bytes});
      if (p.kind == 2) {
        p.chat.offset = off;
        mem.chats.push_back(p.chat);
      }
      for (const auto& term : terms)
        for (auto pos = p.bytes.find(term); pos != std::string::npos; pos = p.bytes.find(term, pos + 1))
          mem.keywords.hits.push_back({term, off + pos, {}, 0});
    }
    std::sort(mem.keywords.hits.begin(), mem.keywords.hits.end(),
              [](const auto& a, const auto& b) { return a.offset < b.offset; });
    write_file(at(rel), img);
    exp_.memory.push_back(std::move(mem));
  }

  static carver::ChatFragment case_chat() {
    carver::ChatFragment f;
    f.parsed = true;
    f.message = "Kelvin Sky: Here are some files for you SUSPECT";
    f.time = 1421685383;
    f.target_uid = s(known::kVictimFbUid);
    f.sender_uid = s(known::kSuspectFbUid);
    f.recipient_uid = s(known::kVictimFbUid);
    f.thread_id = "439758492746659";
    return f;
  }

  std::pair<std::string, carver::ChatFragment> make_chat() {
    const bool from_kelvin = rng_.coin();
    const auto sender = s(from_kelvin ? known::kSuspectFbUid : known::kVictimFbUid);
    const auto target = s(from_kelvin ? known::kVictimFbUid : known::kSuspectFbUid);
    const auto message = std::string(from_kelvin ? "Kelvin Sky: " : "Jack Jeffrey: ") + sentence(rng_);
    const auto time = static_cast<std::int64_t>(1421685383 + rng_.range(10, 86400));
    const auto tid = rng_.digits(15);
    const auto text = "{\n  \"message\": \"" + message + "\",\n  \"time\": " + std::to_string(time) +
                      ",\n  \"is_logged_out_push\": false,\n  \"target_uid\": " + target +
                      ",\n  \"params\": {\n    \"uid\": \"" + sender + "\",\n    \"tid\": \"" + tid +
                      "\",\n    \"a\": \"" + sender + "\",\n    \"u\": \"" + target + "\",\n    \"s\": \"" +
                      std::to_string(time) + "437\"\n  },\n  \"type\": \"orca_message\",\n  \"unread_count\": 1\n}";
    carver::ChatFragment f;
    f.parsed = true;
    f.message = message;
    f.time = time;
    f.target_uid = target;
    f.sender_uid = sender;
    f.recipient_uid = target;
    f.thread_id = tid;
    return {text, f};
  }

  // ---- capture ----

  void capture() {
    const std::string rel = "evidence/traffic.pcap";
    const auto total = static_cast<std::size_t>(rng_.range(20, 40));
    const auto matching = total / 2;
    const bool big = rng_.coin(), nano = rng_.coin();
    auto spec = build_capture(rng_, total, matching, 1421685000LL * 1000000, big, nano);
    write_file(at(rel), spec.bytes);
    exp_.captures.push_back({rel, {}, std::move(spec.flows), std::move(spec.labels)});
  }

  // ---- NTFS journal export ----

  void journal() {
    const std::string rel = "evidence/ntfs_journal.csv";
    const std::string win_dl = "Users\\anonymous\\Downloads\\";
    const std::string win_cache =
        "Users\\anonymous\\AppData\\Local\\Packages\\" + s(known::kFacebookFamily) + "\\AC\\NetCache\\";
    std::string csv = "LSN,Event Time,Event,Detail,File Name,Full Path(from $MFT),Create Time,Modified Time\r\n";
    pipeline::JournalFile jf{rel, {}};
    std::uint64_t lsn = 274599978;
    std::uint64_t t = 1421927162;
    std::optional<Timestamp> last;
    auto row = [&](std::optional<std::uint64_t> when, const std::string& event, const std::string& detail,
                   const std::string& name, const std::string& path, std::optional<std::uint64_t> created,
                   std::optional<std::uint64_t> modified) {
      lsn += rng_.range(100, 20000);
      auto text = [](std::optional<std::uint64_t> v) { return v ? wall_text(*v) : std::string(); };
      csv += std::to_string(lsn) + "," + text(when) + "," + event + "," + detail + "," + name + "," + path + "," +
             text(created) + "," + text(modified) + "\r\n";
      timeline::NtfsJournalRow r;
      r.lsn = lsn;
      if (when) r.event_time = secs(*when);
      r.event = event;
      r.detail = detail;
      r.file_name = name;
      r.full_path = path;
      if (created) r.create_time = secs(*created);
      if (modified) r.modified_time = secs(*modified);
      // Journal text is re-read as wall-clock text, which is what the
      // ingest produces.
      auto reread = [](std::optional<std::uint64_t> v) -> std::optional<Timestamp> {
        if (!v) return std::nullopt;
        return Timestamp::from_iso_text(wall_text(*v));
      };
      r.event_time = reread(when);
      r.create_time = reread(created);
      r.modified_time = reread(modified);
      if (r.event_time) last = r.event_time;
      if (last) {
        TimelineEvent ev;
        ev.when = *last;
        ev.kind = EventKind::FsJournal;
        ev.app = path.find("Facebook.Facebook") != std::string::npos ? App::facebook : App::other;
        ev.counterpart = path;
        ev.summary = event + " " + name;
        ev.provenance = Provenance(rel, s(timeline::kNtfsExtractor), Channel::ingested_csv);
        jf.ingest.events.push_back(std::move(ev));
      }
      jf.ingest.rows.push_back(std::move(r));
    };
    for (const auto& name : downloaded_) {
      t += rng_.range(20, 200);
      const auto dot = name.rfind('.');
      const auto cached = name.substr(0, dot) + "[1]" + name.substr(dot);
      row(t, "File Creation", "", name, win_dl + name, t, t);
      row(t + 2, "File Creation", "", cached, win_cache + cached, t + 2, t + 2);
      row(std::nullopt, "Writing Content of Non-Resident File",
          "Cluster Number : " + std::to_string(rng_.range(1000, 300000)) + "(8)", cached, win_cache + cached,
          std::nullopt, std::nullopt);
      row(std::nullopt, "File Deletion", "", cached, win_cache + cached, t + 2, t + 2);
      row(t + 3, "Moving After", "", name, win_dl + name, std::nullopt, std::nullopt);
    }
    write_file(at(rel), csv);
    exp_.journals.push_back(std::move(jf));
  }

  void misc() {
    const auto rel = kUser + "/AppData/Local/Temp/winstore.log";
    write_file(at(rel), "2015-01-18 09:12:44 Install " + s(known::kSkypePackage) + " state=Installed\r\n");
    artifact(locator::Role::WinstoreLog, rel, "winstore-log-temp", std::nullopt);
  }

  fs::path out_;
  std::uint64_t seed_;
  Rng rng_;
  pipeline::Collection exp_;
  std::vector<std::string> contact_names_;
  std::vector<std::string> downloaded_;
};

}  // namespace detail

/// Writes the evidence tree and manifest.json under `out`, which must be
/// absent or an empty directory.
inline Forged forge_tree(const fs::path& out, std::uint64_t seed) {
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out, ec)) throw Error(Errc::OutputNotEmpty, out.string() + " exists and is not a directory");
    if (!fs::is_empty(out, ec)) throw Error(Errc::OutputNotEmpty, out.string() + " is not empty");
  }
  fs::create_directories(out, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + out.string() + ": " + ec.message());
  return detail::TreeForge(out, seed).run();
}

}  // namespace storeim::forge
