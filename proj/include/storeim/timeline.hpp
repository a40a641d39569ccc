#pragma once

// Timeline assembly: every extractor's records become TimelineEvents, an
// external NTFS journal CSV can be folded in, and the merged list is sorted,
// de-duplicated and written as JSONL or CSV.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "storeim/carver.hpp"
#include "storeim/evidence.hpp"
#include "storeim/facebook.hpp"
#include "storeim/ipv4.hpp"
#include "storeim/pcap.hpp"
#include "storeim/registry.hpp"
#include "storeim/skype.hpp"

namespace storeim::timeline {

// ---- CSV -------------------------------------------------------------------

struct CsvField {
  std::string text;
  bool quoted{false};
};
using CsvRecord = std::vector<CsvField>;

/// RFC 4180 reader. Accepts CRLF or LF line ends; a quote inside an unquoted
/// field is kept literally. Throws NotCsv on an unterminated quoted field.
inline std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<CsvRecord> out;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  CsvRecord rec;
  CsvField field;
  bool in_quotes = false, field_started = false;
  auto end_field = [&] {
    rec.push_back(std::move(field));
    field = {};
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(rec.size() == 1 && rec[0].text.empty() && !rec[0].quoted)) out.push_back(std::move(rec));
    rec.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.text += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field.quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // handled with the \n
    } else if (c == '\n') {
      end_record();
    } else {
      field.text += c;
      field_started = true;
    }
  }
  if (in_quotes) throw Error(Errc::NotCsv, "unterminated quoted field");
  if (field_started || !rec.empty()) end_record();
  return out;
}

inline std::string csv_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_field(std::string_view s) {
  if (s.empty()) return "\"\"";  // an empty unquoted field means null
  if (s.find_first_of(",\"\r\n") != std::string_view::npos || s.front() == ' ' || s.back() == ' ') return csv_quote(s);
  return std::string(s);
}

// ---- NTFS journal CSV --------------------------------------------------------

struct NtfsJournalRow {
  std::uint64_t lsn{0};
  std::optional<Timestamp> event_time;
  std::string event;
  std::string detail;
  std::string file_name;
  std::string full_path;
  std::optional<Timestamp> create_time, modified_time;
};

struct NtfsOptions {
  // Minutes east of UTC the tracker wrote its times in. 0 keeps them as UTC.
  int utc_offset_minutes{0};
};

struct NtfsIngest {
  std::vector<NtfsJournalRow> rows;
  std::vector<TimelineEvent> events;
  std::vector<std::string> warnings;
};

namespace detail {

/// Lower-cased, trimmed, with any "(...)" qualifier dropped:
/// "Full Path(from $MFT)" -> "full path".
inline std::string column_key(std::string_view name) {
  if (auto p = name.find('('); p != std::string_view::npos) name = name.substr(0, p);
  std::string out;
  for (char c : name) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto b = out.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return out.substr(b, out.find_last_not_of(" \t") - b + 1);
}

inline bool contains_ci(std::string_view hay, std::string_view needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end(), [](char a, char b) {
           return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
         }) != hay.end();
}

inline App app_for_path(std::string_view path) {
  if (contains_ci(path, "Facebook.Facebook")) return App::facebook;
  if (contains_ci(path, "SkypeApp")) return App::skype;
  return App::other;
}

inline std::string shift_iso(const Timestamp& t, int offset_minutes) {
  const auto ms = t.unix_millis() - static_cast<std::int64_t>(offset_minutes) * 60000;
  auto s = Timestamp::from_unix(static_cast<std::uint64_t>(ms), EpochUnit::millis).to_iso();
  return s.substr(0, 19) + "Z";
}

}  // namespace detail

inline constexpr std::string_view kNtfsExtractor = "ntfs-csv";

/// Header row: the first of the leading records that names an LSN column, or
/// the first record. LSN, Event, File Name and Full Path are required.
inline NtfsIngest ingest_ntfs_csv(std::string_view text, const std::string& evidence_path, NtfsOptions opt = {}) {
  if (text.find('\0') != std::string_view::npos) throw Error(Errc::NotCsv, evidence_path + ": binary content");
  const auto records = parse_csv(text);
  if (records.empty()) throw Error(Errc::NotCsv, evidence_path + ": no header row");

  std::size_t header = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(records.size(), 16); ++i) {
    const auto& r = records[i];
    if (std::any_of(r.begin(), r.end(), [](const CsvField& f) { return detail::column_key(f.text) == "lsn"; })) {
      header = i;
      break;
    }
  }
  if (records[header].size() < 2) throw Error(Errc::NotCsv, evidence_path + ": header has a single column");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < records[header].size(); ++i) col.emplace(detail::column_key(records[header][i].text), i);
  std::string missing;
  for (const char* req : {"lsn", "event", "file name", "full path"})
    if (!col.contains(req)) missing += missing.empty() ? req : std::string(", ") + req;
  if (!missing.empty()) throw Error(Errc::MissingColumns, evidence_path + ": missing " + missing);

  NtfsIngest out;
  if (opt.utc_offset_minutes == 0)
    out.warnings.push_back(evidence_path + ": journal times carry no zone and are read as UTC");
  else
    out.warnings.push_back(evidence_path + ": journal times shifted by " + std::to_string(-opt.utc_offset_minutes) +
                           " minutes to UTC");

  auto cell = [&](const CsvRecord& r, const char* name) -> std::string {
    auto it = col.find(name);
    if (it == col.end() || it->second >= r.size()) return {};
    return r[it->second].text;
  };
  auto time_cell = [&](const CsvRecord& r, const char* name, std::size_t line) -> std::optional<Timestamp> {
    const auto s = cell(r, name);
    if (s.empty()) return std::nullopt;
    try {
      auto t = Timestamp::from_iso_text(s);
      if (opt.utc_offset_minutes != 0) t = Timestamp::from_iso_text(detail::shift_iso(t, opt.utc_offset_minutes));
      return t;
    } catch (const Error& e) {
      out.warnings.push_back(evidence_path + " record " + std::to_string(line) + ": " + e.what());
      return std::nullopt;
    }
  };

  std::optional<Timestamp> last;
  for (std::size_t i = header + 1; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto line = i + 1;
    NtfsJournalRow row;
    if (!skype::detail::parse_u64(cell(r, "lsn"), row.lsn)) {
      out.warnings.push_back(evidence_path + " record " + std::to_string(line) + ": LSN '" + cell(r, "lsn") +
                             "' is not a non-negative integer, row skipped");
      continue;
    }
    row.event_time = time_cell(r, "event time", line);
    row.event = cell(r, "event");
    row.detail = cell(r, "detail");
    row.file_name = cell(r, "file name");
    row.full_path = cell(r, "full path");
    row.create_time = time_cell(r, "create time", line);
    row.modified_time = time_cell(r, "modified time", line);

    std::optional<Timestamp> when = row.event_time;
    if (when) {
      last = when;
    } else if (last) {
      when = last;
      out.warnings.push_back("time-inherited: LSN " + std::to_string(row.lsn) + " takes " + last->raw_string() +
                             " from the preceding timed row");
    } else {
      out.warnings.push_back("LSN " + std::to_string(row.lsn) + " has no event time and no preceding timed row; no event");
    }
    if (when) {
      TimelineEvent ev;
      ev.when = *when;
      ev.kind = EventKind::FsJournal;
      ev.app = detail::app_for_path(row.full_path);
      if (!row.full_path.empty()) ev.counterpart = row.full_path;
      ev.summary = row.event + " " + row.file_name;
      ev.provenance = Provenance(evidence_path, std::string(kNtfsExtractor), Channel::ingested_csv);
      out.events.push_back(std::move(ev));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline NtfsIngest ingest_ntfs_csv(const std::filesystem::path& file, NtfsOptions opt = {}) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ingest_ntfs_csv(ss.str(), file.generic_string(), opt);
}

// ---- Normalization -----------------------------------------------------------
//
// Each timed record yields one event (calls with a duration yield two).
// Records with no usable time are reported in warnings instead.

using Normalized = Extraction<TimelineEvent>;

namespace detail {

inline TimelineEvent make_event(const Timestamp& when, EventKind kind, App app, std::optional<std::string> actor,
                                std::optional<std::string> counterpart, std::string summary, Provenance prov) {
  TimelineEvent ev;
  ev.when = when;
  ev.kind = kind;
  ev.app = app;
  ev.actor = std::move(actor);
  ev.counterpart = std::move(counterpart);
  ev.summary = std::move(summary);
  ev.provenance = std::move(prov);
  return ev;
}

inline std::optional<std::string> non_empty(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return std::string(s);
}

}  // namespace detail

inline Normalized normalize(const facebook::FacebookDataset& ds) {
  using facebook::AnalyticsName;
  Normalized out;
  const auto& owner = ds.owner_uid;

  for (const auto& a : ds.analytics.records) {
    EventKind kind = EventKind::AppActivity;
    if (a.name == AnalyticsName::login) kind = EventKind::Login;
    else if (a.name == AnalyticsName::file_downloaded) kind = EventKind::FileDownload;
    out.records.push_back(detail::make_event(a.when, kind, App::facebook, owner, std::nullopt,
                                             "analytics " + a.name_text + (a.module.empty() ? "" : " (" + a.module + ")"),
                                             a.provenance));
  }

  // Thread participants, for naming the other side of sent messages.
  std::map<std::string, std::map<std::string, std::string>> senders;
  for (const auto& m : ds.messages.records)
    senders[m.thread_id].emplace(m.sender_uid, m.sender_name.empty() ? m.sender_uid : m.sender_name);

  for (const auto& m : ds.messages.records) {
    const std::string who = m.sender_name.empty() ? m.sender_uid : m.sender_name;
    EventKind kind = EventKind::MessageUndetermined;
    std::optional<std::string> actor = detail::non_empty(who), counterpart;
    if (owner && !m.sender_uid.empty()) {
      actor = owner;
      if (m.sender_uid == *owner) {
        kind = EventKind::MessageSent;
        for (const auto& [uid, name] : senders[m.thread_id])
          if (uid != *owner) {
            counterpart = name;
            break;
          }
      } else {
        kind = EventKind::MessageReceived;
        counterpart = who;
      }
    }
    std::string summary = m.body.empty() ? "(no text)" : m.body;
    if (!m.attachments.empty()) summary += " [" + std::to_string(m.attachments.size()) + " attachment(s)]";
    out.records.push_back(detail::make_event(m.when, kind, App::facebook, actor, counterpart, summary, m.provenance));
  }

  for (const auto& u : ds.users.records) {
    if (!u.last_active) {
      out.warnings.push_back("facebook user " + u.id + ": no last_active, no event");
      continue;
    }
    out.records.push_back(detail::make_event(*u.last_active, EventKind::AppActivity, App::facebook, owner,
                                             detail::non_empty(u.name.empty() ? u.id : u.name), "user last active",
                                             u.provenance));
  }

  for (const auto& n : ds.notifications.records) {
    const auto& t = n.created ? n.created : n.updated;
    if (!t) {
      out.warnings.push_back("facebook notification " + n.notification_id + ": no time, no event");
      continue;
    }
    out.records.push_back(detail::make_event(*t, EventKind::Notification, App::facebook, owner,
                                             detail::non_empty(n.sender_id), n.title_text, n.provenance));
  }
  return out;
}

inline EventKind skype_message_kind(skype::MessageKind k, std::optional<bool> sent) {
  using skype::MessageKind;
  switch (k) {
    case MessageKind::VideoSessionStarted: return EventKind::CallStart;
    case MessageKind::VideoSessionEnded: return EventKind::CallEnd;
    case MessageKind::ContactAsk: return EventKind::ContactAdd;
    case MessageKind::FileSent: return EventKind::FileTransfer;
    case MessageKind::BirthdayNote: return EventKind::Notification;
    case MessageKind::TextSent:
    case MessageKind::EmoticonSent:
    case MessageKind::ContactDetailsSent:
    case MessageKind::SmsSent:
    case MessageKind::VoiceMessageSent:
      if (!sent) return EventKind::MessageUndetermined;
      return *sent ? EventKind::MessageSent : EventKind::MessageReceived;
    default: return EventKind::AppActivity;
  }
}

inline Normalized normalize(const skype::SkypeDataset& ds) {
  Normalized out;
  const auto& owner = ds.owner;

  for (const auto& m : ds.messages) {
    std::optional<bool> sent;
    if (owner && !m.author.empty()) sent = m.author == *owner;
    const auto kind = skype_message_kind(m.kind.kind, sent);
    std::optional<std::string> actor = detail::non_empty(m.author), counterpart;
    if (sent) {
      actor = owner;
      if (*sent) {
        if (m.dialog_partner && !m.dialog_partner->empty()) counterpart = m.dialog_partner;
        else if (!m.chatname.empty() && m.chatname.front() != '#' && m.chatname != *owner) counterpart = m.chatname;
      } else {
        counterpart = m.author;
      }
    }
    std::string summary(skype::to_string(m.kind.kind));
    if (m.kind.kind == skype::MessageKind::Unknown) summary += " type " + std::to_string(m.kind.code);
    if (!m.body_xml.empty() && m.kind.kind == skype::MessageKind::TextSent) summary += ": " + m.body_xml;
    out.records.push_back(detail::make_event(m.when, kind, App::skype, actor, counterpart, summary, m.provenance));
  }

  for (const auto& t : ds.transfers) {
    const auto& when = t.start ? t.start : t.finish;
    if (!when) {
      out.warnings.push_back("skype transfer " + std::to_string(t.id) + ": no start or finish time, no event");
      continue;
    }
    std::string summary = std::string(skype::to_string(t.direction)) + " " + t.filename + " (" +
                          std::to_string(t.bytes_transferred) + "/" + std::to_string(t.filesize) + " bytes)";
    out.records.push_back(detail::make_event(*when, EventKind::FileTransfer, App::skype, owner,
                                             detail::non_empty(t.partner_handle), summary, t.provenance));
  }

  for (const auto& c : ds.calls) {
    std::optional<std::string> counterpart;
    for (const auto& m : ds.call_members)
      if (m.call_name == c.name && (!owner || m.identity != *owner)) {
        counterpart = m.identity;
        break;
      }
    if (!counterpart && c.host_identity != owner.value_or("")) counterpart = detail::non_empty(c.host_identity);
    const std::string dir = c.is_incoming ? "incoming" : "outgoing";
    out.records.push_back(detail::make_event(c.begin, EventKind::CallStart, App::skype, owner, counterpart,
                                             dir + " call " + c.name, c.provenance));
    if (c.duration_s && *c.duration_s >= 0)
      out.records.push_back(detail::make_event(c.begin.plus_seconds(static_cast<std::uint64_t>(*c.duration_s)),
                                               EventKind::CallEnd, App::skype, owner, counterpart,
                                               dir + " call " + c.name + " ended after " +
                                                   std::to_string(*c.duration_s) + " s",
                                               c.provenance));
  }

  for (const auto& v : ds.video_messages) {
    if (!v.reaction_time) {
      out.warnings.push_back("skype video message " + v.sid + ": no reaction time, no event");
      continue;
    }
    out.records.push_back(detail::make_event(*v.reaction_time, EventKind::VideoMessage, App::skype, owner,
                                             detail::non_empty(v.author), "video message " + v.sid, v.provenance));
  }
  return out;
}

inline App app_for_package(std::string_view name) {
  if (detail::contains_ci(name, "Facebook")) return App::facebook;
  if (detail::contains_ci(name, "SkypeApp")) return App::skype;
  return App::other;
}

inline Normalized normalize(const std::vector<registry::InstallRecord>& installs, const std::string& reg_path) {
  Normalized out;
  for (const auto& r : installs) {
    out.records.push_back(detail::make_event(r.install_time, EventKind::AppInstall, app_for_package(r.package.name),
                                             std::nullopt, std::nullopt, "install " + r.package.to_string(),
                                             Provenance(reg_path, "registry", Channel::registry)));
    for (const auto& w : r.warnings) out.warnings.push_back(w);
  }
  return out;
}

inline Normalized normalize(const std::vector<registry::PersistedItem>& items, const std::string& reg_path) {
  Normalized out;
  for (const auto& p : items)
    out.records.push_back(detail::make_event(p.last_updated, EventKind::FileDownload,
                                             app_for_package(p.package_family.value_or("")), std::nullopt,
                                             std::nullopt, "persisted item " + p.file_path,
                                             Provenance(reg_path, "registry", Channel::registry)));
  return out;
}

inline Normalized normalize(const std::vector<carver::ChatFragment>& frags, const std::string& image_path) {
  Normalized out;
  for (const auto& f : frags) {
    if (!f.time || *f.time < 0) {
      out.warnings.push_back("carved chat fragment at offset " + std::to_string(f.offset) + ": no time, no event");
      continue;
    }
    out.records.push_back(detail::make_event(Timestamp::from_unix(static_cast<std::uint64_t>(*f.time), EpochUnit::seconds),
                                             EventKind::MessageUndetermined, App::facebook, f.sender_uid,
                                             f.recipient_uid, f.message.value_or("(no text)"),
                                             Provenance(image_path, "carver", Channel::carved, f.offset)));
  }
  return out;
}

inline App app_for_label(pcap::Label l) {
  const auto name = pcap::kLabelNames[static_cast<std::size_t>(l)];
  if (name.starts_with("Facebook")) return App::facebook;
  if (name.starts_with("Skype")) return App::skype;
  return App::other;
}

/// flows and labels are parallel.
inline Normalized normalize(const std::vector<pcap::Flow>& flows, const std::vector<pcap::FlowLabel>& labels,
                            const std::string& capture_path) {
  if (flows.size() != labels.size()) throw Error(Errc::InvalidArgument, "flows and labels differ in length");
  Normalized out;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const auto& f = flows[i];
    const auto ep = [](const pcap::Endpoint& e) { return ipv4::format(e.ip) + ":" + std::to_string(e.port); };
    std::string summary = std::string(pcap::kLabelNames[static_cast<std::size_t>(labels[i].label)]) + " " +
                          (f.proto == pcap::Proto::tcp ? "tcp " : "udp ") + ep(f.a) + " <-> " + ep(f.b) + ", " +
                          std::to_string(f.total_packets()) + " packets, " + std::to_string(f.total_bytes()) + " bytes";
    if (f.sni) summary += ", sni " + *f.sni;
    out.records.push_back(detail::make_event(f.first_seen(), EventKind::NetworkSession, app_for_label(labels[i].label),
                                             std::nullopt, std::nullopt, summary,
                                             Provenance(capture_path, "pcap", Channel::network)));
  }
  return out;
}

inline void append(Normalized& dst, Normalized&& src) {
  for (auto& e : src.records) dst.records.push_back(std::move(e));
  for (auto& w : src.warnings) dst.warnings.push_back(std::move(w));
}

// ---- Ordering ----------------------------------------------------------------

namespace detail {

inline auto tail_key(const TimelineEvent& e) {
  return std::make_tuple(e.actor, e.counterpart, e.provenance.extractor, e.provenance.channel, e.provenance.byte_offset,
                         e.when.encoding(), e.when.raw_string());
}

}  // namespace detail

/// Strict weak order: (instant, app, kind, path, summary), then the remaining
/// fields so that only identical events compare equal.
inline bool event_less(const TimelineEvent& x, const TimelineEvent& y) {
  const auto ix = x.when.unix_millis(), iy = y.when.unix_millis();
  if (ix != iy) return ix < iy;
  if (x.app != y.app) return x.app < y.app;
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.provenance.evidence_path != y.provenance.evidence_path) return x.provenance.evidence_path < y.provenance.evidence_path;
  if (x.summary != y.summary) return x.summary < y.summary;
  return detail::tail_key(x) < detail::tail_key(y);
}

/// Sorts and folds exact duplicates, summing their occurrence counts.
inline std::vector<TimelineEvent> merge_sort(std::vector<TimelineEvent> events) {
  std::stable_sort(events.begin(), events.end(), event_less);
  std::vector<TimelineEvent> out;
  out.reserve(events.size());
  for (auto& e : events) {
    if (!out.empty() && out.back().same_event(e)) out.back().occurrences += e.occurrences;
    else out.push_back(std::move(e));
  }
  return out;
}

// ---- Report -------------------------------------------------------------------

struct Report {
  std::vector<TimelineEvent> events;
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;  // app -> kind -> events
  std::vector<std::string> warnings;
  std::string tool_version;
  std::string generated_at;
};

inline std::map<std::string, std::map<std::string, std::uint64_t>> count_events(const std::vector<TimelineEvent>& ev) {
  std::map<std::string, std::map<std::string, std::uint64_t>> c;
  for (const auto& e : ev) ++c[std::string(to_string(e.app))][std::string(to_string(e.kind))];
  return c;
}

inline Report make_report(std::vector<TimelineEvent> events, std::vector<std::string> warnings, std::string tool_version,
                          std::string generated_at) {
  Report r;
  r.events = merge_sort(std::move(events));
  r.counts = count_events(r.events);
  r.warnings = std::move(warnings);
  r.tool_version = std::move(tool_version);
  r.generated_at = std::move(generated_at);
  return r;
}

inline constexpr std::array<std::string_view, 13> kColumns = {
    "when_utc", "when_raw",      "encoding", "kind",    "app",       "actor",      "counterpart",
    "summary",  "evidence_path", "byte_offset", "channel", "extractor", "occurrences"};

inline nlohmann::ordered_json to_json(const TimelineEvent& e) {
  nlohmann::ordered_json j;
  j["when_utc"] = e.when.to_iso();
  j["when_raw"] = e.when.raw_string();
  j["encoding"] = to_string(e.when.encoding());
  j["kind"] = to_string(e.kind);
  j["app"] = to_string(e.app);
  j["actor"] = e.actor ? nlohmann::ordered_json(*e.actor) : nlohmann::ordered_json(nullptr);
  j["counterpart"] = e.counterpart ? nlohmann::ordered_json(*e.counterpart) : nlohmann::ordered_json(nullptr);
  j["summary"] = e.summary;
  j["evidence_path"] = e.provenance.evidence_path;
  j["byte_offset"] = e.provenance.byte_offset ? nlohmann::ordered_json(*e.provenance.byte_offset) : nlohmann::ordered_json(nullptr);
  j["channel"] = to_string(e.provenance.channel);
  j["extractor"] = e.provenance.extractor;
  j["occurrences"] = e.occurrences;
  return j;
}

namespace detail {

template <class E, std::size_t N>
E parse_enum(const storeim::detail::EnumNames<E, N>& names, const std::string& s, const char* what) {
  auto v = names.parse(s);
  if (!v) throw Error(Errc::InvalidArgument, std::string("unknown ") + what + " '" + s + "'");
  return *v;
}

struct RawRow {
  std::string when_utc, when_raw, encoding, kind, app;
  std::optional<std::string> actor, counterpart;
  std::string summary, evidence_path;
  std::optional<std::uint64_t> byte_offset;
  std::string channel, extractor;
  std::uint32_t occurrences{1};
};

inline TimelineEvent from_row(const RawRow& r) {
  TimelineEvent e;
  e.when = Timestamp::from_raw(parse_enum(kEncodingNames, r.encoding, "encoding"), r.when_raw);
  if (e.when.to_iso() != r.when_utc)
    throw Error(Errc::InvalidArgument, "when_utc " + r.when_utc + " disagrees with raw " + r.when_raw);
  e.kind = parse_enum(kEventKindNames, r.kind, "kind");
  e.app = parse_enum(kAppNames, r.app, "app");
  e.actor = r.actor;
  e.counterpart = r.counterpart;
  e.summary = r.summary;
  e.provenance = Provenance(r.evidence_path, r.extractor, parse_enum(kChannelNames, r.channel, "channel"), r.byte_offset);
  e.occurrences = r.occurrences;
  return e;
}

}  // namespace detail

inline TimelineEvent event_from_json(const nlohmann::json& j) {
  try {
    auto opt_str = [&](const char* k) -> std::optional<std::string> {
      if (!j.contains(k) || j[k].is_null()) return std::nullopt;
      return j[k].get<std::string>();
    };
    detail::RawRow r;
    r.when_utc = j.at("when_utc").get<std::string>();
    r.when_raw = j.at("when_raw").get<std::string>();
    r.encoding = j.at("encoding").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.app = j.at("app").get<std::string>();
    r.actor = opt_str("actor");
    r.counterpart = opt_str("counterpart");
    r.summary = j.at("summary").get<std::string>();
    r.evidence_path = j.at("evidence_path").get<std::string>();
    if (j.contains("byte_offset") && !j["byte_offset"].is_null()) r.byte_offset = j["byte_offset"].get<std::uint64_t>();
    r.channel = j.at("channel").get<std::string>();
    r.extractor = j.value("extractor", std::string("unknown"));
    r.occurrences = j.value("occurrences", 1u);
    return detail::from_row(r);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedJson, e.what());
  }
}

inline std::string emit_jsonl(const std::vector<TimelineEvent>& events) {
  std::string out;
  for (const auto& e : events) out += to_json(e).dump() + "\n";
  return out;
}

inline std::vector<TimelineEvent> parse_jsonl(std::string_view text) {
  std::vector<TimelineEvent> out;
  std::size_t pos = 0, line = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto s = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    if (s.empty()) continue;
    auto j = nlohmann::json::parse(s, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(Errc::MalformedJson, "line " + std::to_string(line) + " is not a JSON object");
    out.push_back(event_from_json(j));
  }
  return out;
}

/// Same columns as the JSONL objects. An absent optional is an empty
/// unquoted field; an empty string is written as "".
inline std::string emit_csv(const std::vector<TimelineEvent>& events) {
  std::string out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out += std::string(i ? "," : "") + std::string(kColumns[i]);
  out += "\r\n";
  auto opt = [](const std::optional<std::string>& s) { return s ? csv_field(*s) : std::string(); };
  for (const auto& e : events) {
    const std::vector<std::string> cells = {
        csv_field(e.when.to_iso()),
        csv_field(e.when.raw_string()),
        csv_field(to_string(e.when.encoding())),
        csv_field(to_string(e.kind)),
        csv_field(to_string(e.app)),
        opt(e.actor),
        opt(e.counterpart),
        csv_field(e.summary),
        csv_field(e.provenance.evidence_path),
        e.provenance.byte_offset ? std::to_string(*e.provenance.byte_offset) : std::string(),
        csv_field(to_string(e.provenance.channel)),
        csv_field(e.provenance.extractor),
        std::to_string(e.occurrences)};
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\r\n";
  }
  return out;
}

inline std::vector<TimelineEvent> parse_report_csv(std::string_view text) {
  const auto recs = parse_csv(text);
  if (recs.empty()) throw Error(Errc::NotCsv, "no header row");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < recs[0].size(); ++i) col.emplace(recs[0][i].text, i);
  for (auto c : kColumns)
    if (!col.contains(std::string(c))) throw Error(Errc::MissingColumns, "missing column " + std::string(c));
  std::vector<TimelineEvent> out;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& r = recs[i];
    if (r.size() != recs[0].size()) throw Error(Errc::NotCsv, "record " + std::to_string(i + 1) + " has " + std::to_string(r.size()) + " fields");
    auto get = [&](const char* k) -> const CsvField& { return r[col.at(k)]; };
    auto opt = [&](const char* k) -> std::optional<std::string> {
      const auto& f = get(k);
      if (f.text.empty() && !f.quoted) return std::nullopt;
      return f.text;
    };
    detail::RawRow row;
    row.when_utc = get("when_utc").text;
    row.when_raw = get("when_raw").text;
    row.encoding = get("encoding").text;
    row.kind = get("kind").text;
    row.app = get("app").text;
    row.actor = opt("actor");
    row.counterpart = opt("counterpart");
    row.summary = get("summary").text;
    row.evidence_path = get("evidence_path").text;
    if (const auto& b = get("byte_offset").text; !b.empty()) {
      std::uint64_t v = 0;
      if (!skype::detail::parse_u64(b, v)) throw Error(Errc::InvalidArgument, "byte_offset '" + b + "'");
      row.byte_offset = v;
    }
    row.channel = get("channel").text;
    row.extractor = get("extractor").text;
    std::uint64_t occ = 1;
    if (!skype::detail::parse_u64(get("occurrences").text, occ) || occ == 0 || occ > UINT32_MAX)
      throw Error(Errc::InvalidArgument, "occurrences '" + get("occurrences").text + "'");
    row.occurrences = static_cast<std::uint32_t>(occ);
    out.push_back(detail::from_row(row));
  }
  return out;
}

/// Report-level metadata (counts, warnings, version) as one JSON document.
inline std::string emit_summary(const Report& r) {
  nlohmann::ordered_json j;
  j["tool_version"] = r.tool_version;
  j["generated_at"] = r.generated_at;
  j["event_count"] = r.events.size();
  j["counts"] = r.counts;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

}  // namespace storeim::timeline
