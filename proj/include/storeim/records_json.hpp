#pragma once

// Canonical JSON rendering of extracted records. The CLI prints these, and
// the forge manifest states its expectations in the same shape, so a
// round-trip check is a plain JSON equality.

#include <string>
#include <vector>

#include <json.hpp>

#include "storeim/carver.hpp"
#include "storeim/evidence.hpp"
#include "storeim/facebook.hpp"
#include "storeim/locator.hpp"
#include "storeim/pcap.hpp"
#include "storeim/pipeline.hpp"
#include "storeim/registry.hpp"
#include "storeim/skype.hpp"
#include "storeim/timeline.hpp"

namespace storeim::records {

using nlohmann::json;

namespace detail {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace detail

inline json to_json(const Timestamp& t) {
  return {{"utc", t.to_iso()}, {"raw", t.raw_string()}, {"encoding", to_string(t.encoding())}};
}
inline json to_json(const std::optional<Timestamp>& t) { return t ? to_json(*t) : json(nullptr); }
inline json to_json(const std::optional<Date>& d) { return d ? json(d->to_string()) : json(nullptr); }

inline json to_json(const Provenance& p) {
  return {{"path", p.evidence_path}, {"extractor", p.extractor}, {"channel", to_string(p.channel)},
          {"offset", detail::opt(p.byte_offset)}};
}

inline json to_json(const facebook::FbAttachment&);
inline json to_json(const facebook::FbAnalyticsEvent&);
inline json to_json(const facebook::FbFriend&);
inline json to_json(const facebook::FbMessage&);
inline json to_json(const facebook::FbUser&);
inline json to_json(const facebook::FbNotification&);
inline json to_json(const skype::SupernodeEntry&);
inline json to_json(const skype::ConfigContact&);
inline json to_json(const skype::SkypeAccount&);
inline json to_json(const skype::SkypeContact&);
inline json to_json(const skype::SkypeMessage&);
inline json to_json(const skype::SkypeTransfer&);
inline json to_json(const skype::SkypeCall&);
inline json to_json(const skype::SkypeCallMember&);
inline json to_json(const skype::SkypeVideoMessage&);
inline json to_json(const locator::ArtifactPath&);
inline json to_json(const locator::ZoneMarker&);
inline json to_json(const registry::InstallRecord&);
inline json to_json(const registry::PersistedItem&);
inline json to_json(const carver::CarvedObject&);
inline json to_json(const carver::KeywordHit&);
inline json to_json(const carver::ChatFragment&);
inline json to_json(const timeline::NtfsJournalRow&);

template <class T>
json list(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

// ---- Facebook ----

inline json to_json(const facebook::FbAnalyticsEvent& e) {
  return {{"row_id", e.row_id}, {"when", to_json(e.when)}, {"log_type", e.log_type}, {"name", e.name_text},
          {"module", e.module}, {"extra", e.extra}, {"provenance", to_json(e.provenance)}};
}
inline json to_json(const facebook::FbFriend& f) {
  return {{"uid", f.uid},
          {"name", f.name},
          {"first_name", f.first_name},
          {"middle_name", f.middle_name},
          {"last_name", f.last_name},
          {"contact_email", f.contact_email},
          {"phones", f.phones},
          {"profile_url", f.profile_url},
          {"communication_rank", f.communication_rank},
          {"birthday", to_json(f.birthday)},
          {"provenance", to_json(f.provenance)}};
}
inline json to_json(const facebook::FbAttachment& a) {
  return {{"name", a.name},    {"size", a.size},          {"id", a.id},
          {"mime", a.mime},    {"type", a.type_code},     {"url", detail::opt(a.url)},
          {"preview", detail::opt(a.preview_url)},        {"width", detail::opt(a.width)},
          {"height", detail::opt(a.height)}};
}
inline json to_json(const facebook::FbMessage& m) {
  return {{"row_id", m.row_id},           {"mid", m.mid},
          {"thread_id", m.thread_id},     {"body", m.body},
          {"sender_uid", m.sender_uid},   {"sender_name", m.sender_name},
          {"sender_email", m.sender_email}, {"tags", m.tags},
          {"when", to_json(m.when)},      {"attachments", list(m.attachments)},
          {"provenance", to_json(m.provenance)}};
}
inline json to_json(const facebook::FbUser& u) {
  return {{"id", u.id}, {"email", u.email}, {"name", u.name}, {"last_active", to_json(u.last_active)},
          {"provenance", to_json(u.provenance)}};
}
inline json to_json(const facebook::FbNotification& n) {
  return {{"notification_id", n.notification_id}, {"sender_id", n.sender_id}, {"title_text", n.title_text},
          {"href", n.href}, {"unread", n.unread_flag}, {"updated", to_json(n.updated)},
          {"created", to_json(n.created)}, {"provenance", to_json(n.provenance)}};
}

/// Records only; warnings and flags are diagnostics, not part of the identity.
inline json to_json(const facebook::FacebookDataset& d) {
  return {{"owner_uid", detail::opt(d.owner_uid)},   {"analytics", list(d.analytics.records)},
          {"friends", list(d.friends.records)},     {"messages", list(d.messages.records)},
          {"users", list(d.users.records)},         {"notifications", list(d.notifications.records)}};
}

// ---- Skype ----

inline json to_json(const skype::SupernodeEntry& e) { return {{"ip", e.ip}, {"port", e.port}}; }

inline json to_json(const skype::SkypeNetworkState& s) {
  return {{"last_ip", detail::opt(s.last_ip)},
          {"listening_port", detail::opt(s.listening_port)},
          {"supernode", s.supernode ? to_json(*s.supernode) : json(nullptr)},
          {"hostcache", list(s.hostcache)},
          {"default_skypename", detail::opt(s.default_skypename)},
          {"node_id", detail::opt(s.node_id)}};
}
inline json to_json(const skype::ConfigContact& c) { return {{"name", c.name}, {"raw_value", c.raw_value}}; }
inline json to_json(const skype::SkypeConfig& c) {
  return {{"serial", detail::opt(c.serial)}, {"last_used", to_json(c.last_used)}, {"contacts", list(c.contacts)}};
}
inline json to_json(const skype::SkypeAccount& a) {
  return {{"skypename", a.skypename},          {"liveid", detail::opt(a.liveid)},
          {"fullname", a.fullname},            {"birthday", to_json(a.birthday)},
          {"gender", detail::opt(a.gender)},   {"country", detail::opt(a.country)},
          {"province", detail::opt(a.province)}, {"city", detail::opt(a.city)},
          {"emails", detail::opt(a.emails)},   {"mood_text", detail::opt(a.mood_text)},
          {"registration_time", to_json(a.registration_time)}, {"provenance", to_json(a.provenance)}};
}
inline json to_json(const skype::SkypeContact& c) {
  return {{"skypename", c.skypename},
          {"fullname", c.fullname},
          {"displayname", c.displayname},
          {"birthday", to_json(c.birthday)},
          {"gender", detail::opt(c.gender)},
          {"languages", detail::opt(c.languages)},
          {"country", detail::opt(c.country)},
          {"city", detail::opt(c.city)},
          {"phone_mobile", detail::opt(c.phone_mobile)},
          {"emails", detail::opt(c.emails)},
          {"last_online", to_json(c.last_online)},
          {"last_used", to_json(c.last_used)},
          {"provenance", to_json(c.provenance)}};
}
inline json to_json(const skype::SkypeMessage& m) {
  return {{"id", m.id},
          {"convo_id", m.convo_id},
          {"chatname", m.chatname},
          {"author", m.author},
          {"from_dispname", m.from_dispname},
          {"dialog_partner", detail::opt(m.dialog_partner)},
          {"when", to_json(m.when)},
          {"type", m.type_code},
          {"chatmsg_type", detail::opt(m.chatmsg_type)},
          {"chatmsg_status", detail::opt(m.chatmsg_status)},
          {"participant_count", detail::opt(m.participant_count)},
          {"body_xml", m.body_xml},
          {"identities", detail::opt(m.identities)},
          {"reason", detail::opt(m.reason)},
          {"kind", skype::to_string(m.kind.kind)},
          {"provenance", to_json(m.provenance)}};
}
inline json to_json(const skype::SkypeTransfer& t) {
  return {{"id", t.id},
          {"partner_handle", t.partner_handle},
          {"partner_dispname", t.partner_dispname},
          {"type", t.type_code},
          {"direction", skype::to_string(t.direction)},
          {"status", t.status_code},
          {"failure_reason", detail::opt(t.failure_reason)},
          {"start", to_json(t.start)},
          {"finish", to_json(t.finish)},
          {"filepath", t.filepath},
          {"filename", t.filename},
          {"filesize", t.filesize},
          {"bytes_transferred", t.bytes_transferred},
          {"provenance", to_json(t.provenance)}};
}
inline json to_json(const skype::SkypeCall& c) {
  return {{"id", c.id},
          {"begin", to_json(c.begin)},
          {"host_identity", c.host_identity},
          {"duration", detail::opt(c.duration_s)},
          {"is_incoming", c.is_incoming},
          {"name", c.name},
          {"unseen_missed", detail::opt(c.unseen_missed)},
          {"provenance", to_json(c.provenance)}};
}
inline json to_json(const skype::SkypeCallMember& m) {
  return {{"call_name", m.call_name},
          {"identity", m.identity},
          {"dispname", m.dispname},
          {"guid", m.guid_raw},
          {"ip_address", detail::opt(m.ip_address)},
          {"start", to_json(m.start)},
          {"duration", detail::opt(m.duration_s)},
          {"provenance", to_json(m.provenance)}};
}
inline json to_json(const skype::SkypeVideoMessage& v) {
  return {{"sid", v.sid},
          {"local_path", detail::opt(v.local_path)},
          {"vod_path", detail::opt(v.vod_path)},
          {"public_link", v.public_link},
          {"author", v.author},
          {"progress", v.progress},
          {"reaction_time", to_json(v.reaction_time)},
          {"provenance", to_json(v.provenance)}};
}
inline json to_json(const skype::SkypeDataset& d) {
  return {{"owner", detail::opt(d.owner)},          {"accounts", list(d.accounts)},
          {"contacts", list(d.contacts)},          {"messages", list(d.messages)},
          {"transfers", list(d.transfers)},        {"calls", list(d.calls)},
          {"call_members", list(d.call_members)},  {"video_messages", list(d.video_messages)}};
}

// ---- Locator, registry ----

inline json to_json(const locator::ArtifactPath& a) {
  return {{"role", to_string(a.role)},
          {"path", a.path},
          {"package", a.package ? json(a.package->to_string()) : json(nullptr)},
          {"account", detail::opt(a.account)},
          {"rule", a.rule}};
}
inline json to_json(const locator::ZoneMarker& z) { return {{"zone_id", z.zone_id}, {"source_path", z.source_path}}; }

inline json to_json(const registry::InstallRecord& r) {
  return {{"package", r.package.to_string()},
          {"install_time", to_json(r.install_time)},
          {"key_path", r.key_path},
          {"interpretation", registry::to_string(r.interpretation)},
          {"plausible", r.plausible}};
}
inline json to_json(const registry::PersistedItem& p) {
  return {{"guid", p.guid},
          {"file_path", p.file_path},
          {"last_updated", to_json(p.last_updated)},
          {"key_path", p.key_path},
          {"package_family", detail::opt(p.package_family)}};
}

// ---- Carver, pcap, journal ----

inline json to_json(const carver::CarvedObject& o) {
  return {{"signature", o.signature_name}, {"offset", o.offset}, {"length", o.length}};
}
inline json to_json(const carver::KeywordHit& h) { return {{"term", h.term}, {"offset", h.offset}}; }
inline json to_json(const carver::ChatFragment& f) {
  return {{"offset", f.offset},
          {"parsed", f.parsed},
          {"message", detail::opt(f.message)},
          {"time", detail::opt(f.time)},
          {"target_uid", detail::opt(f.target_uid)},
          {"sender_uid", detail::opt(f.sender_uid)},
          {"recipient_uid", detail::opt(f.recipient_uid)},
          {"thread_id", detail::opt(f.thread_id)}};
}

inline json flow_json(const pcap::Flow& f, const pcap::FlowLabel& l) {
  auto ep = [](const pcap::Endpoint& e) { return ipv4::format(e.ip) + ":" + std::to_string(e.port); };
  return {{"proto", f.proto == pcap::Proto::tcp ? "tcp" : "udp"},
          {"a", ep(f.a)},
          {"b", ep(f.b)},
          {"packets", f.total_packets()},
          {"bytes", f.total_bytes()},
          {"first_us", f.first_us},
          {"last_us", f.last_us},
          {"sni", detail::opt(f.sni)},
          {"label", pcap::kLabelNames[static_cast<std::size_t>(l.label)]},
          {"basis", pcap::to_string(l.basis)}};
}

inline json to_json(const timeline::NtfsJournalRow& r) {
  return {{"lsn", r.lsn},           {"event_time", to_json(r.event_time)}, {"event", r.event},
          {"detail", r.detail},     {"file_name", r.file_name},           {"full_path", r.full_path},
          {"create_time", to_json(r.create_time)}, {"modified_time", to_json(r.modified_time)}};
}

/// Everything a collection run recovered, in input order.
inline json to_json(const pipeline::Collection& c) {
  json out = {{"artifacts", list(c.artifacts)}};
  json fb = json::array(), sk = json::array(), shared = json::array(), configs = json::array(),
       regs = json::array(), mem = json::array(), caps = json::array(), journals = json::array();
  for (const auto& d : c.facebook) fb.push_back(to_json(d));
  for (const auto& d : c.skype) sk.push_back(to_json(d));
  for (const auto& s : c.shared) shared.push_back({{"path", s.path}, {"state", to_json(s.state)}});
  for (const auto& s : c.configs) configs.push_back({{"path", s.path}, {"config", to_json(s.config)}});
  for (const auto& r : c.registries)
    regs.push_back({{"path", r.path}, {"installs", list(r.installs.records)}, {"persisted", list(r.persisted.records)}});
  for (const auto& m : c.memory)
    mem.push_back({{"path", m.path},
                   {"carved", list(m.carved.objects)},
                   {"keywords", list(m.keywords.hits)},
                   {"chats", list(m.chats)}});
  for (const auto& cap : c.captures) {
    json flows = json::array();
    for (std::size_t i = 0; i < cap.flows.size() && i < cap.labels.size(); ++i)
      flows.push_back(flow_json(cap.flows[i], cap.labels[i]));
    caps.push_back({{"path", cap.path}, {"flows", flows}});
  }
  for (const auto& j : c.journals) journals.push_back({{"path", j.path}, {"rows", list(j.ingest.rows)}});
  out["facebook"] = fb;
  out["skype"] = sk;
  out["shared_xml"] = shared;
  out["config_xml"] = configs;
  out["zones"] = list(c.zones);
  out["registry"] = regs;
  out["memory"] = mem;
  out["captures"] = caps;
  out["journals"] = journals;
  return out;
}

}  // namespace storeim::records
