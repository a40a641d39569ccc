// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Timing limits are measured on the calling thread with steady_clock.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "storeim/carver.hpp"
#include "storeim/evidence.hpp"
#include "storeim/facebook.hpp"
#include "storeim/forge/case_data.hpp"
#include "storeim/forge/forge.hpp"
#include "storeim/pcap.hpp"
#include "storeim/pipeline.hpp"
#include "storeim/records_json.hpp"
#include "storeim/skype.hpp"
#include "storeim/timeline.hpp"
#include "support/calendar_oracle.hpp"
#include "support/temp_dir.hpp"

using namespace storeim;
namespace known = storeim::case_data;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failed expectations for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Mean wall time of one call over `reps` calls, in milliseconds.
template <typename F>
double mean_ms(int reps, F&& f) {
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) f();
  return ms_since(t0) / reps;
}

std::string fmt_ms(double ms) {
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << ms << " ms";
  return s.str();
}

// ---- 1 --------------------------------------------------------------------

void hostcache(Check& c) {
  const std::string hex = "04000500410502004137DF188109";
  const auto res = skype::decode_hostcache(hex);
  c.expect(res.records.size() == 1, "expected exactly one entry");
  if (!res.records.empty()) {
    c.expect(res.records[0].ip == "65.55.223.24", "ip " + res.records[0].ip);
    c.expect(res.records[0].port == 33033, "port " + std::to_string(res.records[0].port));
  }
  const auto t = mean_ms(1000, [&] { (void)skype::decode_hostcache(hex); });
  c.expect(t < 1.0, "decode took " + fmt_ms(t));
}

// ---- 2 --------------------------------------------------------------------

void last_ip(Check& c) {
  const std::uint32_t v = known::kLastIpDecimal;
  const auto got = skype::decode_decimal_ip(v);
  c.expect(got == "115.164.92.172", "got " + got);
  c.expect(got == oracle::dotted_quad(v), "oracle disagrees: " + oracle::dotted_quad(v));
  const auto t = mean_ms(1000, [&] { (void)skype::decode_decimal_ip(v); });
  c.expect(t < 1.0, "decode took " + fmt_ms(t));
}

// ---- 3 --------------------------------------------------------------------

void filetime(Check& c) {
  const auto epoch = ts_from_filetime_hex("019DB1DED53E8000", ByteOrder::big);
  c.expect(epoch.to_iso() == "1970-01-01T00:00:00.000Z", "got " + epoch.to_iso());
  c.expect(oracle::seconds_since_1601(1970, 1, 1, 0, 0, 0) * 10'000'000ULL == 0x019DB1DED53E8000ULL,
           "oracle tick count disagrees");
  const auto zero = ts_from_filetime_hex("0000000000000000", ByteOrder::big);
  c.expect(zero.to_iso() == "1601-01-01T00:00:00.000Z", "zero gave " + zero.to_iso());
}

// ---- 4 --------------------------------------------------------------------

void message_types(Check& c) {
  using K = skype::MessageKind;
  const std::vector<std::pair<std::int64_t, K>> documented = {
      {4, K::Conference},        {30, K::VideoSessionStarted}, {39, K::VideoSessionEnded},
      {50, K::ContactAsk},       {51, K::ContactAsk},          {53, K::Blocked},
      {60, K::EmoticonSent},     {61, K::TextSent},            {63, K::ContactDetailsSent},
      {64, K::SmsSent},          {67, K::VoiceMessageSent},    {68, K::FileSent},
      {110, K::BirthdayNote}};
  c.expect(documented.size() == 13, "table size");
  for (const auto& [code, kind] : documented) {
    const auto got = skype::classify_message(code);
    c.expect(got.kind == kind && got.code == code,
             "code " + std::to_string(code) + " -> " + std::string(skype::to_string(got.kind)));
  }
  std::size_t unknown = 0;
  for (std::int64_t code = -1000; code <= 5000; ++code) {
    bool listed = false;
    for (const auto& d : documented) listed |= d.first == code;
    if (listed) continue;
    const auto got = skype::classify_message(code);
    if (got.kind != K::Unknown || got.code != code) {
      c.expect(false, "undocumented code " + std::to_string(code) + " classified");
      break;
    }
    ++unknown;
  }
  for (auto code : {std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::max()})
    c.expect(skype::classify_message(code).kind == K::Unknown, "extreme code classified");
  c.expect(unknown == 6001 - 13, "swept " + std::to_string(unknown));
}

// ---- 5 --------------------------------------------------------------------

void body_xml(Check& c) {
  struct F {
    const char* name;
    std::uint64_t size;
    std::int64_t index;
    const char* tid;
  };
  const F want[] = {{"SuspectToVictim.docx", 78080, 0, "1335338368"}, {"SuspectToVictim.jpg", 287937, 1, "358042097"},
                    {"SuspectToVictim.pdf", 31747, 2, "3482891630"},  {"SuspectToVictim.rtf", 43360, 3, "3018727815"},
                    {"SuspectToVictim.txt", 2734, 4, "1324086924"},   {"SuspectToVictim.zip", 30967, 5, "621137037"}};
  const auto files = skype::parse_body_xml(known::kFilesBodyXml);
  const auto* fb = std::get_if<skype::BodyFiles>(&files.body);
  c.expect(fb != nullptr, "files body not recognized");
  if (fb) {
    c.expect(fb->files.size() == 6, "count " + std::to_string(fb->files.size()));
    for (std::size_t i = 0; i < std::min<std::size_t>(6, fb->files.size()); ++i) {
      const auto& g = fb->files[i];
      c.expect(g.name == want[i].name && g.size == want[i].size && g.index == want[i].index && g.tid == want[i].tid,
               "file " + std::to_string(i) + " = " + g.name);
    }
  }
  const auto video = skype::parse_body_xml(known::kVideoBodyXml);
  const auto* vm = std::get_if<skype::BodyVideoMessage>(&video.body);
  c.expect(vm != nullptr, "video message body not recognized");
  if (vm) {
    c.expect(vm->notice.sid == "90699566cef64bd97b99704588c41609", "sid " + vm->notice.sid);
    c.expect(vm->notice.secret_code == std::optional<std::string>("1400"), "secret code");
  }
}

// ---- 6 --------------------------------------------------------------------

void fb_attachments(Check& c) {
  const auto a = facebook::parse_fb_attachments(known::kAttachmentsJson);
  c.expect(a.size() == 2, "count " + std::to_string(a.size()));
  if (a.size() == 2) {
    c.expect(a[1].name == "VictimToSuspect.pdf", "name " + a[1].name);
    c.expect(a[1].size == 31747, "size");
    c.expect(a[1].id == "391924720981232", "id " + a[1].id);
    c.expect(a[1].mime == "application/pdf", "mime " + a[1].mime);
    c.expect(a[1].type_code == 7, "type");
  }
}

// ---- 7 --------------------------------------------------------------------

void timestamps(Check& c) {
  const auto ms = Timestamp::from_unix(1421898314666ULL, EpochUnit::millis).to_iso();
  c.expect(ms == "2015-01-22T03:45:14.666Z", "millis gave " + ms);
  c.expect(ms == oracle::iso_from_unix_ms(1421898314666LL), "oracle disagrees on millis");
  const auto s = Timestamp::from_unix(1421685822ULL, EpochUnit::seconds).to_iso();
  c.expect(s == "2015-01-19T16:43:42.000Z", "seconds gave " + s);
  c.expect(s == oracle::iso_from_unix_ms(1421685822LL * 1000), "oracle disagrees on seconds");
  c.expect(infer_epoch_unit(1421898314666ULL) == EpochUnit::millis, "ms unit inference");
  c.expect(infer_epoch_unit(1421685822ULL) == EpochUnit::seconds, "s unit inference");
}

// ---- 8 --------------------------------------------------------------------

std::string shared_doc(forge::Rng& rng) {
  return "<?xml version=\"1.0\"?>\r\n<config version=\"1.0\" serial=\"" + std::to_string(rng.range(10, 999)) +
         "\">\r\n<Lib>\r\n<Connection>\r\n<LastIP>" + std::to_string(rng.below(0xFFFFFFFF)) +
         "</LastIP>\r\n<NodeID>" + rng.hex(16, true) + "</NodeID>\r\n</Connection>\r\n</Lib>\r\n</config>\r\n";
}

std::string config_doc(forge::Rng& rng) {
  std::string d(known::kConfigXml);
  const auto at = d.find("serial=\"78\"");
  d.replace(at, 11, "serial=\"" + std::to_string(rng.range(10, 999)) + "\"");
  return d;
}

void carving(Check& c) {
  forge::Rng rng(0xC0FFEE);
  constexpr std::size_t kSize = 64u << 20;
  constexpr std::size_t kChunk = carver::kDefaultChunk;
  std::string img(kSize, '\0');
  for (std::size_t i = 0; i < kSize; i += 4096)
    for (std::size_t j = 0; j < 64 && i + j < kSize; ++j) img[i + j] = static_cast<char>(0x80 | rng.below(0x80));

  struct Plant {
    std::string name, bytes;
    std::uint64_t offset;
  };
  std::vector<Plant> plants;
  for (int i = 0; i < 5; ++i) plants.push_back({"config-xml", config_doc(rng), 0});
  for (int i = 0; i < 3; ++i) plants.push_back({"shared-xml", shared_doc(rng), 0});
  // The first document straddles the first chunk boundary; the rest go in
  // distinct 4 MiB slots so none overlap.
  plants[0].offset = kChunk - plants[0].bytes.size() / 2;
  std::vector<std::size_t> slots;
  for (std::size_t s = 0; s < kSize / (4u << 20); ++s)
    if (s != 1 && s != 2) slots.push_back(s);
  for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
  for (std::size_t i = 1; i < plants.size(); ++i)
    plants[i].offset = slots[i] * (4u << 20) + rng.below((4u << 20) - 8192);
  for (const auto& p : plants) img.replace(p.offset, p.bytes.size(), p.bytes);
  std::sort(plants.begin(), plants.end(), [](const auto& a, const auto& b) { return a.offset < b.offset; });

  const auto t0 = Clock::now();
  carver::MemorySource src(img);
  const auto res = carver::carve(src, carver::builtin_signatures(), kChunk);
  const auto elapsed = ms_since(t0);

  c.expect(res.objects.size() == plants.size(), "recovered " + std::to_string(res.objects.size()) + " objects");
  for (std::size_t i = 0; i < std::min(res.objects.size(), plants.size()); ++i) {
    const auto& o = res.objects[i];
    const auto& p = plants[i];
    c.expect(o.offset == p.offset && o.signature_name == p.name && o.payload == p.bytes && o.length == p.bytes.size(),
             "object " + std::to_string(i) + " at " + std::to_string(o.offset) + " differs from plant at " +
                 std::to_string(p.offset));
  }
  c.expect(!res.partial, "partial result");
  c.expect(elapsed < 5000.0, "carve took " + fmt_ms(elapsed));
}

// ---- 9 --------------------------------------------------------------------

void chunk_equivalence(Check& c) {
  forge::Rng rng(0x5EED);
  const auto sigs = carver::builtin_signatures();
  const auto terms = carver::default_terms();
  std::vector<std::string> pieces = {"<?xml version=\"", "</UI>\r\n</config>\r\n", "</Lib>\r\n</config>\r\n"};
  for (const auto& t : terms) pieces.push_back(t);
  std::size_t longest = 0;
  for (const auto& p : pieces) longest = std::max(longest, p.size());

  for (int round = 0; round < 100; ++round) {
    const auto size = static_cast<std::size_t>(rng.range(1, 64 * 1024));
    std::string buf(size, '\0');
    for (auto& ch : buf) ch = static_cast<char>(rng.coin() ? 0x80 | rng.below(0x80) : 'a' + rng.below(26));
    const auto n = rng.range(0, 40);
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto& p = rng.pick(pieces);
      if (p.size() > size) continue;
      buf.replace(rng.below(size - p.size() + 1), p.size(), p);
    }
    const auto chunk = static_cast<std::size_t>(rng.range(2 * longest, 4096));

    carver::MemorySource a(buf), b(buf), d(buf), e(buf);
    const auto whole = carver::carve(a, sigs, 0);
    const auto chunked = carver::carve(b, sigs, chunk);
    const auto kw_whole = carver::scan_keywords(d, terms, carver::kDefaultRadius, 0);
    const auto kw_chunked = carver::scan_keywords(e, terms, carver::kDefaultRadius, chunk);
    if (!(whole.objects == chunked.objects) || whole.truncated_candidates != chunked.truncated_candidates) {
      c.expect(false, "carve differs on buffer " + std::to_string(round) + " (chunk " + std::to_string(chunk) + ")");
      return;
    }
    if (!(kw_whole.hits == kw_chunked.hits)) {
      c.expect(false, "keywords differ on buffer " + std::to_string(round) + " (chunk " + std::to_string(chunk) + ")");
      return;
    }
  }
}

// ---- 10 -------------------------------------------------------------------

void pcap_labels(Check& c) {
  forge::Rng rng(0xF10E);
  const auto spec = forge::build_capture(rng, 100, 40, 1'421'685'000'000'000);

  const auto t0 = Clock::now();
  const auto cap = pcap::parse_pcap(spec.bytes);
  const auto flows = pcap::assemble_flows(cap.packets);
  const auto& catalog = pcap::builtin_catalog();
  std::vector<pcap::FlowLabel> labels;
  for (const auto& f : flows) labels.push_back(pcap::label_flow(f, catalog));
  const auto elapsed = ms_since(t0);

  c.expect(flows.size() == 100, "flows " + std::to_string(flows.size()));
  std::size_t errors = 0, matching = 0;
  bool chat = false, lookup = false;
  for (std::size_t i = 0; i < std::min(flows.size(), spec.labels.size()); ++i) {
    if (labels[i].label != spec.labels[i].label || labels[i].basis != spec.labels[i].basis) ++errors;
    if (labels[i].label != pcap::Label::Other) ++matching;
    const auto& f = flows[i];
    const auto chat_ip = *ipv4::parse(known::kFacebookChatIp);
    if ((f.a.ip == chat_ip && f.a.port == 443) || (f.b.ip == chat_ip && f.b.port == 443))
      chat |= labels[i].label == pcap::Label::FacebookChat;
    if (f.proto == pcap::Proto::tcp && (f.a.port == known::kSupernodeLookupPort || f.b.port == known::kSupernodeLookupPort))
      lookup |= labels[i].label == pcap::Label::SkypeSupernodeLookup;
  }
  c.expect(errors == 0, std::to_string(errors) + " labeling errors");
  c.expect(matching == 40, std::to_string(matching) + " catalog-matching flows");
  c.expect(chat, "31.13.76.102:443 not labeled FacebookChat");
  c.expect(lookup, "TCP/33033 flow not labeled SkypeSupernodeLookup");

  std::uint64_t packet_bytes = 0, flow_bytes = 0, packet_count = 0, flow_packets = 0, expected_bytes = 0;
  for (const auto& p : cap.packets) packet_bytes += p.ip_payload_len, ++packet_count;
  for (const auto& f : flows) {
    flow_bytes += f.a_to_b.bytes + f.b_to_a.bytes;
    flow_packets += f.a_to_b.packets + f.b_to_a.packets;
  }
  for (const auto& f : spec.flows) expected_bytes += f.a_to_b.bytes + f.b_to_a.bytes;
  c.expect(packet_bytes == flow_bytes && flow_bytes == expected_bytes,
           "bytes: packets " + std::to_string(packet_bytes) + ", flows " + std::to_string(flow_bytes) + ", written " +
               std::to_string(expected_bytes));
  c.expect(packet_count == flow_packets, "packets not conserved");
  c.expect(elapsed < 2000.0, "labeling took " + fmt_ms(elapsed));
}

// ---- 11 -------------------------------------------------------------------

void round_trip(Check& c) {
  double worst = 0;
  for (std::uint64_t seed = 1001; seed <= 1020; ++seed) {
    test::TempDir tmp("acceptance-forge");
    const auto out = tmp.path() / "tree";
    const auto t0 = Clock::now();
    const auto forged = forge::forge_tree(out, seed);
    pipeline::Options opt;
    opt.base = out;
    const auto got = pipeline::collect({out}, opt);
    const auto events = timeline::merge_sort(pipeline::events(got).records);
    worst = std::max(worst, ms_since(t0));

    const auto got_json = nlohmann::json::parse(records::to_json(got).dump());
    if (got_json != forged.manifest["expected"]) {
      for (const auto& [key, value] : forged.manifest["expected"].items())
        if (got_json[key] != value) c.expect(false, "seed " + std::to_string(seed) + ": section " + key + " differs");
    }
    auto evs = nlohmann::json::array();
    for (const auto& e : events) evs.push_back(nlohmann::json::parse(timeline::to_json(e).dump()));
    c.expect(evs == forged.manifest["events"], "seed " + std::to_string(seed) + ": timeline differs");
    c.expect(got.failures.empty(), "seed " + std::to_string(seed) + ": extraction failures");
  }
  c.expect(worst < 10000.0, "slowest seed took " + fmt_ms(worst));
}

// ---- 12 -------------------------------------------------------------------

void ntfs(Check& c) {
  const auto in = timeline::ingest_ntfs_csv(known::kNtfsCsv, "ntfs.csv");
  c.expect(in.rows.size() == known::kNtfsRowCount, "rows " + std::to_string(in.rows.size()));
  c.expect(in.events.size() == known::kNtfsRowCount, "events " + std::to_string(in.events.size()));
  if (!in.events.empty()) {
    const auto& first = in.events.front();
    c.expect(first.kind == EventKind::FsJournal, "first kind");
    c.expect(first.summary == "File Creation VictimToSuspect.txt", "first summary " + first.summary);
    c.expect(first.when.to_iso() == "2015-01-22T11:46:02.000Z", "first time " + first.when.to_iso());
  }
  std::size_t inherited = 0;
  for (const auto& w : in.warnings) inherited += w.starts_with("time-inherited");
  c.expect(inherited == known::kNtfsBlankTimeRows, "inherit warnings " + std::to_string(inherited));
  // Every blank row carries the previous timed row's instant.
  std::optional<Timestamp> last;
  for (std::size_t i = 0; i < std::min(in.rows.size(), in.events.size()); ++i) {
    if (in.rows[i].event_time) last = in.rows[i].event_time;
    if (last && !(in.events[i].when == *last)) {
      c.expect(false, "row " + std::to_string(i) + " did not inherit");
      break;
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"HostCache entry decodes to 65.55.223.24:33033", hostcache},
      {"LastIP 1940151468 decodes to 115.164.92.172", last_ip},
      {"FILETIME big-endian hex decodes to the unix and FILETIME epochs", filetime},
      {"message type codes classify exactly, others Unknown", message_types},
      {"files and video message body_xml parse exactly", body_xml},
      {"Facebook attachments JSON parses exactly", fb_attachments},
      {"epoch seconds and milliseconds match the calendar oracle", timestamps},
      {"64 MiB carve recovers all 8 planted documents", carving},
      {"chunked and whole-buffer scans agree on 100 buffers", chunk_equivalence},
      {"100-flow capture labels without error and conserves bytes", pcap_labels},
      {"20 forged trees round-trip through extraction and timeline", round_trip},
      {"NTFS journal CSV ingests with inherited times", ntfs},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = Clock::now();
    try {
      criteria[i].run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("threw: ") + e.what());
    }
    const auto t = ms_since(t0);
    std::printf("%s %2zu  %s  (%.1f ms)\n", c.failures.empty() ? "PASS" : "FAIL", i + 1, criteria[i].title, t);
    for (const auto& f : c.failures) std::printf("         - %s\n", f.c_str());
    failed += !c.failures.empty();
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
