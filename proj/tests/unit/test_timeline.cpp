#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "storeim/forge/case_data.hpp"
#include "storeim/timeline.hpp"
#include "support/calendar_oracle.hpp"

using namespace storeim;
using namespace storeim::timeline;
namespace known = storeim::case_data;

namespace {

Provenance db(std::string path = "fb/DB/messages.sqlite") { return Provenance(std::move(path), "facebook", Channel::database); }

TimelineEvent ev(std::int64_t ms, EventKind kind, std::string path, std::string summary, App app = App::facebook) {
  TimelineEvent e;
  e.when = Timestamp::from_unix(static_cast<std::uint64_t>(ms), EpochUnit::millis);
  e.kind = kind;
  e.app = app;
  e.summary = std::move(summary);
  e.provenance = Provenance(std::move(path), "x", Channel::database);
  return e;
}

// Seconds since 1970 for a civil UTC time, from the 1601-based oracle.
std::int64_t unix_s(int y, int mo, int d, int h, int mi, int s) {
  return oracle::seconds_since_1601(y, mo, d, h, mi, s) - oracle::seconds_since_1601(1970, 1, 1, 0, 0, 0);
}

std::vector<TimelineEvent> mixed_events() {
  std::vector<TimelineEvent> v;
  v.push_back(ev(1421644744425, EventKind::MessageReceived, "a/messages.sqlite", "Hello Victim"));
  auto sk = ev(0, EventKind::CallStart, "LocalState/adam.thomson11/main.db", "call, with \"quotes\"\nand a newline", App::skype);
  sk.when = Timestamp::from_unix(1421685999, EpochUnit::seconds);
  sk.actor = "adam.thomson11";
  sk.counterpart = "";
  v.push_back(sk);
  auto ft = ev(0, EventKind::AppInstall, "SOFTWARE.reg", "install", App::other);
  ft.when = Timestamp::from_filetime(oracle::filetime_ticks(2015, 1, 18, 9, 30, 0) + 1234);
  ft.provenance = Provenance("user.reg", "registry", Channel::registry);
  v.push_back(ft);
  auto iso = ev(0, EventKind::FsJournal, "journal.csv", "File Creation VictimToSuspect.txt", App::other);
  iso.when = Timestamp::from_iso_text("2015-01-22 11:46:02");
  iso.provenance = Provenance("journal.csv", "ntfs-csv", Channel::ingested_csv);
  iso.counterpart = "Users\\anonymous\\Downloads\\VictimToSuspect.txt";
  v.push_back(iso);
  auto carved = ev(0, EventKind::MessageUndetermined, "memory.dmp", "Kelvin Sky: Here are some files, for you");
  carved.when = Timestamp::from_unix(1421685383, EpochUnit::seconds);
  carved.provenance = Provenance("memory.dmp", "carver", Channel::carved, 123456789);
  carved.occurrences = 3;
  v.push_back(carved);
  return v;
}

}  // namespace

TEST_CASE("csv reader") {
  auto r = parse_csv("a,\"b,\"\"c\"\"\",,\"\"\r\n\r\nx\n");
  REQUIRE(r.size() == 2);
  REQUIRE(r[0].size() == 4);
  CHECK(r[0][1].text == "b,\"c\"");
  CHECK_FALSE(r[0][2].quoted);
  CHECK(r[0][3].quoted);
  CHECK(r[0][3].text.empty());
  CHECK(r[1][0].text == "x");
  CHECK_THROWS_AS(parse_csv("a,\"open"), Error);
}

TEST_CASE("NTFS journal ingest") {
  auto in = ingest_ntfs_csv(known::kNtfsCsv, "journal.csv");
  REQUIRE(in.rows.size() == known::kNtfsRowCount);
  REQUIRE(in.events.size() == known::kNtfsRowCount);
  const auto inherited = std::count_if(in.warnings.begin(), in.warnings.end(),
                                       [](const std::string& w) { return w.starts_with("time-inherited"); });
  CHECK(static_cast<std::size_t>(inherited) == known::kNtfsBlankTimeRows);

  const auto& first = in.events[0];
  CHECK(first.kind == EventKind::FsJournal);
  CHECK(first.summary == "File Creation VictimToSuspect.txt");
  CHECK(first.when.unix_millis() == unix_s(2015, 1, 22, 11, 46, 2) * 1000);
  CHECK(first.counterpart->find("\\Downloads\\") != std::string::npos);
  CHECK(first.provenance.channel == Channel::ingested_csv);
  CHECK(in.rows[0].lsn == 274599978);

  // Row 3 is a deletion with a blank time: it takes row 2's instant.
  CHECK_FALSE(in.rows[2].event_time);
  CHECK(in.events[2].summary == "File Deletion VictimToSuspect[1].txt");
  CHECK(in.events[2].when.unix_millis() == unix_s(2015, 1, 22, 11, 46, 5) * 1000);
  CHECK(in.events[2].when.raw_string() == "2015-01-22 11:46:05");
  CHECK(in.events[2].app == App::facebook);
  CHECK(in.events[0].app == App::other);

  SECTION("header only") {
    auto h = ingest_ntfs_csv("LSN,Event Time,Event,Detail,File Name,Full Path\r\n", "h.csv");
    CHECK(h.events.empty());
    CHECK(h.rows.empty());
  }

  SECTION("columns in another order and case, preamble above the header") {
    auto h = ingest_ntfs_csv(
        "exported by tracker\n"
        "full path,file name,EVENT,lsn,event time\n"
        "C:\\x\\a.txt,a.txt,File Creation,7,2015-01-22 11:46:02\n",
        "h.csv");
    REQUIRE(h.events.size() == 1);
    CHECK(h.events[0].summary == "File Creation a.txt");
    CHECK(h.rows[0].lsn == 7);
  }

  SECTION("zone override") {
    auto h = ingest_ntfs_csv("LSN,Event Time,Event,File Name,Full Path\n1,2015-01-22 11:46:02,File Creation,a,b\n", "h.csv",
                             {.utc_offset_minutes = 480});
    CHECK(h.events[0].when.unix_millis() == unix_s(2015, 1, 22, 3, 46, 2) * 1000);
  }

  SECTION("errors") {
    auto code = [](std::string_view text) {
      try {
        ingest_ntfs_csv(text, "bad.csv");
      } catch (const Error& e) {
        return e.code();
      }
      return Errc::Io;
    };
    CHECK(code("") == Errc::NotCsv);
    CHECK(code(std::string_view("\x01\x00\x02", 3)) == Errc::NotCsv);
    CHECK(code("just one column\n") == Errc::NotCsv);
    CHECK(code("LSN,Event,File Name\n1,x,y\n") == Errc::MissingColumns);
    CHECK(code("LSN,\"Event\n") == Errc::NotCsv);
  }
}

TEST_CASE("normalize facebook") {
  facebook::FacebookDataset ds;
  ds.owner_uid = std::string(known::kSuspectFbUid);
  for (const auto& row : known::kMessageRows) {
    facebook::FbMessage m;
    m.row_id = row.rowid;
    m.thread_id = std::string(known::kThreadId);
    m.body = row.body;
    m.sender_uid = row.sender_uid;
    m.sender_name = row.sender_name;
    m.when = Timestamp::from_unix(row.timestamp_ms, EpochUnit::millis);
    m.provenance = db();
    ds.messages.records.push_back(m);
  }
  facebook::FbAnalyticsEvent login;
  login.when = Timestamp::from_unix(known::kLoginRow.time_ms, EpochUnit::millis);
  login.name = facebook::AnalyticsName::login;
  login.name_text = "login";
  login.provenance = db("fb/DB/analytics.sqlite");
  ds.analytics.records.push_back(login);

  auto out = normalize(ds);
  REQUIRE(out.records.size() == 6);
  CHECK(out.records[0].kind == EventKind::Login);  // analytics come first
  const auto& hello = out.records[4];  // row 18
  CHECK(hello.kind == EventKind::MessageReceived);
  CHECK(hello.counterpart == "Jack Jeffrey");
  CHECK(hello.when.unix_millis() == 1421644744425);
  CHECK(hello.when.to_iso() == oracle::iso_from_unix_ms(1421644744425));
  CHECK(out.records[5].kind == EventKind::MessageSent);  // row 19, Kelvin
  CHECK(out.records[5].counterpart == "Jack Jeffrey");

  ds.owner_uid.reset();
  for (const auto& e : normalize(ds).records)
    if (e.kind != EventKind::Login) CHECK(e.kind == EventKind::MessageUndetermined);

  CHECK(normalize(facebook::FacebookDataset{}).records.empty());
}

TEST_CASE("normalize skype") {
  skype::SkypeDataset ds;
  ds.owner = std::string(known::kSuspectSkype);
  std::size_t with_duration = 0;
  for (const auto& c : known::kCalls) {
    skype::SkypeCall call;
    call.id = c.id;
    call.begin = Timestamp::from_unix(c.begin, EpochUnit::seconds);
    call.host_identity = c.host_identity;
    if (c.duration >= 0) {
      call.duration_s = c.duration;
      ++with_duration;
    }
    call.is_incoming = c.is_incoming == 1;
    call.name = c.name;
    call.provenance = Provenance("main.db", "skype", Channel::database);
    ds.calls.push_back(call);
  }
  for (const auto& r : known::kSkypeMessages) {
    skype::SkypeMessage m;
    m.id = r.id;
    m.author = r.author;
    m.chatname = r.chatname;
    if (!r.dialog_partner.empty()) m.dialog_partner = std::string(r.dialog_partner);
    m.when = Timestamp::from_unix(r.timestamp, EpochUnit::seconds);
    m.type_code = r.type;
    m.kind = skype::classify_message(r.type);
    m.body_xml = r.body_xml;
    m.provenance = Provenance("main.db", "skype", Channel::database);
    ds.messages.push_back(m);
  }
  auto out = normalize(ds);
  // Count formula: one event per record plus one per call with a duration.
  CHECK(out.records.size() == ds.messages.size() + ds.calls.size() + with_duration);

  const auto& start = out.records[ds.messages.size()];
  const auto& end = out.records[ds.messages.size() + 1];
  CHECK(start.kind == EventKind::CallStart);
  CHECK(end.kind == EventKind::CallEnd);
  CHECK(start.when.unix_millis() == 1421685999000);
  CHECK(end.when.unix_millis() - start.when.unix_millis() == 14000);

  // Message 39 was authored by the victim: received; 52 likewise.
  CHECK(out.records[1].kind == EventKind::MessageReceived);
  CHECK(out.records[1].counterpart == "harold.cornwall1");
  CHECK(out.records[0].kind == EventKind::ContactAdd);

  ds.owner.reset();
  CHECK(normalize(ds).records[1].kind == EventKind::MessageUndetermined);
}

TEST_CASE("normalize other sources") {
  registry::InstallRecord r;
  r.package = locator::parse_package_id(known::kFacebookPackage);
  r.install_time = Timestamp::from_filetime(oracle::filetime_ticks(2015, 1, 18, 9, 30, 0));
  auto out = normalize(std::vector{r}, "user.reg");
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].kind == EventKind::AppInstall);
  CHECK(out.records[0].app == App::facebook);

  carver::ChatFragment f;
  f.offset = 42;
  f.time = 1421685383;
  f.message = "hi";
  carver::ChatFragment untimed;
  auto c = normalize(std::vector{f, untimed}, "mem.dmp");
  REQUIRE(c.records.size() == 1);
  CHECK(c.warnings.size() == 1);
  CHECK(c.records[0].provenance.byte_offset == 42u);
  CHECK(c.records[0].provenance.channel == Channel::carved);

  pcap::Flow flow;
  flow.first_us = 1421684948123456;
  auto n = normalize(std::vector{flow}, std::vector{pcap::FlowLabel{pcap::Label::SkypeRst}}, "cap.pcap");
  CHECK(n.records[0].app == App::skype);
  CHECK(n.records[0].when.unix_millis() == 1421684948123);
  CHECK_THROWS_AS(normalize(std::vector{flow}, std::vector<pcap::FlowLabel>{}, "cap.pcap"), Error);
}

TEST_CASE("merge_sort") {
  SECTION("path breaks a tie") {
    auto out = merge_sort({ev(5, EventKind::Login, "b", "s"), ev(5, EventKind::Login, "a", "s")});
    CHECK(out[0].provenance.evidence_path == "a");
  }
  SECTION("exact duplicates collapse") {
    auto out = merge_sort({ev(5, EventKind::Login, "a", "s"), ev(5, EventKind::Login, "a", "s")});
    REQUIRE(out.size() == 1);
    CHECK(out[0].occurrences == 2);
  }
  SECTION("ordering follows the key fields") {
    auto out = merge_sort({ev(6, EventKind::Login, "a", "s"), ev(5, EventKind::Login, "a", "s", App::skype),
                           ev(5, EventKind::AppInstall, "z", "s", App::skype), ev(5, EventKind::Login, "a", "s")});
    REQUIRE(out.size() == 4);
    CHECK(out[0].app == App::facebook);
    CHECK(out[1].kind == EventKind::AppInstall);
    CHECK(out[3].when.unix_millis() == 6);
  }
  SECTION("shuffled input, idempotence, total order") {
    std::mt19937 rng(19);
    std::vector<TimelineEvent> base;
    for (int i = 0; i < 100; ++i)
      base.push_back(ev(1421600000000 + static_cast<std::int64_t>(rng() % 20) * 1000,
                        static_cast<EventKind>(rng() % 17), "p" + std::to_string(rng() % 3),
                        "s" + std::to_string(i), static_cast<App>(rng() % 3)));
    const auto sorted = merge_sort(base);
    CHECK(sorted.size() == 100);
    CHECK(merge_sort(sorted) == sorted);
    for (int round = 0; round < 10; ++round) {
      auto shuffled = base;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(merge_sort(shuffled) == sorted);
    }
    for (const auto& x : base)
      for (const auto& y : base) {
        CHECK_FALSE((event_less(x, y) && event_less(y, x)));
        if (!event_less(x, y) && !event_less(y, x)) CHECK(x.same_event(y));
      }
  }
}

TEST_CASE("report emit and parse back") {
  SECTION("empty") {
    CHECK(emit_jsonl({}).empty());
    const auto csv = emit_csv({});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
    CHECK(parse_report_csv(csv).empty());
    CHECK(parse_jsonl("").empty());
  }
  SECTION("single login") {
    auto e = ev(1421898314666, EventKind::Login, "analytics.sqlite", "analytics login");
    const auto line = emit_jsonl({e});
    CHECK(std::count(line.begin(), line.end(), '\n') == 1);
    CHECK(parse_jsonl(line) == std::vector{e});
    auto j = nlohmann::json::parse(line);
    for (auto c : kColumns) CHECK(j.contains(std::string(c)));
    CHECK(j["when_utc"] == oracle::iso_from_unix_ms(1421898314666));
    CHECK(j["byte_offset"].is_null());
  }
  SECTION("mixed") {
    auto report = make_report(mixed_events(), {"w"}, "0.1.0", "2026-01-01T00:00:00Z");
    CHECK(parse_jsonl(emit_jsonl(report.events)) == report.events);
    CHECK(parse_report_csv(emit_csv(report.events)) == report.events);
    std::uint64_t total = 0;
    for (const auto& [app, kinds] : report.counts)
      for (const auto& [k, n] : kinds) total += n;
    CHECK(total == report.events.size());
    CHECK(report.counts["skype"]["CallStart"] == 1);
    CHECK(nlohmann::json::parse(emit_summary(report))["event_count"] == report.events.size());
  }
  SECTION("tampered rows are rejected") {
    auto line = emit_jsonl({ev(1000, EventKind::Login, "a", "s")});
    auto bad = line;
    bad.replace(bad.find("\"when_raw\":\"1000\""), 17, "\"when_raw\":\"2000\"");
    CHECK_THROWS_AS(parse_jsonl(bad), Error);
    CHECK_THROWS_AS(parse_jsonl("{not json}\n"), Error);
    bad = line;
    bad.replace(bad.find("Login"), 5, "Logon");
    CHECK_THROWS_AS(parse_jsonl(bad), Error);
  }
}
