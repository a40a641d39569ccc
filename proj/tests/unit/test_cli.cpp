#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "storeim/cli.hpp"
#include "support/temp_dir.hpp"

using namespace storeim;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "storeim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json manifest(const fs::path& root) {
  std::ifstream in(root / "manifest.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"bogus"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"scan", "/nonexistent/storeim"}).code == 2);
  CHECK(invoke({"timeline", "--format", "xml", "x"}).code == 1);

  test::TempDir tmp("cli-codes");
  const auto junk = tmp.path() / "junk.reg";
  std::ofstream(junk) << "not a registry export";
  const auto r = invoke({"registry", junk.string()});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("chunk size below twice the longest pattern is a usage error") {
  const auto floor = cli::min_chunk();
  CHECK(floor == 2 * std::string_view("</Lib>\r\n</config>\r\n").size());
  CHECK(invoke({"--chunk", std::to_string(floor - 1), "carve", "x"}).code == 1);
}

TEST_CASE("forge then timeline reproduces the manifest events") {
  test::TempDir tmp("cli-forge");
  const auto e = tmp.path() / "E";
  REQUIRE(invoke({"forge", "--seed", "7", "--out", e.string()}).code == 0);
  CHECK(invoke({"forge", "--seed", "7", "--out", e.string()}).code == 1);

  std::vector<std::string> args{"timeline", "--format", "jsonl"};
  for (const auto& entry : fs::directory_iterator(e)) args.push_back(entry.path().string());
  const auto r = invoke(args);
  REQUIRE(r.code == 0);
  auto events = nlohmann::json::array();
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) events.push_back(nlohmann::json::parse(line));
  CHECK(events == manifest(e)["events"]);

  // A single directory input shows paths relative to itself: same stream.
  CHECK(invoke({"timeline", e.string()}).out == r.out);

  const auto csv = invoke({"timeline", "--format", "csv", e.string()});
  REQUIRE(csv.code == 0);
  CHECK(timeline::parse_report_csv(csv.out).size() == events.size());
}

TEST_CASE("skype prints per-table counts") {
  test::TempDir tmp("cli-skype");
  const auto e = tmp.path() / "E";
  const auto forged = forge::forge_tree(e, 11);
  const auto& sk = forged.expected.skype.at(0);
  const auto db = e / "Users/anonymous/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState" /
                  "adam.thomson11/main.db";
  const auto r = invoke({"skype", db.string()});
  REQUIRE(r.code == 0);
  const auto counts = nlohmann::json::parse(r.out)["main_db"][0]["counts"];
  CHECK(counts["Messages"] == sk.messages.size());
  CHECK(counts["Transfers"] == sk.transfers.size());
  CHECK(counts["Calls"] == sk.calls.size());
  CHECK(counts["Contacts"] == sk.contacts.size());

  const auto state = invoke({"skype", db.parent_path().parent_path().string()});
  REQUIRE(state.code == 0);
  const auto j = nlohmann::json::parse(state.out);
  CHECK(j["main_db"][0]["counts"] == counts);
  CHECK(j["shared_xml"].size() == 1);
  CHECK(j["config_xml"].size() == 1);
  CHECK(invoke({"skype", (tmp.path() / "absent").string()}).code == 2);
}

TEST_CASE("a mix of good and bad inputs is a partial success") {
  test::TempDir tmp("cli-partial");
  const auto e = tmp.path() / "E";
  forge::forge_tree(e, 3);
  const auto bad = tmp.path() / "broken.pcap";
  std::ofstream(bad) << "nope";
  const auto r = invoke({"pcap", (e / "evidence/traffic.pcap").string(), bad.string()});
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.out)["captures"].size() == 1);
  CHECK(r.err.find("broken.pcap") != std::string::npos);
}

TEST_CASE("report writes timeline, summary and records under the output dir") {
  test::TempDir tmp("cli-report");
  const auto e = tmp.path() / "E";
  forge::forge_tree(e, 4);
  const auto out = tmp.path() / "out";
  REQUIRE(invoke({"report", e.string(), "--out", out.string()}).code == 0);
  CHECK(fs::exists(out / "timeline.jsonl"));
  CHECK(fs::exists(out / "summary.json"));
  std::ifstream rec(out / "records.json");
  CHECK(nlohmann::json::parse(rec) == manifest(e)["expected"]);
  CHECK(invoke({"report", e.string()}).code == (std::getenv(cli::kOutDirEnv) ? 0 : 1));
}
