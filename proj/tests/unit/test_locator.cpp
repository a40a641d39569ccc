#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "storeim/locator.hpp"
#include "support/temp_dir.hpp"

using namespace storeim;
using namespace storeim::locator;

namespace {

void touch(const std::filesystem::path& p, std::string_view content = "") {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

std::vector<std::pair<std::string, Role>> relative_hits(const ScanResult& res, const std::filesystem::path& root) {
  std::vector<std::pair<std::string, Role>> out;
  for (const auto& a : res.artifacts)
    out.emplace_back(std::filesystem::path(a.path).lexically_relative(root).generic_string(), a.role);
  return out;
}

}  // namespace

TEST_CASE("package id grammar") {
  auto fb = parse_package_id("Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt");
  CHECK(fb.name == "Facebook.Facebook");
  CHECK(fb.version == "1.4.0.9");
  CHECK(fb.arch == Arch::x64);
  CHECK(fb.publisher_id == "8xx8rvfyw5nnt");
  CHECK(fb.form == PackageForm::full);
  CHECK(fb.to_string() == "Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt");

  auto sk = parse_package_id("Microsoft.SkypeApp_2.0.0.5011_x86_kzf8qxf38zg5c");
  CHECK(sk.name == "Microsoft.SkypeApp");
  CHECK(sk.version == "2.0.0.5011");
  CHECK(sk.arch == Arch::x86);
  CHECK(sk.publisher_id == "kzf8qxf38zg5c");
  CHECK(sk.form == PackageForm::full);

  auto fam = parse_package_id("Microsoft.SkypeApp_kzf8qxf38zg5c");
  CHECK(fam.form == PackageForm::family);
  CHECK_FALSE(fam.version.has_value());
  CHECK_FALSE(fam.arch.has_value());

  SECTION("full form reduces to its family") {
    auto reduced = parse_package_id(sk.family());
    CHECK(reduced.name == sk.name);
    CHECK(reduced.publisher_id == sk.publisher_id);
    CHECK(reduced == fam);
  }

  SECTION("garbage") {
    for (std::string_view bad : {"no_underscores_here!", "", "Facebook.Facebook", "Facebook.Facebook_8xx8rvfyw5nn",
                                 "Facebook.Facebook_1.4.0_x64__8xx8rvfyw5nnt", "Facebook.Facebook_1.4.0.9_sparc__8xx8rvfyw5nnt",
                                 "Facebook.Facebook_8XX8RVFYW5NNT", "Faceook.Facebook_8x08rvfvyw5nnt"}) {
      CAPTURE(bad);
      try {
        parse_package_id(bad);
        FAIL("accepted");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedPackageId);
      }
    }
  }
}

TEST_CASE("catalog covers every directory row of the findings summary") {
  // One concrete instance per row, as it would appear under an exported
  // user profile. <Skype name> / <Facebook ID> / cache ids are filled in.
  struct Row {
    const char* path;
    EntryType type;
    Role role;
  };
  const Row rows[] = {
      {"Users/u/AppData/Local/Temp/winstore.log", EntryType::file, Role::WinstoreLog},
      {"Users/u/AppData/Local/Packages/winstore_cw5n1h2txyewy/AC/Temp/winstore.log", EntryType::file, Role::WinstoreLog},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Analytics.sqlite",
       EntryType::file, Role::CacheDb},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/FriendRequest.sqlite",
       EntryType::file, Role::CacheDb},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Friends.sqlite",
       EntryType::file, Role::CacheDb},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Messages.sqlite",
       EntryType::file, Role::CacheDb},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Notifications.sqlite",
       EntryType::file, Role::CacheDb},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Stories.sqlite",
       EntryType::file, Role::CacheDb},
      {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/AC/NetCache/ABCD1234", EntryType::directory,
       Role::NetCacheDir},
      {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/main.db",
       EntryType::file, Role::MainDb},
      {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/shared.xml", EntryType::file,
       Role::SharedXml},
      {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/Chatsync",
       EntryType::directory, Role::ChatsyncDir},
      {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/avatars", EntryType::directory,
       Role::AvatarsDir},
      {"Users/u/Downloads/Microsoft.SkypeApp_kzf8qxf38zg5c/App", EntryType::directory, Role::DownloadsDir},
      {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/ReceiveStorage",
       EntryType::directory, Role::ReceiveStorage},
      {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/SendingStorage",
       EntryType::directory, Role::SendingStorage},
      {"Users/u/AppData/Local/Packages/microsoft.windowscommunicationsapps_8wekyb3d8bbwe/LocalState/Indexed/LiveComm/"
       "6e4f9dff0b76dd9b/120712-0049/People/AddressBook/contact.appcontent-ms",
       EntryType::file, Role::AddressBookAppcontent},
      {"Users/u/AppData/Local/Packages/microsoft.windowscommunicationsapps_8wekyb3d8bbwe/LocalState/Indexed/LiveComm/"
       "6e4f9dff0b76dd9b/120712-0049/People/Me/me.appcontent-ms",
       EntryType::file, Role::AddressBookAppcontent},
      {"Program Files/WindowsApps/Deleted/Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt", EntryType::directory,
       Role::DeletedInstallDir},
  };
  for (const auto& row : rows) {
    CAPTURE(row.path);
    auto hits = classify(components(row.path), row.type, row.path);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].role == row.role);
  }
}

TEST_CASE("windows separators and case") {
  const std::string p =
      R"(C:\Users\u\AppData\Local\packages\MICROSOFT.SKYPEAPP_kzf8qxf38zg5c\localstate\harold.cornwall1\MAIN.DB)";
  auto hits = classify(components(p), EntryType::file, p);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].role == Role::MainDb);
  CHECK(hits[0].account == "harold.cornwall1");
  REQUIRE(hits[0].package);
  CHECK(hits[0].package->publisher_id == "kzf8qxf38zg5c");
}

TEST_CASE("facebook id segment must be numeric") {
  const std::string p = "Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/someone/DB/Messages.sqlite";
  CHECK(classify(components(p), EntryType::file, p).empty());
}

TEST_CASE("scan_tree") {
  test::TempDir tmp("locator");
  const auto& root = tmp.path();

  SECTION("empty directory") {
    auto res = scan_tree(root);
    CHECK(res.artifacts.empty());
    CHECK(res.warnings.empty());
  }

  SECTION("deleted install dir") {
    std::filesystem::create_directories(root / "WindowsApps/Deleted/Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt");
    auto res = scan_tree(root);
    REQUIRE(res.artifacts.size() == 1);
    CHECK(res.artifacts[0].role == Role::DeletedInstallDir);
    CHECK(res.artifacts[0].package->version == "1.4.0.9");
  }

  SECTION("mixed tree, sorted and stable") {
    const auto pkgs = root / "Users/u/AppData/Local/Packages";
    touch(pkgs / "Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/shared.xml");
    touch(pkgs / "Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/main.db");
    touch(pkgs / "Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/config.xml");
    touch(pkgs / "Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Messages.sqlite");
    touch(pkgs / "Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/unrelated.txt");
    touch(root / "Users/u/Downloads/photo.jpg:Zone.Identifier", "[ZoneTransfer]\r\nZoneId=3\r\n");
    touch(root / "Users/u/Downloads/notes.txt");

    auto first = scan_tree(root);
    auto second = scan_tree(root);
    CHECK(first.artifacts == second.artifacts);

    const std::vector<std::pair<std::string, Role>> expected = {
        {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState", Role::LocalStateDir},
        {"Users/u/AppData/Local/Packages/Facebook.Facebook_8xx8rvfyw5nnt/LocalState/100004911219827/DB/Messages.sqlite",
         Role::CacheDb},
        {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState", Role::LocalStateDir},
        {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/config.xml",
         Role::ConfigXml},
        {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/adam.thomson11/main.db",
         Role::MainDb},
        {"Users/u/AppData/Local/Packages/Microsoft.SkypeApp_kzf8qxf38zg5c/LocalState/shared.xml", Role::SharedXml},
        {"Users/u/Downloads/photo.jpg:Zone.Identifier", Role::ZoneIdentifierSidecar},
    };
    CHECK(relative_hits(first, root) == expected);
    for (const auto& a : first.artifacts) CHECK(std::filesystem::exists(a.path));
  }

  SECTION("missing root") {
    try {
      scan_tree(root / "nope");
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::RootUnreadable);
    }
  }
}

TEST_CASE("zone identifier") {
  CHECK(read_zone_identifier("[ZoneTransfer]\r\nZoneId=3\r\n", "a").zone_id == 3);
  CHECK(read_zone_identifier("[ZoneTransfer]\r\nZoneId=0\r\n", "a").zone_id == 0);
  CHECK(read_zone_identifier("[zonetransfer]\nzoneid = 2\nReferrerUrl=x\n", "a").zone_id == 2);
  auto m = read_zone_identifier("[ZoneTransfer]\r\nZoneId=3\r\n", "dl/f.jpg:Zone.Identifier");
  CHECK(m.source_path == "dl/f.jpg:Zone.Identifier");

  std::string utf16 = "\xFF\xFE";
  for (char c : std::string_view("[ZoneTransfer]\r\nZoneId=3\r\n")) {
    utf16 += c;
    utf16 += '\0';
  }
  CHECK(read_zone_identifier(utf16, "w").zone_id == 3);

  for (std::string_view bad : {"random bytes", "[Other]\nZoneId=3\n", "[ZoneTransfer]\nHostUrl=x\n",
                               "[ZoneTransfer]\nZoneId=7\n"}) {
    CAPTURE(bad);
    try {
      read_zone_identifier(bad, "x");
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotZoneTransfer);
    }
  }
  CHECK(zone_sidecar_subject("d/f.jpg:Zone.Identifier") == "d/f.jpg");
  CHECK(zone_sidecar_subject("d/f.jpg.Zone.Identifier") == "d/f.jpg");
}
