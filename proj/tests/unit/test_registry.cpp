#include <catch2/catch_amalgamated.hpp>

#include "storeim/forge/case_data.hpp"
#include "storeim/registry.hpp"
#include "support/calendar_oracle.hpp"

using namespace storeim;
using namespace storeim::registry;
namespace known = storeim::case_data;

namespace {

std::string hex_list_le(std::uint64_t v) {
  std::string out;
  char buf[4];
  for (int i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", static_cast<unsigned>((v >> (8 * i)) & 0xFF));
    if (i) out += ',';
    out += buf;
  }
  return out;
}

const std::string kFbKey = std::string(known::kRegistryRepositoryBase) +
                           "\\Facebook.Facebook_8xx8rvfyw5nnt\\Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt";

std::string fb_export(const std::string& install_value) {
  return "Windows Registry Editor Version 5.00\r\n\r\n[" + kFbKey + "]\r\n\"InstallTime\"=" + install_value +
         "\r\n\"PackageID\"=\"Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt\"\r\n\r\n";
}

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no throw");
  return Errc::Io;
}

}  // namespace

TEST_CASE("reg export parsing") {
  SECTION("minimal qword") {
    auto exp = parse_reg_export("Windows Registry Editor Version 5.00\n\n[HKEY_USERS\\S\\K]\n\"T\"=hex(b):01,02,03,04,05,06,07,08\n");
    REQUIRE(exp.keys.size() == 1);
    REQUIRE(exp.keys[0].values.size() == 1);
    const auto& v = exp.keys[0].values[0];
    CHECK(v.kind == ValueKind::qword);
    CHECK(v.bytes == std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(exp.errors.empty());
  }

  SECTION("REGEDIT4 and value shapes") {
    auto exp = parse_reg_export(
        "REGEDIT4\n[A\\B]\n@=\"default\"\n\"Quote\\\"d\"=\"C:\\\\dir\\\\f.txt\"\n\"D\"=dword:0000abcd\n"
        "\"Multi\"=hex(7):41,00,00,00\n\"Raw\"=hex:\n; comment\n[a\\b]\n\"Later\"=\"x\"\n");
    REQUIRE(exp.keys.size() == 1);  // [a\b] merges into [A\B]
    const auto& k = exp.keys[0];
    REQUIRE(k.values.size() == 6);
    CHECK(k.value("")->text == "default");
    CHECK(k.value("quote\"d")->text == "C:\\dir\\f.txt");
    CHECK(k.value("D")->dword() == 0xabcdu);
    CHECK(k.value("Multi")->hex_type == 7);
    CHECK(k.value("Multi")->kind == ValueKind::binary);
    CHECK(k.value("Raw")->bytes.empty());
    CHECK(exp.find_key("a\\B") == &k);
  }

  SECTION("continuation lines reassemble bytes in order") {
    std::vector<std::uint8_t> bytes;
    std::string data = "\"Blob\"=hex:";
    for (int i = 0; i < 100; ++i) {
      bytes.push_back(static_cast<std::uint8_t>(i * 37 + 11));
      char buf[3];
      std::snprintf(buf, sizeof buf, "%02x", bytes.back());
      data += buf;
      if (i != 99) data += (i % 20 == 19) ? ",\\\r\n  " : ",";
    }
    auto exp = parse_reg_export("Windows Registry Editor Version 5.00\r\n\r\n[K]\r\n" + data + "\r\n");
    REQUIRE(exp.keys.at(0).values.size() == 1);
    CHECK(exp.keys[0].values[0].bytes == bytes);
    CHECK(exp.errors.empty());
  }

  SECTION("syntax errors carry line numbers") {
    auto exp = parse_reg_export("REGEDIT4\n\"orphan\"=\"x\"\n[K]\n\"bad\"=dword:12\n\"ok\"=\"y\"\njunk\n");
    REQUIRE(exp.errors.size() == 3);
    CHECK(exp.errors[0].line == 2);
    CHECK(exp.errors[1].line == 4);
    CHECK(exp.errors[2].line == 6);
    CHECK(exp.keys.at(0).values.size() == 1);
  }

  SECTION("utf-16 export") {
    const std::string text = "Windows Registry Editor Version 5.00\r\n\r\n[K\\caf\xC3\xA9]\r\n\"N\"=\"v\"\r\n";
    std::string raw = "\xFF\xFE";
    for (std::size_t i = 0; i < text.size(); ++i) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (c == 0xC3) {  // e-acute, U+00E9
        raw += '\xE9';
        raw += '\0';
        ++i;
        continue;
      }
      raw += static_cast<char>(c);
      raw += '\0';
    }
    auto exp = parse_reg_export(raw);
    REQUIRE(exp.keys.size() == 1);
    CHECK(exp.keys[0].path == "K\\caf\xC3\xA9");
  }

  SECTION("not an export") {
    CHECK(code_of([] { parse_reg_export("hello\n[K]\n"); }) == Errc::NotRegExport);
    CHECK(code_of([] { parse_reg_export(""); }) == Errc::NotRegExport);
  }
}

TEST_CASE("reg export round trip") {
  RegExport exp;
  exp.header = std::string(kHeader5);
  RegKey k{"HKEY_USERS\\S\\Some \"Key\"", {}};
  RegValue s{"Path", ValueKind::string, "C:\\Users\\x\\\"q\".docx", {}, -1};
  RegValue d{"Count", ValueKind::dword, {}, {0x78, 0x56, 0x34, 0x12}, -1};
  RegValue q{"When", ValueKind::qword, {}, {0, 0xdc, 0x8f, 0xe8, 4, 0x34, 0xd0, 1}, 0xb};
  RegValue b{"", ValueKind::binary, {}, {}, -1};
  for (int i = 0; i < 300; ++i) b.bytes.push_back(static_cast<std::uint8_t>(i));
  RegValue m{"M", ValueKind::binary, {}, {0x41, 0, 0, 0}, 7};
  k.values = {s, d, q, b, m};
  exp.keys.push_back(k);
  exp.keys.push_back({"HKEY_USERS\\Empty", {}});

  const auto text = to_reg_text(exp);
  const auto back = parse_reg_export(text);
  CHECK(back.errors.empty());
  CHECK(back.keys == exp.keys);
  CHECK(to_reg_text(back) == text);
  for (auto line : locator::detail::split(text, '\n')) CHECK(line.size() <= 81);
}

TEST_CASE("install time") {
  const auto pkg = locator::parse_package_id("Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt");
  const std::uint64_t ticks = oracle::filetime_ticks(2015, 1, 19, 16, 28, 8);

  SECTION("little-endian binary") {
    auto exp = parse_reg_export(fb_export("hex(b):" + hex_list_le(ticks)));
    auto rec = find_install_time(exp, pkg);
    CHECK(rec.install_time.to_iso() == "2015-01-19T16:28:08.000Z");
    CHECK(rec.interpretation == Interpretation::little_endian_binary);
    CHECK(rec.plausible);
    CHECK(rec.key_path.ends_with("\\Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt"));
    CHECK(rec.key_path.find("Facebook.Facebook_8xx8rvfyw5nnt") != std::string::npos);
    CHECK(rec.warnings.empty());
    CHECK(rec.package == pkg);

    SECTION("family form finds the same key") {
      auto by_family = find_install_time(exp, locator::parse_package_id(pkg.family()));
      CHECK(by_family.install_time == rec.install_time);
    }
  }

  SECTION("big-endian displayed hex text") {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llX", static_cast<unsigned long long>(ticks));
    auto rec = find_install_time(parse_reg_export(fb_export("\"" + std::string(hex) + "\"")), pkg);
    CHECK(rec.install_time.to_iso() == "2015-01-19T16:28:08.000Z");
    CHECK(rec.interpretation == Interpretation::big_endian_hex);
  }

  SECTION("epoch value falls outside the window under both orders") {
    auto rec = find_install_time(parse_reg_export(fb_export("\"019DB1DED53E8000\"")), pkg);
    CHECK(rec.install_time.to_iso() == "1970-01-01T00:00:00.000Z");
    CHECK(rec.interpretation == Interpretation::big_endian_hex);
    CHECK_FALSE(rec.plausible);
    CHECK(rec.warnings.size() == 1);
  }

  SECTION("both readings plausible") {
    auto exp = parse_reg_export(fb_export("hex(b):01,d0,00,00,00,00,d1,01"));
    CHECK(code_of([&] { find_install_time(exp, pkg); }) == Errc::AmbiguousInterpretation);
  }

  SECTION("misspelled family segment still resolves, with a warning") {
    std::string text = fb_export("hex(b):" + hex_list_le(ticks));
    const auto at = text.find("\\Facebook.Facebook_8xx8");
    text.replace(at, 18, "\\Faceook.Facebook_");
    auto rec = find_install_time(parse_reg_export(text), pkg);
    CHECK(rec.install_time.to_iso() == "2015-01-19T16:28:08.000Z");
    CHECK(rec.warnings.size() == 1);
  }

  SECTION("single-underscore branch name") {
    const std::string key = std::string(known::kRegistryRepositoryBase) +
                            "\\Microsoft.SkypeApp_kzf8qxf38zg5c\\Microsoft.SkypeApp_2.0.0.5011_x86_kzf8qxf38zg5c";
    auto exp = parse_reg_export("REGEDIT4\n[" + key + "]\n\"InstallTime\"=hex(b):" + hex_list_le(ticks) + "\n");
    auto rec = find_install_time(exp, locator::parse_package_id("Microsoft.SkypeApp_kzf8qxf38zg5c"));
    CHECK(rec.package.version == "2.0.0.5011");
  }

  SECTION("missing key") {
    auto exp = parse_reg_export(fb_export("hex(b):" + hex_list_le(ticks)));
    auto other = locator::parse_package_id("Microsoft.SkypeApp_2.0.0.5011_x86__kzf8qxf38zg5c");
    CHECK(code_of([&] { find_install_time(exp, other); }) == Errc::PackageKeyNotFound);
    auto other_version = locator::parse_package_id("Facebook.Facebook_1.4.0.10_x64__8xx8rvfyw5nnt");
    CHECK(code_of([&] { find_install_time(exp, other_version); }) == Errc::PackageKeyNotFound);
  }
}

TEST_CASE("persisted storage items") {
  const std::string base(known::kRegistryPersistedBase);
  auto item_key = [&](const std::string& guid, const std::string& values) {
    return "[" + base + "\\" + guid + "]\r\n" + values + "\r\n";
  };
  const auto t1 = oracle::filetime_ticks(2015, 1, 20, 10, 0, 5);
  const auto t2 = oracle::filetime_ticks(2015, 1, 20, 10, 3, 41);
  const std::string text =
      "Windows Registry Editor Version 5.00\r\n\r\n[" + base + "]\r\n\r\n" +
      item_key("{4F1C2E0A-93B1-4C5E-8D21-6A0B3C9E7F11}",
               "\"FilePath\"=\"C:\\\\Users\\\\Suspect\\\\Documents\\\\SuspectToVictim.docx\"\r\n\"LastUpdatedTime\"=hex(b):" +
                   hex_list_le(t1)) +
      item_key("9a7b3c21-0d4e-4f8a-b2c6-1e5d7f9a0b3c",
               "\"FilePath\"=\"C:\\\\Users\\\\Suspect\\\\Documents\\\\SuspectToVictim.zip\"\r\n\"LastUpdatedTime\"=hex(b):" +
                   hex_list_le(t2)) +
      item_key("{00000000-0000-0000-0000-000000000001}", "\"LastUpdatedTime\"=hex(b):" + hex_list_le(t2)) +
      item_key("not-a-guid", "\"FilePath\"=\"x\"");

  auto res = find_persisted_items(parse_reg_export(text));
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].file_path.ends_with("SuspectToVictim.docx"));
  CHECK(res.records[0].last_updated.to_iso() == "2015-01-20T10:00:05.000Z");
  CHECK(res.records[0].package_family == "Microsoft.SkypeApp_kzf8qxf38zg5c");
  CHECK(res.records[1].file_path.ends_with("SuspectToVictim.zip"));
  CHECK(res.records[1].last_updated.to_iso() == "2015-01-20T10:03:41.000Z");
  CHECK(res.warnings.size() == 2);

  CHECK(find_persisted_items(parse_reg_export("REGEDIT4\n[HKEY_USERS\\X]\n")).records.empty());
}

TEST_CASE("guid syntax") {
  CHECK(is_guid("{4F1C2E0A-93B1-4C5E-8D21-6A0B3C9E7F11}"));
  CHECK(is_guid("4f1c2e0a-93b1-4c5e-8d21-6a0b3c9e7f11"));
  CHECK_FALSE(is_guid("{4F1C2E0A-93B1-4C5E-8D21-6A0B3C9E7F11"));
  CHECK_FALSE(is_guid("4F1C2E0A93B14C5E8D216A0B3C9E7F11"));
  CHECK_FALSE(is_guid("{4F1C2E0A-93B1-4C5E-8D21-6A0B3C9E7F1G}"));
}

TEST_CASE("install time sweep over every repository key") {
  const auto t_fb = oracle::filetime_ticks(2015, 1, 19, 16, 28, 8);
  const auto t_sk = oracle::filetime_ticks(2015, 1, 18, 9, 12, 44);
  char sk_hex[17];
  std::snprintf(sk_hex, sizeof sk_hex, "%016llX", static_cast<unsigned long long>(t_sk));
  const std::string base(known::kRegistryRepositoryBase);
  const std::string text =
      fb_export("hex(b):" + hex_list_le(t_fb)) +
      "[" + base + "\\Microsoft.SkypeApp_kzf8qxf38zg5c]\r\n\"InstallTime\"=hex(b):" + hex_list_le(t_sk) + "\r\n\r\n" +
      "[" + base + "\\Microsoft.SkypeApp_kzf8qxf38zg5c\\Microsoft.SkypeApp_3.2.1.0_x86__kzf8qxf38zg5c]\r\n" +
      "\"InstallTime\"=\"" + sk_hex + "\"\r\n\r\n" +
      "[" + base + "\\Contoso.Ambiguous_abcdefghjkmnp\\Contoso.Ambiguous_1.0.0.0_x64__abcdefghjkmnp]\r\n" +
      "\"InstallTime\"=hex(b):01,d0,00,00,00,00,d1,01\r\n\r\n" +
      "[" + base + "\\Contoso.NoTime_abcdefghjkmnp\\Contoso.NoTime_1.0.0.0_x64__abcdefghjkmnp]\r\n" +
      "\"PackageID\"=\"Contoso.NoTime_1.0.0.0_x64__abcdefghjkmnp\"\r\n\r\n";

  const auto res = find_install_times(parse_reg_export(text));
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].package.name == "Facebook.Facebook");
  CHECK(res.records[0].install_time.to_iso() == oracle::iso_from_unix_ms(1421684888000LL));
  CHECK(res.records[0].interpretation == Interpretation::little_endian_binary);
  CHECK(res.records[1].package.version == "3.2.1.0");
  CHECK(res.records[1].install_time.to_iso() == "2015-01-18T09:12:44.000Z");
  CHECK(res.records[1].interpretation == Interpretation::big_endian_hex);
  // The family-level key carries a value but names no full package; the
  // ambiguous key is reported rather than guessed.
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("Contoso.Ambiguous") != std::string::npos);
}
