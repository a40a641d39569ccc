#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "storeim/evidence.hpp"
#include "support/calendar_oracle.hpp"

using namespace storeim;

TEST_CASE("unix epoch conversions", "[evidence]") {
  CHECK(ts_from_unix(0, EpochUnit::seconds).to_iso() == "1970-01-01T00:00:00.000Z");

  const auto login = ts_from_unix(1421898314666, EpochUnit::millis);
  CHECK(login.to_iso() == oracle::iso_from_unix_ms(1421898314666));
  CHECK(login.to_iso() == "2015-01-22T03:45:14.666Z");
  CHECK(login.encoding() == TimeEncoding::unix_millis);
  CHECK(login.raw_integer() == 1421898314666);

  const auto transfer = ts_from_unix(1421685822, EpochUnit::seconds);
  CHECK(transfer.to_iso() == oracle::iso_from_unix_ms(1421685822000));
  CHECK(transfer.to_iso() == "2015-01-19T16:43:42.000Z");
}

TEST_CASE("unix conversions reject instants past 9999", "[evidence]") {
  CHECK_NOTHROW(ts_from_unix(253402300799, EpochUnit::seconds));
  CHECK_THROWS_MATCHES(ts_from_unix(253402300800, EpochUnit::seconds), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::OutOfRange; }));
  CHECK_THROWS_AS(ts_from_unix(253402300800000, EpochUnit::millis), Error);
}

TEST_CASE("FILETIME hex decoding", "[evidence]") {
  CHECK(ts_from_filetime_hex("0000000000000000", ByteOrder::big).to_iso() == "1601-01-01T00:00:00.000Z");
  // 369 years of 100-ns ticks between the two epochs, computed by the oracle.
  REQUIRE(oracle::filetime_ticks(1970, 1, 1, 0, 0, 0) == 116444736000000000ULL);
  CHECK(ts_from_filetime_hex("019DB1DED53E8000", ByteOrder::big).unix_millis() == 0);
  CHECK(ts_from_filetime_hex("019db1ded53e8000", ByteOrder::big).unix_millis() == 0);
  CHECK(ts_from_filetime_hex("00803ED5DEB19D01", ByteOrder::little).unix_millis() == 0);

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  CHECK(code_of([] { ts_from_filetime_hex("019DB1DED53E800", ByteOrder::big); }) == Errc::MalformedHex);
  CHECK(code_of([] { ts_from_filetime_hex("019DB1DED53E80GZ", ByteOrder::big); }) == Errc::MalformedHex);
  CHECK(code_of([] { ts_from_filetime_hex("FFFFFFFFFFFFFFFF", ByteOrder::big); }) == Errc::OutOfRange);
}

TEST_CASE("FILETIME keeps sub-millisecond ticks for re-encoding", "[evidence]") {
  const auto t = Timestamp::from_filetime(116444736000000000ULL + 12345);
  CHECK(t.unix_millis() == 1);
  CHECK(t.reencode() == std::to_string(116444736000000000ULL + 12345));
}

TEST_CASE("epoch unit inference threshold", "[evidence]") {
  CHECK(infer_epoch_unit(1421898314666) == EpochUnit::millis);
  CHECK(infer_epoch_unit(1421685822) == EpochUnit::seconds);
  CHECK(infer_epoch_unit(999999999999) == EpochUnit::seconds);
  CHECK(infer_epoch_unit(1000000000000) == EpochUnit::millis);
}

TEST_CASE("ISO text timestamps re-encode to their raw text", "[evidence]") {
  for (const char* s : {"2015-01-22 11:46:02", "1990-01-01 00:00:00", "2015-02-12T17:51:20Z", "1990-02-02",
                        "2013-11-29T10:43:20.828Z", "2015-01-22 11:46:02.5"}) {
    const auto t = Timestamp::from_iso_text(s);
    CHECK(t.reencode() == s);
    CHECK(Timestamp::from_raw(TimeEncoding::iso_text, s) == t);
  }
  CHECK(Timestamp::from_iso_text("2015-01-22 11:46:02").to_iso() == "2015-01-22T11:46:02.000Z");
  CHECK_THROWS_AS(Timestamp::from_iso_text("2015-02-30"), Error);
  CHECK_THROWS_AS(Timestamp::from_iso_text("yesterday"), Error);
  CHECK_THROWS_AS(Timestamp::from_iso_text("2015-01-22 25:00:00"), Error);
}

TEST_CASE("property: unix round-trip and monotonicity", "[evidence][property]") {
  std::mt19937_64 rng(20150119);
  std::uniform_int_distribution<std::uint64_t> secs(0, 253402300799ULL);
  std::uniform_int_distribution<std::uint64_t> millis(0, 253402300799000ULL);
  for (int i = 0; i < 2000; ++i) {
    const auto s = secs(rng);
    const auto t = ts_from_unix(s, EpochUnit::seconds);
    REQUIRE(t.reencode() == std::to_string(s));
    REQUIRE(Timestamp::from_raw(t.encoding(), t.raw_string()) == t);

    const auto a = millis(rng), b = millis(rng);
    const auto ta = ts_from_unix(a, EpochUnit::millis), tb = ts_from_unix(b, EpochUnit::millis);
    REQUIRE(ta.reencode() == std::to_string(a));
    if (a < b) REQUIRE(ta.unix_millis() < tb.unix_millis());
    if (i % 20 == 0) REQUIRE(ta.to_iso() == oracle::iso_from_unix_ms(static_cast<std::int64_t>(a)));
  }
}

TEST_CASE("property: FILETIME and unix seconds agree", "[evidence][property]") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> secs(0, 4102444800ULL);
  for (int i = 0; i < 2000; ++i) {
    const auto s = secs(rng);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llX", static_cast<unsigned long long>(kFiletimeUnixEpochTicks + s * 10000000ULL));
    const auto ft = ts_from_filetime_hex(hex, ByteOrder::big);
    REQUIRE(ft.unix_millis() == ts_from_unix(s, EpochUnit::seconds).unix_millis());
    REQUIRE(ft.reencode() == std::to_string(kFiletimeUnixEpochTicks + s * 10000000ULL));
  }
}

TEST_CASE("provenance invariants", "[evidence]") {
  CHECK_NOTHROW(Provenance("a.db", "facebook", Channel::database));
  CHECK_NOTHROW(Provenance("mem.raw", "carver", Channel::carved, 42));
  CHECK_THROWS_AS(Provenance("", "facebook", Channel::database), Error);
  CHECK_THROWS_AS(Provenance("mem.raw", "carver", Channel::carved), Error);
  CHECK_THROWS_AS(Provenance("a.db", "facebook", Channel::database, 3), Error);
}

TEST_CASE("enum names round-trip", "[evidence]") {
  for (const auto& [kind, name] : kEventKindNames.entries) CHECK(kEventKindNames.parse(name) == kind);
  for (const auto& [ch, name] : kChannelNames.entries) CHECK(kChannelNames.parse(name) == ch);
  CHECK_FALSE(kAppNames.parse("whatsapp").has_value());
}
