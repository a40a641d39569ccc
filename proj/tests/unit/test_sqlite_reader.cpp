#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "storeim/forge/sqlite_writer.hpp"
#include "storeim/sqlite_reader.hpp"
#include "support/temp_dir.hpp"

using namespace storeim;
namespace fs = std::filesystem;

TEST_CASE("sqlite reader decodes every storage class", "[sqlite]") {
  test::TempDir dir("sqlite_types");
  const auto path = dir.path() / "types.db";
  {
    forge::SqliteWriter w(path);
    w.exec("CREATE TABLE t (id INTEGER PRIMARY KEY, small INTEGER, big INTEGER, neg INTEGER, r REAL, s TEXT, b BLOB, n TEXT)");
    w.insert("INSERT INTO t (id, small, big, neg, r, s, b, n) VALUES (?,?,?,?,?,?,X'00FF10',?)",
             {std::int64_t{7}, std::int64_t{1}, std::int64_t{1421898314666}, std::int64_t{-300}, 0.000848054885,
              std::string("Kelvin Sky"), std::monostate{}});
  }
  const auto db = sqlite::Database::open(path);
  CHECK_FALSE(db.wal_present());
  const auto t = db.read_table("T");
  REQUIRE(t.rows.size() == 1);
  const auto& row = t.rows[0];
  CHECK(row.rowid == 7);
  CHECK(sqlite::as_int(t.get(row, "id")) == 7);
  CHECK(sqlite::as_int(t.get(row, "small")) == 1);
  CHECK(sqlite::as_int(t.get(row, "big")) == 1421898314666);
  CHECK(sqlite::as_int(t.get(row, "neg")) == -300);
  CHECK(std::get<double>(t.get(row, "r")) == 0.000848054885);
  CHECK(sqlite::as_text(t.get(row, "s")) == "Kelvin Sky");
  CHECK(std::get<sqlite::Blob>(t.get(row, "b")).bytes == std::vector<std::uint8_t>{0x00, 0xff, 0x10});
  CHECK(sqlite::is_null(t.get(row, "n")));
  CHECK(sqlite::is_null(t.get(row, "no_such_column")));
}

TEST_CASE("sqlite reader follows interior pages and overflow chains", "[sqlite]") {
  test::TempDir dir("sqlite_big");
  const auto path = dir.path() / "big.db";
  std::mt19937 rng(1);
  std::vector<std::string> bodies;
  {
    forge::SqliteWriter w(path);
    w.exec("PRAGMA page_size=1024");
    w.exec("CREATE TABLE messages (id TEXT, body TEXT)");
    for (int i = 0; i < 600; ++i) {
      std::string body(static_cast<std::size_t>(rng() % (i % 50 == 0 ? 9000 : 200)) + 1, 'a');
      for (auto& c : body) c = static_cast<char>('a' + rng() % 26);
      bodies.push_back(body);
      w.insert("INSERT INTO messages VALUES (?, ?)", {std::string("m_mid.") + std::to_string(i), body});
    }
  }
  const auto db = sqlite::Database::open(path);
  CHECK(db.page_size() == 1024);
  const auto t = db.read_table("messages");
  CHECK(t.warnings.empty());
  REQUIRE(t.rows.size() == bodies.size());
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    REQUIRE(t.rows[i].rowid == static_cast<std::int64_t>(i + 1));
    REQUIRE(sqlite::as_text(t.get(t.rows[i], "body")) == bodies[i]);
  }
}

TEST_CASE("sqlite reader tolerates added columns and quoted names", "[sqlite]") {
  test::TempDir dir("sqlite_alter");
  const auto path = dir.path() / "alter.db";
  {
    forge::SqliteWriter w(path);
    w.exec("CREATE TABLE \"Weird Table\" ([first col] TEXT, `second` INTEGER, PRIMARY KEY(`second`))");
    w.insert("INSERT INTO \"Weird Table\" VALUES (?, ?)", {std::string("x"), std::int64_t{5}});
    w.exec("ALTER TABLE \"Weird Table\" ADD COLUMN later TEXT");
  }
  const auto t = sqlite::Database::open(path).read_table("weird table");
  REQUIRE(t.columns == std::vector<std::string>{"first col", "second", "later"});
  REQUIRE(t.rows.size() == 1);
  CHECK(sqlite::as_text(t.get(t.rows[0], "first col")) == "x");
  CHECK(sqlite::as_int(t.get(t.rows[0], "second")) == 5);
  CHECK(sqlite::is_null(t.get(t.rows[0], "later")));
}

TEST_CASE("sqlite reader errors", "[sqlite]") {
  test::TempDir dir("sqlite_err");
  const auto junk = dir.path() / "junk.db";
  std::ofstream(junk) << "definitely not a database, but long enough to have a header region......"
                         "..............................................";
  try {
    sqlite::Database::open(junk);
    FAIL("expected NotSqlite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotSqlite);
  }

  const auto path = dir.path() / "ok.db";
  { forge::SqliteWriter w(path); w.exec("CREATE TABLE a (x)"); }
  const auto db = sqlite::Database::open(path);
  try {
    db.read_table("analytics_logs");
    FAIL("expected MissingTable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingTable);
    CHECK(std::string(e.what()).find("analytics_logs") != std::string::npos);
  }

  std::ofstream(path.string() + "-wal") << "wal";
  CHECK(sqlite::Database::open(path).wal_present());
}

TEST_CASE("sqlite reader survives corrupted pages", "[sqlite]") {
  test::TempDir dir("sqlite_corrupt");
  const auto path = dir.path() / "c.db";
  {
    forge::SqliteWriter w(path);
    w.exec("PRAGMA page_size=512");
    w.exec("CREATE TABLE t (v TEXT)");
    for (int i = 0; i < 200; ++i) w.insert("INSERT INTO t VALUES (?)", {std::string(40, 'q')});
  }
  std::ifstream in(path, std::ios::binary);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto copy = bytes;
    for (int k = 0; k < 8; ++k) copy[512 + rng() % (copy.size() - 512)] = static_cast<std::uint8_t>(rng());
    try {
      const auto db = sqlite::Database::from_bytes(copy, "corrupt");
      if (db.has_table("t")) (void)db.read_table("t");
    } catch (const Error&) {
    }
  }
  SUCCEED("no crash on randomly corrupted pages");
}
