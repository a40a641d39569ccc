#pragma once

// Thin RAII wrapper over libsqlite3 used only to synthesize fixtures.

#include <sqlite3.h>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "storeim/error.hpp"

namespace storeim::forge {

using SqlValue = std::variant<std::monostate, std::int64_t, double, std::string>;

class SqliteWriter {
 public:
  explicit SqliteWriter(const std::filesystem::path& path) {
    sqlite3* raw = nullptr;
    if (sqlite3_open_v2(path.string().c_str(), &raw, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr) != SQLITE_OK) {
      std::string msg = raw ? sqlite3_errmsg(raw) : "out of memory";
      sqlite3_close(raw);
      throw Error(Errc::Io, "cannot create " + path.string() + ": " + msg);
    }
    db_.reset(raw);
    exec("PRAGMA journal_mode=DELETE");
    exec("BEGIN");
  }

  SqliteWriter(const SqliteWriter&) = delete;
  SqliteWriter& operator=(const SqliteWriter&) = delete;
  SqliteWriter(SqliteWriter&&) = default;
  SqliteWriter& operator=(SqliteWriter&&) = default;

  ~SqliteWriter() {
    if (db_) sqlite3_exec(db_.get(), "COMMIT", nullptr, nullptr, nullptr);
  }

  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_.get(), sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      throw Error(Errc::Io, "sqlite: " + msg + " in: " + sql);
    }
  }

  void insert(const std::string& sql, const std::vector<SqlValue>& params) {
    sqlite3_stmt* stmt = nullptr;
    if (sqlite3_prepare_v2(db_.get(), sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
      throw Error(Errc::Io, std::string("sqlite prepare: ") + sqlite3_errmsg(db_.get()));
    std::unique_ptr<sqlite3_stmt, decltype(&sqlite3_finalize)> guard(stmt, &sqlite3_finalize);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const int idx = static_cast<int>(i + 1);
      const auto& p = params[i];
      if (std::holds_alternative<std::monostate>(p)) {
        sqlite3_bind_null(stmt, idx);
      } else if (const auto* v = std::get_if<std::int64_t>(&p)) {
        sqlite3_bind_int64(stmt, idx, *v);
      } else if (const auto* d = std::get_if<double>(&p)) {
        sqlite3_bind_double(stmt, idx, *d);
      } else {
        const auto& s = std::get<std::string>(p);
        sqlite3_bind_text(stmt, idx, s.data(), static_cast<int>(s.size()), SQLITE_TRANSIENT);
      }
    }
    if (sqlite3_step(stmt) != SQLITE_DONE)
      throw Error(Errc::Io, std::string("sqlite step: ") + sqlite3_errmsg(db_.get()));
  }

 private:
  struct Closer {
    void operator()(sqlite3* db) const { sqlite3_close(db); }
  };
  std::unique_ptr<sqlite3, Closer> db_;
};

}  // namespace storeim::forge
