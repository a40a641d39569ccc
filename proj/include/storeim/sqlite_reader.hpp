#pragma once

// Read-only reader for the SQLite 3 on-disk format (table b-trees only).
//
// The file is loaded into memory once and never written back. A companion
// "-wal" file is detected but deliberately not replayed: extractors report
// it so the examiner can decide how to treat uncommitted state.
//
// Layout reference: https://www.sqlite.org/fileformat2.html

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "storeim/error.hpp"

namespace storeim::sqlite {

inline constexpr std::string_view kMagic{"SQLite format 3\0", 16};

struct Blob {
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const Blob&, const Blob&) = default;
};

using Value = std::variant<std::monostate, std::int64_t, double, std::string, Blob>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Text rendering used for "numeric-text" fields: integers in decimal, text
/// as-is, NULL as nullopt.
inline std::optional<std::string> as_text(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    std::string s = std::to_string(*d);
    return s;
  }
  if (const auto* b = std::get_if<Blob>(&v)) return std::string(b->bytes.begin(), b->bytes.end());
  return std::nullopt;
}

/// Integer view: integers as-is, reals truncated, decimal text parsed.
inline std::optional<std::int64_t> as_int(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return static_cast<std::int64_t>(*d);
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (s->empty()) return std::nullopt;
    std::size_t pos = 0;
    try {
      const long long r = std::stoll(*s, &pos);
      if (pos == s->size()) return r;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

inline std::optional<double> as_real(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* s = std::get_if<std::string>(&v)) {
    try {
      std::size_t pos = 0;
      const double r = std::stod(*s, &pos);
      if (pos == s->size()) return r;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

struct Row {
  std::int64_t rowid{0};
  std::vector<Value> values;
};

/// Rows of one table plus its declared column names. Lookups are by name,
/// case-insensitively, so schema drift between app versions is tolerated.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::string> warnings;

  std::optional<std::size_t> column_index(std::string_view col) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto& c = columns[i];
      if (c.size() == col.size() &&
          std::equal(c.begin(), c.end(), col.begin(), [](char a, char b) {
            return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
          }))
        return i;
    }
    return std::nullopt;
  }

  bool has_column(std::string_view col) const { return column_index(col).has_value(); }

  /// Null when the column is absent or the row is short.
  const Value& get(const Row& row, std::string_view col) const {
    static const Value kNull{};
    const auto idx = column_index(col);
    if (!idx || *idx >= row.values.size()) return kNull;
    return row.values[*idx];
  }
};

struct SchemaEntry {
  std::string type;  // "table", "index", ...
  std::string name;
  std::string tbl_name;
  std::uint32_t rootpage{0};
  std::string sql;
};

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

struct ColumnDecl {
  std::string name;
  bool rowid_alias{false};
};

// Splits the body of a CREATE TABLE statement on top-level commas.
inline std::vector<std::string> split_definitions(std::string_view body) {
  std::vector<std::string> parts;
  int depth = 0;
  char quote = 0;
  std::string cur;
  for (char c : body) {
    if (quote) {
      cur += c;
      if (c == quote || (quote == '[' && c == ']')) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'' || c == '`' || c == '[') {
      quote = c;
      cur += c;
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// First identifier of a column definition, unquoted; the remainder is returned
// through `rest`.
inline std::string take_identifier(std::string_view def, std::string_view& rest) {
  def = trim(def);
  if (def.empty()) {
    rest = {};
    return {};
  }
  const char open = def.front();
  if (open == '"' || open == '`' || open == '[' || open == '\'') {
    const char close = open == '[' ? ']' : open;
    std::string name;
    std::size_t i = 1;
    for (; i < def.size(); ++i) {
      if (def[i] == close) {
        if (close != ']' && i + 1 < def.size() && def[i + 1] == close) {
          name += close;
          ++i;
          continue;
        }
        break;
      }
      name += def[i];
    }
    rest = i < def.size() ? def.substr(i + 1) : std::string_view{};
    return name;
  }
  std::size_t i = 0;
  while (i < def.size() && !std::isspace(static_cast<unsigned char>(def[i])) && def[i] != '(') ++i;
  rest = def.substr(i);
  return std::string(def.substr(0, i));
}

inline std::vector<ColumnDecl> parse_create_table(std::string_view sql, bool& without_rowid) {
  without_rowid = false;
  const auto open = sql.find('(');
  const auto close = sql.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return {};
  const std::string tail = upper(sql.substr(close + 1));
  without_rowid = tail.find("WITHOUT") != std::string::npos && tail.find("ROWID") != std::string::npos;

  std::vector<ColumnDecl> cols;
  std::vector<bool> integer_typed;
  std::vector<std::string> table_pk;
  for (const auto& def : split_definitions(sql.substr(open + 1, close - open - 1))) {
    std::string_view rest;
    std::string_view trimmed = trim(def);
    const std::string head = upper(trimmed.substr(0, std::min<std::size_t>(trimmed.size(), 12)));
    if (head.rfind("PRIMARY", 0) == 0) {
      const auto lp = trimmed.find('(');
      const auto rp = trimmed.rfind(')');
      if (lp != std::string_view::npos && rp != std::string_view::npos && rp > lp) {
        for (const auto& part : split_definitions(trimmed.substr(lp + 1, rp - lp - 1))) {
          std::string_view ignored;
          table_pk.push_back(take_identifier(part, ignored));
        }
      }
      continue;
    }
    const bool table_constraint = head.rfind("UNIQUE", 0) == 0 || head.rfind("CHECK", 0) == 0 ||
                                  head.rfind("FOREIGN", 0) == 0 || head.rfind("CONSTRAINT", 0) == 0;
    if (table_constraint) continue;
    ColumnDecl col;
    col.name = take_identifier(trimmed, rest);
    if (col.name.empty()) continue;
    const std::string spec = upper(rest);
    // Only a column whose declared type is exactly INTEGER can alias the rowid.
    std::string_view type_part = trim(spec);
    const bool integer_type = type_part.rfind("INTEGER", 0) == 0 &&
                              (type_part.size() == 7 || !std::isalnum(static_cast<unsigned char>(type_part[7])));
    const auto pk = spec.find("PRIMARY KEY");
    col.rowid_alias = integer_type && pk != std::string::npos && spec.find("DESC", pk) == std::string::npos;
    integer_typed.push_back(integer_type);
    cols.push_back(std::move(col));
  }
  if (table_pk.size() == 1) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (iequals(cols[i].name, table_pk[0]) && integer_typed[i]) cols[i].rowid_alias = true;
  }
  return cols;
}

}  // namespace detail

class Database {
 public:
  static Database open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Database db(std::move(bytes), path.string());
    std::error_code ec;
    db.wal_present_ = std::filesystem::exists(path.string() + "-wal", ec);
    return db;
  }

  static Database from_bytes(std::vector<std::uint8_t> bytes, std::string label = "<memory>") {
    return Database(std::move(bytes), std::move(label));
  }

  const std::string& label() const noexcept { return label_; }
  std::uint32_t page_size() const noexcept { return page_size_; }
  bool wal_present() const noexcept { return wal_present_; }
  const std::vector<SchemaEntry>& schema() const noexcept { return schema_; }

  const SchemaEntry* find_table(std::string_view name) const {
    for (const auto& e : schema_)
      if (e.type == "table" && detail::iequals(e.name, name)) return &e;
    return nullptr;
  }

  bool has_table(std::string_view name) const { return find_table(name) != nullptr; }

  Table read_table(std::string_view name) const {
    const SchemaEntry* entry = find_table(name);
    if (!entry) throw Error(Errc::MissingTable, std::string(name) + " not present in " + label_);
    bool without_rowid = false;
    const auto decls = detail::parse_create_table(entry->sql, without_rowid);
    if (without_rowid)
      throw Error(Errc::CorruptDatabase, "WITHOUT ROWID table " + entry->name + " is not supported");

    Table t;
    t.name = entry->name;
    for (const auto& d : decls) t.columns.push_back(d.name);
    std::vector<RawCell> cells;
    walk_table(entry->rootpage, cells, t.warnings);
    t.rows.reserve(cells.size());
    for (auto& cell : cells) {
      Row row;
      row.rowid = cell.rowid;
      try {
        row.values = decode_record(cell.payload);
      } catch (const Error& e) {
        t.warnings.push_back("rowid " + std::to_string(cell.rowid) + ": " + e.what());
        continue;
      }
      // Columns added by ALTER TABLE are absent from older records.
      if (row.values.size() < decls.size()) row.values.resize(decls.size());
      for (std::size_t i = 0; i < decls.size(); ++i)
        if (decls[i].rowid_alias && is_null(row.values[i])) row.values[i] = row.rowid;
      t.rows.push_back(std::move(row));
    }
    return t;
  }

 private:
  struct RawCell {
    std::int64_t rowid;
    std::vector<std::uint8_t> payload;
  };

  Database(std::vector<std::uint8_t> bytes, std::string label) : bytes_(std::move(bytes)), label_(std::move(label)) {
    if (bytes_.size() < 100 || std::memcmp(bytes_.data(), kMagic.data(), kMagic.size()) != 0)
      throw Error(Errc::NotSqlite, label_ + " does not begin with the SQLite 3 header");
    const std::uint32_t ps = be16(16);
    page_size_ = ps == 1 ? 65536u : ps;
    if (page_size_ < 512 || (page_size_ & (page_size_ - 1)) != 0)
      throw Error(Errc::CorruptDatabase, label_ + ": invalid page size " + std::to_string(page_size_));
    const std::uint8_t reserved = bytes_[20];
    usable_ = page_size_ - reserved;
    if (usable_ < 480) throw Error(Errc::CorruptDatabase, label_ + ": usable page size too small");
    const std::uint32_t enc = be32(56);
    if (enc != 0 && enc != 1)
      throw Error(Errc::CorruptDatabase, label_ + ": only UTF-8 databases are supported (encoding " + std::to_string(enc) + ")");
    page_count_ = static_cast<std::uint32_t>(bytes_.size() / page_size_);
    load_schema();
  }

  std::uint16_t be16(std::size_t off) const {
    check(off, 2);
    return static_cast<std::uint16_t>(bytes_[off] << 8 | bytes_[off + 1]);
  }
  std::uint32_t be32(std::size_t off) const {
    check(off, 4);
    return static_cast<std::uint32_t>(bytes_[off]) << 24 | static_cast<std::uint32_t>(bytes_[off + 1]) << 16 |
           static_cast<std::uint32_t>(bytes_[off + 2]) << 8 | bytes_[off + 3];
  }
  void check(std::size_t off, std::size_t len) const {
    if (off + len > bytes_.size() || off + len < off)
      throw Error(Errc::CorruptDatabase, label_ + ": read past end of file at offset " + std::to_string(off));
  }

  std::size_t page_offset(std::uint32_t page) const {
    if (page == 0 || page > page_count_)
      throw Error(Errc::CorruptDatabase, label_ + ": page number " + std::to_string(page) + " out of range");
    return static_cast<std::size_t>(page - 1) * page_size_;
  }

  // Varint starting at `off`; returns value and advances `off`.
  std::int64_t varint(std::size_t& off, std::size_t limit) const {
    std::uint64_t v = 0;
    for (int i = 0; i < 9; ++i) {
      if (off >= limit || off >= bytes_.size()) throw Error(Errc::CorruptDatabase, label_ + ": truncated varint");
      const std::uint8_t b = bytes_[off++];
      if (i == 8) return static_cast<std::int64_t>(v << 8 | b);
      v = v << 7 | (b & 0x7f);
      if (!(b & 0x80)) break;
    }
    return static_cast<std::int64_t>(v);
  }

  static std::int64_t varint_in(std::span<const std::uint8_t> buf, std::size_t& off) {
    std::uint64_t v = 0;
    for (int i = 0; i < 9; ++i) {
      if (off >= buf.size()) throw Error(Errc::CorruptDatabase, "truncated varint in record");
      const std::uint8_t b = buf[off++];
      if (i == 8) return static_cast<std::int64_t>(v << 8 | b);
      v = v << 7 | (b & 0x7f);
      if (!(b & 0x80)) break;
    }
    return static_cast<std::int64_t>(v);
  }

  void walk_table(std::uint32_t root, std::vector<RawCell>& out, std::vector<std::string>& warnings) const {
    std::unordered_set<std::uint32_t> visited;
    walk_page(root, out, warnings, visited, 0);
  }

  void walk_page(std::uint32_t page, std::vector<RawCell>& out, std::vector<std::string>& warnings,
                 std::unordered_set<std::uint32_t>& visited, int depth) const {
    if (depth > 64 || !visited.insert(page).second) {
      warnings.push_back("b-tree cycle or excessive depth at page " + std::to_string(page));
      return;
    }
    const std::size_t base = page_offset(page);
    const std::size_t hdr = base + (page == 1 ? 100 : 0);
    check(hdr, 8);
    const std::uint8_t type = bytes_[hdr];
    const std::uint16_t ncells = be16(hdr + 3);
    const bool interior = type == 0x05;
    if (type != 0x05 && type != 0x0d) {
      warnings.push_back("page " + std::to_string(page) + " is not a table b-tree page (type " +
                         std::to_string(type) + ")");
      return;
    }
    const std::size_t ptrs = hdr + (interior ? 12 : 8);
    const std::size_t page_end = base + page_size_;
    for (std::uint16_t i = 0; i < ncells; ++i) {
      const std::size_t cell = base + be16(ptrs + 2u * i);
      if (cell >= page_end) {
        warnings.push_back("cell pointer outside page " + std::to_string(page));
        continue;
      }
      if (interior) {
        walk_page(be32(cell), out, warnings, visited, depth + 1);
      } else {
        try {
          out.push_back(read_leaf_cell(cell, page_end));
        } catch (const Error& e) {
          warnings.push_back(std::string("page ") + std::to_string(page) + ": " + e.what());
        }
      }
    }
    if (interior) walk_page(be32(hdr + 8), out, warnings, visited, depth + 1);
  }

  RawCell read_leaf_cell(std::size_t cell, std::size_t page_end) const {
    std::size_t off = cell;
    const auto payload_size = static_cast<std::uint64_t>(varint(off, page_end));
    RawCell rc;
    rc.rowid = varint(off, page_end);
    if (payload_size > (1ull << 31)) throw Error(Errc::CorruptDatabase, "implausible payload size");

    const std::uint64_t max_local = usable_ - 35;
    std::uint64_t local = payload_size;
    if (payload_size > max_local) {
      const std::uint64_t min_local = (usable_ - 12) * 32 / 255 - 23;
      const std::uint64_t k = min_local + (payload_size - min_local) % (usable_ - 4);
      local = k <= max_local ? k : min_local;
    }
    check(off, local);
    rc.payload.assign(bytes_.begin() + static_cast<std::ptrdiff_t>(off),
                      bytes_.begin() + static_cast<std::ptrdiff_t>(off + local));
    if (local < payload_size) {
      std::uint32_t next = be32(off + local);
      std::unordered_set<std::uint32_t> seen;
      while (rc.payload.size() < payload_size) {
        if (next == 0 || !seen.insert(next).second)
          throw Error(Errc::CorruptDatabase, "broken overflow chain for rowid " + std::to_string(rc.rowid));
        const std::size_t po = page_offset(next);
        const std::size_t take = std::min<std::uint64_t>(usable_ - 4, payload_size - rc.payload.size());
        check(po + 4, take);
        rc.payload.insert(rc.payload.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(po + 4),
                          bytes_.begin() + static_cast<std::ptrdiff_t>(po + 4 + take));
        next = be32(po);
      }
    }
    return rc;
  }

  static std::vector<Value> decode_record(std::span<const std::uint8_t> rec) {
    std::size_t off = 0;
    const auto header_size = static_cast<std::size_t>(varint_in(rec, off));
    if (header_size > rec.size() || header_size < off)
      throw Error(Errc::CorruptDatabase, "record header larger than payload");
    std::vector<std::int64_t> types;
    while (off < header_size) types.push_back(varint_in(rec, off));
    std::size_t body = header_size;
    std::vector<Value> values;
    values.reserve(types.size());
    auto need = [&](std::size_t n) {
      if (body + n > rec.size()) throw Error(Errc::CorruptDatabase, "record body truncated");
    };
    for (const std::int64_t t : types) {
      switch (t) {
        case 0: values.emplace_back(std::monostate{}); break;
        case 1: case 2: case 3: case 4: case 5: case 6: {
          static constexpr std::size_t kWidth[] = {0, 1, 2, 3, 4, 6, 8};
          const std::size_t w = kWidth[t];
          need(w);
          std::uint64_t v = 0;
          for (std::size_t i = 0; i < w; ++i) v = v << 8 | rec[body + i];
          if (w < 8 && (rec[body] & 0x80)) v |= ~0ull << (8 * w);
          values.emplace_back(static_cast<std::int64_t>(v));
          body += w;
          break;
        }
        case 7: {
          need(8);
          std::uint64_t v = 0;
          for (std::size_t i = 0; i < 8; ++i) v = v << 8 | rec[body + i];
          double d;
          std::memcpy(&d, &v, sizeof d);
          values.emplace_back(d);
          body += 8;
          break;
        }
        case 8: values.emplace_back(std::int64_t{0}); break;
        case 9: values.emplace_back(std::int64_t{1}); break;
        case 10: case 11: throw Error(Errc::CorruptDatabase, "reserved serial type");
        default: {
          const auto len = static_cast<std::size_t>((t - (t % 2 == 0 ? 12 : 13)) / 2);
          need(len);
          if (t % 2 == 0) {
            values.emplace_back(Blob{{rec.begin() + static_cast<std::ptrdiff_t>(body),
                                      rec.begin() + static_cast<std::ptrdiff_t>(body + len)}});
          } else {
            values.emplace_back(std::string(reinterpret_cast<const char*>(rec.data()) + body, len));
          }
          body += len;
        }
      }
    }
    return values;
  }

  void load_schema() {
    std::vector<RawCell> cells;
    std::vector<std::string> warnings;
    walk_table(1, cells, warnings);
    for (const auto& c : cells) {
      std::vector<Value> v;
      try {
        v = decode_record(c.payload);
      } catch (const Error&) {
        continue;
      }
      if (v.size() < 5) continue;
      SchemaEntry e;
      e.type = as_text(v[0]).value_or("");
      e.name = as_text(v[1]).value_or("");
      e.tbl_name = as_text(v[2]).value_or("");
      e.rootpage = static_cast<std::uint32_t>(as_int(v[3]).value_or(0));
      e.sql = as_text(v[4]).value_or("");
      schema_.push_back(std::move(e));
    }
  }

  std::vector<std::uint8_t> bytes_;
  std::string label_;
  std::uint32_t page_size_{4096};
  std::uint32_t usable_{4096};
  std::uint32_t page_count_{0};
  bool wal_present_{false};
  std::vector<SchemaEntry> schema_;
};

}  // namespace storeim::sqlite
