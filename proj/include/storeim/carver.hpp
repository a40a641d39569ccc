#pragma once

// Signature carving, keyword hits and chat-JSON recovery over raw byte
// streams (memory dumps, pagefile copies, unallocated extracts).
//
// Every scan goes through find_all(), which reads the stream in chunks that
// overlap by (longest pattern - 1) bytes and keeps a match only in the chunk
// where it starts. That makes chunked and whole-buffer results identical.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storeim/error.hpp"

namespace storeim::carver {

using Bytes = std::string;  // raw bytes; std::string keeps find/compare cheap

// ---- sources -----------------------------------------------------------------------

class MemorySource {
 public:
  explicit MemorySource(std::string_view data) : data_(data) {}
  std::uint64_t size() const { return data_.size(); }
  std::size_t read(std::uint64_t offset, char* dst, std::size_t n) const {
    if (offset >= data_.size()) return 0;
    n = std::min<std::size_t>(n, data_.size() - offset);
    std::memcpy(dst, data_.data() + offset, n);
    return n;
  }

 private:
  std::string_view data_;
};

class FileSource {
 public:
  explicit FileSource(const std::filesystem::path& path) : path_(path.string()), in_(path, std::ios::binary) {
    std::error_code ec;
    size_ = std::filesystem::file_size(path, ec);
    if (!in_ || ec) throw Error(Errc::StreamRead, "cannot open " + path_);
  }
  std::uint64_t size() const { return size_; }
  std::size_t read(std::uint64_t offset, char* dst, std::size_t n) {
    if (offset >= size_) return 0;
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(offset));
    in_.read(dst, static_cast<std::streamsize>(std::min<std::uint64_t>(n, size_ - offset)));
    if (in_.bad()) throw Error(Errc::StreamRead, "read failed in " + path_ + " at offset " + std::to_string(offset));
    return static_cast<std::size_t>(in_.gcount());
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t size_{0};
};

template <typename S>
Bytes read_range(S& src, std::uint64_t offset, std::size_t n) {
  Bytes out(n, '\0');
  std::size_t got = 0;
  while (got < n) {
    const auto r = src.read(offset + got, out.data() + got, n - got);
    if (r == 0) break;
    got += r;
  }
  out.resize(got);
  return out;
}

// ---- multi-pattern scan -------------------------------------------------------------

inline constexpr std::size_t kDefaultChunk = 8u << 20;

struct Match {
  std::uint64_t offset{0};
  std::size_t pattern{0};
  friend bool operator==(const Match&, const Match&) = default;
  friend auto operator<=>(const Match&, const Match&) = default;
};

struct ScanOutcome {
  std::vector<Match> matches;
  bool partial{false};
  std::string error;
};

/// All (possibly overlapping) occurrences of every pattern, sorted by
/// (offset, pattern index). chunk_size 0 reads the whole stream at once.
template <typename S>
ScanOutcome find_all(S& src, const std::vector<Bytes>& patterns, std::size_t chunk_size = kDefaultChunk) {
  ScanOutcome out;
  std::size_t longest = 0;
  for (const auto& p : patterns) {
    if (p.empty()) throw Error(Errc::InvalidArgument, "empty search pattern");
    longest = std::max(longest, p.size());
  }
  const std::uint64_t total = src.size();
  if (patterns.empty() || total == 0) return out;
  const std::uint64_t step = chunk_size == 0 ? total : chunk_size;
  const std::size_t overlap = longest - 1;

  for (std::uint64_t base = 0; base < total; base += step) {
    Bytes buf;
    try {
      buf = read_range(src, base, static_cast<std::size_t>(std::min<std::uint64_t>(step + overlap, total - base)));
    } catch (const Error& e) {
      out.partial = true;
      out.error = e.what();
      break;
    }
    const std::string_view view(buf);
    const std::size_t own = static_cast<std::size_t>(std::min<std::uint64_t>(step, total - base));
    const std::size_t first_chunk_size = out.matches.size();
    for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
      const std::string_view pat(patterns[pi]);
      for (auto at = view.find(pat); at != std::string_view::npos && at < own; at = view.find(pat, at + 1))
        out.matches.push_back({base + at, pi});
    }
    std::sort(out.matches.begin() + static_cast<std::ptrdiff_t>(first_chunk_size), out.matches.end());
  }
  return out;
}

// ---- signatures and carving -----------------------------------------------------------

inline constexpr std::size_t kDefaultMaxLength = 1u << 20;

struct Signature {
  std::string name;
  Bytes header;
  Bytes footer;
  std::size_t max_length{kDefaultMaxLength};

  void validate() const {
    if (header.empty() || footer.empty()) throw Error(Errc::InvalidArgument, name + ": header and footer must be non-empty");
    if (max_length <= header.size() + footer.size())
      throw Error(Errc::InvalidArgument, name + ": max_length must exceed header + footer");
  }
};

inline std::vector<Signature> builtin_signatures() {
  const Bytes header = "\x3C\x3F\x78\x6D\x6C\x20\x76\x65\x72\x73\x69\x6F\x6E\x3D\x22";  // <?xml version="
  return {
      {"config-xml", header, "\x3C\x2F\x55\x49\x3E\x0D\x0A\x3C\x2F\x63\x6F\x6E\x66\x69\x67\x3E\x0D\x0A", kDefaultMaxLength},
      {"shared-xml", header, "\x3C\x2F\x4C\x69\x62\x3E\x0D\x0A\x3C\x2F\x63\x6F\x6E\x66\x69\x67\x3E\x0D\x0A", kDefaultMaxLength},
  };
}

struct CarvedObject {
  std::string signature_name;
  std::uint64_t offset{0};
  std::uint64_t length{0};
  Bytes payload;
  friend bool operator==(const CarvedObject&, const CarvedObject&) = default;
};

struct CarveResult {
  std::vector<CarvedObject> objects;
  std::vector<std::uint64_t> truncated_candidates;  // header offsets with no footer in reach
  bool partial{false};
  std::string error;
};

/// Nearest-footer carving. Signatures sharing a header compete for each
/// header occurrence; the footer that closes soonest (within that
/// signature's max_length) names the object.
template <typename S>
CarveResult carve(S& src, const std::vector<Signature>& sigs, std::size_t chunk_size = kDefaultChunk) {
  CarveResult res;
  for (const auto& s : sigs) s.validate();

  // Pattern table: distinct headers first, then one footer per signature.
  std::vector<Bytes> patterns;
  std::vector<std::size_t> header_of(sigs.size());
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    auto it = std::find(patterns.begin(), patterns.end(), sigs[i].header);
    header_of[i] = static_cast<std::size_t>(it - patterns.begin());
    if (it == patterns.end()) patterns.push_back(sigs[i].header);
  }
  const std::size_t n_headers = patterns.size();
  for (const auto& s : sigs) patterns.push_back(s.footer);

  auto scan = find_all(src, patterns, chunk_size);
  res.partial = scan.partial;
  res.error = scan.error;

  std::vector<std::vector<std::uint64_t>> footers(sigs.size());
  std::vector<std::pair<std::uint64_t, std::size_t>> headers;  // (offset, header pattern)
  for (const auto& m : scan.matches) {
    if (m.pattern < n_headers) headers.emplace_back(m.offset, m.pattern);
    else footers[m.pattern - n_headers].push_back(m.offset);
  }

  for (const auto& [h, hp] : headers) {
    std::optional<std::size_t> best;
    std::uint64_t best_end = 0;
    for (std::size_t si = 0; si < sigs.size(); ++si) {
      if (header_of[si] != hp) continue;
      const auto& f = footers[si];
      const auto it = std::lower_bound(f.begin(), f.end(), h + sigs[si].header.size());
      if (it == f.end()) continue;
      const std::uint64_t end = *it + sigs[si].footer.size();
      if (end - h > sigs[si].max_length) continue;
      if (!best || end < best_end) {
        best = si;
        best_end = end;
      }
    }
    if (!best) {
      res.truncated_candidates.push_back(h);
      continue;
    }
    CarvedObject obj{sigs[*best].name, h, best_end - h, {}};
    try {
      obj.payload = read_range(src, h, static_cast<std::size_t>(obj.length));
    } catch (const Error& e) {
      res.partial = true;
      res.error = e.what();
      break;
    }
    if (obj.payload.size() != obj.length) {
      res.partial = true;
      res.error = "short read at offset " + std::to_string(h);
      break;
    }
    res.objects.push_back(std::move(obj));
  }
  return res;
}

// ---- keywords ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultRadius = 256;

struct KeywordHit {
  Bytes term;
  std::uint64_t offset{0};
  Bytes context;            // window around the hit, clipped to the stream
  std::size_t term_pos{0};  // position of term inside context
  friend bool operator==(const KeywordHit&, const KeywordHit&) = default;
};

inline std::vector<Bytes> default_terms() { return {"m_mid", "orca_message", "Messaging: 2.0", "IM-Display-Name:"}; }

struct KeywordResult {
  std::vector<KeywordHit> hits;
  bool partial{false};
  std::string error;
};

template <typename S>
KeywordResult scan_keywords(S& src, const std::vector<Bytes>& terms, std::size_t radius = kDefaultRadius,
                            std::size_t chunk_size = kDefaultChunk) {
  KeywordResult res;
  auto scan = find_all(src, terms, chunk_size);
  res.partial = scan.partial;
  res.error = scan.error;
  for (const auto& m : scan.matches) {
    const auto& term = terms[m.pattern];
    const std::uint64_t start = m.offset >= radius ? m.offset - radius : 0;
    KeywordHit hit{term, m.offset, {}, static_cast<std::size_t>(m.offset - start)};
    try {
      hit.context = read_range(src, start, static_cast<std::size_t>(m.offset - start) + term.size() + radius);
    } catch (const Error& e) {
      res.partial = true;
      res.error = e.what();
      break;
    }
    res.hits.push_back(std::move(hit));
  }
  return res;
}

// ---- chat JSON ----------------------------------------------------------------------------

inline constexpr std::size_t kJsonWindow = 64u << 10;
inline constexpr std::string_view kChatMarker = "orca_message";

struct ChatFragment {
  std::uint64_t offset{0};  // start of the recovered {...} region, or of the marker when unparsed
  bool parsed{false};
  std::optional<std::string> message;
  std::optional<std::int64_t> time;  // unix seconds as written by the app
  std::optional<std::string> target_uid;
  std::optional<std::string> sender_uid;     // params.a
  std::optional<std::string> recipient_uid;  // params.u
  std::optional<std::string> thread_id;      // params.tid
  Bytes raw;
};

namespace detail {

/// Index of the '}' matching the '{' at `open`, honoring JSON strings.
inline std::optional<std::size_t> match_brace(std::string_view w, std::size_t open) {
  int depth = 0;
  bool in_str = false;
  for (std::size_t i = open; i < w.size(); ++i) {
    const char c = w[i];
    if (in_str) {
      if (c == '\\') ++i;
      else if (c == '"') in_str = false;
      continue;
    }
    if (c == '"') in_str = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::nullopt;
}

inline std::optional<std::string> id_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  return std::nullopt;
}

inline void fill_fields(const nlohmann::json& j, ChatFragment& f) {
  if (auto it = j.find("message"); it != j.end() && it->is_string()) f.message = it->get<std::string>();
  if (auto it = j.find("time"); it != j.end()) {
    if (it->is_number_integer()) f.time = it->get<std::int64_t>();
    else if (it->is_string()) {
      try {
        f.time = std::stoll(it->get<std::string>());
      } catch (...) {
      }
    }
  }
  if (auto it = j.find("target_uid"); it != j.end()) f.target_uid = id_text(*it);
  if (auto p = j.find("params"); p != j.end() && p->is_object()) {
    if (auto it = p->find("a"); it != p->end()) f.sender_uid = id_text(*it);
    if (auto it = p->find("u"); it != p->end()) f.recipient_uid = id_text(*it);
    if (auto it = p->find("tid"); it != p->end()) f.thread_id = id_text(*it);
  }
}

}  // namespace detail

/// For every marker hit, the smallest balanced {...} region around it is
/// parsed as JSON. Regions are reported once even when they hold several
/// markers.
template <typename S>
std::vector<ChatFragment> extract_chat_json(S& src, std::size_t chunk_size = kDefaultChunk) {
  std::vector<ChatFragment> out;
  const auto scan = find_all(src, {Bytes(kChatMarker)}, chunk_size);
  std::uint64_t covered_until = 0;  // end of the last parsed region
  for (const auto& m : scan.matches) {
    if (m.offset < covered_until) continue;
    const std::uint64_t wstart = m.offset >= kJsonWindow ? m.offset - kJsonWindow : 0;
    Bytes window;
    try {
      window = read_range(src, wstart, static_cast<std::size_t>(m.offset - wstart) + kChatMarker.size() + kJsonWindow);
    } catch (const Error&) {
      break;
    }
    const std::string_view w(window);
    const std::size_t hit = static_cast<std::size_t>(m.offset - wstart);

    std::optional<std::pair<std::size_t, std::size_t>> region;
    std::size_t outermost_open = hit;
    int tries = 0;
    for (std::size_t pos = hit; pos > 0 && tries < 512;) {
      const auto open = w.rfind('{', pos - 1);
      if (open == std::string_view::npos) break;
      ++tries;
      outermost_open = open;
      const auto close = detail::match_brace(w, open);
      if (close && *close >= hit + kChatMarker.size()) {
        region = {open, *close};
        break;
      }
      pos = open;
    }

    ChatFragment f;
    if (region) {
      f.offset = wstart + region->first;
      f.raw = Bytes(w.substr(region->first, region->second - region->first + 1));
      try {
        const auto j = nlohmann::json::parse(f.raw);
        if (j.is_object()) {
          f.parsed = true;
          detail::fill_fields(j, f);
        }
      } catch (const nlohmann::json::exception&) {
      }
      if (f.parsed) covered_until = wstart + region->second + 1;
    } else {
      // Truncated: keep what surrounds the marker for the examiner.
      const auto start = std::max(std::min(outermost_open, hit), hit > 4096 ? hit - 4096 : std::size_t{0});
      const auto end = std::min(w.size(), hit + kChatMarker.size() + 512);
      f.offset = wstart + start;
      f.raw = Bytes(w.substr(start, end - start));
    }
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const ChatFragment& a, const ChatFragment& b) { return a.offset < b.offset; });
  return out;
}

}  // namespace storeim::carver
