#pragma once

// Lenient tag scanner for the XML the Skype app writes. It does not build
// a tree or validate nesting; the app's files are fragments often enough
// (cut strings, tags whose names are escaped account names) that a strict
// parser would reject usable evidence.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace storeim::xml {

inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i];
      continue;
    }
    const auto ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = 0;
      try {
        cp = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X') ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                                                               : std::stoul(std::string(ent.substr(1)));
      } catch (...) {
        out.append(s.substr(i, semi - i + 1));
        i = semi;
        continue;
      }
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      }
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// One start (or empty-element) tag as found in the text.
struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool self_closing{false};
  std::size_t begin{0};  // offset of '<'
  std::size_t end{0};    // offset just past '>'

  std::optional<std::string> attr(const std::string& key) const {
    auto it = attrs.find(key);
    if (it == attrs.end()) return std::nullopt;
    return it->second;
  }
};

namespace detail {

inline bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}

inline void parse_attrs(std::string_view body, Tag& tag) {
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    const auto key_start = i;
    while (i < body.size() && name_char(body[i])) ++i;
    if (i == key_start) {
      ++i;
      continue;
    }
    std::string key(body.substr(key_start, i - key_start));
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i >= body.size() || body[i] != '=') {
      tag.attrs.emplace(std::move(key), "");
      continue;
    }
    ++i;
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
      const char q = body[i++];
      const auto close = body.find(q, i);
      const auto stop = close == std::string_view::npos ? body.size() : close;
      tag.attrs.emplace(std::move(key), decode_entities(body.substr(i, stop - i)));
      i = stop + 1;
    } else {
      const auto v_start = i;
      while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      tag.attrs.emplace(std::move(key), decode_entities(body.substr(v_start, i - v_start)));
    }
  }
}

}  // namespace detail

/// Next start tag at or after `pos`, skipping declarations, comments and
/// closing tags. `name` restricts the match when non-empty.
inline std::optional<Tag> next_tag(std::string_view text, std::size_t pos, std::string_view name = {}) {
  while (true) {
    const auto lt = text.find('<', pos);
    if (lt == std::string_view::npos || lt + 1 >= text.size()) return std::nullopt;
    const char c = text[lt + 1];
    if (c == '/' || c == '?' || c == '!') {
      pos = lt + 1;
      continue;
    }
    std::size_t i = lt + 1;
    while (i < text.size() && detail::name_char(text[i])) ++i;
    if (i == lt + 1) {
      pos = lt + 1;
      continue;
    }
    const auto gt = text.find('>', i);
    if (gt == std::string_view::npos) return std::nullopt;
    Tag tag;
    tag.name = std::string(text.substr(lt + 1, i - lt - 1));
    if (!name.empty() && tag.name != name) {
      pos = gt + 1;
      continue;
    }
    auto body = text.substr(i, gt - i);
    if (!body.empty() && body.back() == '/') {
      tag.self_closing = true;
      body.remove_suffix(1);
    }
    detail::parse_attrs(body, tag);
    tag.begin = lt;
    tag.end = gt + 1;
    return tag;
  }
}

/// Raw inner text of an element whose start tag was found by next_tag. The
/// closing tag is the first matching one; when it is missing the content
/// runs to the next '<' or line end, which suits values cut off mid-file.
inline std::string_view inner_raw(std::string_view text, const Tag& tag, bool* closed = nullptr) {
  if (closed) *closed = true;
  if (tag.self_closing) return {};
  const std::string close = "</" + tag.name;
  std::size_t search = tag.end;
  while (true) {
    const auto at = text.find(close, search);
    if (at == std::string_view::npos) break;
    const auto after = at + close.size();
    if (after >= text.size() || text[after] == '>' || std::isspace(static_cast<unsigned char>(text[after])))
      return text.substr(tag.end, at - tag.end);
    search = after;
  }
  if (closed) *closed = false;
  auto stop = text.find_first_of("<\r\n", tag.end);
  if (stop == std::string_view::npos) stop = text.size();
  return text.substr(tag.end, stop - tag.end);
}

/// Decoded, trimmed text of the first `<name>` element, if any.
inline std::optional<std::string> element_text(std::string_view text, std::string_view name) {
  auto tag = next_tag(text, 0, name);
  if (!tag) return std::nullopt;
  return decode_entities(trim(inner_raw(text, *tag)));
}

/// Direct children of an element: each start tag after the parent's start,
/// up to the parent's close. Grandchildren are skipped.
inline std::vector<std::pair<Tag, std::string>> children(std::string_view text, const Tag& parent) {
  std::vector<std::pair<Tag, std::string>> out;
  if (parent.self_closing) return out;
  const auto inner = inner_raw(text, parent);
  const auto base = parent.end;
  std::size_t pos = 0;
  while (auto t = next_tag(inner, pos)) {
    bool closed = true;
    const auto raw = inner_raw(inner, *t, &closed);
    std::string value = decode_entities(trim(raw));
    std::size_t resume = t->end;
    if (!t->self_closing && closed) resume = static_cast<std::size_t>(raw.data() - inner.data()) + raw.size() + t->name.size() + 3;
    t->begin += base;
    t->end += base;
    out.emplace_back(std::move(*t), std::move(value));
    pos = resume;
  }
  return out;
}

}  // namespace storeim::xml
