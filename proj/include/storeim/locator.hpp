#pragma once

// Store-app package identities and a catalog-driven walk of an exported
// evidence tree.

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "storeim/error.hpp"

namespace storeim::locator {

enum class Arch { x86, x64, arm, neutral };
enum class PackageForm { full, family };

inline std::string_view to_string(Arch a) {
  constexpr std::string_view kNames[] = {"x86", "x64", "arm", "neutral"};
  return kNames[static_cast<int>(a)];
}

struct PackageIdentity {
  std::string name;
  std::optional<std::string> version;
  std::optional<Arch> arch;
  std::string publisher_id;
  PackageForm form{PackageForm::family};

  std::string family() const { return name + "_" + publisher_id; }
  std::string to_string() const {
    if (form == PackageForm::family) return family();
    return name + "_" + *version + "_" + std::string(locator::to_string(*arch)) + "__" + publisher_id;
  }
  friend bool operator==(const PackageIdentity&, const PackageIdentity&) = default;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return std::tolower(x) == std::tolower(y); });
}

inline bool ends_with_ci(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && iequals(s.substr(s.size() - suffix.size()), suffix);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    parts.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

inline bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '.' || c == '-'; });
}

inline bool valid_publisher(std::string_view s) {
  return s.size() == 13 &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) || (c >= 'a' && c <= 'z'); });
}

inline bool valid_version(std::string_view s) {
  const auto parts = split(s, '.');
  if (parts.size() != 4) return false;
  return std::all_of(parts.begin(), parts.end(), [](std::string_view p) {
    return !p.empty() && p.size() <= 5 && std::all_of(p.begin(), p.end(), [](unsigned char c) { return std::isdigit(c); });
  });
}

inline std::optional<Arch> parse_arch(std::string_view s) {
  const auto l = lower(s);
  if (l == "x86") return Arch::x86;
  if (l == "x64") return Arch::x64;
  if (l == "arm") return Arch::arm;
  if (l == "neutral") return Arch::neutral;
  return std::nullopt;
}

}  // namespace detail

inline std::optional<PackageIdentity> try_parse_package_id(std::string_view s) {
  const auto parts = detail::split(s, '_');
  PackageIdentity id;
  if (parts.size() == 2) {
    if (!detail::valid_name(parts[0]) || !detail::valid_publisher(parts[1])) return std::nullopt;
    id.name = parts[0];
    id.publisher_id = parts[1];
    id.form = PackageForm::family;
    return id;
  }
  // name_version_arch__publisher (empty resource id) or the single
  // underscore variant seen in registry branch names.
  if (parts.size() != 4 && !(parts.size() == 5 && parts[3].empty())) return std::nullopt;
  const auto arch = detail::parse_arch(parts[2]);
  if (!detail::valid_name(parts[0]) || !detail::valid_version(parts[1]) || !arch ||
      !detail::valid_publisher(parts.back()))
    return std::nullopt;
  id.name = parts[0];
  id.version = std::string(parts[1]);
  id.arch = arch;
  id.publisher_id = parts.back();
  id.form = PackageForm::full;
  return id;
}

inline PackageIdentity parse_package_id(std::string_view s) {
  if (s.empty()) throw Error(Errc::MalformedPackageId, "empty package id");
  auto id = try_parse_package_id(s);
  if (!id) throw Error(Errc::MalformedPackageId, "'" + std::string(s) + "' is neither a full nor a family package id");
  return *id;
}

// ---- catalog --------------------------------------------------------------------

enum class Role {
  AppInstallDir,
  DeletedInstallDir,
  LocalStateDir,
  CacheDb,
  MainDb,
  SharedXml,
  ConfigXml,
  ChatsyncDir,
  AvatarsDir,
  ReceiveStorage,
  SendingStorage,
  MediaDir,
  ThumbnailsDir,
  DownloadsDir,
  WinstoreLog,
  AddressBookAppcontent,
  ZoneIdentifierSidecar,
  NetCacheDir,
};

inline constexpr std::array<std::string_view, 18> kRoleNames = {
    "AppInstallDir",  "DeletedInstallDir", "LocalStateDir", "CacheDb",        "MainDb",
    "SharedXml",      "ConfigXml",         "ChatsyncDir",   "AvatarsDir",     "ReceiveStorage",
    "SendingStorage", "MediaDir",          "ThumbnailsDir", "DownloadsDir",   "WinstoreLog",
    "AddressBookAppcontent", "ZoneIdentifierSidecar", "NetCacheDir"};

inline std::string_view to_string(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }

inline std::optional<Role> parse_role(std::string_view s) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i)
    if (kRoleNames[i] == s) return static_cast<Role>(i);
  return std::nullopt;
}

struct ArtifactPath {
  Role role{Role::AppInstallDir};
  std::string path;
  std::optional<PackageIdentity> package;
  std::optional<std::string> account;  // captured <Skype name> / <Facebook ID> segment
  std::string rule;                    // catalog rule that matched
  friend bool operator==(const ArtifactPath&, const ArtifactPath&) = default;
};

/// A segment pattern. Literal segments compare case-insensitively.
struct Seg {
  enum Kind { literal, any, account, digits_account, package, full_package, one_of, suffix } kind;
  std::string_view text{};  // literal text, package name (empty: any), '|' list, or filename suffix
};

enum class EntryType { file, directory };

struct Rule {
  std::string_view id;
  Role role;
  EntryType type;
  std::vector<Seg> segs;  // matched against the last segs.size() components
};

inline constexpr std::string_view kFacebookName = "Facebook.Facebook";
inline constexpr std::string_view kSkypeName = "Microsoft.SkypeApp";

inline const std::vector<Rule>& catalog() {
  using S = Seg;
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> r;
    const S packages{S::literal, "Packages"};
    const S local_state{S::literal, "LocalState"};
    const S fb{S::package, kFacebookName};
    const S sk{S::package, kSkypeName};
    for (auto name : {kFacebookName, kSkypeName}) {
      r.push_back({"install-dir", Role::AppInstallDir, EntryType::directory,
                   {S{S::literal, "WindowsApps"}, S{S::full_package, name}}});
      r.push_back({"deleted-install-dir", Role::DeletedInstallDir, EntryType::directory,
                   {S{S::literal, "WindowsApps"}, S{S::literal, "Deleted"}, S{S::full_package, name}}});
      r.push_back({"local-state", Role::LocalStateDir, EntryType::directory,
                   {packages, S{S::package, name}, local_state}});
    }
    // "Package ID" in this row is any package, not only the two apps.
    r.push_back({"net-cache", Role::NetCacheDir, EntryType::directory,
                 {packages, S{S::package}, S{S::literal, "AC"}, S{S::one_of, "NetCache|INetCache"}, S{S::any}}});
    r.push_back({"facebook-cache-db", Role::CacheDb, EntryType::file,
                 {packages, fb, local_state, S{S::digits_account}, S{S::literal, "DB"},
                  S{S::one_of, "Analytics.sqlite|FriendRequests.sqlite|FriendRequest.sqlite|Friends.sqlite|"
                               "Messages.sqlite|Notifications.sqlite|Stories.sqlite"}}});
    r.push_back({"skype-main-db", Role::MainDb, EntryType::file,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "main.db"}}});
    r.push_back({"skype-shared-xml", Role::SharedXml, EntryType::file,
                 {packages, sk, local_state, S{S::literal, "shared.xml"}}});
    r.push_back({"skype-config-xml", Role::ConfigXml, EntryType::file,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "config.xml"}}});
    r.push_back({"skype-chatsync", Role::ChatsyncDir, EntryType::directory,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "Chatsync"}}});
    r.push_back({"skype-avatars", Role::AvatarsDir, EntryType::directory,
                 {packages, sk, local_state, S{S::literal, "avatars"}}});
    r.push_back({"skype-receive-storage", Role::ReceiveStorage, EntryType::directory,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "ReceiveStorage"}}});
    r.push_back({"skype-sending-storage", Role::SendingStorage, EntryType::directory,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "SendingStorage"}}});
    r.push_back({"skype-media", Role::MediaDir, EntryType::directory,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "media"}}});
    r.push_back({"skype-thumbnails", Role::ThumbnailsDir, EntryType::directory,
                 {packages, sk, local_state, S{S::account}, S{S::literal, "thumbnails"}}});
    r.push_back({"skype-downloads", Role::DownloadsDir, EntryType::directory,
                 {S{S::literal, "Downloads"}, sk, S{S::one_of, "App|AppData"}}});
    r.push_back({"winstore-log-temp", Role::WinstoreLog, EntryType::file,
                 {S{S::literal, "Local"}, S{S::literal, "Temp"}, S{S::literal, "winstore.log"}}});
    r.push_back({"winstore-log-package", Role::WinstoreLog, EntryType::file,
                 {packages, S{S::literal, "winstore_cw5n1h2txyewy"}, S{S::literal, "AC"}, S{S::literal, "Temp"},
                  S{S::literal, "winstore.log"}}});
    r.push_back({"address-book-appcontent", Role::AddressBookAppcontent, EntryType::file,
                 {packages, S{S::literal, "microsoft.windowscommunicationsapps_8wekyb3d8bbwe"}, local_state,
                  S{S::literal, "Indexed"}, S{S::literal, "LiveComm"}, S{S::any}, S{S::any}, S{S::literal, "People"},
                  S{S::one_of, "AddressBook|Me"}, S{S::suffix, ".appcontent-ms"}}});
    r.push_back({"zone-identifier-sidecar", Role::ZoneIdentifierSidecar, EntryType::file,
                 {S{S::suffix, "Zone.Identifier"}}});
    return r;
  }();
  return rules;
}

namespace detail {

inline bool match_seg(const Seg& seg, std::string_view comp, ArtifactPath& out) {
  switch (seg.kind) {
    case Seg::literal: return iequals(comp, seg.text);
    case Seg::any: return !comp.empty();
    case Seg::account:
      if (comp.empty()) return false;
      out.account = std::string(comp);
      return true;
    case Seg::digits_account:
      if (comp.empty() || !std::all_of(comp.begin(), comp.end(), [](unsigned char c) { return std::isdigit(c); }))
        return false;
      out.account = std::string(comp);
      return true;
    case Seg::package:
    case Seg::full_package: {
      auto id = try_parse_package_id(comp);
      if (!id || (!seg.text.empty() && !iequals(id->name, seg.text))) return false;
      if (seg.kind == Seg::full_package && id->form != PackageForm::full) return false;
      out.package = std::move(id);
      return true;
    }
    case Seg::one_of:
      for (auto alt : split(seg.text, '|'))
        if (iequals(comp, alt)) return true;
      return false;
    case Seg::suffix: {
      if (comp.size() <= seg.text.size() || !ends_with_ci(comp, seg.text)) return false;
      if (seg.text == "Zone.Identifier") {
        const char sep = comp[comp.size() - seg.text.size() - 1];
        return sep == ':' || sep == '.';
      }
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Matches one path (components relative to the scan root) against the
/// catalog. Several rules may match the same path.
inline std::vector<ArtifactPath> classify(const std::vector<std::string>& comps, EntryType type,
                                          const std::string& full_path) {
  std::vector<ArtifactPath> hits;
  for (const auto& rule : catalog()) {
    if (rule.type != type || rule.segs.size() > comps.size()) continue;
    ArtifactPath a;
    a.role = rule.role;
    a.path = full_path;
    a.rule = std::string(rule.id);
    const auto base = comps.size() - rule.segs.size();
    bool ok = true;
    for (std::size_t i = 0; i < rule.segs.size() && ok; ++i) ok = detail::match_seg(rule.segs[i], comps[base + i], a);
    if (ok) hits.push_back(std::move(a));
  }
  return hits;
}

/// Normalizes a Windows-style or host path into components.
inline std::vector<std::string> components(std::string_view p) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : p) {
    if (c == '/' || c == '\\') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

struct ScanResult {
  std::vector<ArtifactPath> artifacts;
  std::vector<std::string> warnings;
};

/// Walks `root` and reports every catalog match, sorted by path then role.
inline ScanResult scan_tree(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(Errc::RootUnreadable, root.string() + " is not a readable directory");
  fs::directory_iterator probe(root, ec);
  if (ec) throw Error(Errc::RootUnreadable, root.string() + ": " + ec.message());

  ScanResult res;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
  if (ec) throw Error(Errc::RootUnreadable, root.string() + ": " + ec.message());
  while (it != end) {
    const auto& entry = *it;
    std::error_code st_ec;
    const bool is_dir = entry.is_directory(st_ec);
    const bool is_file = !is_dir && entry.is_regular_file(st_ec);
    if (st_ec) res.warnings.push_back(entry.path().string() + ": " + st_ec.message());
    if (is_dir || is_file) {
      const auto rel = entry.path().lexically_relative(root).generic_string();
      auto hits = classify(components(rel), is_dir ? EntryType::directory : EntryType::file, entry.path().string());
      for (auto& h : hits) res.artifacts.push_back(std::move(h));
    }
    it.increment(ec);
    if (ec) {
      res.warnings.push_back(entry.path().string() + ": " + ec.message());
      ec.clear();
    }
  }
  std::sort(res.artifacts.begin(), res.artifacts.end(), [](const ArtifactPath& a, const ArtifactPath& b) {
    if (a.path != b.path) return a.path < b.path;
    if (a.role != b.role) return a.role < b.role;
    return a.rule < b.rule;
  });
  return res;
}

// ---- Zone.Identifier ----------------------------------------------------------

struct ZoneMarker {
  int zone_id{0};
  std::string source_path;
  friend bool operator==(const ZoneMarker&, const ZoneMarker&) = default;
};

namespace detail {

// UTF-16LE (with BOM) is narrowed to ASCII; other code units become '?'.
inline std::string narrow_text(std::string_view bytes) {
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFF && static_cast<unsigned char>(bytes[1]) == 0xFE) {
    std::string out;
    for (std::size_t i = 2; i + 1 < bytes.size(); i += 2) {
      const unsigned cu = static_cast<unsigned char>(bytes[i]) | (static_cast<unsigned char>(bytes[i + 1]) << 8);
      out += cu < 0x80 ? static_cast<char>(cu) : '?';
    }
    return out;
  }
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  return std::string(bytes);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline ZoneMarker read_zone_identifier(std::string_view bytes, std::string source_path) {
  const auto text = detail::narrow_text(bytes);
  bool in_section = false;
  for (auto line : detail::split(text, '\n')) {
    line = detail::trim(line);
    if (line.empty() || line[0] == ';') continue;
    if (line.front() == '[') {
      in_section = line.back() == ']' && detail::iequals(detail::trim(line.substr(1, line.size() - 2)), "ZoneTransfer");
      continue;
    }
    if (!in_section) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || !detail::iequals(detail::trim(line.substr(0, eq)), "ZoneId")) continue;
    const auto value = detail::trim(line.substr(eq + 1));
    if (value.size() != 1 || value[0] < '0' || value[0] > '4')
      throw Error(Errc::NotZoneTransfer, "ZoneId '" + std::string(value) + "' is not in 0..4");
    return {value[0] - '0', std::move(source_path)};
  }
  throw Error(Errc::NotZoneTransfer, source_path + " has no [ZoneTransfer] ZoneId entry");
}

/// The file a Zone.Identifier sidecar describes.
inline std::string zone_sidecar_subject(const std::string& sidecar_path) {
  constexpr std::string_view kTail = "Zone.Identifier";
  if (sidecar_path.size() <= kTail.size() + 1) return sidecar_path;
  return sidecar_path.substr(0, sidecar_path.size() - kTail.size() - 1);
}

}  // namespace storeim::locator
