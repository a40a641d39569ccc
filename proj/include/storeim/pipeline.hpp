#pragma once

// Runs every extractor over a set of inputs. Directories are walked with the
// locator; loose files are routed by catalog role, then by extension.
// Evidence paths are reported relative to a base directory when one is set.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "storeim/carver.hpp"
#include "storeim/facebook.hpp"
#include "storeim/locator.hpp"
#include "storeim/pcap.hpp"
#include "storeim/registry.hpp"
#include "storeim/skype.hpp"
#include "storeim/timeline.hpp"

namespace storeim::pipeline {

namespace fs = std::filesystem;

enum class InputKind { facebook_db, skype_main_db, shared_xml, config_xml, zone_sidecar, registry, capture, journal_csv, memory, other };

struct Options {
  std::optional<fs::path> base;
  std::size_t chunk{carver::kDefaultChunk};
  pcap::Catalog catalog{pcap::builtin_catalog()};
  timeline::NtfsOptions ntfs;
};

struct SharedXmlFile {
  std::string path;
  skype::SkypeNetworkState state;
};
struct ConfigXmlFile {
  std::string path;
  skype::SkypeConfig config;
};
struct RegistryFile {
  std::string path;
  Extraction<registry::InstallRecord> installs;
  Extraction<registry::PersistedItem> persisted;
  std::vector<registry::SyntaxError> errors;
};
struct MemoryImage {
  std::string path;
  carver::CarveResult carved;
  carver::KeywordResult keywords;
  std::vector<carver::ChatFragment> chats;
};
struct CaptureFile {
  std::string path;
  pcap::ReadStats stats;
  std::vector<pcap::Flow> flows;
  std::vector<pcap::FlowLabel> labels;
};
struct JournalFile {
  std::string path;
  timeline::NtfsIngest ingest;
};

struct Collection {
  std::vector<locator::ArtifactPath> artifacts;
  std::vector<facebook::FacebookDataset> facebook;  // one per DB directory
  std::vector<skype::SkypeDataset> skype;           // one per main.db
  std::vector<SharedXmlFile> shared;
  std::vector<ConfigXmlFile> configs;
  std::vector<locator::ZoneMarker> zones;
  std::vector<RegistryFile> registries;
  std::vector<MemoryImage> memory;
  std::vector<CaptureFile> captures;
  std::vector<JournalFile> journals;

  std::vector<std::string> warnings;  // diagnostics from successful reads
  std::vector<std::string> failures;  // inputs that could not be read or parsed
};

namespace detail {

inline std::string lower_ext(const fs::path& p) { return locator::detail::lower(p.extension().string()); }

inline bool is_manifest(const fs::path& p) { return p.filename() == "manifest.json"; }

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string display(const fs::path& p, const std::optional<fs::path>& base) {
  if (base) {
    const auto rel = p.lexically_normal().lexically_relative(base->lexically_normal());
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  }
  return p.generic_string();
}

inline void rebase(Provenance& p, const std::optional<fs::path>& base) { p.evidence_path = display(p.evidence_path, base); }

template <class Records>
void rebase_all(Records& rs, const std::optional<fs::path>& base) {
  for (auto& r : rs) rebase(r.provenance, base);
}

}  // namespace detail

inline InputKind classify_by_role(locator::Role r) {
  using locator::Role;
  switch (r) {
    case Role::CacheDb: return InputKind::facebook_db;
    case Role::MainDb: return InputKind::skype_main_db;
    case Role::SharedXml: return InputKind::shared_xml;
    case Role::ConfigXml: return InputKind::config_xml;
    case Role::ZoneIdentifierSidecar: return InputKind::zone_sidecar;
    default: return InputKind::other;
  }
}

/// Loose-file routing when no catalog rule applies.
inline InputKind classify_by_name(const fs::path& p) {
  const auto name = locator::detail::lower(p.filename().string());
  const auto ext = detail::lower_ext(p);
  if (name == "main.db") return InputKind::skype_main_db;
  if (name == "shared.xml") return InputKind::shared_xml;
  if (name == "config.xml") return InputKind::config_xml;
  if (name.ends_with(":zone.identifier") || name.ends_with(".zone.identifier")) return InputKind::zone_sidecar;
  if (ext == ".sqlite" || ext == ".db") return InputKind::facebook_db;
  if (ext == ".reg") return InputKind::registry;
  if (ext == ".pcap" || ext == ".cap") return InputKind::capture;
  if (ext == ".csv") return InputKind::journal_csv;
  if (ext == ".raw" || ext == ".mem" || ext == ".dmp" || ext == ".bin" || ext == ".vmem" || ext == ".img")
    return InputKind::memory;
  return InputKind::other;
}

class Collector {
 public:
  explicit Collector(Options opt) : opt_(std::move(opt)) {}

  void add(const fs::path& input) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      add_tree(input);
    } else if (fs::is_regular_file(input, ec)) {
      const auto comps = locator::components(input.generic_string());
      InputKind kind = InputKind::other;
      for (auto a : locator::classify(comps, locator::EntryType::file, input.generic_string())) {
        if (kind == InputKind::other) kind = classify_by_role(a.role);
        a.path = detail::display(input, opt_.base);
        out_.artifacts.push_back(std::move(a));
      }
      if (kind == InputKind::other) kind = classify_by_name(input);
      route(input, kind, true);
    } else {
      out_.failures.push_back(input.string() + ": no such file or directory");
    }
  }

  Collection finish() && {
    for (auto& [dir, ds] : fb_) {
      detail::rebase_all(ds.analytics.records, opt_.base);
      detail::rebase_all(ds.friends.records, opt_.base);
      detail::rebase_all(ds.messages.records, opt_.base);
      detail::rebase_all(ds.users.records, opt_.base);
      detail::rebase_all(ds.notifications.records, opt_.base);
      for (auto* ex : {&ds.analytics.warnings, &ds.friends.warnings, &ds.messages.warnings, &ds.users.warnings,
                       &ds.notifications.warnings, &ds.warnings})
        for (auto& w : *ex) out_.warnings.push_back(w);
      out_.facebook.push_back(std::move(ds));
    }
    fb_.clear();
    return std::move(out_);
  }

 private:
  void add_tree(const fs::path& root) {
    locator::ScanResult scan;
    try {
      scan = locator::scan_tree(root);
    } catch (const Error& e) {
      out_.failures.push_back(e.what());
      return;
    }
    for (auto& w : scan.warnings) out_.warnings.push_back(std::move(w));
    std::vector<fs::path> routed;
    for (auto a : scan.artifacts) {
      const fs::path p = a.path;
      const auto kind = classify_by_role(a.role);
      a.path = detail::display(p, opt_.base);
      out_.artifacts.push_back(a);
      if (kind != InputKind::other) {
        route(p, kind, false);
        routed.push_back(p);
      }
    }
    // Loose evidence files the catalog has no rule for.
    std::vector<fs::path> loose;
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (!it->is_regular_file(ec) || detail::is_manifest(it->path())) continue;
      if (std::find(routed.begin(), routed.end(), it->path()) != routed.end()) continue;
      const auto kind = classify_by_name(it->path());
      if (kind == InputKind::registry || kind == InputKind::capture || kind == InputKind::journal_csv ||
          kind == InputKind::memory)
        loose.push_back(it->path());
    }
    std::sort(loose.begin(), loose.end());
    for (const auto& p : loose) route(p, classify_by_name(p), false);
  }

  void fail(const fs::path& p, const Error& e) {
    out_.failures.push_back(detail::display(p, opt_.base) + ": " + e.what());
  }

  void route(const fs::path& p, InputKind kind, bool explicit_input) {
    const auto shown = detail::display(p, opt_.base);
    try {
      switch (kind) {
        case InputKind::facebook_db: {
          auto ds = facebook::extract_database(p);
          auto& slot = fb_[p.parent_path().generic_string()];
          slot.merge(std::move(ds));
          break;
        }
        case InputKind::skype_main_db: {
          auto ds = skype::extract_main_db(p);
          detail::rebase_all(ds.accounts, opt_.base);
          detail::rebase_all(ds.contacts, opt_.base);
          detail::rebase_all(ds.messages, opt_.base);
          detail::rebase_all(ds.transfers, opt_.base);
          detail::rebase_all(ds.calls, opt_.base);
          detail::rebase_all(ds.call_members, opt_.base);
          detail::rebase_all(ds.video_messages, opt_.base);
          for (const auto& w : ds.warnings) out_.warnings.push_back(shown + ": " + w);
          out_.skype.push_back(std::move(ds));
          break;
        }
        case InputKind::shared_xml: {
          auto st = skype::parse_shared_xml(detail::read_file(p));
          for (const auto& w : st.warnings) out_.warnings.push_back(shown + ": " + w);
          out_.shared.push_back({shown, std::move(st)});
          break;
        }
        case InputKind::config_xml: {
          auto cfg = skype::parse_config_xml(detail::read_file(p));
          for (const auto& w : cfg.warnings) out_.warnings.push_back(shown + ": " + w);
          out_.configs.push_back({shown, std::move(cfg)});
          break;
        }
        case InputKind::zone_sidecar: {
          auto z = locator::read_zone_identifier(detail::read_file(p), locator::zone_sidecar_subject(p.string()));
          z.source_path = detail::display(z.source_path, opt_.base);
          out_.zones.push_back(std::move(z));
          break;
        }
        case InputKind::registry: {
          const auto exp = registry::parse_reg_export(detail::read_file(p));
          RegistryFile rf{shown, registry::find_install_times(exp), registry::find_persisted_items(exp), exp.errors};
          for (const auto& w : rf.installs.warnings) out_.warnings.push_back(shown + ": " + w);
          for (const auto& w : rf.persisted.warnings) out_.warnings.push_back(shown + ": " + w);
          for (const auto& r : rf.installs.records)
            for (const auto& w : r.warnings) out_.warnings.push_back(shown + ": " + w);
          out_.registries.push_back(std::move(rf));
          break;
        }
        case InputKind::capture: {
          auto cap = pcap::read_pcap(p.string());
          CaptureFile cf{shown, cap.stats, pcap::assemble_flows(cap.packets), {}};
          for (const auto& f : cf.flows) cf.labels.push_back(pcap::label_flow(f, opt_.catalog));
          for (const auto& w : cap.warnings) out_.warnings.push_back(shown + ": " + w);
          out_.captures.push_back(std::move(cf));
          break;
        }
        case InputKind::journal_csv: {
          auto in = timeline::ingest_ntfs_csv(detail::read_file(p), shown, opt_.ntfs);
          for (const auto& w : in.warnings) out_.warnings.push_back(w);
          out_.journals.push_back({shown, std::move(in)});
          break;
        }
        case InputKind::memory: {
          MemoryImage img{shown, {}, {}, {}};
          {
            carver::FileSource src(p);
            img.carved = carver::carve(src, carver::builtin_signatures(), opt_.chunk);
          }
          {
            carver::FileSource src(p);
            img.keywords = carver::scan_keywords(src, carver::default_terms(), carver::kDefaultRadius, opt_.chunk);
          }
          {
            carver::FileSource src(p);
            img.chats = carver::extract_chat_json(src, opt_.chunk);
          }
          if (img.carved.partial || img.keywords.partial)
            out_.failures.push_back(shown + ": stream read stopped early, results are partial");
          out_.memory.push_back(std::move(img));
          break;
        }
        case InputKind::other:
          if (explicit_input) out_.failures.push_back(shown + ": not a recognized evidence file");
          break;
      }
    } catch (const Error& e) {
      fail(p, e);
    }
  }

  Options opt_;
  Collection out_;
  std::map<std::string, facebook::FacebookDataset> fb_;
};

inline Collection collect(const std::vector<fs::path>& inputs, Options opt = {}) {
  Collector c(std::move(opt));
  for (const auto& in : inputs) c.add(in);
  return std::move(c).finish();
}

/// Every record with a time, normalized. Journal events are included as-is.
inline timeline::Normalized events(const Collection& c) {
  timeline::Normalized all;
  for (const auto& ds : c.facebook) timeline::append(all, timeline::normalize(ds));
  for (const auto& ds : c.skype) timeline::append(all, timeline::normalize(ds));
  for (const auto& r : c.registries) {
    timeline::append(all, timeline::normalize(r.installs.records, r.path));
    timeline::append(all, timeline::normalize(r.persisted.records, r.path));
  }
  for (const auto& m : c.memory) timeline::append(all, timeline::normalize(m.chats, m.path));
  for (const auto& cap : c.captures) timeline::append(all, timeline::normalize(cap.flows, cap.labels, cap.path));
  for (const auto& j : c.journals)
    for (const auto& e : j.ingest.events) all.records.push_back(e);
  return all;
}

}  // namespace storeim::pipeline
