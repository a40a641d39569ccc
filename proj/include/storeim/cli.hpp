#pragma once

// Command-line surface. Data goes to stdout (or files under --out), every
// diagnostic to stderr. Exit codes: 0 success, 1 usage error, 2 nothing
// readable, 3 partial success.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "storeim/forge/forge.hpp"
#include "storeim/pipeline.hpp"
#include "storeim/records_json.hpp"
#include "storeim/timeline.hpp"

namespace storeim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "STOREIM_OUT_DIR";

enum Exit : int { ok = 0, usage = 1, unreadable = 2, partial = 3 };

/// Longest header, footer or keyword the scanners look for.
inline std::size_t max_pattern_length() {
  std::size_t n = 0;
  for (const auto& s : carver::builtin_signatures()) n = std::max({n, s.header.size(), s.footer.size()});
  for (const auto& t : carver::default_terms()) n = std::max(n, t.size());
  return n;
}

/// Smallest chunk the CLI accepts: twice the longest pattern, so a chunk
/// always holds a full pattern beside its overlap.
inline std::size_t min_chunk() { return 2 * max_pattern_length(); }

struct Config {
  std::vector<std::string> inputs;
  std::vector<std::string> ntfs_csv;
  std::string out;
  std::string base;
  std::string format{"jsonl"};
  std::string catalog;
  std::size_t chunk{carver::kDefaultChunk};
  int tz_offset{0};
  std::uint64_t seed{0};
  bool verbose{false};
};

namespace detail {

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& p, std::string_view s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + p.string());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

// Tallies per-item outcomes into an exit code.
struct Outcome {
  std::size_t good{0}, bad{0};
  int code() const {
    if (bad == 0) return Exit::ok;
    return good == 0 ? Exit::unreadable : Exit::partial;
  }
};

/// Inputs nested under another directory input are dropped, so a shell
/// glob such as `E/**` does not extract a file twice. manifest.json is
/// the forge's answer key, never evidence.
inline std::vector<fs::path> normalize_inputs(const std::vector<std::string>& raw) {
  std::vector<fs::path> in;
  for (const auto& r : raw) {
    fs::path p = fs::path(r).lexically_normal();
    if (p.has_filename() == false && p.has_parent_path()) p = p.parent_path();
    if (p.filename() == "manifest.json") continue;
    if (std::find(in.begin(), in.end(), p) == in.end()) in.push_back(p);
  }
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& p : in) {
    bool nested = false;
    for (const auto& q : in) {
      if (q == p || !fs::is_directory(q, ec)) continue;
      const auto rel = p.lexically_relative(q);
      if (!rel.empty() && *rel.begin() != "..") nested = true;
    }
    if (!nested) out.push_back(p);
  }
  return out;
}

/// Paths in the output are shown relative to this: the directory itself
/// for a single directory input, otherwise the deepest directory holding
/// every input.
inline std::optional<fs::path> default_base(const std::vector<fs::path>& inputs) {
  if (inputs.empty()) return std::nullopt;
  std::error_code ec;
  if (inputs.size() == 1) return fs::is_directory(inputs[0], ec) ? inputs[0] : inputs[0].parent_path();
  fs::path common = inputs[0].parent_path();
  for (const auto& p : inputs) {
    const auto d = p.parent_path();
    fs::path next;
    for (auto a = common.begin(), b = d.begin(); a != common.end() && b != d.end() && *a == *b; ++a, ++b) next /= *a;
    common = next;
  }
  if (common.empty()) return std::nullopt;
  return common;
}

inline void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

inline std::string now_iso() {
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
    return Timestamp::from_unix(std::strtoull(sde, nullptr, 10), EpochUnit::seconds).to_iso();
  const auto s = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch());
  return Timestamp::from_unix(static_cast<std::uint64_t>(s.count()), EpochUnit::seconds).to_iso();
}

}  // namespace detail

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Extract and correlate Windows Store app artifacts (Facebook, Skype) from evidence trees."};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", cfg_.verbose, "Print extractor warnings to stderr");
    app.add_option("--catalog", cfg_.catalog, "Catalog override file: lines of <ip-or-cidr> <label> <owner> [urls]");
    app.add_option("--chunk", cfg_.chunk, "Carving and keyword chunk size in bytes")
        ->check(CLI::Range(min_chunk(), std::size_t{1} << 34));

    auto* scan = app.add_subcommand("scan", "Locate app artifacts under one or more roots");
    scan->add_option("roots", cfg_.inputs, "Evidence roots")->required();
    auto* fb = app.add_subcommand("facebook", "Extract Facebook cache databases");
    fb->add_option("dbs", cfg_.inputs, "Database files")->required();
    auto* sk = app.add_subcommand("skype", "Extract a Skype LocalState directory or main.db");
    sk->add_option("input", cfg_.inputs, "LocalState directory or main.db")->required();
    auto* reg = app.add_subcommand("registry", "Decode install times and picker grants from a .reg export");
    reg->add_option("export", cfg_.inputs, ".reg export")->required();
    auto* carve = app.add_subcommand("carve", "Carve XML documents, keywords and chat JSON from raw images");
    carve->add_option("images", cfg_.inputs, "Raw memory or disk images")->required();
    carve->add_option("--out", cfg_.out, "Write carved objects to this directory");
    auto* pc = app.add_subcommand("pcap", "Assemble and label flows in classic pcap captures");
    pc->add_option("captures", cfg_.inputs, "Capture files")->required();
    auto* tl = app.add_subcommand("timeline", "Merge every input into one sorted event stream on stdout");
    auto* rp = app.add_subcommand("report", "Merge every input and write timeline, summary and records files");
    for (auto* c : {tl, rp}) {
      c->add_option("inputs", cfg_.inputs, "Evidence directories or files");
      c->add_option("--ntfs-csv", cfg_.ntfs_csv, "NTFS journal tracker CSV export (repeatable)");
      c->add_option("--format", cfg_.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
      c->add_option("--base", cfg_.base, "Show evidence paths relative to this directory");
      c->add_option("--tz-offset", cfg_.tz_offset, "Minutes east of UTC the NTFS CSV times were written in");
    }
    rp->add_option("--out", cfg_.out, std::string("Output directory (default $") + kOutDirEnv + ")");
    auto* fg = app.add_subcommand("forge", "Write a deterministic evidence tree with its manifest");
    fg->add_option("--seed", cfg_.seed, "Seed")->required();
    fg->add_option("--out", cfg_.out, std::string("Output directory (default $") + kOutDirEnv + ")");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e, out_, err_);
      return rc == 0 ? Exit::ok : Exit::usage;
    }

    try {
      if (!cfg_.catalog.empty()) catalog_ = pcap::load_catalog_override(detail::read_text(cfg_.catalog));
      if (scan->parsed()) return do_scan();
      if (fb->parsed()) return do_facebook();
      if (sk->parsed()) return do_skype();
      if (reg->parsed()) return do_registry();
      if (carve->parsed()) return do_carve();
      if (pc->parsed()) return do_pcap();
      if (tl->parsed()) return do_timeline(false);
      if (rp->parsed()) return do_timeline(true);
      if (fg->parsed()) return do_forge();
    } catch (const Error& e) {
      err_ << "storeim: " << e.what() << "\n";
      if (e.code() == Errc::OutputNotEmpty || e.code() == Errc::InvalidArgument) return Exit::usage;
      return Exit::unreadable;
    } catch (const std::exception& e) {
      err_ << "storeim: " << e.what() << "\n";
      return Exit::unreadable;
    }
    return Exit::usage;
  }

 private:
  void warn(const std::string& where, const std::vector<std::string>& ws) {
    if (!cfg_.verbose) return;
    for (const auto& w : ws) err_ << "warning: " << (where.empty() ? "" : where + ": ") << w << "\n";
  }
  void fail(const std::string& what) { err_ << "error: " << what << "\n"; }

  pipeline::Options options(const std::vector<fs::path>& inputs) const {
    pipeline::Options o;
    o.base = cfg_.base.empty() ? detail::default_base(inputs) : std::optional<fs::path>(cfg_.base);
    o.chunk = cfg_.chunk;
    o.catalog = catalog_;
    o.ntfs.utc_offset_minutes = cfg_.tz_offset;
    return o;
  }

  std::optional<fs::path> out_dir() const {
    if (!cfg_.out.empty()) return fs::path(cfg_.out);
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return fs::path(env);
    return std::nullopt;
  }

  int do_scan() {
    detail::Outcome oc;
    json roots = json::array();
    for (const auto& r : cfg_.inputs) {
      try {
        auto res = locator::scan_tree(r);
        warn(r, res.warnings);
        json arts = json::array();
        for (const auto& a : res.artifacts) arts.push_back(records::to_json(a));
        roots.push_back({{"root", r}, {"artifacts", arts}});
        ++oc.good;
      } catch (const Error& e) {
        fail(e.what());
        ++oc.bad;
      }
    }
    if (oc.good) detail::print_json(out_, {{"roots", roots}});
    return oc.code();
  }

  int do_facebook() {
    detail::Outcome oc;
    json sets = json::array();
    for (const auto& p : cfg_.inputs) {
      try {
        const auto ds = facebook::extract_database(p);
        for (auto* ws : {&ds.analytics.warnings, &ds.friends.warnings, &ds.messages.warnings, &ds.users.warnings,
                         &ds.notifications.warnings, &ds.warnings})
          warn(p, *ws);
        sets.push_back({{"path", p}, {"dataset", records::to_json(ds)}});
        ++oc.good;
      } catch (const Error& e) {
        fail(p + ": " + e.what());
        ++oc.bad;
      }
    }
    if (oc.good) detail::print_json(out_, {{"databases", sets}});
    return oc.code();
  }

  static json skype_counts(const skype::SkypeDataset& d) {
    return {{"Accounts", d.accounts.size()},   {"Contacts", d.contacts.size()}, {"Messages", d.messages.size()},
            {"Transfers", d.transfers.size()}, {"Calls", d.calls.size()},       {"CallMembers", d.call_members.size()},
            {"VideoMessages", d.video_messages.size()}};
  }

  // A LocalState directory has no package context above it for the
  // locator, so its Skype files are picked out by name instead.
  static std::vector<fs::path> skype_files(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> out;
    std::error_code ec;
    for (const auto& in : inputs) {
      if (!fs::is_directory(in, ec)) {
        out.push_back(in);
        continue;
      }
      std::vector<fs::path> found;
      for (auto it = fs::recursive_directory_iterator(in, fs::directory_options::skip_permission_denied, ec);
           !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
        const auto name = locator::detail::lower(it->path().filename().string());
        if (it->is_regular_file(ec) && (name == "main.db" || name == "shared.xml" || name == "config.xml"))
          found.push_back(it->path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    }
    return out;
  }

  int do_skype() {
    const auto inputs = detail::normalize_inputs(cfg_.inputs);
    const auto c = pipeline::collect(skype_files(inputs), options(inputs));
    warn("", c.warnings);
    for (const auto& f : c.failures) fail(f);
    json sets = json::array();
    for (const auto& d : c.skype) sets.push_back({{"counts", skype_counts(d)}, {"dataset", records::to_json(d)}});
    json shared = json::array(), configs = json::array();
    for (const auto& s : c.shared) shared.push_back({{"path", s.path}, {"state", records::to_json(s.state)}});
    for (const auto& s : c.configs) configs.push_back({{"path", s.path}, {"config", records::to_json(s.config)}});
    const bool any = !c.skype.empty() || !c.shared.empty() || !c.configs.empty();
    if (any) detail::print_json(out_, {{"main_db", sets}, {"shared_xml", shared}, {"config_xml", configs}});
    if (!any) {
      if (c.failures.empty()) fail("no Skype artifacts found");
      return Exit::unreadable;
    }
    return c.failures.empty() ? Exit::ok : Exit::partial;
  }

  int do_registry() {
    detail::Outcome oc;
    json files = json::array();
    for (const auto& p : cfg_.inputs) {
      try {
        const auto exp = registry::parse_reg_export(detail::read_text(p));
        const auto installs = registry::find_install_times(exp);
        const auto persisted = registry::find_persisted_items(exp);
        warn(p, installs.warnings);
        warn(p, persisted.warnings);
        json ins = json::array(), per = json::array(), errs = json::array();
        for (const auto& r : installs.records) {
          warn(p, r.warnings);
          ins.push_back(records::to_json(r));
        }
        for (const auto& r : persisted.records) per.push_back(records::to_json(r));
        for (const auto& e : exp.errors) errs.push_back({{"line", e.line}, {"message", e.message}});
        files.push_back({{"path", p}, {"installs", ins}, {"persisted", per}, {"syntax_errors", errs}});
        ++oc.good;
      } catch (const Error& e) {
        fail(p + ": " + e.what());
        ++oc.bad;
      }
    }
    if (oc.good) detail::print_json(out_, {{"exports", files}});
    return oc.code();
  }

  int do_carve() {
    detail::Outcome oc;
    json images = json::array();
    const auto out = cfg_.out.empty() ? std::optional<fs::path>() : std::optional<fs::path>(cfg_.out);
    if (out) fs::create_directories(*out);
    for (const auto& p : cfg_.inputs) {
      try {
        carver::CarveResult carved;
        carver::KeywordResult keywords;
        std::vector<carver::ChatFragment> chats;
        {
          carver::FileSource src(p);
          carved = carver::carve(src, carver::builtin_signatures(), cfg_.chunk);
        }
        {
          carver::FileSource src(p);
          keywords = carver::scan_keywords(src, carver::default_terms(), carver::kDefaultRadius, cfg_.chunk);
        }
        {
          carver::FileSource src(p);
          chats = carver::extract_chat_json(src, cfg_.chunk);
        }
        json objs = json::array(), hits = json::array(), frags = json::array();
        for (const auto& o : carved.objects) {
          auto j = records::to_json(o);
          if (out) {
            const auto name = fs::path(p).filename().string() + "_" + std::to_string(o.offset) + "." + o.signature_name + ".xml";
            detail::write_text(*out / name, o.payload);
            j["written_to"] = (*out / name).generic_string();
          }
          objs.push_back(std::move(j));
        }
        for (const auto& h : keywords.hits) {
          auto j = records::to_json(h);
          j["context"] = h.context;
          hits.push_back(std::move(j));
        }
        for (const auto& f : chats) frags.push_back(records::to_json(f));
        images.push_back({{"path", p}, {"carved", objs}, {"keywords", hits}, {"chats", frags}});
        if (carved.partial || keywords.partial) {
          fail(p + ": stream read stopped early, results are partial");
          ++oc.bad;
        } else {
          ++oc.good;
        }
      } catch (const Error& e) {
        fail(p + ": " + e.what());
        ++oc.bad;
      }
    }
    if (!images.empty()) detail::print_json(out_, {{"images", images}});
    if (oc.bad && !images.empty() && oc.good == 0) return Exit::partial;
    return oc.code();
  }

  int do_pcap() {
    detail::Outcome oc;
    json caps = json::array();
    for (const auto& p : cfg_.inputs) {
      try {
        const auto cap = pcap::read_pcap(p);
        warn(p, cap.warnings);
        const auto flows = pcap::assemble_flows(cap.packets);
        json fl = json::array();
        for (const auto& f : flows) fl.push_back(records::flow_json(f, pcap::label_flow(f, catalog_)));
        const json stats = {{"records", cap.stats.records},
                            {"non_ipv4", cap.stats.non_ipv4},
                            {"non_tcp_udp", cap.stats.non_tcp_udp},
                            {"fragments", cap.stats.fragments},
                            {"truncated", cap.stats.truncated}};
        caps.push_back({{"path", p}, {"stats", stats}, {"flows", fl}});
        ++oc.good;
      } catch (const Error& e) {
        fail(p + ": " + e.what());
        ++oc.bad;
      }
    }
    if (oc.good) detail::print_json(out_, {{"captures", caps}});
    return oc.code();
  }

  int do_timeline(bool report) {
    std::vector<std::string> raw = cfg_.inputs;
    for (const auto& c : cfg_.ntfs_csv) raw.push_back(c);
    const auto inputs = detail::normalize_inputs(raw);
    if (inputs.empty()) {
      fail("no inputs");
      return Exit::usage;
    }
    std::optional<fs::path> out;
    if (report) {
      out = out_dir();
      if (!out) {
        fail(std::string("report needs --out or $") + kOutDirEnv);
        return Exit::usage;
      }
    }
    const auto c = pipeline::collect(inputs, options(inputs));
    warn("", c.warnings);
    for (const auto& f : c.failures) fail(f);
    auto n = pipeline::events(c);
    warn("", n.warnings);

    const auto rep = timeline::make_report(std::move(n.records), c.warnings, std::string(kToolVersion), detail::now_iso());
    const auto body = cfg_.format == "csv" ? timeline::emit_csv(rep.events) : timeline::emit_jsonl(rep.events);
    if (report) {
      fs::create_directories(*out);
      detail::write_text(*out / ("timeline." + cfg_.format), body);
      detail::write_text(*out / "summary.json", timeline::emit_summary(rep));
      detail::write_text(*out / "records.json", records::to_json(c).dump(2) + "\n");
      err_ << rep.events.size() << " events written to " << out->generic_string() << "\n";
    } else {
      out_ << body;
    }
    const bool empty = rep.events.empty() && c.artifacts.empty();
    if (c.failures.empty()) return Exit::ok;
    return empty ? Exit::unreadable : Exit::partial;
  }

  int do_forge() {
    const auto out = out_dir();
    if (!out) {
      fail(std::string("forge needs --out or $") + kOutDirEnv);
      return Exit::usage;
    }
    const auto f = forge::forge_tree(*out, cfg_.seed);
    err_ << "forged seed " << cfg_.seed << " into " << out->generic_string() << ": " << f.events.size()
         << " expected events\n";
    return Exit::ok;
  }

  std::ostream& out_;
  std::ostream& err_;
  Config cfg_;
  pcap::Catalog catalog_{pcap::builtin_catalog()};
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace storeim::cli
