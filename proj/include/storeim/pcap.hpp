#pragma once

// Classic pcap replay: packets, bidirectional flows, TLS SNI and endpoint
// labelling against the observed Facebook/Skype infrastructure.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "storeim/error.hpp"
#include "storeim/evidence.hpp"
#include "storeim/ipv4.hpp"

namespace storeim::pcap {

enum class Proto : std::uint8_t { tcp = 6, udp = 17 };

inline std::string_view to_string(Proto p) { return p == Proto::tcp ? "tcp" : "udp"; }

struct Packet {
  std::int64_t ts_us{0};  // UTC microseconds since the unix epoch
  Proto proto{Proto::tcp};
  std::uint32_t src{0};
  std::uint32_t dst{0};
  std::uint16_t sport{0};
  std::uint16_t dport{0};
  std::uint32_t ip_payload_len{0};  // IPv4 total length minus IPv4 header
  std::string payload;              // captured L4 data (after the TCP/UDP header)
};

struct ReadStats {
  std::uint64_t records{0};
  std::uint64_t non_ipv4{0};
  std::uint64_t non_tcp_udp{0};
  std::uint64_t fragments{0};
  std::uint64_t truncated{0};
};

struct Capture {
  std::vector<Packet> packets;
  ReadStats stats;
  bool byte_swapped{false};
  bool nanosecond{false};
  std::uint32_t link_type{0};
  std::vector<std::string> warnings;
};

inline constexpr std::uint32_t kMagicMicro = 0xA1B2C3D4;
inline constexpr std::uint32_t kMagicNano = 0xA1B23C4D;
inline constexpr std::uint32_t kLinkEthernet = 1;
inline constexpr std::uint32_t kLinkRaw = 101;

namespace detail {

inline std::uint16_t be16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) << 8 | static_cast<unsigned char>(b[at + 1]));
}
inline std::uint32_t be32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(be16(b, at)) << 16 | be16(b, at + 2);
}
inline std::uint32_t le32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = v << 8 | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
  return v;
}
inline std::uint32_t swap32(std::uint32_t v) { return ipv4::byteswap(v); }

/// Decodes one link-layer frame into `out`; returns false (with the stat
/// bumped) for anything that is not IPv4 TCP/UDP.
inline bool decode_frame(std::string_view f, std::uint32_t link, ReadStats& st, Packet& out) {
  std::size_t at = 0;
  if (link == kLinkEthernet) {
    if (f.size() < 14) return ++st.truncated, false;
    std::uint16_t type = be16(f, 12);
    at = 14;
    while ((type == 0x8100 || type == 0x88A8) && f.size() >= at + 4) {
      type = be16(f, at + 2);
      at += 4;
    }
    if (type != 0x0800) return ++st.non_ipv4, false;
  }
  if (f.size() < at + 20) return ++st.truncated, false;
  const auto ver_ihl = static_cast<unsigned char>(f[at]);
  if (ver_ihl >> 4 != 4) return ++st.non_ipv4, false;
  const std::size_t ihl = (ver_ihl & 0xF) * 4u;
  const std::uint16_t total = be16(f, at + 2);
  if (ihl < 20 || total < ihl || f.size() < at + ihl) return ++st.truncated, false;
  const std::uint16_t frag = be16(f, at + 6);
  const auto proto = static_cast<unsigned char>(f[at + 9]);
  if (proto != 6 && proto != 17) return ++st.non_tcp_udp, false;
  if ((frag & 0x1FFF) != 0) return ++st.fragments, false;  // later fragments have no L4 header
  out.proto = static_cast<Proto>(proto);
  out.src = be32(f, at + 12);
  out.dst = be32(f, at + 16);
  out.ip_payload_len = total - static_cast<std::uint32_t>(ihl);
  const std::size_t l4 = at + ihl;
  std::size_t l4_hdr = 8;
  if (out.proto == Proto::tcp) {
    if (f.size() < l4 + 20) return ++st.truncated, false;
    l4_hdr = (static_cast<unsigned char>(f[l4 + 12]) >> 4) * 4u;
    if (l4_hdr < 20) return ++st.truncated, false;
  } else if (f.size() < l4 + 8) {
    return ++st.truncated, false;
  }
  out.sport = be16(f, l4);
  out.dport = be16(f, l4 + 2);
  // Payload ends at the IP datagram end, or at the capture end when snapped.
  const std::size_t ip_end = std::min<std::size_t>(f.size(), at + total);
  const std::size_t data = l4 + l4_hdr;
  out.payload = data < ip_end ? std::string(f.substr(data, ip_end - data)) : std::string();
  return true;
}

}  // namespace detail

inline Capture parse_pcap(std::string_view b) {
  if (b.size() < 24) throw Error(Errc::NotPcap, "shorter than a pcap global header");
  const std::uint32_t magic = detail::le32(b, 0);
  Capture cap;
  if (magic == kMagicMicro || magic == kMagicNano) {
    cap.byte_swapped = false;
  } else if (detail::swap32(magic) == kMagicMicro || detail::swap32(magic) == kMagicNano) {
    cap.byte_swapped = true;
  } else if (magic == 0x0A0D0D0A) {
    throw Error(Errc::NotPcap, "pcapng is not supported; convert to classic pcap first");
  } else {
    throw Error(Errc::NotPcap, "unknown magic");
  }
  auto u32 = [&](std::size_t at) {
    const auto v = detail::le32(b, at);
    return cap.byte_swapped ? detail::swap32(v) : v;
  };
  cap.nanosecond = (cap.byte_swapped ? detail::swap32(magic) : magic) == kMagicNano;
  const std::int32_t thiszone = static_cast<std::int32_t>(u32(8));
  cap.link_type = u32(20) & 0x0FFFFFFF;
  if (cap.link_type != kLinkEthernet && cap.link_type != kLinkRaw)
    throw Error(Errc::NotPcap, "unsupported link type " + std::to_string(cap.link_type));

  std::size_t at = 24;
  while (at < b.size()) {
    if (b.size() - at < 16) {
      ++cap.stats.truncated;
      cap.warnings.push_back("truncated record header at offset " + std::to_string(at));
      break;
    }
    const std::uint32_t sec = u32(at), frac = u32(at + 4), incl = u32(at + 8);
    at += 16;
    if (incl > b.size() - at) {
      ++cap.stats.truncated;
      cap.warnings.push_back("record at offset " + std::to_string(at - 16) + " runs past end of file");
      break;
    }
    ++cap.stats.records;
    Packet p;
    p.ts_us = (static_cast<std::int64_t>(sec) - thiszone) * 1000000 +
              (cap.nanosecond ? static_cast<std::int64_t>(frac) / 1000 : static_cast<std::int64_t>(frac));
    if (detail::decode_frame(b.substr(at, incl), cap.link_type, cap.stats, p)) cap.packets.push_back(std::move(p));
    at += incl;
  }
  return cap;
}

inline Capture read_pcap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pcap(ss.str());
}

// ---- TLS SNI -----------------------------------------------------------------------

inline std::optional<std::string> extract_sni(std::string_view p) {
  // TLS record: type 22 (handshake), major version 3.
  if (p.size() < 5 + 4 || p[0] != 0x16 || p[1] != 0x03) return std::nullopt;
  const std::size_t rec_len = detail::be16(p, 3);
  std::string_view h = p.substr(5, std::min(rec_len, p.size() - 5));
  if (h.size() < 4 || h[0] != 0x01) return std::nullopt;  // ClientHello
  const std::size_t hs_len = (static_cast<unsigned char>(h[1]) << 16) | detail::be16(h, 2);
  h = h.substr(4, std::min(hs_len, h.size() - 4));
  std::size_t at = 2 + 32;  // client_version, random
  auto skip = [&](std::size_t len_bytes) {
    if (at + len_bytes > h.size()) return false;
    const std::size_t n = len_bytes == 1 ? static_cast<unsigned char>(h[at]) : detail::be16(h, at);
    at += len_bytes + n;
    return at <= h.size();
  };
  if (at > h.size() || !skip(1) || !skip(2) || !skip(1)) return std::nullopt;
  if (at + 2 > h.size()) return std::nullopt;
  const std::size_t ext_end = std::min(h.size(), at + 2 + detail::be16(h, at));
  at += 2;
  while (at + 4 <= ext_end) {
    const auto type = detail::be16(h, at);
    const std::size_t len = detail::be16(h, at + 2);
    at += 4;
    if (at + len > ext_end) return std::nullopt;
    if (type == 0) {
      std::size_t s = at + 2;
      const std::size_t list_end = std::min(at + len, at + 2 + (len >= 2 ? detail::be16(h, at) : 0));
      while (s + 3 <= list_end) {
        const auto name_type = static_cast<unsigned char>(h[s]);
        const std::size_t n = detail::be16(h, s + 1);
        if (s + 3 + n > list_end) return std::nullopt;
        if (name_type == 0) {
          std::string name(h.substr(s + 3, n));
          const bool ok = !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '-' || c == '.' || c == '_';
          });
          return ok ? std::optional<std::string>(name) : std::nullopt;
        }
        s += 3 + n;
      }
      return std::nullopt;
    }
    at += len;
  }
  return std::nullopt;
}

// ---- flows -------------------------------------------------------------------------

struct Endpoint {
  std::uint32_t ip{0};
  std::uint16_t port{0};
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
  std::string to_string() const { return ipv4::format(ip) + ":" + std::to_string(port); }
};

struct Direction {
  std::uint64_t packets{0};
  std::uint64_t bytes{0};
  std::optional<std::int64_t> first_us;
  std::optional<std::int64_t> last_us;
  friend bool operator==(const Direction&, const Direction&) = default;
};

struct Flow {
  Proto proto{Proto::tcp};
  Endpoint a;  // canonical: a < b
  Endpoint b;
  Direction a_to_b;
  Direction b_to_a;
  std::int64_t first_us{0};
  std::int64_t last_us{0};
  std::optional<std::string> sni;

  std::uint64_t total_bytes() const { return a_to_b.bytes + b_to_a.bytes; }
  std::uint64_t total_packets() const { return a_to_b.packets + b_to_a.packets; }
  Timestamp first_seen() const { return Timestamp::from_unix(static_cast<std::uint64_t>(first_us / 1000), EpochUnit::millis); }
  Timestamp last_seen() const { return Timestamp::from_unix(static_cast<std::uint64_t>(last_us / 1000), EpochUnit::millis); }
  friend bool operator==(const Flow&, const Flow&) = default;
};

inline std::vector<Flow> assemble_flows(const std::vector<Packet>& packets) {
  using Key = std::tuple<Proto, Endpoint, Endpoint>;
  std::map<Key, Flow> table;
  for (const auto& p : packets) {
    const Endpoint s{p.src, p.sport}, d{p.dst, p.dport};
    const bool forward = s < d || s == d;
    const Key key{p.proto, forward ? s : d, forward ? d : s};
    auto [it, fresh] = table.try_emplace(key);
    Flow& f = it->second;
    if (fresh) {
      f.proto = p.proto;
      f.a = std::get<1>(key);
      f.b = std::get<2>(key);
      f.first_us = f.last_us = p.ts_us;
    }
    auto& dir = forward ? f.a_to_b : f.b_to_a;
    ++dir.packets;
    dir.bytes += p.ip_payload_len;
    dir.first_us = dir.first_us ? std::min(*dir.first_us, p.ts_us) : p.ts_us;
    dir.last_us = dir.last_us ? std::max(*dir.last_us, p.ts_us) : p.ts_us;
    f.first_us = std::min(f.first_us, p.ts_us);
    f.last_us = std::max(f.last_us, p.ts_us);
    if (!f.sni && p.proto == Proto::tcp && !p.payload.empty()) f.sni = extract_sni(p.payload);
  }
  std::vector<Flow> out;
  out.reserve(table.size());
  for (auto& [k, f] : table) out.push_back(std::move(f));
  std::stable_sort(out.begin(), out.end(), [](const Flow& x, const Flow& y) { return x.first_us < y.first_us; });
  return out;
}

// ---- catalog -------------------------------------------------------------------------

enum class Label {
  FacebookChat,
  FacebookUpload,
  FacebookCdnDownload,
  FacebookCore,
  AkamaiCdn,
  SymantecOcsp,
  SkypeRst,
  SkypeSupernodeLookup,
  MicrosoftLive,
  GlobalSignOcsp,
  EdgeCastCrl,
  Other,
};

inline constexpr std::array<std::string_view, 12> kLabelNames = {
    "FacebookChat", "FacebookUpload", "FacebookCdnDownload",  "FacebookCore",  "AkamaiCdn",     "SymantecOcsp",
    "SkypeRst",     "SkypeSupernodeLookup", "MicrosoftLive", "GlobalSignOcsp", "EdgeCastCrl", "Other"};

inline std::string_view to_string(Label l) { return kLabelNames[static_cast<std::size_t>(l)]; }

inline std::optional<Label> parse_label(std::string_view s) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i)
    if (kLabelNames[i] == s) return static_cast<Label>(i);
  return std::nullopt;
}

struct CatalogEntry {
  std::uint32_t network{0};
  int prefix{32};
  Label label{Label::Other};
  std::string owner;
  std::vector<std::string> urls;
  bool locale_dependent{false};

  bool contains(std::uint32_t ip) const {
    const std::uint32_t mask = prefix == 0 ? 0 : ~std::uint32_t{0} << (32 - prefix);
    return (ip & mask) == network;
  }
  std::string match_text() const {
    return prefix == 32 ? ipv4::format(network) : ipv4::format(network) + "/" + std::to_string(prefix);
  }
};

using Catalog = std::vector<CatalogEntry>;

/// "a.b.c.d" or "a.b.c.d/n" with n in 8..32; host bits must be zero.
inline std::pair<std::uint32_t, int> parse_match(std::string_view s) {
  int prefix = 32;
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    const auto p = s.substr(slash + 1);
    prefix = 0;
    if (p.empty() || p.size() > 2) throw Error(Errc::InvalidArgument, "bad prefix in '" + std::string(s) + "'");
    for (char c : p) {
      if (c < '0' || c > '9') throw Error(Errc::InvalidArgument, "bad prefix in '" + std::string(s) + "'");
      prefix = prefix * 10 + (c - '0');
    }
    s = s.substr(0, slash);
  }
  const auto ip = ipv4::parse(s);
  if (!ip) throw Error(Errc::InvalidArgument, "bad IPv4 address '" + std::string(s) + "'");
  if (prefix < 8 || prefix > 32) throw Error(Errc::InvalidArgument, "prefix length must be 8..32");
  const std::uint32_t mask = ~std::uint32_t{0} << (32 - prefix);
  if ((*ip & ~mask) != 0 && prefix != 32) throw Error(Errc::InvalidArgument, "host bits set in '" + std::string(s) + "'");
  return {*ip, prefix};
}

/// Endpoints observed in the Facebook and Skype captures. CDN and cloud
/// assignments rot quickly; treat as a starting point and override per case.
inline const Catalog& builtin_catalog() {
  static const Catalog cat = [] {
    Catalog c;
    auto add = [&](std::string_view match, Label label, std::string owner, std::vector<std::string> urls,
                   bool locale = false) {
      const auto [net, prefix] = parse_match(match);
      c.push_back({net, prefix, label, std::move(owner), std::move(urls), locale});
    };
    const std::vector<std::string> akamai_ocsp = {"e8218.ce.akamaiedge.net", "ocsp.ws.symantec.com.edgekey.net",
                                                  "gtssl-ocsp.geotrust.com", "g.symcd.com", "ocsp.verisign.com"};
    add("23.58.43.27", Label::SymantecOcsp, "Akamai Technologies Inc.", akamai_ocsp);
    add("23.62.109.216", Label::AkamaiCdn, "Akamai Technologies Inc.", {"a2047.dspl.akamai.net", "fbcdn-profile-a.akamaihd.net"});
    add("23.62.109.87", Label::AkamaiCdn, "Akamai Technologies Inc.",
        {"a591.dspda2.akamai.net", "fbcdn-vthumb-a.akamaihd.net.edgesuite.net"});
    for (auto ip : {"31.13.67.7", "31.13.67.23"})
      add(ip, Label::FacebookCdnDownload, "Facebook Malaysia", {"scontent-a-kul.xx.fbcdn.net"});
    add("31.13.70.1", Label::FacebookUpload, "Facebook USA",
        {"star.c10r.facebook.com", "api.facebook.com", "www.facebook.com", "star.facebook.com", "upload.facebook.com"});
    add("31.13.79.246", Label::FacebookChat, "Facebook Singapore",
        {"star.c10r.facebook.com", "api.facebook.com", "star.facebook.com", "5-edge-chat.facebook.com",
         "upload.facebook.com", "www.facebook.com"});
    add("31.13.70.7", Label::FacebookCdnDownload, "Facebook USA", {"scontent.xx.fbcdn.net", "cdn.fbsbx.com"});
    add("31.13.76.102", Label::FacebookChat, "Facebook USA", {"star.c10r.facebook.com", "5-edge-chat.facebook.com"});
    add("115.164.13.20", Label::AkamaiCdn, "DiGi Telecommunications Sdn Bhd",
        {"a1854.dspmm1.akamai.net", "fbcdn-photos-e-a.akamaihd.net.edgesuite.net", "a1073.dsw4.akamai.net",
         "fbcdn-creative-a.akamaihd.net.edgesuite.net"},
        true);
    add("115.164.13.25", Label::AkamaiCdn, "DiGi Telecommunications Sdn Bhd",
        {"a1168.dsw4.akamai.net", "fbstatic-a.akamaihd.net.edgesuite.net", "a1531.dsw4.akamai.net",
         "fbexternal-a.akamaihd.net.edgesuite.net", "a1170.dsw4.akamai.net", "fbcdn-dragon-a.akamaihd.net.edgesuite.net",
         "a1854.dspmm1.akamai.net", "fbcdn-photos-e-a.akamaihd.net.edgesuite.net"},
        true);
    add("115.164.141.10", Label::AkamaiCdn, "DiGi Telecommunications Sdn Bhd",
        {"a1005.dspw42.akamai.net", "fbcdn-sphotos-e-a.akamaihd.net.edgesuite.net"}, true);
    for (auto ip : {"115.164.141.16", "115.164.141.17"})
      add(ip, Label::AkamaiCdn, "DiGi Telecommunications Sdn Bhd",
          {"a1406.dspw42.akamai.net", "fbcdn-sphotos-f-a.akamaihd.net.edgesuite.net"}, true);
    for (auto ip : {"115.164.141.32", "115.164.141.34", "115.164.141.40"})
      add(ip, Label::AkamaiCdn, "DiGi Telecommunications Sdn Bhd",
          {"a1003.dspw41.akamai.net", "fbcdn-sphotos-c-a.akamaihd.net.edgesuite.net", "a1404.dspw41.akamai.net",
           "fbcdn-sphotos-d-a.akamaihd.net.edgesuite.net", "a1408.dspw43.akamai.net",
           "fbcdn-sphotos-h-a.akamaihd.net.edgesuite.net"},
          true);
    add("173.252.103.16", Label::FacebookCore, "Facebook Inc.", {"orcart.vv.facebook.com", "orcart.facebook.com"});
    add("173.252.120.6", Label::FacebookCore, "Facebook Inc.", {"www.facebook.com"});

    add("23.58.236.138", Label::AkamaiCdn, "Akamai Technologies, Inc.",
        {"e4593.g.akamaiedge.net", "wildcard.skype.com.edgekey.net"});
    add("23.58.154.154", Label::AkamaiCdn, "Akamai Technologies, Inc.",
        {"e8011.g.akamaiedge.net", "wildcard.msads.net.edgekey.net"});
    add("65.54.184.60", Label::MicrosoftLive, "Microsoft Corp.", {"baymsg1010611.gateway.messenger.live.com"});
    add("65.55.68.104", Label::MicrosoftLive, "Microsoft Corp.", {"activesync.glbdns2.microsoft.com", "m.hotmail.com"});
    for (auto ip : {"65.55.246.85", "65.55.246.149"})
      add(ip, Label::MicrosoftLive, "Microsoft Corp.",
          {"proxy-blu-people.directory.live.com.akadns.net", "proxy-blu-people.directory.live.com"});
    const std::vector<std::string> rst = {"rstwh.skype-cr.akadns.net", "1007.0.1.3.9.rst15.r.skype.net"};
    for (auto ip : {"91.190.216.51", "91.190.216.56", "91.190.216.57", "91.190.216.58", "91.190.216.59",
                    "91.190.216.62", "91.190.216.63", "91.190.216.66",
                    // Listed as 91.90.218.x in the capture summary; kept verbatim.
                    "91.90.218.52", "91.90.218.53", "91.90.218.54", "91.90.218.55", "91.90.218.56", "91.90.218.58",
                    "91.90.218.59", "91.90.218.66"})
      add(ip, Label::SkypeRst, "Privately Owned Enterprise \"M.O.D.A.\"", rst);
    add("91.190.216.0/24", Label::SkypeRst, "Privately Owned Enterprise \"M.O.D.A.\"", rst);
    add("91.190.218.0/24", Label::SkypeRst, "Privately Owned Enterprise \"M.O.D.A.\"", rst);
    for (auto ip : {"108.162.232.204", "108.162.232.199"})
      add(ip, Label::GlobalSignOcsp, "CloudFlare, Inc.", {"ocsp.globalsign.com", "ocsp2.globalsign.com"});
    for (auto ip : {"168.63.212.78", "137.116.32.77"})
      add(ip, Label::MicrosoftLive, "Microsoft Corp.",
          {"skypeecs-prod-ase-0.cloudapp.net", "a.config.skype.trafficmanager.net"});
    add("192.229.145.200", Label::EdgeCastCrl, "EdgeCast Networks, Inc.",
        {"cs1.wpc.v0cdn.net", "az361816.vo.msecnd.net", "certrevoc.vo.msecnd.net", "msclr.microsoft.com"});
    return c;
  }();
  return cat;
}

/// Override lines: <ip-or-cidr> <label> <owner> [url,url,...]. The owner may
/// be double-quoted to hold spaces; '#' starts a comment. Entries replace
/// base entries with the same match and are otherwise appended.
inline Catalog load_catalog_override(std::string_view text, Catalog base = builtin_catalog()) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::vector<std::string> tok;
    for (std::size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      if (line[i] == '"') {
        const auto close = line.find('"', i + 1);
        if (close == std::string::npos)
          throw Error(Errc::InvalidArgument, "catalog line " + std::to_string(line_no) + ": unterminated quote");
        tok.push_back(line.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        auto j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        tok.push_back(line.substr(i, j - i));
        i = j;
      }
    }
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tok.size() < 3 || tok.size() > 4)
      throw Error(Errc::InvalidArgument, "catalog line " + std::to_string(line_no) + ": expected 3 or 4 fields");
    CatalogEntry e;
    try {
      std::tie(e.network, e.prefix) = parse_match(tok[0]);
    } catch (const Error& err) {
      throw Error(Errc::InvalidArgument, "catalog line " + std::to_string(line_no) + ": " + err.what());
    }
    const auto label = parse_label(tok[1]);
    if (!label) throw Error(Errc::InvalidArgument, "catalog line " + std::to_string(line_no) + ": unknown label " + tok[1]);
    e.label = *label;
    e.owner = tok[2];
    if (tok.size() == 4) {
      std::stringstream ss(tok[3]);
      for (std::string u; std::getline(ss, u, ',');)
        if (!u.empty()) e.urls.push_back(u);
    }
    auto same = std::find_if(base.begin(), base.end(),
                             [&](const CatalogEntry& x) { return x.network == e.network && x.prefix == e.prefix; });
    if (same != base.end()) *same = std::move(e);
    else base.push_back(std::move(e));
    if (end == text.size()) break;
  }
  return base;
}

// ---- labelling -------------------------------------------------------------------------

enum class Basis { ip_catalog, port_heuristic, sni, unlabeled };

inline std::string_view to_string(Basis b) {
  constexpr std::string_view kNames[] = {"ip_catalog", "port_heuristic", "sni", "unlabeled"};
  return kNames[static_cast<int>(b)];
}

struct FlowLabel {
  Label label{Label::Other};
  Basis basis{Basis::unlabeled};
  std::string detail;
  friend bool operator==(const FlowLabel&, const FlowLabel&) = default;
};

inline constexpr std::uint16_t kSupernodeLookupPort = 33033;

namespace detail {

inline bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return std::tolower(x) == std::tolower(y); });
}

/// Best entry for one address: longest prefix wins, then lowest label,
/// then lowest network, so listing order never matters.
inline const CatalogEntry* best_ip_match(std::uint32_t ip, const Catalog& cat) {
  const CatalogEntry* best = nullptr;
  for (const auto& e : cat) {
    if (!e.contains(ip)) continue;
    if (!best || std::tie(e.prefix, best->label) > std::tie(best->prefix, e.label)) best = &e;
  }
  return best;
}

}  // namespace detail

/// SNI match against catalog URLs > exact IP > CIDR > TCP port 33033 > Other.
inline FlowLabel label_flow(const Flow& flow, const Catalog& cat) {
  if (flow.sni) {
    // An entry that lists the hostname and also covers one endpoint is the
    // strongest statement; otherwise take the label most entries give it.
    std::map<Label, int> votes;
    const CatalogEntry* on_path = nullptr;
    for (const auto& e : cat) {
      if (std::none_of(e.urls.begin(), e.urls.end(), [&](const std::string& u) { return detail::iequal(u, *flow.sni); }))
        continue;
      ++votes[e.label];
      if ((e.contains(flow.a.ip) || e.contains(flow.b.ip)) &&
          (!on_path || std::tie(e.prefix, on_path->label) > std::tie(on_path->prefix, e.label)))
        on_path = &e;
    }
    if (on_path) return {on_path->label, Basis::sni, *flow.sni + " via " + on_path->match_text()};
    if (!votes.empty()) {
      auto best = std::max_element(votes.begin(), votes.end(), [](const auto& x, const auto& y) {
        return x.second < y.second || (x.second == y.second && x.first > y.first);
      });
      return {best->first, Basis::sni, *flow.sni};
    }
  }
  const CatalogEntry* hit = nullptr;
  for (const auto ip : {flow.a.ip, flow.b.ip}) {
    const auto* e = detail::best_ip_match(ip, cat);
    if (e && (!hit || std::tie(e->prefix, hit->label) > std::tie(hit->prefix, e->label))) hit = e;
  }
  if (hit) {
    return {hit->label, Basis::ip_catalog,
            hit->match_text() + " " + hit->owner + (hit->urls.empty() ? "" : " (" + hit->urls.front() + ")") +
                (hit->locale_dependent ? " [locale-dependent]" : "")};
  }
  if (flow.proto == Proto::tcp && (flow.a.port == kSupernodeLookupPort || flow.b.port == kSupernodeLookupPort))
    return {Label::SkypeSupernodeLookup, Basis::port_heuristic, "TCP port 33033"};
  return {Label::Other, Basis::unlabeled, ""};
}

}  // namespace storeim::pcap
