#pragma once

// Classic pcap writer for fixtures: Ethernet + IPv4 + TCP/UDP, checksums
// left zero. Either byte order, microsecond or nanosecond stamps.

#include <cstdint>
#include <string>
#include <string_view>

namespace storeim::forge {

class PcapWriter {
 public:
  explicit PcapWriter(bool big_endian = false, bool nanosecond = false) : big_(big_endian), nano_(nanosecond) {
    u32(nano_ ? 0xA1B23C4D : 0xA1B2C3D4);
    u16(2);
    u16(4);
    u32(0);      // thiszone
    u32(0);      // sigfigs
    u32(65535);  // snaplen
    u32(1);      // Ethernet
  }

  /// proto 6 = TCP, 17 = UDP. Returns the IPv4 payload length written.
  std::uint32_t add(std::int64_t ts_us, std::uint8_t proto, std::uint32_t src, std::uint16_t sport, std::uint32_t dst,
                    std::uint16_t dport, std::string_view payload, std::uint8_t tcp_flags = 0x18) {
    std::string l4;
    if (proto == 6) {
      be16(l4, sport);
      be16(l4, dport);
      be32(l4, seq_++);
      be32(l4, 0);
      l4 += static_cast<char>(5 << 4);
      l4 += static_cast<char>(tcp_flags);
      be16(l4, 65535);
      be16(l4, 0);
      be16(l4, 0);
    } else {
      be16(l4, sport);
      be16(l4, dport);
      be16(l4, static_cast<std::uint16_t>(8 + payload.size()));
      be16(l4, 0);
    }
    l4 += payload;

    std::string frame;
    frame.append("\x00\x0c\x29\x11\x22\x33", 6);
    frame.append("\x00\x50\x56\xaa\xbb\xcc", 6);
    be16(frame, 0x0800);
    frame += static_cast<char>(0x45);
    frame += '\0';
    be16(frame, static_cast<std::uint16_t>(20 + l4.size()));
    be16(frame, ip_id_++);
    be16(frame, 0x4000);  // don't fragment
    frame += static_cast<char>(64);
    frame += static_cast<char>(proto);
    be16(frame, 0);
    be32(frame, src);
    be32(frame, dst);
    frame += l4;

    const auto sec = static_cast<std::uint32_t>(ts_us / 1000000);
    const auto frac = static_cast<std::uint32_t>(ts_us % 1000000) * (nano_ ? 1000u : 1u);
    u32(sec);
    u32(frac);
    u32(static_cast<std::uint32_t>(frame.size()));
    u32(static_cast<std::uint32_t>(frame.size()));
    out_ += frame;
    return static_cast<std::uint32_t>(l4.size());
  }

  const std::string& bytes() const { return out_; }

 private:
  static void be16(std::string& s, std::uint16_t v) {
    s += static_cast<char>(v >> 8);
    s += static_cast<char>(v & 0xFF);
  }
  static void be32(std::string& s, std::uint32_t v) {
    be16(s, static_cast<std::uint16_t>(v >> 16));
    be16(s, static_cast<std::uint16_t>(v & 0xFFFF));
  }
  void u16(std::uint16_t v) {
    if (big_) {
      be16(out_, v);
    } else {
      out_ += static_cast<char>(v & 0xFF);
      out_ += static_cast<char>(v >> 8);
    }
  }
  void u32(std::uint32_t v) {
    if (big_) {
      be32(out_, v);
    } else {
      for (int i = 0; i < 4; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xFF);
    }
  }

  bool big_;
  bool nano_;
  std::string out_;
  std::uint32_t seq_{1000};
  std::uint16_t ip_id_{1};
};

/// Minimal TLS 1.2 ClientHello, optionally carrying server_name.
inline std::string client_hello(std::string_view sni, bool with_sni = true) {
  auto be16 = [](std::string& s, std::size_t v) {
    s += static_cast<char>((v >> 8) & 0xFF);
    s += static_cast<char>(v & 0xFF);
  };
  std::string body;
  body += "\x03\x03";
  body.append(32, '\x42');  // random
  body += '\0';             // session id
  be16(body, 4);
  body.append("\xc0\x2f\x00\x9c", 4);  // two cipher suites
  body += '\x01';
  body += '\0';  // null compression
  std::string ext;
  if (with_sni) {
    std::string list;
    list += '\0';
    be16(list, sni.size());
    list += sni;
    std::string data;
    be16(data, list.size());
    data += list;
    be16(ext, 0);
    be16(ext, data.size());
    ext += data;
  }
  be16(ext, 0x000b);  // ec_point_formats
  be16(ext, 2);
  ext += "\x01";
  ext += '\0';
  be16(body, ext.size());
  body += ext;

  std::string hs;
  hs += '\x01';
  hs += static_cast<char>((body.size() >> 16) & 0xFF);
  be16(hs, body.size() & 0xFFFF);
  hs += body;
  std::string rec = "\x16\x03\x01";
  be16(rec, hs.size());
  return rec + hs;
}

}  // namespace storeim::forge
