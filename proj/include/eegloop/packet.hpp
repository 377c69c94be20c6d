#pragma once

// UDP wire format, one packet per sample:
//   magic(2)=0x4D 0x55 | version(1)=1 | seq(u32 BE) | t_ms(u64 BE) |
//   marker_len(u8) | marker bytes (UTF-8) | 4 x float32 BE (TP9,AF7,AF8,TP10)

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "eegloop/core.hpp"

namespace eegloop {

inline constexpr std::uint8_t kPacketMagic0 = 0x4D;
inline constexpr std::uint8_t kPacketMagic1 = 0x55;
inline constexpr std::uint8_t kPacketVersion = 1;
inline constexpr std::size_t kPacketHeaderSize = 2 + 1 + 4 + 8 + 1;
inline constexpr std::size_t kPacketPayloadSize = 4 * sizeof(float);

struct StreamPacket {
    std::uint32_t seq = 0;
    std::uint64_t t_ms = 0;
    std::string marker;
    std::array<float, kNumElectrodes> values{};  // channel order

    bool operator==(const StreamPacket&) const = default;
};

struct PacketDecodeError : InputError {
    enum class Kind { BadMagic, BadVersion, Truncated, NonFinite, BadUtf8 };
    Kind kind;
    PacketDecodeError(Kind k, const std::string& msg) : InputError(msg), kind(k) {}
};

namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

inline std::uint64_t get_u64_be(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

inline bool valid_utf8(std::span<const std::uint8_t> s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const std::uint8_t b = s[i];
        std::size_t len;
        std::uint32_t cp;
        if (b < 0x80) {
            ++i;
            continue;
        } else if ((b & 0xE0) == 0xC0) {
            len = 2;
            cp = b & 0x1F;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            cp = b & 0x0F;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            cp = b & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((s[i + k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF))
            return false;
        i += len;
    }
    return true;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_packet(const StreamPacket& p) {
    if (p.marker.size() > 255)
        throw InputError("packet: marker longer than 255 bytes");
    if (!detail::valid_utf8({reinterpret_cast<const std::uint8_t*>(p.marker.data()),
                             p.marker.size()}))
        throw InputError("packet: marker is not valid UTF-8");
    for (float v : p.values)
        if (!std::isfinite(v))
            throw InputError("packet: non-finite amplitude");
    std::vector<std::uint8_t> out;
    out.reserve(kPacketHeaderSize + p.marker.size() + kPacketPayloadSize);
    out.push_back(kPacketMagic0);
    out.push_back(kPacketMagic1);
    out.push_back(kPacketVersion);
    detail::put_u32_be(out, p.seq);
    detail::put_u64_be(out, p.t_ms);
    out.push_back(static_cast<std::uint8_t>(p.marker.size()));
    out.insert(out.end(), p.marker.begin(), p.marker.end());
    for (float v : p.values)
        detail::put_u32_be(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

inline StreamPacket decode_packet(std::span<const std::uint8_t> bytes) {
    using Kind = PacketDecodeError::Kind;
    if (bytes.size() < 2)
        throw PacketDecodeError(Kind::Truncated, "packet: shorter than magic");
    if (bytes[0] != kPacketMagic0 || bytes[1] != kPacketMagic1)
        throw PacketDecodeError(Kind::BadMagic, "packet: bad magic");
    if (bytes.size() < kPacketHeaderSize)
        throw PacketDecodeError(Kind::Truncated, "packet: truncated header");
    if (bytes[2] != kPacketVersion)
        throw PacketDecodeError(Kind::BadVersion,
                                "packet: unsupported version " + std::to_string(bytes[2]));

    StreamPacket p;
    p.seq = detail::get_u32_be(bytes.data() + 3);
    p.t_ms = detail::get_u64_be(bytes.data() + 7);
    const std::size_t marker_len = bytes[15];
    const std::size_t expected = kPacketHeaderSize + marker_len + kPacketPayloadSize;
    if (bytes.size() != expected)
        throw PacketDecodeError(Kind::Truncated,
                                "packet: expected " + std::to_string(expected) +
                                    " bytes, got " + std::to_string(bytes.size()));

    const auto marker_bytes = bytes.subspan(kPacketHeaderSize, marker_len);
    if (!detail::valid_utf8(marker_bytes))
        throw PacketDecodeError(Kind::BadUtf8, "packet: marker is not valid UTF-8");
    p.marker.assign(marker_bytes.begin(), marker_bytes.end());

    const std::uint8_t* payload = bytes.data() + kPacketHeaderSize + marker_len;
    for (std::size_t c = 0; c < kNumElectrodes; ++c) {
        const float v = std::bit_cast<float>(detail::get_u32_be(payload + 4 * c));
        if (!std::isfinite(v))
            throw PacketDecodeError(Kind::NonFinite,
                                    "packet: non-finite amplitude in channel " +
                                        std::string(electrode_name(kDataElectrodes[c])));
        p.values[c] = v;
    }
    return p;
}

}  // namespace eegloop
