#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwtsim/address.hpp"
#include "lwtsim/align.hpp"
#include "lwtsim/errors.hpp"
#include "lwtsim/wire.hpp"

namespace lwtsim {

// Routing header type codes and the hop-by-hop option numbers used on the wire.
inline constexpr std::uint8_t kSrv6RoutingType = 4;
inline constexpr std::uint8_t kRplRoutingType = 3;
inline constexpr std::uint8_t kIoamOptionType = 0x31; // hop-by-hop IOAM option
inline constexpr std::uint8_t kIoamOptTypePto = 0;    // pre-allocated trace
inline constexpr std::uint8_t kNextHeaderNone = 59;

inline constexpr int kIoamPtoMin = 4;
inline constexpr int kIoamPtoMax = 244;
inline constexpr int kSrv6MaxSegments = 127;

/// Shared encode/decode inputs that are not part of a header value:
/// the Next Header byte, and the packet destination used to reconstitute
/// elided address octets (RPL compression, reduced SRH first segment).
struct CodecContext {
    std::uint8_t next_header = kNextHeaderNone;
    std::optional<Ipv6Address> destination;
    bool srv6_reduced = false; // decode hint: the wire omits the first segment
};

// ---------------------------------------------------------------------------
// Header values
// ---------------------------------------------------------------------------

/// Fixed 40-byte IPv6 header.
struct Ipv6Header {
    std::uint8_t traffic_class = 0;
    std::uint32_t flow_label = 0; // 20 bits
    std::uint16_t payload_length = 0;
    std::uint8_t next_header = kNextHeaderNone;
    std::uint8_t hop_limit = 64;
    Ipv6Address source;
    Ipv6Address destination;

    bool operator==(const Ipv6Header&) const = default;
};

/// Hop-by-Hop extension header carrying one IOAM pre-allocated trace option.
///
///   0: next header      1: hdr ext len     2-3: padding
///   4: option type      5: opt data len    6: reserved     7: ioam opt-type
///   8-9: namespace id   10-11: node_len(5) flags(4) remaining_len(7)
///   12-14: trace type   15: reserved
///   16..: pre-allocated node data (zeros), then PadN up to an 8-byte multiple
struct IoamPtoHbh {
    std::uint16_t namespace_id = 0;
    std::uint8_t node_len = 0;      // 5 bits, 4-octet units
    std::uint8_t flags = 0;         // 4 bits
    std::uint8_t remaining_len = 0; // 7 bits, 4-octet units
    std::uint32_t trace_type = 0;   // 24-bit bitmap
    int pto_bytes = 0;              // multiple of 4 in [4, 244]

    bool operator==(const IoamPtoHbh&) const = default;
};

/// Segment Routing header.
///
///   0: next header    1: hdr ext len    2: routing type (4)   3: segments left
///   4: last entry     5: flags          6-7: tag
///   8..: 16-byte segment list
///
/// `segments` is the full logical list; a reduced header omits segments[0]
/// from the encoding (it travels in the outer destination address instead).
struct Srv6Header {
    std::vector<Ipv6Address> segments;
    std::uint8_t segments_left = 0;
    std::uint8_t last_entry = 0;
    std::uint8_t flags = 0;
    std::uint16_t tag = 0;
    bool reduced = false;

    bool operator==(const Srv6Header&) const = default;
};

/// RPL source routing header with address compression.
///
///   0: next header    1: hdr ext len    2: routing type (3)   3: segments left
///   4: cmpr_i(4) cmpr_e(4)    5: pad(4) reserved(4)    6-7: reserved
///   8..: compressed addresses, then `pad` zero octets
///
/// All but the last address drop their first cmpr_i octets, the last drops
/// cmpr_e; the dropped octets are shared with the packet destination.
struct RplHeader {
    std::vector<Ipv6Address> addresses;
    int cmpr_i = 0;
    int cmpr_e = 0;
    int pad = 0;
    std::uint8_t segments_left = 0;

    bool operator==(const RplHeader&) const = default;
};

// ---------------------------------------------------------------------------
// Overhead arithmetic
// ---------------------------------------------------------------------------

enum class IoamMode { Inline, Encap };
enum class Srv6Mode { Inline, Encap, EncapRed, L2Encap, L2EncapRed };

inline void check_pto(int pto_bytes) {
    if (pto_bytes < kIoamPtoMin || pto_bytes > kIoamPtoMax || pto_bytes % 4 != 0)
        throw std::invalid_argument("IOAM PTO size must be a multiple of 4 in [" +
                                    std::to_string(kIoamPtoMin) + ", " +
                                    std::to_string(kIoamPtoMax) + "], got " +
                                    std::to_string(pto_bytes));
}

/// Total overhead of an IOAM PTO encapsulation: the 16-byte hop-by-hop and
/// trace preamble plus the node data, padded to an 8-byte multiple, plus the
/// outer IPv6 header in Encap mode.
inline int ioam_overhead(int pto_bytes, IoamMode mode) {
    check_pto(pto_bytes);
    return align_up(16 + pto_bytes, 8) + (mode == IoamMode::Encap ? 40 : 0);
}

/// Total overhead of an SRv6 encapsulation. Encap modes add the outer IPv6
/// header; Red modes omit one 16-byte segment from the SRH.
inline int srv6_overhead(int n_segments, Srv6Mode mode) {
    if (n_segments < 1 || n_segments > kSrv6MaxSegments)
        throw std::invalid_argument("SRv6 segment count must be in [1, " +
                                    std::to_string(kSrv6MaxSegments) + "], got " +
                                    std::to_string(n_segments));
    switch (mode) {
    case Srv6Mode::Inline:
        return 8 + 16 * n_segments;
    case Srv6Mode::Encap:
    case Srv6Mode::L2Encap:
        return 48 + 16 * n_segments;
    case Srv6Mode::EncapRed:
    case Srv6Mode::L2EncapRed:
        return 32 + 16 * n_segments;
    }
    throw std::invalid_argument("bad SRv6 mode");
}

struct RplOverhead {
    int size = 0; // padded header size
    int pad = 0;  // trailing pad octets, < 8
};

/// Size of a compressed RPL source routing header, padded to an 8-byte multiple.
inline RplOverhead rpl_overhead(int n_addresses, int cmpr_i, int cmpr_e) {
    if (n_addresses < 1)
        throw std::invalid_argument("RPL address count must be at least 1");
    if (cmpr_i < 0 || cmpr_i > 15 || cmpr_e < 0 || cmpr_e > 15)
        throw std::invalid_argument("RPL compression values must be in [0, 15]");
    int raw = 8 + (n_addresses - 1) * (16 - cmpr_i) + (16 - cmpr_e);
    int size = align_up(raw, 8);
    return {size, size - raw};
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

inline std::vector<std::uint8_t> encode(const Ipv6Header& h) {
    if (h.flow_label >= (1u << 20))
        throw std::invalid_argument("IPv6 flow label exceeds 20 bits");
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>((6 << 4) | (h.traffic_class >> 4)));
    w.u8(static_cast<std::uint8_t>(((h.traffic_class & 0xf) << 4) | ((h.flow_label >> 16) & 0xf)));
    w.u16(static_cast<std::uint16_t>(h.flow_label & 0xffff));
    w.u16(h.payload_length);
    w.u8(h.next_header);
    w.u8(h.hop_limit);
    w.address(h.source);
    w.address(h.destination);
    return w.take();
}

inline std::vector<std::uint8_t> encode(const IoamPtoHbh& h, const CodecContext& ctx = {}) {
    check_pto(h.pto_bytes);
    if (h.node_len > 31)
        throw std::invalid_argument("IOAM node_len exceeds 5 bits");
    if (h.flags > 15)
        throw std::invalid_argument("IOAM flags exceed 4 bits");
    if (h.remaining_len > 127)
        throw std::invalid_argument("IOAM remaining_len exceeds 7 bits");
    if (h.remaining_len * 4 > h.pto_bytes)
        throw std::invalid_argument("IOAM remaining_len larger than the pre-allocated space");
    if (h.trace_type >= (1u << 24))
        throw std::invalid_argument("IOAM trace_type exceeds 24 bits");

    int total = align_up(16 + h.pto_bytes, 8);
    int pad = total - 16 - h.pto_bytes; // 0 or 4

    ByteWriter w;
    w.u8(ctx.next_header);
    w.u8(static_cast<std::uint8_t>((total - 8) / 8));
    w.u16(0); // padding
    w.u8(kIoamOptionType);
    w.u8(static_cast<std::uint8_t>(10 + h.pto_bytes)); // option data after type/len
    w.u8(0); // reserved
    w.u8(kIoamOptTypePto);
    w.u16(h.namespace_id);
    w.u16(static_cast<std::uint16_t>((h.node_len << 11) | (h.flags << 7) | h.remaining_len));
    w.u24(h.trace_type);
    w.u8(0); // reserved
    w.zeros(static_cast<std::size_t>(h.pto_bytes)); // node data, filled in transit
    if (pad == 4) {
        w.u8(1); // PadN
        w.u8(2);
        w.u16(0);
    }
    return w.take();
}

inline std::vector<std::uint8_t> encode(const Srv6Header& h, const CodecContext& ctx = {}) {
    int n = static_cast<int>(h.segments.size());
    if (n < 1 || n > kSrv6MaxSegments)
        throw std::invalid_argument("SRv6 segment count must be in [1, 127]");
    if (h.reduced && n < 2)
        throw std::invalid_argument("a reduced SRH needs at least 2 segments");

    int first = h.reduced ? 1 : 0;
    ByteWriter w;
    w.u8(ctx.next_header);
    w.u8(static_cast<std::uint8_t>(2 * (n - first)));
    w.u8(kSrv6RoutingType);
    w.u8(h.segments_left);
    w.u8(h.last_entry);
    w.u8(h.flags);
    w.u16(h.tag);
    for (int i = first; i < n; ++i)
        w.address(h.segments[static_cast<std::size_t>(i)]);
    return w.take();
}

inline std::vector<std::uint8_t> encode(const RplHeader& h, const CodecContext& ctx) {
    if (!ctx.destination)
        throw std::invalid_argument("RPL encoding needs the packet destination for compression");
    int n = static_cast<int>(h.addresses.size());
    RplOverhead oh = rpl_overhead(n, h.cmpr_i, h.cmpr_e); // validates n and cmpr
    if (h.pad != oh.pad)
        throw std::invalid_argument("RPL pad field must be " + std::to_string(oh.pad) +
                                    " for this address list, got " + std::to_string(h.pad));
    if (oh.size > 8 * 256)
        throw std::invalid_argument("RPL header too large for the Hdr Ext Len field");

    const Ipv6Address& dst = *ctx.destination;
    auto check_prefix = [&](int idx, int cmpr) {
        const Ipv6Address& a = h.addresses[static_cast<std::size_t>(idx)];
        for (int o = 0; o < cmpr; ++o)
            if (a.bytes[static_cast<std::size_t>(o)] != dst.bytes[static_cast<std::size_t>(o)])
                throw std::invalid_argument(
                    "RPL address " + std::to_string(idx) + " does not share " +
                    std::to_string(cmpr) + " prefix octets with the destination");
    };
    for (int i = 0; i < n - 1; ++i)
        check_prefix(i, h.cmpr_i);
    check_prefix(n - 1, h.cmpr_e);

    ByteWriter w;
    w.u8(ctx.next_header);
    w.u8(static_cast<std::uint8_t>((oh.size - 8) / 8));
    w.u8(kRplRoutingType);
    w.u8(h.segments_left);
    w.u8(static_cast<std::uint8_t>((h.cmpr_i << 4) | h.cmpr_e));
    w.u8(static_cast<std::uint8_t>(h.pad << 4));
    w.u16(0); // reserved
    for (int i = 0; i < n - 1; ++i)
        w.address_suffix(h.addresses[static_cast<std::size_t>(i)], h.cmpr_i);
    w.address_suffix(h.addresses[static_cast<std::size_t>(n - 1)], h.cmpr_e);
    w.zeros(static_cast<std::size_t>(h.pad));
    return w.take();
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

/// Total header size implied by the Hdr Ext Len byte; the input span must
/// match it exactly.
inline std::size_t checked_ext_len(std::span<const std::uint8_t> data, std::uint8_t hdr_ext_len) {
    std::size_t total = 8 * (static_cast<std::size_t>(hdr_ext_len) + 1);
    if (data.size() < total)
        throw ParseError("hdr-ext-len", 1,
                         "truncated input: header declares " + std::to_string(total) +
                             " bytes, have " + std::to_string(data.size()));
    if (data.size() > total)
        throw ParseError("hdr-ext-len", 1,
                         "trailing bytes: header declares " + std::to_string(total) +
                             " bytes, have " + std::to_string(data.size()));
    return total;
}

inline Ipv6Header decode_ipv6(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    std::uint8_t b0 = r.u8("version");
    if ((b0 >> 4) != 6)
        throw ParseError("version", 0, "expected 6, got " + std::to_string(b0 >> 4));
    std::uint8_t b1 = r.u8("traffic-class");
    std::uint16_t flow_low = r.u16("flow-label");

    Ipv6Header h;
    h.traffic_class = static_cast<std::uint8_t>(((b0 & 0xf) << 4) | (b1 >> 4));
    h.flow_label = (static_cast<std::uint32_t>(b1 & 0xf) << 16) | flow_low;
    h.payload_length = r.u16("payload-length");
    h.next_header = r.u8("next-header");
    h.hop_limit = r.u8("hop-limit");
    h.source = r.address("source");
    h.destination = r.address("destination");
    if (r.remaining() != 0)
        throw ParseError("input", r.offset(), "trailing bytes after a 40-byte IPv6 header");
    return h;
}

inline IoamPtoHbh decode_ioam(std::span<const std::uint8_t> data, const CodecContext& = {}) {
    ByteReader r(data);
    r.u8("next-header");
    std::uint8_t hel = r.u8("hdr-ext-len");
    std::size_t total = checked_ext_len(data, hel);
    r.u16("padding");

    std::uint8_t opt_type = r.u8("option-type");
    if (opt_type != kIoamOptionType)
        throw ParseError("option-type", 4,
                         "expected " + std::to_string(kIoamOptionType) + ", got " +
                             std::to_string(opt_type));
    std::uint8_t opt_data_len = r.u8("opt-data-len");
    if (opt_data_len < 10)
        throw ParseError("opt-data-len", 5, "too small for an IOAM trace option");
    int pto = opt_data_len - 10;
    r.u8("reserved");
    std::uint8_t ioam_opt_type = r.u8("ioam-opt-type");
    if (ioam_opt_type != kIoamOptTypePto)
        throw ParseError("ioam-opt-type", 7,
                         "expected pre-allocated trace (0), got " + std::to_string(ioam_opt_type));

    IoamPtoHbh h;
    h.namespace_id = r.u16("namespace-id");
    std::uint16_t packed = r.u16("node-len");
    h.node_len = static_cast<std::uint8_t>(packed >> 11);
    h.flags = static_cast<std::uint8_t>((packed >> 7) & 0xf);
    h.remaining_len = static_cast<std::uint8_t>(packed & 0x7f);
    h.trace_type = r.u24("trace-type");
    r.u8("reserved");
    h.pto_bytes = pto;

    if (pto < kIoamPtoMin || pto > kIoamPtoMax || pto % 4 != 0)
        throw ParseError("opt-data-len", 5,
                         "implied PTO size " + std::to_string(pto) +
                             " is not a multiple of 4 in [4, 244]");
    if (h.remaining_len * 4 > pto)
        throw ParseError("remaining-len", 10, "remaining length exceeds the pre-allocated space");

    std::size_t pad = total - 16 - static_cast<std::size_t>(pto);
    if (pad != 0 && pad != 4)
        throw ParseError("hdr-ext-len", 1,
                         "size does not match the option: " + std::to_string(pad) +
                             " bytes left for padding");
    r.skip(static_cast<std::size_t>(pto), "node-data");
    if (pad == 4) {
        std::size_t off = r.offset();
        if (r.u8("padding") != 1 || r.u8("padding") != 2 || r.u16("padding") != 0)
            throw ParseError("padding", off, "expected a 4-byte PadN option");
    }
    return h;
}

inline Srv6Header decode_srv6(std::span<const std::uint8_t> data, const CodecContext& ctx = {}) {
    ByteReader r(data);
    r.u8("next-header");
    std::uint8_t hel = r.u8("hdr-ext-len");
    std::size_t total = checked_ext_len(data, hel);
    std::uint8_t rt = r.u8("routing-type");
    if (rt != kSrv6RoutingType)
        throw ParseError("routing-type", 2,
                         "expected " + std::to_string(kSrv6RoutingType) + ", got " +
                             std::to_string(rt));

    Srv6Header h;
    h.segments_left = r.u8("segments-left");
    h.last_entry = r.u8("last-entry");
    h.flags = r.u8("flags");
    h.tag = r.u16("tag");

    if ((total - 8) % 16 != 0)
        throw ParseError("hdr-ext-len", 1, "segment list is not a whole number of addresses");
    std::size_t n_wire = (total - 8) / 16;
    if (n_wire == 0)
        throw ParseError("hdr-ext-len", 1, "empty segment list");

    if (ctx.srv6_reduced) {
        if (!ctx.destination)
            throw std::invalid_argument(
                "decoding a reduced SRH needs the destination (the omitted first segment)");
        h.reduced = true;
        h.segments.push_back(*ctx.destination);
    }
    for (std::size_t i = 0; i < n_wire; ++i)
        h.segments.push_back(r.address("segment"));
    return h;
}

inline RplHeader decode_rpl(std::span<const std::uint8_t> data, const CodecContext& ctx) {
    if (!ctx.destination)
        throw std::invalid_argument("RPL decoding needs the packet destination for decompression");
    ByteReader r(data);
    r.u8("next-header");
    std::uint8_t hel = r.u8("hdr-ext-len");
    std::size_t total = checked_ext_len(data, hel);
    std::uint8_t rt = r.u8("routing-type");
    if (rt != kRplRoutingType)
        throw ParseError("routing-type", 2,
                         "expected " + std::to_string(kRplRoutingType) + ", got " +
                             std::to_string(rt));

    RplHeader h;
    h.segments_left = r.u8("segments-left");
    std::uint8_t cmpr = r.u8("cmpr");
    h.cmpr_i = cmpr >> 4;
    h.cmpr_e = cmpr & 0xf;
    std::uint8_t pad_byte = r.u8("pad");
    h.pad = pad_byte >> 4;
    if (h.pad > 7)
        throw ParseError("pad", 5, "pad count must be at most 7, got " + std::to_string(h.pad));
    r.u16("reserved");

    int inner = 16 - h.cmpr_i;
    int last = 16 - h.cmpr_e;
    long body = static_cast<long>(total) - 8 - h.pad;
    if (body < last)
        throw ParseError("cmpr", 4,
                         "compression implies a negative address block: " + std::to_string(body) +
                             " bytes for a final address of " + std::to_string(last));
    if ((body - last) % inner != 0)
        throw ParseError("cmpr", 4, "address block is not a whole number of addresses");
    long n = (body - last) / inner + 1;

    for (long i = 0; i < n - 1; ++i)
        h.addresses.push_back(r.address_with_prefix(*ctx.destination, h.cmpr_i, "address"));
    h.addresses.push_back(r.address_with_prefix(*ctx.destination, h.cmpr_e, "address"));
    std::size_t pad_off = r.offset();
    for (int i = 0; i < h.pad; ++i)
        if (r.u8("padding") != 0)
            throw ParseError("padding", pad_off + static_cast<std::size_t>(i),
                             "pad octets must be zero");
    return h;
}

} // namespace lwtsim
