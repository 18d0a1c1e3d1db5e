#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lwtsim/align.hpp"
#include "lwtsim/errors.hpp"

namespace lwtsim {

/// CPU description. The cache line size is the headroom reallocation step.
struct CpuProfile {
    int cache_line_bytes;

    explicit CpuProfile(int bytes) : cache_line_bytes(bytes) {
        switch (bytes) {
        case 32:
        case 64:
        case 128:
        case 256:
            break;
        default:
            throw std::invalid_argument("cache line size must be 32, 64, 128 or 256 bytes");
        }
    }
};

/// Output device as seen by the encapsulation path.
struct NetDevice {
    std::string name;
    int hard_header_len = 0; // link-layer header length, 14 for Ethernet
    int needed_headroom = 0; // extra bytes the NIC wants in front of the frame

    bool operator==(const NetDevice&) const = default;
};

/// Headroom the driver reserves when it builds an RX buffer.
struct RxHeadroomPolicy {
    enum class Kind { Fixed, CacheLineSized };

    Kind kind = Kind::Fixed;
    int fixed_bytes = 0;

    static RxHeadroomPolicy fixed(int bytes) {
        if (bytes < 0)
            throw std::invalid_argument("fixed RX headroom must be non-negative");
        return {Kind::Fixed, bytes};
    }
    static RxHeadroomPolicy cache_line_sized() { return {Kind::CacheLineSized, 0}; }

    bool operator==(const RxHeadroomPolicy&) const = default;
};

struct NicProfile {
    std::string name;
    RxHeadroomPolicy rx_base_headroom;
    bool mac_pulled = true; // data pointer moved past the link-layer header on RX
};

/// One headroom reallocation: the request that forced it, the headroom
/// before and after, and the payload bytes the copy had to move.
struct ReallocEvent {
    int requested = 0;
    int old_headroom = 0;
    int new_headroom = 0;
    int bytes_copied = 0;

    bool operator==(const ReallocEvent&) const = default;
};

/// Byte accounting for a socket buffer. Headroom grows only through
/// cow_head and shrinks only through push_header.
struct SocketBuffer {
    int headroom = 0;
    int data_len = 0;
    int tailroom = 0;
    int mac_len = 0;
    std::vector<ReallocEvent> realloc_events;

    /// Ensure at least `requested` bytes of headroom. When short, grow from
    /// the current headroom in whole cache-line steps and log one event.
    /// Tailroom is untouched by a reallocation.
    void cow_head(int requested, const CpuProfile& cpu) {
        if (requested < 0)
            throw std::invalid_argument("cow_head: requested headroom must be non-negative");
        if (headroom >= requested)
            return;
        int grown = headroom + align_up(requested - headroom, cpu.cache_line_bytes);
        realloc_events.push_back({requested, headroom, grown, data_len});
        headroom = grown;
    }

    /// Prepend `n` header bytes: headroom shrinks, data grows.
    void push_header(int n) {
        if (n < 0)
            throw std::invalid_argument("push_header: size must be non-negative");
        if (n > headroom)
            throw HeadroomUnderflow(n, headroom);
        headroom -= n;
        data_len += n;
    }
};

/// Device headroom requirement: link-layer header plus NIC extra,
/// rounded up to a 16-byte multiple.
inline int ll_reserved_space(const NetDevice& dev) {
    if (dev.hard_header_len < 0 || dev.needed_headroom < 0)
        throw std::invalid_argument("device header lengths must be non-negative");
    return align_up(dev.hard_header_len + dev.needed_headroom, 16);
}

/// Buffer as handed to the forwarding path after RX: driver headroom, plus
/// the link-layer header's bytes when the driver pulled it past data.
inline SocketBuffer rx_socket_buffer(const NicProfile& nic, const NetDevice& dev,
                                     const CpuProfile& cpu, int payload_len) {
    if (payload_len < 0)
        throw std::invalid_argument("payload length must be non-negative");
    int base = nic.rx_base_headroom.kind == RxHeadroomPolicy::Kind::CacheLineSized
                   ? cpu.cache_line_bytes
                   : nic.rx_base_headroom.fixed_bytes;
    SocketBuffer skb;
    skb.headroom = base + (nic.mac_pulled ? dev.hard_header_len : 0);
    skb.mac_len = dev.hard_header_len;
    skb.data_len = payload_len;
    return skb;
}

} // namespace lwtsim
