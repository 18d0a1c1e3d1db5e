#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwtsim/buffer.hpp"
#include "lwtsim/errors.hpp"
#include "lwtsim/headers.hpp"

namespace lwtsim {

enum class Protocol { Ioam, Srv6, Rpl };
enum class Mode { Inline, Encap, EncapRed, L2Encap, L2EncapRed, Auto };
enum class Strategy { Vanilla, Patched };

/// One tunnel configuration: protocol, encapsulation mode, and the size
/// parameter that fixes the header overhead.
struct EncapConfig {
    Protocol protocol = Protocol::Ioam;
    Mode mode = Mode::Inline;
    int pto_bytes = 0;    // IOAM
    int n_segments = 0;   // SRv6
    int n_addresses = 0;  // RPL
    int cmpr_i = 0;
    int cmpr_e = 0;
};

inline EncapConfig make_ioam_config(Mode mode, int pto_bytes) {
    return {Protocol::Ioam, mode, pto_bytes, 0, 0, 0, 0};
}
inline EncapConfig make_srv6_config(Mode mode, int n_segments) {
    return {Protocol::Srv6, mode, 0, n_segments, 0, 0, 0};
}
inline EncapConfig make_rpl_config(int n_addresses, int cmpr_i = 0, int cmpr_e = 0) {
    return {Protocol::Rpl, Mode::Inline, 0, 0, n_addresses, cmpr_i, cmpr_e};
}

inline void validate(const EncapConfig& cfg) {
    switch (cfg.protocol) {
    case Protocol::Ioam:
        if (cfg.mode != Mode::Inline && cfg.mode != Mode::Encap && cfg.mode != Mode::Auto)
            throw std::invalid_argument("IOAM supports inline, encap and auto modes");
        check_pto(cfg.pto_bytes);
        break;
    case Protocol::Srv6:
        if (cfg.mode == Mode::Auto)
            throw std::invalid_argument("SRv6 has no auto mode");
        if (cfg.n_segments < 1 || cfg.n_segments > kSrv6MaxSegments)
            throw std::invalid_argument("SRv6 segment count must be in [1, 127]");
        break;
    case Protocol::Rpl:
        if (cfg.mode != Mode::Inline)
            throw std::invalid_argument("RPL supports only the inline mode");
        rpl_overhead(cfg.n_addresses, cfg.cmpr_i, cfg.cmpr_e); // validates
        break;
    }
}

/// Bytes the encapsulation prepends, as handed to the first headroom check.
/// Auto maps to Encap: the simulated traffic is forwarded, not locally sourced.
inline int hdrlen(const EncapConfig& cfg) {
    validate(cfg);
    switch (cfg.protocol) {
    case Protocol::Ioam:
        return ioam_overhead(cfg.pto_bytes,
                             cfg.mode == Mode::Inline ? IoamMode::Inline : IoamMode::Encap);
    case Protocol::Srv6:
        switch (cfg.mode) {
        case Mode::Inline:
            return srv6_overhead(cfg.n_segments, Srv6Mode::Inline);
        case Mode::Encap:
            return srv6_overhead(cfg.n_segments, Srv6Mode::Encap);
        case Mode::EncapRed:
            return srv6_overhead(cfg.n_segments, Srv6Mode::EncapRed);
        case Mode::L2Encap:
            return srv6_overhead(cfg.n_segments, Srv6Mode::L2Encap);
        case Mode::L2EncapRed:
            return srv6_overhead(cfg.n_segments, Srv6Mode::L2EncapRed);
        default:
            break;
        }
        break;
    case Protocol::Rpl:
        return rpl_overhead(cfg.n_addresses, cfg.cmpr_i, cfg.cmpr_e).size;
    }
    throw std::invalid_argument("bad encapsulation config");
}

/// The sweep parameter a config varies: PTO bytes, segment or address count.
inline int param_value(const EncapConfig& cfg) {
    switch (cfg.protocol) {
    case Protocol::Ioam:
        return cfg.pto_bytes;
    case Protocol::Srv6:
        return cfg.n_segments;
    case Protocol::Rpl:
        return cfg.n_addresses;
    }
    return 0;
}

/// Per-route cache of the resolved destination entry. Filled by the first
/// packet that matches the route, then reused.
struct DstCache {
    std::optional<NetDevice> dev;

    bool resolved() const { return dev.has_value(); }
    static DstCache empty() { return {}; }
    static DstCache resolved_to(NetDevice d) { return {std::move(d)}; }
};

/// Headroom the output device will need, when known. With an empty cache
/// only the generic link-layer length can be assumed.
inline int dst_dev_overhead(const DstCache& cache, const SocketBuffer& skb) {
    if (cache.resolved())
        return ll_reserved_space(*cache.dev);
    return skb.mac_len;
}

/// Maps a route to its post-encapsulation egress device. The identity
/// resolver returns the ingress device; a mapped resolver models a tunnel
/// whose new destination leaves through a different interface.
class RouteResolver {
public:
    static RouteResolver identity(NetDevice ingress) {
        RouteResolver r;
        r.egress_ = std::move(ingress);
        return r;
    }
    static RouteResolver mapped(NetDevice egress) {
        RouteResolver r;
        r.egress_ = std::move(egress);
        return r;
    }
    static RouteResolver unresolvable() { return {}; }

    NetDevice resolve(const EncapConfig&) const {
        if (!egress_)
            throw ConfigError("route has no egress device");
        return *egress_;
    }

private:
    std::optional<NetDevice> egress_;
};

inline NetDevice resolve_dst(const EncapConfig& cfg, const RouteResolver& resolver) {
    return resolver.resolve(cfg);
}

/// What one packet went through: every reallocation plus the headroom at
/// each stage of the encapsulation.
struct PacketTrace {
    Strategy strategy = Strategy::Vanilla;
    int hdrlen = 0;
    std::vector<ReallocEvent> events;
    int headroom_after_cow = 0;  // after the first headroom check
    int headroom_after_push = 0; // after the header was inserted
    int final_headroom = 0;      // after the device headroom check

    int realloc_count() const { return static_cast<int>(events.size()); }
};

/// Trace equality ignoring the strategy label.
inline bool traces_equivalent(const PacketTrace& a, const PacketTrace& b) {
    return a.hdrlen == b.hdrlen && a.events == b.events &&
           a.headroom_after_cow == b.headroom_after_cow &&
           a.headroom_after_push == b.headroom_after_push && a.final_headroom == b.final_headroom;
}

/// Unpatched encapsulation: the first headroom check can only assume the
/// generic mac_len, the device requirement is re-checked after resolution.
inline PacketTrace encap_vanilla_raw(SocketBuffer& skb, int header_bytes, const CpuProfile& cpu,
                                     const NetDevice& egress) {
    PacketTrace trace;
    trace.strategy = Strategy::Vanilla;
    trace.hdrlen = header_bytes;

    std::size_t events_before = skb.realloc_events.size();
    skb.cow_head(header_bytes + skb.mac_len, cpu);
    trace.headroom_after_cow = skb.headroom;
    skb.push_header(header_bytes);
    trace.headroom_after_push = skb.headroom;
    skb.cow_head(ll_reserved_space(egress), cpu);
    trace.final_headroom = skb.headroom;

    trace.events.assign(skb.realloc_events.begin() + static_cast<std::ptrdiff_t>(events_before),
                        skb.realloc_events.end());
    return trace;
}

/// Patched encapsulation: a warm cache lets the first check request the
/// real device requirement, making the second check a no-op.
inline PacketTrace encap_patched_raw(SocketBuffer& skb, int header_bytes, const CpuProfile& cpu,
                                     DstCache& cache, const NetDevice& egress) {
    PacketTrace trace;
    trace.strategy = Strategy::Patched;
    trace.hdrlen = header_bytes;

    std::size_t events_before = skb.realloc_events.size();
    skb.cow_head(header_bytes + dst_dev_overhead(cache, skb), cpu);
    trace.headroom_after_cow = skb.headroom;
    skb.push_header(header_bytes);
    trace.headroom_after_push = skb.headroom;
    if (!cache.resolved())
        cache = DstCache::resolved_to(egress);
    skb.cow_head(ll_reserved_space(*cache.dev), cpu);
    trace.final_headroom = skb.headroom;

    trace.events.assign(skb.realloc_events.begin() + static_cast<std::ptrdiff_t>(events_before),
                        skb.realloc_events.end());
    return trace;
}

inline PacketTrace encap_vanilla(SocketBuffer& skb, const EncapConfig& cfg, const CpuProfile& cpu,
                                 const RouteResolver& resolver) {
    return encap_vanilla_raw(skb, hdrlen(cfg), cpu, resolve_dst(cfg, resolver));
}

inline PacketTrace encap_patched(SocketBuffer& skb, const EncapConfig& cfg, const CpuProfile& cpu,
                                 DstCache& cache, const RouteResolver& resolver) {
    return encap_patched_raw(skb, hdrlen(cfg), cpu, cache, resolve_dst(cfg, resolver));
}

/// Run one flow: a fresh route cache, one fresh RX buffer per packet, the
/// cache threaded across packets for the patched strategy.
inline std::vector<PacketTrace> run_flow(const EncapConfig& cfg, const CpuProfile& cpu,
                                         const NicProfile& nic, const NetDevice& ingress,
                                         const RouteResolver& resolver, Strategy strategy,
                                         int n_packets, int payload_len = 0) {
    if (n_packets < 1)
        throw std::invalid_argument("flow needs at least one packet");
    int header_bytes = hdrlen(cfg);
    NetDevice egress = resolve_dst(cfg, resolver);

    std::vector<PacketTrace> traces;
    traces.reserve(static_cast<std::size_t>(n_packets));
    DstCache cache = DstCache::empty();
    for (int i = 0; i < n_packets; ++i) {
        SocketBuffer skb = rx_socket_buffer(nic, ingress, cpu, payload_len);
        if (strategy == Strategy::Vanilla)
            traces.push_back(encap_vanilla_raw(skb, header_bytes, cpu, egress));
        else
            traces.push_back(encap_patched_raw(skb, header_bytes, cpu, cache, egress));
    }
    return traces;
}

} // namespace lwtsim
