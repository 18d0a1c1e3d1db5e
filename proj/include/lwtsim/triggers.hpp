#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwtsim/buffer.hpp"
#include "lwtsim/pipeline.hpp"

namespace lwtsim {

/// Closed-form double-reallocation predicate plus the headroom trajectory
/// it implies.
struct TriggerPrediction {
    bool triggers = false;
    int grown_headroom = 0;    // headroom after the first check
    int post_push_headroom = 0;
};

/// A double reallocation happens exactly when the first check comes up
/// short AND the grown headroom minus the inserted header is still below
/// the device requirement.
inline TriggerPrediction predict_trigger_raw(int header_bytes, int initial_headroom, int mac_len,
                                             const CpuProfile& cpu, const NetDevice& egress) {
    TriggerPrediction p;
    int first_request = header_bytes + mac_len;
    bool first_fires = first_request > initial_headroom;
    p.grown_headroom =
        first_fires
            ? initial_headroom + align_up(first_request - initial_headroom, cpu.cache_line_bytes)
            : initial_headroom;
    p.post_push_headroom = p.grown_headroom - header_bytes;
    p.triggers = first_fires && p.post_push_headroom < ll_reserved_space(egress);
    return p;
}

struct TriggerCase {
    EncapConfig config;
    CpuProfile cpu;
    NicProfile nic;
    NetDevice dev;
    bool triggers = false;
    int hdrlen = 0;
    int grown_headroom = 0;
    int post_push_headroom = 0;
};

inline TriggerCase predict_trigger(const EncapConfig& cfg, const CpuProfile& cpu,
                                   const NicProfile& nic, const NetDevice& dev) {
    int header_bytes = hdrlen(cfg);
    SocketBuffer skb = rx_socket_buffer(nic, dev, cpu, 0);
    TriggerPrediction p = predict_trigger_raw(header_bytes, skb.headroom, skb.mac_len, cpu, dev);
    return {cfg, cpu, nic, dev, p.triggers, header_bytes, p.grown_headroom, p.post_push_headroom};
}

/// One report block: the triggering parameter values for a protocol/mode.
struct TriggerReportSection {
    Protocol protocol = Protocol::Ioam;
    Mode mode = Mode::Inline;
    std::string param_label; // "PTO", "segments", "addresses"
    int cmpr_i = 0;
    int cmpr_e = 0;
    std::vector<int> values; // ascending, deduplicated
};

struct TriggerReport {
    std::string profile_description;
    std::vector<TriggerReportSection> sections;
};

namespace detail {

inline EncapConfig config_for_param(Protocol protocol, Mode mode, int value, int cmpr_i,
                                    int cmpr_e) {
    switch (protocol) {
    case Protocol::Ioam:
        return make_ioam_config(mode, value);
    case Protocol::Srv6:
        return make_srv6_config(mode, value);
    case Protocol::Rpl:
        return make_rpl_config(value, cmpr_i, cmpr_e);
    }
    throw std::invalid_argument("bad protocol");
}

/// Cross-check a closed-form prediction against the simulated vanilla path.
inline void check_against_simulation(const EncapConfig& cfg, const CpuProfile& cpu,
                                     const NicProfile& nic, const NetDevice& dev, bool predicted) {
    SocketBuffer skb = rx_socket_buffer(nic, dev, cpu, 0);
    PacketTrace trace = encap_vanilla_raw(skb, hdrlen(cfg), cpu, dev);
    if ((trace.realloc_count() == 2) != predicted)
        throw std::logic_error("trigger prediction disagrees with simulation for " +
                               std::string("param ") + std::to_string(param_value(cfg)));
}

} // namespace detail

/// Every parameter value in [param_min, param_max] whose vanilla path
/// double-reallocates, each value cross-checked against the simulation.
/// IOAM values walk multiples of 4; the others walk every integer.
inline TriggerReportSection enumerate_triggers(Protocol protocol, Mode mode, int param_min,
                                               int param_max, const CpuProfile& cpu,
                                               const NicProfile& nic, const NetDevice& dev,
                                               int cmpr_i = 0, int cmpr_e = 0) {
    TriggerReportSection section;
    section.protocol = protocol;
    section.mode = mode;
    section.cmpr_i = cmpr_i;
    section.cmpr_e = cmpr_e;

    int step = 1;
    switch (protocol) {
    case Protocol::Ioam:
        section.param_label = "PTO";
        param_min = std::max(param_min, kIoamPtoMin);
        param_max = std::min(param_max, kIoamPtoMax);
        param_min = align_up(param_min, 4);
        step = 4;
        break;
    case Protocol::Srv6:
        section.param_label = "segments";
        param_min = std::max(param_min, 1);
        param_max = std::min(param_max, kSrv6MaxSegments);
        break;
    case Protocol::Rpl:
        section.param_label = "addresses";
        param_min = std::max(param_min, 1);
        break;
    }

    for (int v = param_min; v <= param_max; v += step) {
        EncapConfig cfg = detail::config_for_param(protocol, mode, v, cmpr_i, cmpr_e);
        TriggerCase c = predict_trigger(cfg, cpu, nic, dev);
        detail::check_against_simulation(cfg, cpu, nic, dev, c.triggers);
        if (c.triggers)
            section.values.push_back(v);
    }
    return section;
}

/// Triggering address counts under RPL compression, free of any tooling
/// input-length limit.
inline std::vector<int> rpl_theoretical_triggers(int cmpr_i, int cmpr_e, int n_min, int n_max,
                                                 const CpuProfile& cpu, const NicProfile& nic,
                                                 const NetDevice& dev) {
    return enumerate_triggers(Protocol::Rpl, Mode::Inline, n_min, n_max, cpu, nic, dev, cmpr_i,
                              cmpr_e)
        .values;
}

inline std::string describe_profile(const CpuProfile& cpu, const NicProfile& nic,
                                    const NetDevice& dev) {
    return "cpu cache-line " + std::to_string(cpu.cache_line_bytes) + ", nic " + nic.name +
           ", dev " + dev.name;
}

/// The full trigger table for a profile: both IOAM modes over the whole PTO
/// range, all five SRv6 modes up to 127 segments, RPL inline uncompressed.
inline TriggerReport reference_trigger_report(const CpuProfile& cpu, const NicProfile& nic,
                                              const NetDevice& dev) {
    TriggerReport report;
    report.profile_description = describe_profile(cpu, nic, dev);
    report.sections = {
        enumerate_triggers(Protocol::Ioam, Mode::Inline, kIoamPtoMin, kIoamPtoMax, cpu, nic, dev),
        enumerate_triggers(Protocol::Ioam, Mode::Encap, kIoamPtoMin, kIoamPtoMax, cpu, nic, dev),
        enumerate_triggers(Protocol::Srv6, Mode::Inline, 1, kSrv6MaxSegments, cpu, nic, dev),
        enumerate_triggers(Protocol::Srv6, Mode::Encap, 1, kSrv6MaxSegments, cpu, nic, dev),
        enumerate_triggers(Protocol::Srv6, Mode::L2Encap, 1, kSrv6MaxSegments, cpu, nic, dev),
        enumerate_triggers(Protocol::Srv6, Mode::EncapRed, 1, kSrv6MaxSegments, cpu, nic, dev),
        enumerate_triggers(Protocol::Srv6, Mode::L2EncapRed, 1, kSrv6MaxSegments, cpu, nic, dev),
        enumerate_triggers(Protocol::Rpl, Mode::Inline, 1, 63, cpu, nic, dev),
    };
    return report;
}

/// Every config in the reference report's parameter space, trigger or not.
inline std::vector<EncapConfig> reference_sweep_configs() {
    std::vector<EncapConfig> configs;
    for (int pto = kIoamPtoMin; pto <= kIoamPtoMax; pto += 4) {
        configs.push_back(make_ioam_config(Mode::Inline, pto));
        configs.push_back(make_ioam_config(Mode::Encap, pto));
    }
    for (Mode mode : {Mode::Inline, Mode::Encap, Mode::L2Encap, Mode::EncapRed, Mode::L2EncapRed})
        for (int n = 1; n <= kSrv6MaxSegments; ++n)
            configs.push_back(make_srv6_config(mode, n));
    for (int n = 1; n <= 63; ++n)
        configs.push_back(make_rpl_config(n));
    return configs;
}

} // namespace lwtsim
