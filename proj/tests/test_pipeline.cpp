#include "lwtsim/pipeline.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lwtsim/profiles.hpp"
#include "lwtsim/triggers.hpp"

namespace lwtsim {
namespace {

EncapConfig random_config(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> proto(0, 2);
    switch (proto(rng)) {
    case 0: {
        std::uniform_int_distribution<int> pto(1, 61);
        std::uniform_int_distribution<int> mode(0, 2);
        Mode m = mode(rng) == 0 ? Mode::Inline : (mode(rng) == 1 ? Mode::Encap : Mode::Auto);
        return make_ioam_config(m, 4 * pto(rng));
    }
    case 1: {
        std::uniform_int_distribution<int> n(1, kSrv6MaxSegments);
        std::uniform_int_distribution<int> mode(0, 4);
        Mode modes[] = {Mode::Inline, Mode::Encap, Mode::EncapRed, Mode::L2Encap,
                        Mode::L2EncapRed};
        return make_srv6_config(modes[mode(rng)], n(rng));
    }
    default: {
        std::uniform_int_distribution<int> n(1, 127);
        std::uniform_int_distribution<int> cmpr(0, 15);
        return make_rpl_config(n(rng), cmpr(rng), cmpr(rng));
    }
    }
}

CpuProfile random_cpu(std::mt19937_64& rng) {
    const int sizes[] = {32, 64, 128, 256};
    std::uniform_int_distribution<int> pick(0, 3);
    return CpuProfile(sizes[pick(rng)]);
}

NicProfile random_nic(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    return coin(rng) ? presets::i40e_default() : presets::i40e_legacy_rx();
}

// ── hdrlen ───────────────────────────────────────────────────────────────────

TEST(Hdrlen, DelegatesToOverheadArithmetic) {
    EXPECT_EQ(hdrlen(make_ioam_config(Mode::Inline, 236)), 256);
    EXPECT_EQ(hdrlen(make_srv6_config(Mode::Encap, 13)), 256);
    EXPECT_EQ(hdrlen(make_rpl_config(3)), 56);
}

TEST(Hdrlen, AutoAndL2MatchTheirBaseModes) {
    EXPECT_EQ(hdrlen(make_ioam_config(Mode::Auto, 100)), hdrlen(make_ioam_config(Mode::Encap, 100)));
    EXPECT_EQ(hdrlen(make_srv6_config(Mode::L2Encap, 9)), hdrlen(make_srv6_config(Mode::Encap, 9)));
    EXPECT_EQ(hdrlen(make_srv6_config(Mode::L2EncapRed, 9)),
              hdrlen(make_srv6_config(Mode::EncapRed, 9)));
}

TEST(Hdrlen, RejectsIllegalModeCombinations) {
    EXPECT_THROW(hdrlen(make_ioam_config(Mode::EncapRed, 100)), std::invalid_argument);
    EXPECT_THROW(hdrlen(make_srv6_config(Mode::Auto, 10)), std::invalid_argument);
    EXPECT_THROW(hdrlen({Protocol::Rpl, Mode::Encap, 0, 0, 3, 0, 0}), std::invalid_argument);
    EXPECT_THROW(hdrlen(make_ioam_config(Mode::Inline, 246)), std::invalid_argument);
}

// ── dst_dev_overhead / resolve_dst ───────────────────────────────────────────

TEST(DstDevOverhead, ResolvedCacheUsesDeviceRequirement) {
    SocketBuffer skb;
    skb.mac_len = 14;
    EXPECT_EQ(dst_dev_overhead(DstCache::resolved_to(presets::ethernet()), skb), 16);
}

TEST(DstDevOverhead, EmptyCacheFallsBackToMacLen) {
    SocketBuffer skb;
    skb.mac_len = 14;
    EXPECT_EQ(dst_dev_overhead(DstCache::empty(), skb), 14);
    skb.mac_len = 0;
    EXPECT_EQ(dst_dev_overhead(DstCache::empty(), skb), 0);
}

TEST(ResolveDst, IdentityAndMappedResolvers) {
    EncapConfig cfg = make_srv6_config(Mode::Encap, 3);
    NetDevice eth = presets::ethernet();
    EXPECT_EQ(resolve_dst(cfg, RouteResolver::identity(eth)), eth);

    NetDevice tun{"tun0", 14, 32};
    EXPECT_EQ(resolve_dst(cfg, RouteResolver::mapped(tun)), tun);
}

TEST(ResolveDst, UnresolvableRouteThrows) {
    EncapConfig cfg = make_srv6_config(Mode::Encap, 3);
    EXPECT_THROW(resolve_dst(cfg, RouteResolver::unresolvable()), ConfigError);
}

// ── encap_vanilla ────────────────────────────────────────────────────────────

TEST(EncapVanilla, IoamPto236DoubleReallocatesOn64ByteCacheLine) {
    // request 270 grows 206 -> 270; push 256 leaves 14 < 16; second grow -> 78
    CpuProfile cpu(64);
    SocketBuffer skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    ASSERT_EQ(skb.headroom, 206);

    PacketTrace trace = encap_vanilla(skb, make_ioam_config(Mode::Inline, 236), cpu,
                                      RouteResolver::identity(presets::ethernet()));
    EXPECT_EQ(trace.realloc_count(), 2);
    EXPECT_EQ(trace.headroom_after_cow, 270);
    EXPECT_EQ(trace.headroom_after_push, 14);
    EXPECT_EQ(trace.final_headroom, 78);
    ASSERT_EQ(trace.events.size(), 2u);
    EXPECT_EQ(trace.events[0], (ReallocEvent{270, 206, 270, 0}));
    EXPECT_EQ(trace.events[1], (ReallocEvent{16, 14, 78, 256}));
}

TEST(EncapVanilla, FortyByteHeaderFromHeadroom22On32ByteCacheLine) {
    // 22 -> 54, push 40 -> 14 < 16 -> 46
    CpuProfile cpu(32);
    NicProfile nic{"small", RxHeadroomPolicy::fixed(8), true}; // 8 + 14 = 22
    SocketBuffer skb = rx_socket_buffer(nic, presets::ethernet(), cpu, 0);
    ASSERT_EQ(skb.headroom, 22);

    PacketTrace trace = encap_vanilla_raw(skb, 40, cpu, presets::ethernet());
    EXPECT_EQ(trace.realloc_count(), 2);
    EXPECT_EQ(trace.headroom_after_cow, 54);
    EXPECT_EQ(trace.headroom_after_push, 14);
    EXPECT_EQ(trace.final_headroom, 46);
}

TEST(EncapVanilla, SmallHeaderFitsWithoutRealloc) {
    CpuProfile cpu(64);
    SocketBuffer skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    PacketTrace trace = encap_vanilla(skb, make_ioam_config(Mode::Inline, 4), cpu,
                                      RouteResolver::identity(presets::ethernet()));
    EXPECT_EQ(trace.realloc_count(), 0);
    EXPECT_EQ(trace.final_headroom, 182);
}

TEST(EncapVanilla, ResolvedDeviceDrivesTheSecondCheck) {
    // A tunnel egress with extra headroom needs makes the second check
    // request 48 bytes instead of 16.
    CpuProfile cpu(64);
    SocketBuffer skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    NetDevice tun{"tun0", 14, 32};
    PacketTrace trace = encap_vanilla(skb, make_ioam_config(Mode::Inline, 236), cpu,
                                      RouteResolver::mapped(tun));
    EXPECT_EQ(trace.realloc_count(), 2);
    ASSERT_EQ(trace.events.size(), 2u);
    EXPECT_EQ(trace.events[1].requested, 48);
    EXPECT_EQ(trace.final_headroom, 78);
}

// ── encap_patched ────────────────────────────────────────────────────────────

TEST(EncapPatched, WarmCacheSingleReallocation) {
    CpuProfile cpu(64);
    SocketBuffer skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    DstCache cache = DstCache::resolved_to(presets::ethernet());
    PacketTrace trace = encap_patched(skb, make_ioam_config(Mode::Inline, 236), cpu, cache,
                                      RouteResolver::identity(presets::ethernet()));
    EXPECT_EQ(trace.realloc_count(), 1);
    ASSERT_EQ(trace.events.size(), 1u);
    EXPECT_EQ(trace.events[0], (ReallocEvent{272, 206, 334, 0}));
    EXPECT_EQ(trace.headroom_after_push, 78);
    EXPECT_EQ(trace.final_headroom, 78);
}

TEST(EncapPatched, ColdCacheBehavesLikeVanillaAndWarmsUp) {
    CpuProfile cpu(64);
    EncapConfig cfg = make_ioam_config(Mode::Inline, 236);
    RouteResolver resolver = RouteResolver::identity(presets::ethernet());

    SocketBuffer vanilla_skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    PacketTrace vanilla_trace = encap_vanilla(vanilla_skb, cfg, cpu, resolver);

    SocketBuffer patched_skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    DstCache cache = DstCache::empty();
    PacketTrace patched_trace = encap_patched(patched_skb, cfg, cpu, cache, resolver);

    EXPECT_TRUE(traces_equivalent(vanilla_trace, patched_trace));
    EXPECT_EQ(patched_trace.realloc_count(), 2);
    EXPECT_TRUE(cache.resolved());
}

TEST(EncapPatched, NonTriggerConfigMatchesVanillaReallocCount) {
    // SRv6 Encap with 12 segments reallocates once either way.
    CpuProfile cpu(64);
    EncapConfig cfg = make_srv6_config(Mode::Encap, 12);
    RouteResolver resolver = RouteResolver::identity(presets::ethernet());

    SocketBuffer vanilla_skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    PacketTrace vanilla_trace = encap_vanilla(vanilla_skb, cfg, cpu, resolver);
    EXPECT_EQ(vanilla_trace.realloc_count(), 1);

    SocketBuffer warm_skb = rx_socket_buffer(presets::i40e_default(), presets::ethernet(), cpu, 0);
    DstCache cache = DstCache::resolved_to(presets::ethernet());
    PacketTrace warm_trace = encap_patched(warm_skb, cfg, cpu, cache, resolver);
    EXPECT_EQ(warm_trace.realloc_count(), vanilla_trace.realloc_count());
    EXPECT_EQ(warm_trace.final_headroom, vanilla_trace.final_headroom);
}

// ── run_flow ─────────────────────────────────────────────────────────────────

TEST(RunFlow, PatchedTriggerFlowPaysOnlyOnTheFirstPacket) {
    std::vector<PacketTrace> traces =
        run_flow(make_ioam_config(Mode::Inline, 236), CpuProfile(64), presets::i40e_default(),
                 presets::ethernet(), RouteResolver::identity(presets::ethernet()),
                 Strategy::Patched, 3);
    ASSERT_EQ(traces.size(), 3u);
    EXPECT_EQ(traces[0].realloc_count(), 2);
    EXPECT_EQ(traces[1].realloc_count(), 1);
    EXPECT_EQ(traces[2].realloc_count(), 1);
}

TEST(RunFlow, VanillaTriggerFlowPaysEveryPacket) {
    std::vector<PacketTrace> traces =
        run_flow(make_ioam_config(Mode::Inline, 236), CpuProfile(64), presets::i40e_default(),
                 presets::ethernet(), RouteResolver::identity(presets::ethernet()),
                 Strategy::Vanilla, 3);
    ASSERT_EQ(traces.size(), 3u);
    for (const PacketTrace& t : traces)
        EXPECT_EQ(t.realloc_count(), 2);
}

TEST(RunFlow, QuietConfigNeverReallocates) {
    for (Strategy strategy : {Strategy::Vanilla, Strategy::Patched}) {
        std::vector<PacketTrace> traces =
            run_flow(make_ioam_config(Mode::Inline, 4), CpuProfile(64), presets::i40e_default(),
                     presets::ethernet(), RouteResolver::identity(presets::ethernet()), strategy,
                     3);
        for (const PacketTrace& t : traces)
            EXPECT_EQ(t.realloc_count(), 0);
    }
}

TEST(RunFlow, RejectsEmptyFlow) {
    EXPECT_THROW(run_flow(make_ioam_config(Mode::Inline, 4), CpuProfile(64),
                          presets::i40e_default(), presets::ethernet(),
                          RouteResolver::identity(presets::ethernet()), Strategy::Vanilla, 0),
                 std::invalid_argument);
}

// ── cross-strategy properties ────────────────────────────────────────────────

TEST(StrategyProperties, PatchedNeverWorseAndWarmAtMostOnce) {
    std::mt19937_64 rng(0xc0ffee);
    NetDevice eth = presets::ethernet();
    for (int i = 0; i < 3000; ++i) {
        EncapConfig cfg = random_config(rng);
        CpuProfile cpu = random_cpu(rng);
        NicProfile nic = random_nic(rng);
        RouteResolver resolver = RouteResolver::identity(eth);

        std::vector<PacketTrace> vanilla =
            run_flow(cfg, cpu, nic, eth, resolver, Strategy::Vanilla, 2);
        std::vector<PacketTrace> patched =
            run_flow(cfg, cpu, nic, eth, resolver, Strategy::Patched, 2);

        // cold cache: first packets identical event-for-event
        EXPECT_TRUE(traces_equivalent(vanilla[0], patched[0]));

        // warm cache: never more reallocations than vanilla, at most one
        EXPECT_LE(patched[1].realloc_count(), vanilla[1].realloc_count());
        EXPECT_LE(patched[1].realloc_count(), 1);

        // both end with room for the device
        int reserved = ll_reserved_space(eth);
        EXPECT_GE(vanilla[1].final_headroom, reserved);
        EXPECT_GE(patched[1].final_headroom, reserved);
        EXPECT_EQ(patched[1].final_headroom, vanilla[1].final_headroom);
    }
}

TEST(StrategyProperties, ClosedFormPredicateMatchesSimulatedSweep) {
    // Raw header-size sweep over both NIC profiles and three cache lines.
    NetDevice eth = presets::ethernet();
    for (const NicProfile& nic : {presets::i40e_default(), presets::i40e_legacy_rx()}) {
        for (int cache_line : {32, 64, 128}) {
            CpuProfile cpu(cache_line);
            for (int header_bytes = 0; header_bytes <= 2100; header_bytes += 2) {
                SocketBuffer skb = rx_socket_buffer(nic, eth, cpu, 0);
                TriggerPrediction p =
                    predict_trigger_raw(header_bytes, skb.headroom, skb.mac_len, cpu, eth);
                PacketTrace trace = encap_vanilla_raw(skb, header_bytes, cpu, eth);

                ASSERT_EQ(p.triggers, trace.realloc_count() == 2)
                    << "hdrlen=" << header_bytes << " cl=" << cache_line << " nic=" << nic.name;
                ASSERT_EQ(p.grown_headroom, trace.headroom_after_cow);
                ASSERT_EQ(p.post_push_headroom, trace.headroom_after_push);
            }
        }
    }
}

TEST(StrategyProperties, AutoModeTracesMatchEncap) {
    CpuProfile cpu(64);
    NetDevice eth = presets::ethernet();
    RouteResolver resolver = RouteResolver::identity(eth);
    for (int pto = kIoamPtoMin; pto <= kIoamPtoMax; pto += 4) {
        for (Strategy strategy : {Strategy::Vanilla, Strategy::Patched}) {
            std::vector<PacketTrace> encap =
                run_flow(make_ioam_config(Mode::Encap, pto), cpu, presets::i40e_default(), eth,
                         resolver, strategy, 2);
            std::vector<PacketTrace> auto_mode =
                run_flow(make_ioam_config(Mode::Auto, pto), cpu, presets::i40e_default(), eth,
                         resolver, strategy, 2);
            for (std::size_t i = 0; i < encap.size(); ++i)
                EXPECT_TRUE(traces_equivalent(encap[i], auto_mode[i]));
        }
    }
}

} // namespace
} // namespace lwtsim
