#include "lwtsim/buffer.hpp"

#include <gtest/gtest.h>

#include <random>

namespace lwtsim {
namespace {

// Reference growth rule, written the way the allocator behaves: keep adding
// one cache line until the headroom fits the request. Kept independent of
// cow_head on purpose.
int iterative_growth(int old_headroom, int requested, int cache_line) {
    int h = old_headroom;
    while (h < requested)
        h += cache_line;
    return h;
}

// ── align_up ─────────────────────────────────────────────────────────────────

TEST(AlignUp, ZeroStaysZero) {
    EXPECT_EQ(align_up(0, 16), 0);
}

TEST(AlignUp, RoundsUpToNextMultiple) {
    EXPECT_EQ(align_up(14, 16), 16);
    EXPECT_EQ(align_up(252, 8), 256);
    EXPECT_EQ(align_up(16, 16), 16);
    EXPECT_EQ(align_up(17, 16), 32);
}

TEST(AlignUp, RejectsZeroMultiple) {
    EXPECT_THROW(align_up(10, 0), std::invalid_argument);
}

// ── CpuProfile ───────────────────────────────────────────────────────────────

TEST(CpuProfile, AcceptsKnownCacheLineSizes) {
    for (int bytes : {32, 64, 128, 256})
        EXPECT_EQ(CpuProfile(bytes).cache_line_bytes, bytes);
}

TEST(CpuProfile, RejectsOtherSizes) {
    EXPECT_THROW(CpuProfile(16), std::invalid_argument);
    EXPECT_THROW(CpuProfile(48), std::invalid_argument);
    EXPECT_THROW(CpuProfile(512), std::invalid_argument);
}

// ── cow_head ─────────────────────────────────────────────────────────────────

TEST(CowHead, GrowsInCacheLineStepsFromCurrentHeadroom) {
    // 64 + 32 = 96 < 112, 96 + 32 = 128 >= 112.
    SocketBuffer skb;
    skb.headroom = 64;
    skb.cow_head(112, CpuProfile(32));
    EXPECT_EQ(skb.headroom, 128);
    ASSERT_EQ(skb.realloc_events.size(), 1u);
    EXPECT_EQ(skb.realloc_events[0], (ReallocEvent{112, 64, 128, 0}));
}

TEST(CowHead, SingleStepWhenItLandsExactly) {
    SocketBuffer skb;
    skb.headroom = 22;
    skb.cow_head(54, CpuProfile(32));
    EXPECT_EQ(skb.headroom, 54);
    EXPECT_EQ(skb.realloc_events.size(), 1u);
}

TEST(CowHead, NoOpWhenHeadroomSuffices) {
    SocketBuffer skb;
    skb.headroom = 206;
    skb.cow_head(54, CpuProfile(64));
    EXPECT_EQ(skb.headroom, 206);
    EXPECT_TRUE(skb.realloc_events.empty());
}

TEST(CowHead, ZeroRequestIsNoOp) {
    SocketBuffer skb;
    skb.cow_head(0, CpuProfile(64));
    EXPECT_EQ(skb.headroom, 0);
    EXPECT_TRUE(skb.realloc_events.empty());
}

TEST(CowHead, RecordsBytesCopiedFromDataLen) {
    SocketBuffer skb;
    skb.headroom = 10;
    skb.data_len = 1234;
    skb.cow_head(100, CpuProfile(64));
    ASSERT_EQ(skb.realloc_events.size(), 1u);
    EXPECT_EQ(skb.realloc_events[0].bytes_copied, 1234);
}

TEST(CowHead, SecondIdenticalRequestFiresNoEvent) {
    std::mt19937_64 rng(0x1badb002);
    std::uniform_int_distribution<int> headroom_dist(0, 512);
    std::uniform_int_distribution<int> request_dist(0, 1024);
    const int cache_lines[] = {32, 64, 128, 256};
    for (int i = 0; i < 2000; ++i) {
        CpuProfile cpu(cache_lines[static_cast<std::size_t>(i) % 4]);
        SocketBuffer skb;
        skb.headroom = headroom_dist(rng);
        int requested = request_dist(rng);
        skb.cow_head(requested, cpu);
        std::size_t events = skb.realloc_events.size();
        skb.cow_head(requested, cpu);
        EXPECT_EQ(skb.realloc_events.size(), events);
    }
}

TEST(CowHead, MonotoneMinimalAndCacheLineAligned) {
    std::mt19937_64 rng(0xfeedface);
    std::uniform_int_distribution<int> headroom_dist(0, 512);
    std::uniform_int_distribution<int> request_dist(0, 2048);
    const int cache_lines[] = {32, 64, 128, 256};
    for (int i = 0; i < 5000; ++i) {
        CpuProfile cpu(cache_lines[static_cast<std::size_t>(i) % 4]);
        SocketBuffer skb;
        skb.headroom = headroom_dist(rng);
        int old_headroom = skb.headroom;
        int requested = request_dist(rng);
        skb.cow_head(requested, cpu);

        EXPECT_GE(skb.headroom, old_headroom);
        EXPECT_GE(skb.headroom, requested);
        if (!skb.realloc_events.empty()) {
            const ReallocEvent& e = skb.realloc_events.back();
            EXPECT_GT(e.requested, e.old_headroom);
            EXPECT_GE(e.new_headroom, e.requested);
            int growth = e.new_headroom - e.old_headroom;
            EXPECT_GT(growth, 0);
            EXPECT_EQ(growth % cpu.cache_line_bytes, 0);
            // minimality: one step less would not have been enough
            EXPECT_LT(skb.headroom - cpu.cache_line_bytes, requested);
        }
    }
}

TEST(CowHead, ClosedFormMatchesIterativeGrowthExhaustively) {
    for (int cache_line : {32, 64, 128}) {
        CpuProfile cpu(cache_line);
        for (int old_headroom = 0; old_headroom <= 4096; ++old_headroom) {
            for (int requested = old_headroom + 1; requested <= 4096; ++requested) {
                SocketBuffer skb;
                skb.headroom = old_headroom;
                skb.cow_head(requested, cpu);
                int expected = iterative_growth(old_headroom, requested, cache_line);
                if (skb.headroom != expected) {
                    FAIL() << "old=" << old_headroom << " requested=" << requested
                           << " cl=" << cache_line << ": got " << skb.headroom << ", expected "
                           << expected;
                }
            }
        }
    }
}

// ── push_header ──────────────────────────────────────────────────────────────

TEST(PushHeader, MovesBytesFromHeadroomToData) {
    SocketBuffer skb;
    skb.headroom = 270;
    skb.data_len = 100;
    skb.push_header(256);
    EXPECT_EQ(skb.headroom, 14);
    EXPECT_EQ(skb.data_len, 356);
}

TEST(PushHeader, WalkthroughHeadroomAfterPush) {
    SocketBuffer skb;
    skb.headroom = 54;
    skb.push_header(40);
    EXPECT_EQ(skb.headroom, 14);
}

TEST(PushHeader, ZeroPushChangesNothing) {
    SocketBuffer skb;
    skb.headroom = 10;
    skb.push_header(0);
    EXPECT_EQ(skb.headroom, 10);
    EXPECT_EQ(skb.data_len, 0);
}

TEST(PushHeader, UnderflowThrows) {
    SocketBuffer skb;
    skb.headroom = 10;
    EXPECT_THROW(skb.push_header(11), HeadroomUnderflow);
}

TEST(PushHeader, ConservesHeadroomPlusData) {
    std::mt19937_64 rng(0xabad1dea);
    std::uniform_int_distribution<int> headroom_dist(0, 4096);
    for (int i = 0; i < 5000; ++i) {
        SocketBuffer skb;
        skb.headroom = headroom_dist(rng);
        skb.data_len = headroom_dist(rng);
        int total = skb.headroom + skb.data_len;
        std::uniform_int_distribution<int> push_dist(0, skb.headroom);
        skb.push_header(push_dist(rng));
        EXPECT_EQ(skb.headroom + skb.data_len, total);
    }
}

// ── ll_reserved_space ────────────────────────────────────────────────────────

TEST(LlReservedSpace, EthernetRoundsUpTo16) {
    EXPECT_EQ(ll_reserved_space({"ethernet", 14, 0}), 16);
}

TEST(LlReservedSpace, HeaderlessDeviceNeedsNothing) {
    EXPECT_EQ(ll_reserved_space({"null", 0, 0}), 0);
}

TEST(LlReservedSpace, IncludesNeededHeadroom) {
    EXPECT_EQ(ll_reserved_space({"tun", 14, 32}), 48);
}

TEST(LlReservedSpace, AlwaysAlignedAndSufficient) {
    for (int hard = 0; hard <= 64; ++hard) {
        for (int needed = 0; needed <= 64; ++needed) {
            int r = ll_reserved_space({"d", hard, needed});
            EXPECT_EQ(r % 16, 0);
            EXPECT_GE(r, hard + needed);
            EXPECT_LT(r - 16, hard + needed);
        }
    }
}

// ── rx_socket_buffer ─────────────────────────────────────────────────────────

TEST(RxSocketBuffer, I40eDefaultGives206OnEthernet) {
    NicProfile nic{"i40e-default", RxHeadroomPolicy::fixed(192), true};
    SocketBuffer skb = rx_socket_buffer(nic, {"ethernet", 14, 0}, CpuProfile(64), 0);
    EXPECT_EQ(skb.headroom, 206);
    EXPECT_EQ(skb.mac_len, 14);
    EXPECT_EQ(skb.data_len, 0);
    EXPECT_TRUE(skb.realloc_events.empty());
}

TEST(RxSocketBuffer, LegacyRxUsesCacheLineSizedHeadroom) {
    NicProfile nic{"i40e-legacy-rx", RxHeadroomPolicy::cache_line_sized(), true};
    SocketBuffer skb = rx_socket_buffer(nic, {"ethernet", 14, 0}, CpuProfile(64), 0);
    EXPECT_EQ(skb.headroom, 78);
}

TEST(RxSocketBuffer, ZeroProfileGivesZeroHeadroom) {
    NicProfile nic{"none", RxHeadroomPolicy::fixed(0), true};
    SocketBuffer skb = rx_socket_buffer(nic, {"null", 0, 0}, CpuProfile(64), 0);
    EXPECT_EQ(skb.headroom, 0);
}

TEST(RxSocketBuffer, MacNotPulledSkipsHardHeader) {
    NicProfile nic{"raw", RxHeadroomPolicy::fixed(192), false};
    SocketBuffer skb = rx_socket_buffer(nic, {"ethernet", 14, 0}, CpuProfile(64), 64);
    EXPECT_EQ(skb.headroom, 192);
    EXPECT_EQ(skb.mac_len, 14);
    EXPECT_EQ(skb.data_len, 64);
}

TEST(RxSocketBuffer, RejectsNegativePayload) {
    NicProfile nic{"i40e-default", RxHeadroomPolicy::fixed(192), true};
    EXPECT_THROW(rx_socket_buffer(nic, {"ethernet", 14, 0}, CpuProfile(64), -1),
                 std::invalid_argument);
}

} // namespace
} // namespace lwtsim
