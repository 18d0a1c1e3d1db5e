#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lwtsim {

/// 128-bit IPv6 address in network byte order.
struct Ipv6Address {
    std::array<std::uint8_t, 16> bytes{};

    auto operator<=>(const Ipv6Address&) const = default;

    std::uint16_t group(int i) const {
        return static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }

    /// Text form with the longest zero run compressed to "::".
    std::string to_string() const {
        int best_start = -1, best_len = 0;
        for (int i = 0; i < 8;) {
            if (group(i) != 0) {
                ++i;
                continue;
            }
            int j = i;
            while (j < 8 && group(j) == 0)
                ++j;
            if (j - i > best_len) {
                best_start = i;
                best_len = j - i;
            }
            i = j;
        }
        if (best_len < 2)
            best_start = -1; // a lone zero group is written out

        std::string out;
        char buf[8];
        int i = 0;
        while (i < 8) {
            if (i == best_start) {
                out += "::";
                i += best_len;
                continue;
            }
            std::snprintf(buf, sizeof(buf), "%x", group(i));
            out += buf;
            ++i;
            if (i < 8 && i != best_start)
                out += ':';
        }
        return out;
    }

    /// Parse "h:h:h:h:h:h:h:h" with optional "::" compression.
    static Ipv6Address parse(std::string_view text) {
        auto fail = [&]() -> void {
            throw std::invalid_argument("bad IPv6 address: " + std::string(text));
        };
        std::vector<std::uint16_t> head, tail;
        bool compressed = false;

        std::size_t pos = 0;
        if (text.substr(0, 2) == "::") {
            compressed = true;
            pos = 2;
        }
        while (pos < text.size()) {
            if (text[pos] == ':') {
                if (compressed || pos == 0)
                    fail(); // second "::" or lone leading ':'
                compressed = true;
                ++pos;
                continue;
            }
            std::size_t end = text.find(':', pos);
            std::string_view grp =
                text.substr(pos, end == std::string_view::npos ? std::string_view::npos
                                                               : end - pos);
            if (grp.empty() || grp.size() > 4)
                fail();
            std::uint32_t v = 0;
            for (char c : grp) {
                std::uint32_t d = 0;
                if (c >= '0' && c <= '9')
                    d = static_cast<std::uint32_t>(c - '0');
                else if (c >= 'a' && c <= 'f')
                    d = static_cast<std::uint32_t>(c - 'a' + 10);
                else if (c >= 'A' && c <= 'F')
                    d = static_cast<std::uint32_t>(c - 'A' + 10);
                else
                    fail();
                v = v * 16 + d;
            }
            (compressed ? tail : head).push_back(static_cast<std::uint16_t>(v));
            if (end == std::string_view::npos)
                break;
            pos = end + 1;
            if (pos == text.size() && text[pos - 2] != ':')
                fail(); // trailing lone ':'
        }

        std::size_t n = head.size() + tail.size();
        if (compressed ? n > 7 : n != 8)
            fail();

        Ipv6Address addr;
        for (std::size_t i = 0; i < head.size(); ++i) {
            addr.bytes[2 * i] = static_cast<std::uint8_t>(head[i] >> 8);
            addr.bytes[2 * i + 1] = static_cast<std::uint8_t>(head[i] & 0xff);
        }
        for (std::size_t i = 0; i < tail.size(); ++i) {
            std::size_t g = 8 - tail.size() + i;
            addr.bytes[2 * g] = static_cast<std::uint8_t>(tail[i] >> 8);
            addr.bytes[2 * g + 1] = static_cast<std::uint8_t>(tail[i] & 0xff);
        }
        return addr;
    }
};

} // namespace lwtsim
