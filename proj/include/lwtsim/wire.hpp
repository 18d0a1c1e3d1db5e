#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lwtsim/address.hpp"
#include "lwtsim/errors.hpp"

namespace lwtsim {

/// Big-endian byte sink.
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v >> 8));
        u8(static_cast<std::uint8_t>(v & 0xff));
    }
    void u24(std::uint32_t v) {
        u8(static_cast<std::uint8_t>((v >> 16) & 0xff));
        u8(static_cast<std::uint8_t>((v >> 8) & 0xff));
        u8(static_cast<std::uint8_t>(v & 0xff));
    }
    void u32(std::uint32_t v) {
        u16(static_cast<std::uint16_t>(v >> 16));
        u16(static_cast<std::uint16_t>(v & 0xffff));
    }
    void raw(const std::uint8_t* data, std::size_t n) { out_.insert(out_.end(), data, data + n); }
    void address(const Ipv6Address& a) { raw(a.bytes.data(), 16); }
    /// Address with the first `skip` octets elided.
    void address_suffix(const Ipv6Address& a, int skip) {
        raw(a.bytes.data() + skip, static_cast<std::size_t>(16 - skip));
    }
    void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }

    std::size_t size() const { return out_.size(); }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

/// Big-endian byte source. Throws ParseError on short reads.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8(std::string_view field) {
        need(1, field);
        return data_[pos_++];
    }
    std::uint16_t u16(std::string_view field) {
        need(2, field);
        std::uint16_t v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u24(std::string_view field) {
        need(3, field);
        std::uint32_t v = (static_cast<std::uint32_t>(data_[pos_]) << 16) |
                          (static_cast<std::uint32_t>(data_[pos_ + 1]) << 8) |
                          data_[pos_ + 2];
        pos_ += 3;
        return v;
    }
    Ipv6Address address(std::string_view field) {
        need(16, field);
        Ipv6Address a;
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + 16), a.bytes.begin());
        pos_ += 16;
        return a;
    }
    /// Address whose first `prefix_len` octets come from `prefix`, the rest from the wire.
    Ipv6Address address_with_prefix(const Ipv6Address& prefix, int prefix_len,
                                    std::string_view field) {
        std::size_t n = static_cast<std::size_t>(16 - prefix_len);
        need(n, field);
        Ipv6Address a = prefix;
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n),
                  a.bytes.begin() + prefix_len);
        pos_ += n;
        return a;
    }
    void skip(std::size_t n, std::string_view field) {
        need(n, field);
        pos_ += n;
    }

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t n, std::string_view field) const {
        if (data_.size() - pos_ < n)
            throw ParseError(field, pos_,
                             "truncated input: need " + std::to_string(n) + " more byte(s), have " +
                                 std::to_string(data_.size() - pos_));
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

/// Two lowercase hex digits per byte, space-separated.
inline std::string to_hex(std::span<const std::uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 3);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (i)
            out += ' ';
        out += digits[data[i] >> 4];
        out += digits[data[i] & 0xf];
    }
    return out;
}

/// Inverse of to_hex. Whitespace between bytes is ignored.
inline std::vector<std::uint8_t> parse_hex(std::string_view text) {
    std::vector<std::uint8_t> out;
    int nibble = -1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (nibble >= 0)
                throw ParseError("hex", i, "odd number of hex digits in byte");
            continue;
        }
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            d = c - 'A' + 10;
        else
            throw ParseError("hex", i, std::string("invalid character '") + c + "'");
        if (nibble < 0) {
            nibble = d;
        } else {
            out.push_back(static_cast<std::uint8_t>((nibble << 4) | d));
            nibble = -1;
        }
    }
    if (nibble >= 0)
        throw ParseError("hex", text.size(), "odd number of hex digits");
    return out;
}

} // namespace lwtsim
