#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lwtsim {

/// Decode failure. Carries the offending field name and byte offset.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string_view field, std::size_t offset, std::string_view detail)
        : std::runtime_error(std::string(field) + " at offset " + std::to_string(offset) +
                             ": " + std::string(detail)),
          field_(field),
          offset_(offset) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string field_;
    std::size_t offset_;
};

/// Pushing more bytes than the headroom holds. A real kernel would
/// corrupt memory here; the model treats it as a logic bug.
class HeadroomUnderflow : public std::logic_error {
public:
    HeadroomUnderflow(int requested, int available)
        : std::logic_error("headroom underflow: push of " + std::to_string(requested) +
                           " bytes exceeds headroom of " + std::to_string(available)) {}
};

/// Invalid simulation setup (e.g. a route with no egress device).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lwtsim
