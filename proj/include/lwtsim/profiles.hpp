#pragma once

#include <istream>
#include <fstream>
#include <stdexcept>
#include <string>

#include "lwtsim/buffer.hpp"

namespace lwtsim {
namespace presets {

/// x86-64: 64-byte cache line.
inline CpuProfile x86_64() { return CpuProfile(64); }

/// Intel XL710 (i40e) default RX path: 192 bytes of driver headroom, the
/// Ethernet header pulled past the data pointer.
inline NicProfile i40e_default() {
    return {"i40e-default", RxHeadroomPolicy::fixed(192), true};
}

/// i40e with legacy-rx enabled: a cache-line-sized headroom instead.
inline NicProfile i40e_legacy_rx() {
    return {"i40e-legacy-rx", RxHeadroomPolicy::cache_line_sized(), true};
}

inline NetDevice ethernet() { return {"ethernet", 14, 0}; }

} // namespace presets

/// The simulation profile a command runs against.
struct ProfileConfig {
    CpuProfile cpu = presets::x86_64();
    NicProfile nic = presets::i40e_default();
    NetDevice device = presets::ethernet();
};

inline ProfileConfig default_profile() { return {}; }

inline NicProfile nic_preset(const std::string& name) {
    if (name == "i40e-default")
        return presets::i40e_default();
    if (name == "i40e-legacy-rx")
        return presets::i40e_legacy_rx();
    throw std::invalid_argument("unknown NIC preset: " + name +
                                " (expected i40e-default or i40e-legacy-rx)");
}

inline NetDevice device_preset(const std::string& name) {
    if (name == "ethernet")
        return presets::ethernet();
    throw std::invalid_argument("unknown device preset: " + name + " (expected ethernet)");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline int parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("profile key '" + key + "' needs an integer, got '" + value +
                                 "'");
    }
}

inline bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "yes" || value == "1")
        return true;
    if (value == "false" || value == "no" || value == "0")
        return false;
    throw std::runtime_error("profile key '" + key + "' needs a boolean, got '" + value + "'");
}

} // namespace detail

/// Apply one `key = value` setting.
inline void apply_profile_setting(ProfileConfig& profile, const std::string& key,
                                  const std::string& value) {
    if (key == "cache-line") {
        profile.cpu = CpuProfile(detail::parse_int(value, key));
    } else if (key == "nic") {
        profile.nic = nic_preset(value);
    } else if (key == "rx-headroom") {
        profile.nic.name = "custom";
        profile.nic.rx_base_headroom = RxHeadroomPolicy::fixed(detail::parse_int(value, key));
    } else if (key == "mac-pulled") {
        profile.nic.mac_pulled = detail::parse_bool(value, key);
    } else if (key == "device") {
        profile.device = device_preset(value);
    } else if (key == "hard-header") {
        profile.device.name = "custom";
        profile.device.hard_header_len = detail::parse_int(value, key);
    } else if (key == "needed-headroom") {
        profile.device.name = "custom";
        profile.device.needed_headroom = detail::parse_int(value, key);
    } else {
        throw std::runtime_error("unknown profile key: " + key);
    }
}

/// Read `key = value` lines; '#' starts a comment, blank lines are fine.
inline ProfileConfig load_profile(std::istream& in, ProfileConfig base = {}) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("profile line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::runtime_error("profile line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        try {
            apply_profile_setting(base, key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error("profile line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

inline ProfileConfig load_profile_file(const std::string& path, ProfileConfig base = {}) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open profile file: " + path);
    return load_profile(in, base);
}

} // namespace lwtsim
