// Command-line front end: trigger enumeration, stream simulation,
// vanilla-vs-patched comparison, and header codecs.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lwtsim/lwtsim.hpp"

namespace {

using namespace lwtsim;

/// Post-parse flag problems; mapped to exit code 2 like CLI11 parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Protocol parse_protocol(const std::string& s) {
    if (s == "ioam")
        return Protocol::Ioam;
    if (s == "srv6")
        return Protocol::Srv6;
    if (s == "rpl")
        return Protocol::Rpl;
    throw UsageError("unknown protocol: " + s);
}

Mode parse_mode(const std::string& s) {
    if (s == "inline")
        return Mode::Inline;
    if (s == "encap")
        return Mode::Encap;
    if (s == "encap-red")
        return Mode::EncapRed;
    if (s == "l2encap")
        return Mode::L2Encap;
    if (s == "l2encap-red")
        return Mode::L2EncapRed;
    if (s == "auto")
        return Mode::Auto;
    throw UsageError("unknown mode: " + s);
}

const char* protocol_label(Protocol p) {
    switch (p) {
    case Protocol::Ioam:
        return "IOAM";
    case Protocol::Srv6:
        return "SRv6";
    case Protocol::Rpl:
        return "RPL";
    }
    return "?";
}

const char* protocol_flag_name(Protocol p) {
    switch (p) {
    case Protocol::Ioam:
        return "ioam";
    case Protocol::Srv6:
        return "srv6";
    case Protocol::Rpl:
        return "rpl";
    }
    return "?";
}

const char* mode_label(Mode m) {
    switch (m) {
    case Mode::Inline:
        return "Inline mode";
    case Mode::Encap:
        return "Encap mode";
    case Mode::EncapRed:
        return "Encap Red mode";
    case Mode::L2Encap:
        return "Encap L2 mode";
    case Mode::L2EncapRed:
        return "Encap L2 Red mode";
    case Mode::Auto:
        return "Auto mode";
    }
    return "?";
}

const char* mode_flag_name(Mode m) {
    switch (m) {
    case Mode::Inline:
        return "inline";
    case Mode::Encap:
        return "encap";
    case Mode::EncapRed:
        return "encap-red";
    case Mode::L2Encap:
        return "l2encap";
    case Mode::L2EncapRed:
        return "l2encap-red";
    case Mode::Auto:
        return "auto";
    }
    return "?";
}

std::string join(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(values[i]);
    }
    return out;
}

std::string pad_right(std::string s, std::size_t width) {
    while (s.size() < width)
        s += ' ';
    return s;
}

// ---------------------------------------------------------------------------
// Profile flags shared by triggers / simulate / compare
// ---------------------------------------------------------------------------

struct ProfileOptions {
    std::string profile_file;
    int cache_line = 64;
    std::string nic = "i40e-default";
    std::string dev = "ethernet";
    int rx_headroom = 0;
    int hard_header = 0;
    int needed_headroom = 0;

    CLI::Option* file_opt = nullptr;
    CLI::Option* cl_opt = nullptr;
    CLI::Option* nic_opt = nullptr;
    CLI::Option* dev_opt = nullptr;
    CLI::Option* rx_opt = nullptr;
    CLI::Option* hh_opt = nullptr;
    CLI::Option* nh_opt = nullptr;

    void attach(CLI::App* cmd) {
        file_opt = cmd->add_option("--profile-file", profile_file,
                                   "Profile as 'key = value' lines (cache-line, nic, rx-headroom, "
                                   "mac-pulled, device, hard-header, needed-headroom)");
        cl_opt = cmd->add_option("--cache-line", cache_line, "CPU cache line size in bytes")
                     ->check(CLI::IsMember({32, 64, 128, 256}));
        nic_opt = cmd->add_option("--nic", nic, "NIC RX headroom preset")
                      ->check(CLI::IsMember({"i40e-default", "i40e-legacy-rx"}));
        dev_opt = cmd->add_option("--dev", dev, "Output device preset")
                      ->check(CLI::IsMember({"ethernet"}));
        rx_opt = cmd->add_option("--rx-headroom", rx_headroom,
                                 "Fixed driver RX headroom in bytes (overrides --nic)")
                     ->check(CLI::NonNegativeNumber);
        hh_opt = cmd->add_option("--hard-header", hard_header,
                                 "Device link-layer header length in bytes")
                     ->check(CLI::NonNegativeNumber);
        nh_opt = cmd->add_option("--needed-headroom", needed_headroom,
                                 "Extra device headroom in bytes")
                     ->check(CLI::NonNegativeNumber);
    }

    /// Precedence: defaults < profile file < presets < explicit numeric flags.
    ProfileConfig resolve() const {
        ProfileConfig p = default_profile();
        if (file_opt->count())
            p = load_profile_file(profile_file, p);
        if (nic_opt->count())
            p.nic = nic_preset(nic);
        if (dev_opt->count())
            p.device = device_preset(dev);
        if (cl_opt->count())
            p.cpu = CpuProfile(cache_line);
        if (rx_opt->count()) {
            p.nic.name = "custom";
            p.nic.rx_base_headroom = RxHeadroomPolicy::fixed(rx_headroom);
        }
        if (hh_opt->count()) {
            p.device.name = "custom";
            p.device.hard_header_len = hard_header;
        }
        if (nh_opt->count()) {
            p.device.name = "custom";
            p.device.needed_headroom = needed_headroom;
        }
        return p;
    }
};

ReportFormat parse_format(const std::string& s) {
    if (s == "csv")
        return ReportFormat::Csv;
    if (s == "json")
        return ReportFormat::Json;
    throw UsageError("unknown format: " + s);
}

void write_rows(const std::vector<ReportRow>& rows, const std::string& format,
                const std::string& output) {
    ReportFormat fmt = parse_format(format);
    if (output.empty())
        emit_report(rows, fmt, std::cout);
    else
        emit_report(rows, fmt, output);
}

std::pair<int, int> parse_cmpr(const std::string& s) {
    std::size_t comma = s.find(',');
    if (comma == std::string::npos)
        throw UsageError("--cmpr expects 'I,E' (e.g. 8,8)");
    try {
        int i = std::stoi(s.substr(0, comma));
        int e = std::stoi(s.substr(comma + 1));
        if (i < 0 || i > 15 || e < 0 || e > 15)
            throw UsageError("--cmpr values must be in [0, 15]");
        return {i, e};
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("--cmpr expects 'I,E' (e.g. 8,8)");
    }
}

// ---------------------------------------------------------------------------
// triggers
// ---------------------------------------------------------------------------

struct TriggersArgs {
    bool table1 = false;
    std::string protocol;
    std::string mode;
    int max_seg = kSrv6MaxSegments;
    int max_addr = 63;
    int max_pto = kIoamPtoMax;
    std::string cmpr = "0,0";
    ProfileOptions profile;
    CLI::Option* mode_opt = nullptr;
};

std::string render_trigger_report(const TriggerReport& report) {
    std::string out = "Double-reallocation trigger report\n";
    out += "profile: " + report.profile_description + "\n";

    bool first = true;
    Protocol last = Protocol::Ioam;
    for (const TriggerReportSection& section : report.sections) {
        if (first || section.protocol != last) {
            out += "\n";
            out += protocol_label(section.protocol);
            out += "\n";
            last = section.protocol;
            first = false;
        }
        std::string label = mode_label(section.mode);
        if (section.protocol == Protocol::Rpl && (section.cmpr_i != 0 || section.cmpr_e != 0))
            label += " (cmpr " + std::to_string(section.cmpr_i) + "/" +
                     std::to_string(section.cmpr_e) + ")";
        out += "  " + pad_right(label, 20) + " ";
        out += section.values.empty() ? "none" : section.param_label + " " + join(section.values);
        out += "\n";
    }
    return out;
}

int run_triggers(const TriggersArgs& args) {
    ProfileConfig profile = args.profile.resolve();

    TriggerReport report;
    if (args.table1) {
        report = reference_trigger_report(profile.cpu, profile.nic, profile.device);
    } else {
        if (args.protocol.empty())
            throw UsageError("triggers needs --protocol (or --table1)");
        Protocol protocol = parse_protocol(args.protocol);
        Mode mode = Mode::Inline;
        if (protocol == Protocol::Rpl) {
            if (args.mode_opt->count() && parse_mode(args.mode) != Mode::Inline)
                throw UsageError("RPL supports only --mode inline");
        } else {
            if (!args.mode_opt->count())
                throw UsageError("triggers needs --mode for " + args.protocol);
            mode = parse_mode(args.mode);
        }

        report.profile_description = describe_profile(profile.cpu, profile.nic, profile.device);
        switch (protocol) {
        case Protocol::Ioam:
            report.sections.push_back(enumerate_triggers(protocol, mode, kIoamPtoMin, args.max_pto,
                                                         profile.cpu, profile.nic,
                                                         profile.device));
            break;
        case Protocol::Srv6:
            report.sections.push_back(enumerate_triggers(protocol, mode, 1, args.max_seg,
                                                         profile.cpu, profile.nic,
                                                         profile.device));
            break;
        case Protocol::Rpl: {
            auto [cmpr_i, cmpr_e] = parse_cmpr(args.cmpr);
            report.sections.push_back(enumerate_triggers(protocol, Mode::Inline, 1, args.max_addr,
                                                         profile.cpu, profile.nic, profile.device,
                                                         cmpr_i, cmpr_e));
            break;
        }
        }
    }

    std::cout << render_trigger_report(report);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string protocol;
    std::string mode;
    int pto = 0;
    int segments = 0;
    int addresses = 0;
    std::string cmpr = "0,0";
    std::string strategy;
    int n_packets = 0;
    int payload = 0;
    double cost_per_realloc = 1.0;
    double cost_per_byte = 0.0;
    std::string format = "table";
    std::string output;
    ProfileOptions profile;
    CLI::Option* mode_opt = nullptr;
    CLI::Option* pto_opt = nullptr;
    CLI::Option* seg_opt = nullptr;
    CLI::Option* addr_opt = nullptr;
};

EncapConfig config_from_flags(const std::string& protocol_name, CLI::Option* mode_opt,
                              const std::string& mode_name, CLI::Option* pto_opt, int pto,
                              CLI::Option* seg_opt, int segments, CLI::Option* addr_opt,
                              int addresses, const std::string& cmpr) {
    Protocol protocol = parse_protocol(protocol_name);
    switch (protocol) {
    case Protocol::Ioam: {
        if (!mode_opt->count())
            throw UsageError("ioam needs --mode inline|encap|auto");
        if (!pto_opt->count())
            throw UsageError("ioam needs --pto");
        return make_ioam_config(parse_mode(mode_name), pto);
    }
    case Protocol::Srv6: {
        if (!mode_opt->count())
            throw UsageError("srv6 needs --mode inline|encap|encap-red|l2encap|l2encap-red");
        if (!seg_opt->count())
            throw UsageError("srv6 needs --segments");
        return make_srv6_config(parse_mode(mode_name), segments);
    }
    case Protocol::Rpl: {
        if (mode_opt->count() && parse_mode(mode_name) != Mode::Inline)
            throw UsageError("RPL supports only --mode inline");
        if (!addr_opt->count())
            throw UsageError("rpl needs --addresses");
        auto [cmpr_i, cmpr_e] = parse_cmpr(cmpr);
        return make_rpl_config(addresses, cmpr_i, cmpr_e);
    }
    }
    throw UsageError("unknown protocol: " + protocol_name);
}

int run_simulate(const SimulateArgs& args) {
    ProfileConfig profile = args.profile.resolve();
    EncapConfig cfg = config_from_flags(args.protocol, args.mode_opt, args.mode, args.pto_opt,
                                        args.pto, args.seg_opt, args.segments, args.addr_opt,
                                        args.addresses, args.cmpr);
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Strategy strategy = args.strategy == "vanilla" ? Strategy::Vanilla : Strategy::Patched;
    CostModel cost{args.cost_per_realloc, args.cost_per_byte};

    SimResult result = simulate_stream(cfg, profile.cpu, profile.nic, profile.device, strategy,
                                       args.n_packets, args.payload, cost);
    bool flagged = predict_trigger(cfg, profile.cpu, profile.nic, profile.device).triggers;

    if (args.format == "table") {
        std::cout << "protocol: " << protocol_flag_name(cfg.protocol) << "\n"
                  << "mode: " << mode_flag_name(cfg.mode) << "\n"
                  << "param: " << param_value(cfg) << "\n"
                  << "strategy: " << strategy_name(result.strategy) << "\n"
                  << "n_packets: " << result.n_packets << "\n"
                  << "total_reallocs: " << result.total_reallocs << "\n"
                  << "total_bytes_copied: " << result.total_bytes_copied << "\n"
                  << "mean_reallocs_per_packet: " << fixed6(result.mean_reallocs_per_packet)
                  << "\n"
                  << "modeled_cost: " << fixed6(result.modeled_cost) << "\n"
                  << "flagged: " << (flagged ? "true" : "false") << "\n";
        return 0;
    }
    write_rows({to_report_row(result, flagged)}, args.format, args.output);
    return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareArgs {
    std::string protocol;
    std::string mode;
    int max_seg = kSrv6MaxSegments;
    int max_addr = 63;
    int max_pto = kIoamPtoMax;
    std::string cmpr = "0,0";
    int n_packets = 1000;
    int payload = 0;
    double cost_per_realloc = 1.0;
    double cost_per_byte = 0.0;
    std::string format = "table";
    std::string output;
    ProfileOptions profile;
    CLI::Option* mode_opt = nullptr;
};

int run_compare(const CompareArgs& args) {
    ProfileConfig profile = args.profile.resolve();
    Protocol protocol = parse_protocol(args.protocol);

    ConfigSweep sweep;
    switch (protocol) {
    case Protocol::Ioam: {
        if (!args.mode_opt->count())
            throw UsageError("ioam needs --mode inline|encap|auto");
        sweep = full_range_sweep(protocol, parse_mode(args.mode), kIoamPtoMin, args.max_pto);
        break;
    }
    case Protocol::Srv6: {
        if (!args.mode_opt->count())
            throw UsageError("srv6 needs --mode inline|encap|encap-red|l2encap|l2encap-red");
        sweep = full_range_sweep(protocol, parse_mode(args.mode), 1, args.max_seg);
        break;
    }
    case Protocol::Rpl: {
        if (args.mode_opt->count() && parse_mode(args.mode) != Mode::Inline)
            throw UsageError("RPL supports only --mode inline");
        auto [cmpr_i, cmpr_e] = parse_cmpr(args.cmpr);
        sweep = full_range_sweep(protocol, Mode::Inline, 1, args.max_addr, cmpr_i, cmpr_e);
        break;
    }
    }

    CostModel cost{args.cost_per_realloc, args.cost_per_byte};
    ComparisonReport report = compare(sweep, profile.cpu, profile.nic, profile.device,
                                      args.n_packets, cost, args.payload);

    if (args.format == "table") {
        std::printf("%5s  %21s  %21s  %17s  %s\n", "param", "vanilla_mean_reallocs",
                    "patched_mean_reallocs", "realloc_reduction", "flagged");
        for (const ComparisonRow& row : report.rows)
            std::printf("%5d  %21s  %21s  %17s  %s\n", row.param,
                        fixed6(row.vanilla.mean_reallocs_per_packet).c_str(),
                        fixed6(row.patched.mean_reallocs_per_packet).c_str(),
                        fixed6(row.realloc_reduction).c_str(), row.flagged ? "true" : "false");
        return 0;
    }
    write_rows(to_report_rows(report), args.format, args.output);
    return 0;
}

// ---------------------------------------------------------------------------
// codec
// ---------------------------------------------------------------------------

struct CodecArgs {
    std::string protocol;
    std::string hex;
    std::vector<std::string> segments;
    std::vector<std::string> addresses;
    std::string src;
    std::string dst;
    std::string cmpr = "0,0";
    int next_header = kNextHeaderNone;
    int pto = 0;
    int namespace_id = 0;
    int node_len = 0;
    int flags = 0;
    int remaining_len = -1;
    long long trace_type = 0;
    int segments_left = -1;
    int last_entry = -1;
    int tag = 0;
    bool reduced = false;
    int payload_length = 0;
    int hop_limit = 64;
    int traffic_class = 0;
    long long flow_label = 0;
    CLI::Option* dst_opt = nullptr;
    CLI::Option* pto_opt = nullptr;
    CLI::Option* seg_opt = nullptr;
    CLI::Option* addr_opt = nullptr;
    CLI::Option* src_opt = nullptr;
};

int run_codec_encode(const CodecArgs& args) {
    CodecContext ctx;
    ctx.next_header = static_cast<std::uint8_t>(args.next_header);

    std::vector<std::uint8_t> bytes;
    Protocol protocol{};
    bool is_ipv6 = args.protocol == "ipv6";
    if (!is_ipv6)
        protocol = parse_protocol(args.protocol);

    if (is_ipv6) {
        if (!args.src_opt->count() || !args.dst_opt->count())
            throw UsageError("ipv6 encoding needs --src and --dst");
        Ipv6Header h;
        h.traffic_class = static_cast<std::uint8_t>(args.traffic_class);
        h.flow_label = static_cast<std::uint32_t>(args.flow_label);
        h.payload_length = static_cast<std::uint16_t>(args.payload_length);
        h.next_header = static_cast<std::uint8_t>(args.next_header);
        h.hop_limit = static_cast<std::uint8_t>(args.hop_limit);
        h.source = Ipv6Address::parse(args.src);
        h.destination = Ipv6Address::parse(args.dst);
        bytes = encode(h);
    } else if (protocol == Protocol::Ioam) {
        if (!args.pto_opt->count())
            throw UsageError("ioam encoding needs --pto");
        IoamPtoHbh h;
        h.namespace_id = static_cast<std::uint16_t>(args.namespace_id);
        h.node_len = static_cast<std::uint8_t>(args.node_len);
        h.flags = static_cast<std::uint8_t>(args.flags);
        h.remaining_len = static_cast<std::uint8_t>(
            args.remaining_len >= 0 ? args.remaining_len : args.pto / 4);
        h.trace_type = static_cast<std::uint32_t>(args.trace_type);
        h.pto_bytes = args.pto;
        bytes = encode(h, ctx);
    } else if (protocol == Protocol::Srv6) {
        if (!args.seg_opt->count())
            throw UsageError("srv6 encoding needs --segments");
        Srv6Header h;
        for (const std::string& s : args.segments)
            h.segments.push_back(Ipv6Address::parse(s));
        h.reduced = args.reduced;
        int wire_count = static_cast<int>(h.segments.size()) - (h.reduced ? 1 : 0);
        h.segments_left = static_cast<std::uint8_t>(
            args.segments_left >= 0 ? args.segments_left
                                    : static_cast<int>(h.segments.size()) - 1);
        h.last_entry =
            static_cast<std::uint8_t>(args.last_entry >= 0 ? args.last_entry : wire_count - 1);
        h.flags = static_cast<std::uint8_t>(args.flags);
        h.tag = static_cast<std::uint16_t>(args.tag);
        bytes = encode(h, ctx);
    } else {
        if (!args.addr_opt->count())
            throw UsageError("rpl encoding needs --addresses");
        if (!args.dst_opt->count())
            throw UsageError("rpl encoding needs --dst for address compression");
        RplHeader h;
        for (const std::string& s : args.addresses)
            h.addresses.push_back(Ipv6Address::parse(s));
        auto [cmpr_i, cmpr_e] = parse_cmpr(args.cmpr);
        h.cmpr_i = cmpr_i;
        h.cmpr_e = cmpr_e;
        h.pad = rpl_overhead(static_cast<int>(h.addresses.size()), cmpr_i, cmpr_e).pad;
        h.segments_left = static_cast<std::uint8_t>(
            args.segments_left >= 0 ? args.segments_left
                                    : static_cast<int>(h.addresses.size()));
        ctx.destination = Ipv6Address::parse(args.dst);
        bytes = encode(h, ctx);
    }

    std::cout << to_hex(bytes) << "\n";
    return 0;
}

int run_codec_decode(const CodecArgs& args) {
    std::vector<std::uint8_t> bytes = parse_hex(args.hex);
    CodecContext ctx;
    if (args.dst_opt->count())
        ctx.destination = Ipv6Address::parse(args.dst);
    ctx.srv6_reduced = args.reduced;

    std::ostringstream out;
    bool is_ipv6 = args.protocol == "ipv6";
    Protocol protocol{};
    if (!is_ipv6)
        protocol = parse_protocol(args.protocol);

    if (is_ipv6) {
        Ipv6Header h = decode_ipv6(bytes);
        out << "kind: ipv6\n"
            << "traffic_class: " << +h.traffic_class << "\n"
            << "flow_label: " << h.flow_label << "\n"
            << "payload_length: " << h.payload_length << "\n"
            << "next_header: " << +h.next_header << "\n"
            << "hop_limit: " << +h.hop_limit << "\n"
            << "source: " << h.source.to_string() << "\n"
            << "destination: " << h.destination.to_string() << "\n";
    } else if (protocol == Protocol::Ioam) {
        IoamPtoHbh h = decode_ioam(bytes, ctx);
        out << "kind: ioam-pto\n"
            << "namespace_id: " << h.namespace_id << "\n"
            << "node_len: " << +h.node_len << "\n"
            << "flags: " << +h.flags << "\n"
            << "remaining_len: " << +h.remaining_len << "\n"
            << "trace_type: " << h.trace_type << "\n"
            << "pto_bytes: " << h.pto_bytes << "\n"
            << "encoded_size: " << bytes.size() << "\n"
            << "hdr_ext_len: " << (bytes.size() - 8) / 8 << "\n";
    } else if (protocol == Protocol::Srv6) {
        if (args.reduced && !args.dst_opt->count())
            throw UsageError("decoding a reduced SRH needs --dst (the omitted first segment)");
        Srv6Header h = decode_srv6(bytes, ctx);
        out << "kind: srv6\n"
            << "segments_left: " << +h.segments_left << "\n"
            << "last_entry: " << +h.last_entry << "\n"
            << "flags: " << +h.flags << "\n"
            << "tag: " << h.tag << "\n"
            << "reduced: " << (h.reduced ? "true" : "false") << "\n"
            << "encoded_size: " << bytes.size() << "\n"
            << "hdr_ext_len: " << (bytes.size() - 8) / 8 << "\n";
        for (std::size_t i = 0; i < h.segments.size(); ++i)
            out << "segments[" << i << "]: " << h.segments[i].to_string() << "\n";
    } else {
        if (!args.dst_opt->count())
            throw UsageError("rpl decoding needs --dst for address decompression");
        RplHeader h = decode_rpl(bytes, ctx);
        out << "kind: rpl\n"
            << "segments_left: " << +h.segments_left << "\n"
            << "cmpr_i: " << h.cmpr_i << "\n"
            << "cmpr_e: " << h.cmpr_e << "\n"
            << "pad: " << h.pad << "\n"
            << "encoded_size: " << bytes.size() << "\n"
            << "hdr_ext_len: " << (bytes.size() - 8) / 8 << "\n";
        for (std::size_t i = 0; i < h.addresses.size(); ++i)
            out << "addresses[" << i << "]: " << h.addresses[i].to_string() << "\n";
    }

    std::cout << out.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Socket-buffer headroom simulator for lightweight-tunnel encapsulation"};
    app.require_subcommand(1);

    // triggers
    TriggersArgs trig;
    CLI::App* trig_cmd = app.add_subcommand(
        "triggers", "Enumerate double-reallocation trigger points");
    trig_cmd->add_flag("--table1", trig.table1,
                       "Full trigger table for the x86-64 / i40e-default / ethernet profile");
    trig_cmd->add_option("--protocol", trig.protocol, "ioam, srv6 or rpl")
        ->check(CLI::IsMember({"ioam", "srv6", "rpl"}));
    trig.mode_opt = trig_cmd->add_option("--mode", trig.mode, "Encapsulation mode")
                        ->check(CLI::IsMember(
                            {"inline", "encap", "encap-red", "l2encap", "l2encap-red", "auto"}));
    trig_cmd->add_option("--max-seg", trig.max_seg, "Largest SRv6 segment count to test")
        ->check(CLI::Range(1, kSrv6MaxSegments));
    trig_cmd->add_option("--max-addr", trig.max_addr, "Largest RPL address count to test")
        ->check(CLI::Range(1, 1000));
    trig_cmd->add_option("--max-pto", trig.max_pto, "Largest IOAM PTO size to test")
        ->check(CLI::Range(kIoamPtoMin, kIoamPtoMax));
    trig_cmd->add_option("--cmpr", trig.cmpr, "RPL compression as 'I,E'");
    trig.profile.attach(trig_cmd);

    // simulate
    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Simulate one packet stream");
    sim_cmd->add_option("--protocol", sim.protocol, "ioam, srv6 or rpl")
        ->required()
        ->check(CLI::IsMember({"ioam", "srv6", "rpl"}));
    sim.mode_opt = sim_cmd->add_option("--mode", sim.mode, "Encapsulation mode")
                       ->check(CLI::IsMember(
                           {"inline", "encap", "encap-red", "l2encap", "l2encap-red", "auto"}));
    sim.pto_opt = sim_cmd->add_option("--pto", sim.pto, "IOAM pre-allocated trace size in bytes")
                      ->check(CLI::Range(kIoamPtoMin, kIoamPtoMax));
    sim.seg_opt = sim_cmd->add_option("--segments", sim.segments, "SRv6 segment count")
                      ->check(CLI::Range(1, kSrv6MaxSegments));
    sim.addr_opt = sim_cmd->add_option("--addresses", sim.addresses, "RPL address count")
                       ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--cmpr", sim.cmpr, "RPL compression as 'I,E'");
    sim_cmd->add_option("--strategy", sim.strategy, "vanilla or patched")
        ->required()
        ->check(CLI::IsMember({"vanilla", "patched"}));
    sim_cmd->add_option("-n,--packets", sim.n_packets, "Packets in the stream")
        ->required()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--payload", sim.payload, "Payload length in bytes")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--cost-per-realloc", sim.cost_per_realloc,
                        "Abstract cost per reallocation");
    sim_cmd->add_option("--cost-per-byte", sim.cost_per_byte, "Abstract cost per copied byte");
    sim_cmd->add_option("--format", sim.format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sim_cmd->add_option("--output", sim.output, "Write csv/json to a file instead of stdout");
    sim.profile.attach(sim_cmd);

    // compare
    CompareArgs cmp;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "Sweep a parameter, vanilla vs patched");
    cmp_cmd->add_option("--protocol", cmp.protocol, "ioam, srv6 or rpl")
        ->required()
        ->check(CLI::IsMember({"ioam", "srv6", "rpl"}));
    cmp.mode_opt = cmp_cmd->add_option("--mode", cmp.mode, "Encapsulation mode")
                       ->check(CLI::IsMember(
                           {"inline", "encap", "encap-red", "l2encap", "l2encap-red", "auto"}));
    cmp_cmd->add_option("--max-seg", cmp.max_seg, "Largest SRv6 segment count in the sweep")
        ->check(CLI::Range(1, kSrv6MaxSegments));
    cmp_cmd->add_option("--max-addr", cmp.max_addr, "Largest RPL address count in the sweep")
        ->check(CLI::Range(1, 1000));
    cmp_cmd->add_option("--max-pto", cmp.max_pto, "Largest IOAM PTO size in the sweep")
        ->check(CLI::Range(kIoamPtoMin, kIoamPtoMax));
    cmp_cmd->add_option("--cmpr", cmp.cmpr, "RPL compression as 'I,E'");
    cmp_cmd->add_option("-n,--packets", cmp.n_packets, "Packets per stream")
        ->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--payload", cmp.payload, "Payload length in bytes")
        ->check(CLI::NonNegativeNumber);
    cmp_cmd->add_option("--cost-per-realloc", cmp.cost_per_realloc,
                        "Abstract cost per reallocation");
    cmp_cmd->add_option("--cost-per-byte", cmp.cost_per_byte, "Abstract cost per copied byte");
    cmp_cmd->add_option("--format", cmp.format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    cmp_cmd->add_option("--output", cmp.output, "Write csv/json to a file instead of stdout");
    cmp.profile.attach(cmp_cmd);

    // codec
    CodecArgs cod;
    CLI::App* codec_cmd = app.add_subcommand("codec", "Encode and decode headers");
    codec_cmd->require_subcommand(1);
    CLI::App* enc_cmd = codec_cmd->add_subcommand("encode", "Header fields to hex bytes");
    CLI::App* dec_cmd = codec_cmd->add_subcommand("decode", "Hex bytes to a field table");
    for (CLI::App* c : {enc_cmd, dec_cmd}) {
        c->add_option("--protocol", cod.protocol, "ipv6, ioam, srv6 or rpl")
            ->required()
            ->check(CLI::IsMember({"ipv6", "ioam", "srv6", "rpl"}));
        cod.dst_opt = c->add_option("--dst", cod.dst,
                                    "Packet destination (RPL compression context, reduced-SRH "
                                    "first segment, IPv6 destination)");
        c->add_flag("--reduced", cod.reduced, "SRH omits the first segment");
    }
    cod.seg_opt = enc_cmd->add_option("--segments", cod.segments,
                                      "SRv6 segment addresses (comma-separated or repeated)")
                      ->delimiter(',');
    cod.addr_opt = enc_cmd->add_option("--addresses", cod.addresses,
                                       "RPL addresses (comma-separated or repeated)")
                       ->delimiter(',');
    cod.src_opt = enc_cmd->add_option("--src", cod.src, "IPv6 source address");
    enc_cmd->add_option("--cmpr", cod.cmpr, "RPL compression as 'I,E'");
    enc_cmd->add_option("--next-header", cod.next_header, "Next Header byte")
        ->check(CLI::Range(0, 255));
    cod.pto_opt = enc_cmd->add_option("--pto", cod.pto, "IOAM pre-allocated trace size in bytes")
                      ->check(CLI::Range(kIoamPtoMin, kIoamPtoMax));
    enc_cmd->add_option("--namespace", cod.namespace_id, "IOAM namespace id")
        ->check(CLI::Range(0, 65535));
    enc_cmd->add_option("--node-len", cod.node_len, "IOAM node data length, 4-octet units")
        ->check(CLI::Range(0, 31));
    enc_cmd->add_option("--flags", cod.flags, "IOAM (4-bit) or SRH (8-bit) flags")
        ->check(CLI::Range(0, 255));
    enc_cmd->add_option("--remaining-len", cod.remaining_len,
                        "IOAM free node-data slots, 4-octet units (default: pto/4)")
        ->check(CLI::Range(0, 127));
    enc_cmd->add_option("--trace-type", cod.trace_type, "IOAM 24-bit trace type bitmap")
        ->check(CLI::Range(0LL, (1LL << 24) - 1));
    enc_cmd->add_option("--segments-left", cod.segments_left, "Segments Left byte")
        ->check(CLI::Range(0, 255));
    enc_cmd->add_option("--last-entry", cod.last_entry, "SRH Last Entry byte")
        ->check(CLI::Range(0, 255));
    enc_cmd->add_option("--tag", cod.tag, "SRH tag")->check(CLI::Range(0, 65535));
    enc_cmd->add_option("--payload-length", cod.payload_length, "IPv6 payload length")
        ->check(CLI::Range(0, 65535));
    enc_cmd->add_option("--hop-limit", cod.hop_limit, "IPv6 hop limit")->check(CLI::Range(0, 255));
    enc_cmd->add_option("--traffic-class", cod.traffic_class, "IPv6 traffic class")
        ->check(CLI::Range(0, 255));
    enc_cmd->add_option("--flow-label", cod.flow_label, "IPv6 flow label")
        ->check(CLI::Range(0LL, (1LL << 20) - 1));
    dec_cmd->add_option("--hex", cod.hex, "Header bytes as hex digits")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*trig_cmd)
            return run_triggers(trig);
        if (*sim_cmd)
            return run_simulate(sim);
        if (*cmp_cmd)
            return run_compare(cmp);
        if (*enc_cmd)
            return run_codec_encode(cod);
        return run_codec_decode(cod);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
