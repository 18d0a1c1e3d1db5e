#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwtsim/pipeline.hpp"
#include "lwtsim/triggers.hpp"

namespace lwtsim {

/// Abstract cost of a reallocation: a fixed part plus a per-copied-byte part.
/// The default makes modeled cost equal the reallocation count.
struct CostModel {
    double fixed_cost_per_realloc = 1.0;
    double cost_per_copied_byte = 0.0;
};

inline const char* strategy_name(Strategy s) {
    return s == Strategy::Vanilla ? "vanilla" : "patched";
}

/// Aggregate outcome of one simulated packet stream.
struct SimResult {
    EncapConfig config;
    Strategy strategy = Strategy::Vanilla;
    long long n_packets = 0;
    long long total_reallocs = 0;
    long long total_bytes_copied = 0;
    double mean_reallocs_per_packet = 0.0;
    double modeled_cost = 0.0;
};

inline SimResult simulate_stream(const EncapConfig& cfg, const CpuProfile& cpu,
                                 const NicProfile& nic, const NetDevice& dev, Strategy strategy,
                                 int n_packets, int payload_len = 0, const CostModel& cost = {}) {
    RouteResolver resolver = RouteResolver::identity(dev);
    std::vector<PacketTrace> traces =
        run_flow(cfg, cpu, nic, dev, resolver, strategy, n_packets, payload_len);

    SimResult result;
    result.config = cfg;
    result.strategy = strategy;
    result.n_packets = n_packets;
    for (const PacketTrace& t : traces) {
        result.total_reallocs += t.realloc_count();
        for (const ReallocEvent& e : t.events)
            result.total_bytes_copied += e.bytes_copied;
    }
    result.mean_reallocs_per_packet =
        static_cast<double>(result.total_reallocs) / static_cast<double>(n_packets);
    result.modeled_cost = cost.fixed_cost_per_realloc * static_cast<double>(result.total_reallocs) +
                          cost.cost_per_copied_byte * static_cast<double>(result.total_bytes_copied);
    return result;
}

/// A parameter sweep over one protocol/mode.
struct ConfigSweep {
    Protocol protocol = Protocol::Ioam;
    Mode mode = Mode::Inline;
    std::vector<int> values;
    int cmpr_i = 0;
    int cmpr_e = 0;
};

inline ConfigSweep full_range_sweep(Protocol protocol, Mode mode, int param_min, int param_max,
                                    int cmpr_i = 0, int cmpr_e = 0) {
    ConfigSweep sweep{protocol, mode, {}, cmpr_i, cmpr_e};
    int step = protocol == Protocol::Ioam ? 4 : 1;
    if (protocol == Protocol::Ioam) {
        param_min = std::max(param_min, kIoamPtoMin);
        param_max = std::min(param_max, kIoamPtoMax);
        param_min = align_up(param_min, 4);
    }
    for (int v = param_min; v <= param_max; v += step)
        sweep.values.push_back(v);
    return sweep;
}

/// Vanilla vs patched at one sweep point. `flagged` marks the points where
/// the vanilla strategy steps up to a double reallocation — the places a
/// forwarding-rate plot dips.
struct ComparisonRow {
    int param = 0;
    SimResult vanilla;
    SimResult patched;
    double realloc_reduction = 0.0; // (vanilla - patched) / vanilla
    bool flagged = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
};

inline ComparisonReport compare(const ConfigSweep& sweep, const CpuProfile& cpu,
                                const NicProfile& nic, const NetDevice& dev, int n_packets,
                                const CostModel& cost = {}, int payload_len = 0) {
    if (sweep.values.empty())
        throw std::invalid_argument("comparison sweep is empty");
    ComparisonReport report;
    report.rows.reserve(sweep.values.size());
    for (int v : sweep.values) {
        EncapConfig cfg =
            detail::config_for_param(sweep.protocol, sweep.mode, v, sweep.cmpr_i, sweep.cmpr_e);
        ComparisonRow row;
        row.param = v;
        row.vanilla = simulate_stream(cfg, cpu, nic, dev, Strategy::Vanilla, n_packets,
                                      payload_len, cost);
        row.patched = simulate_stream(cfg, cpu, nic, dev, Strategy::Patched, n_packets,
                                      payload_len, cost);
        row.realloc_reduction =
            row.vanilla.total_reallocs > 0
                ? static_cast<double>(row.vanilla.total_reallocs - row.patched.total_reallocs) /
                      static_cast<double>(row.vanilla.total_reallocs)
                : 0.0;
        row.flagged = predict_trigger(cfg, cpu, nic, dev).triggers;
        report.rows.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report emission. Byte-stable: fixed key order, fixed 6-digit decimals.
// ---------------------------------------------------------------------------

enum class ReportFormat { Csv, Json };

struct ReportRow {
    int param = 0;
    Strategy strategy = Strategy::Vanilla;
    long long n_packets = 0;
    long long total_reallocs = 0;
    long long total_bytes_copied = 0;
    double mean_reallocs_per_packet = 0.0;
    double modeled_cost = 0.0;
    bool flagged = false;
};

inline ReportRow to_report_row(const SimResult& r, bool flagged) {
    return {param_value(r.config), r.strategy,     r.n_packets,
            r.total_reallocs,      r.total_bytes_copied, r.mean_reallocs_per_packet,
            r.modeled_cost,        flagged};
}

inline std::vector<ReportRow> to_report_rows(const ComparisonReport& report) {
    std::vector<ReportRow> rows;
    rows.reserve(report.rows.size() * 2);
    for (const ComparisonRow& row : report.rows) {
        rows.push_back(to_report_row(row.vanilla, row.flagged));
        rows.push_back(to_report_row(row.patched, row.flagged));
    }
    return rows;
}

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline constexpr const char* kReportCsvHeader =
    "param,strategy,n_packets,total_reallocs,total_bytes_copied,"
    "mean_reallocs_per_packet,modeled_cost,flagged";

inline void emit_report(const std::vector<ReportRow>& rows, ReportFormat format,
                        std::ostream& out) {
    if (format == ReportFormat::Csv) {
        out << kReportCsvHeader << '\n';
        for (const ReportRow& r : rows)
            out << r.param << ',' << strategy_name(r.strategy) << ',' << r.n_packets << ','
                << r.total_reallocs << ',' << r.total_bytes_copied << ','
                << fixed6(r.mean_reallocs_per_packet) << ',' << fixed6(r.modeled_cost) << ','
                << (r.flagged ? "true" : "false") << '\n';
        return;
    }
    out << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ReportRow& r = rows[i];
        out << (i ? ",\n " : "\n ");
        out << "{\"param\": " << r.param << ", \"strategy\": \"" << strategy_name(r.strategy)
            << "\", \"n_packets\": " << r.n_packets << ", \"total_reallocs\": " << r.total_reallocs
            << ", \"total_bytes_copied\": " << r.total_bytes_copied
            << ", \"mean_reallocs_per_packet\": " << fixed6(r.mean_reallocs_per_packet)
            << ", \"modeled_cost\": " << fixed6(r.modeled_cost)
            << ", \"flagged\": " << (r.flagged ? "true" : "false") << "}";
    }
    out << "\n]\n";
}

inline void emit_report(const std::vector<ReportRow>& rows, ReportFormat format,
                        const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open report destination: " + path);
    emit_report(rows, format, out);
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for report destination: " + path);
}

} // namespace lwtsim
