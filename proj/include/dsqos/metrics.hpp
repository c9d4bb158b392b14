#pragma once

#include "dsqos/packet.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsqos {

/// Counters for one (class, domain) pair. Only packets created after warm-up are counted.
struct ClassStats {
    std::uint64_t offered_packets = 0;
    std::uint64_t offered_bytes = 0;
    std::uint64_t dropped_packets = 0;
    std::uint64_t delivered_packets = 0;
    /// Offered packets still inside the network when the run stopped.
    std::uint64_t residual_packets = 0;
    std::uint64_t delay_sum_us = 0;
    std::int64_t delay_max_us = 0;

    void merge(const ClassStats& other);
    friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

struct RunMetadata {
    std::uint64_t seed = 0;
    double duration_s = 0;
    std::string config_digest;
};

class MetricsLedger {
public:
    explicit MetricsLedger(int domains = 1);

    int domains() const { return static_cast<int>(stats_.size()); }
    ClassStats& at(TrafficClass c, int domain) { return stats_.at(static_cast<std::size_t>(domain))[index(c)]; }
    const ClassStats& at(TrafficClass c, int domain) const
    {
        return stats_.at(static_cast<std::size_t>(domain))[index(c)];
    }
    /// Sum over all domains.
    ClassStats total(TrafficClass c) const;

    void record_offered(const Packet& p);
    void record_drop(const Packet& p);
    /// Delay is delivered_at - created_at; the packet must carry delivered_at.
    void record_delivery(const Packet& p);

    /// Pools another run (e.g. a replication) into this ledger.
    void merge(const MetricsLedger& other);

    RunMetadata meta;

private:
    std::vector<PerClass<ClassStats>> stats_;
};

/// End-to-end loss: 100 * (offered - delivered - residual) / offered; nullopt when nothing was offered.
std::optional<double> loss_percent(const ClassStats& s);
std::optional<double> loss_percent(const MetricsLedger& ledger, TrafficClass c, int domain);
/// Mean of delivered_at - created_at in milliseconds; nullopt when nothing was delivered.
std::optional<double> mean_delay_ms(const ClassStats& s);
std::optional<double> mean_delay_ms(const MetricsLedger& ledger, TrafficClass c, int domain);
std::optional<double> max_delay_ms(const ClassStats& s);

double normalized_load(double offered_bps, double tb_bps);

/// One CSV row: results for one class in one domain at one sweep point.
struct SweepPoint {
    std::string scenario_id;
    std::uint64_t seed = 0;
    int domains = 1;
    double tb_bps = 0;
    double k_factor = 1;
    double total_offered_bps = 0;
    double normalized_load = 0;
    TrafficClass cls = TrafficClass::BE;
    int domain = 0;
    std::uint64_t offered_pkts = 0;
    std::uint64_t dropped_pkts = 0;
    std::uint64_t delivered_pkts = 0;
    std::optional<double> loss_pct;
    std::optional<double> mean_delay_ms;
    std::optional<double> max_delay_ms;

    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

/// Rounds to the 6 significant digits the CSV carries, so a stored point
/// survives export and re-import unchanged.
double round_sig6(double v);

/// Orders by offered load, then K, then class and domain. Stable.
void sort_points(std::vector<SweepPoint>& points);

std::string csv_header();
std::string to_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> parse_csv(std::string_view text);

/// Throws IoError naming the path when it cannot be written.
void export_csv(const std::vector<SweepPoint>& points, const std::string& path);
std::vector<SweepPoint> import_csv(const std::string& path);

} // namespace dsqos
