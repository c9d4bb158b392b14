#pragma once

#include "dsqos/diffserv.hpp"
#include "dsqos/random.hpp"
#include "dsqos/scheduler.hpp"
#include "dsqos/traffic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsqos {

enum class TopologyKind : std::uint8_t { Single, Multi };

struct TopologySection {
    TopologyKind kind = TopologyKind::Single;
    int domains = 1;
    /// Per-domain egress limited to the domain bottleneck rate before the shared link.
    bool shaped = true;
    friend bool operator==(const TopologySection&, const TopologySection&) = default;
};

struct LinkSection {
    double bottleneck_bps = 2.1e6;
    SimTime prop_delay{};
    double access_bps = 100e6;
    double switch_bps = 1e9;
    /// Shared multi-domain FIFO size in slots; 0 means "same as the edge router buffer".
    std::uint32_t shared_buffer_slots = 0;
    friend bool operator==(const LinkSection&, const LinkSection&) = default;
};

/// Video (AF) sources. `idr_bps` provisions buffers and weights; `rate_bps` drives the generator.
struct VideoSection {
    std::optional<std::string> profile;
    double idr_bps = 384e3;
    double rate_bps = 384e3;
    std::uint32_t pktsz_bytes = 1038;
    double dly_s = 0.1;
    int sessions = 3;
    int priority = 2;
    SimTime frame_interval = SimTime::from_ms(40);
    FrameSizeRatio ratio{};
    /// Spread a frame's fragments evenly over the frame interval instead of sending them back to back.
    bool pace_fragments = true;
    friend bool operator==(const VideoSection&, const VideoSection&) = default;
};

struct VoiceSection {
    std::optional<std::string> profile;
    double idr_bps = 64e3;
    std::uint32_t pktsz_bytes = 1402;
    double dly_s = 0.15;
    int sessions = 3;
    int priority = 3;
    friend bool operator==(const VoiceSection&, const VoiceSection&) = default;
};

struct BestEffortSection {
    /// Poisson cross-traffic per domain; 0 disables the source.
    double rate_bps = 756e3;
    Distribution pkt_size = Constant{1000};
    int priority = 1;
    friend bool operator==(const BestEffortSection& a, const BestEffortSection& b)
    {
        return a.rate_bps == b.rate_bps && a.priority == b.priority &&
               format_distribution(a.pkt_size) == format_distribution(b.pkt_size);
    }
};

struct BufferSection {
    /// Router buffer in packet slots; 0 derives it from the delay buffer at the bottleneck rate.
    std::uint32_t total_slots = 0;
    std::uint32_t nc_reserve = 1;
    double delay_buffer_s = 0.1;
    double mean_pkt_bytes = 1000;
    friend bool operator==(const BufferSection&, const BufferSection&) = default;
};

struct RunSection {
    double duration_s = 60;
    std::uint64_t seed = 1;
    double warmup_s = 5;
    int replications = 3;
    SimTime sample_interval = SimTime::from_ms(1000);
    friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct SweepSection {
    std::vector<double> be_rates;
    std::vector<double> k_values;
    /// Alternative to be_rates: total offered load as a fraction of the bottleneck.
    std::vector<double> normalized_loads;
    friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct ScenarioConfig {
    std::string id = "custom";
    TopologySection topology;
    LinkSection link;
    VideoSection af;
    VoiceSection ef;
    BestEffortSection be;
    MarkingPolicy marking = MarkingPolicy::standard();
    SchedulerConfig scheduler;
    BufferSection buffer;
    RunSection run;
    SweepSection sweep;

    /// Provisioning inputs for the planner and static weights.
    ClassTrafficSpec af_spec() const;
    ClassTrafficSpec ef_spec() const;
    /// Router buffer after resolving total_slots = 0.
    std::uint32_t total_slots() const;
    /// Rate of the link the edge router schedules onto.
    double tb_bps() const;
    /// Capacity the offered load is normalized against (shared link in multi-domain).
    double capacity_bps() const;
    /// Average AF + EF source rate in one domain.
    double realtime_rate_bps() const;
    /// Aggregate offered load over all domains at the configured BE rate.
    double total_offered_bps() const;

    /// Throws ConfigError naming the first offending key.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are errors.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
/// Writes every key, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);
/// Applies one `key = value` assignment on top of an existing config.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

std::vector<double> parse_number_list(std::string_view text, std::string_view key);

} // namespace dsqos
