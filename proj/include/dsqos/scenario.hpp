#pragma once

#include "dsqos/config.hpp"
#include "dsqos/metrics.hpp"
#include "dsqos/simulation.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dsqos {

struct Preset {
    std::string name;
    std::string summary;
    ScenarioConfig config;
};

/// fig4_4, fig4_7, fig4_9 and table5_3, in that order.
const std::vector<Preset>& presets();
/// Throws ConfigError listing the known names.
const Preset& find_preset(std::string_view name);

struct ExecOptions {
    /// Worker threads; 0 or 1 runs everything on the calling thread.
    int jobs = 1;
};

/// Seed of replication r for a base seed. Every sweep point reuses the same
/// replication seeds, so neighbouring points see the same source randomness.
std::uint64_t replication_seed(std::uint64_t base, int replication);

/// Per-domain BE rate that puts the aggregate offered load at `load` x capacity.
/// Throws ConfigError when the real-time sources alone already exceed it.
double be_rate_for_load(const ScenarioConfig& config, double load);

/// Where one sweep point sits.
struct PointSpec {
    double be_rate_bps = 0;
    double k_factor = 1;
};

/// Replications of one point pooled together, plus the run checks acceptance needs.
struct PointOutcome {
    PointSpec spec;
    double total_offered_bps = 0;
    double normalized_load = 0;
    MetricsLedger pooled;
    std::uint64_t events_processed = 0;
    std::uint64_t conservation_checks = 0;
    std::uint64_t conservation_violations = 0;
    std::uint64_t work_conservation_violations = 0;
    std::size_t shared_max_waiting = 0;
    std::size_t shared_max_in_system = 0;
    std::uint64_t shared_max_backlog_bytes = 0;
    std::uint32_t max_packet_bytes = 0;
    BufferPlan plan;
    std::vector<WeightVector> final_weights;
};

/// Runs every point (times the configured replications). Points and replications are
/// independent and may run on several threads; the result order always follows `points`.
std::vector<PointOutcome> execute(const ScenarioConfig& config, const std::vector<PointSpec>& points,
                                  const ExecOptions& options = {});

/// CSV rows (one per data class and domain) for executed points.
std::vector<SweepPoint> to_rows(const ScenarioConfig& config, const std::vector<PointOutcome>& outcomes);

/// One point at the configured BE rate and K. A zero duration yields no rows.
std::vector<SweepPoint> run_scenario(const ScenarioConfig& config, const ExecOptions& options = {});
/// One point per per-domain BE rate; AF and EF sources stay fixed.
std::vector<SweepPoint> sweep_load(const ScenarioConfig& config, const std::vector<double>& be_rates,
                                   const ExecOptions& options = {});
/// As sweep_load, with the BE rate derived from each normalized offered load.
std::vector<SweepPoint> sweep_normalized(const ScenarioConfig& config, const std::vector<double>& loads,
                                         const ExecOptions& options = {});
/**
 * One point per (K, load). Loads come from the config's sweep section
 * (normalized loads first, then BE rates), else the configured BE rate.
 * Requires the static scheduler; K is meaningless for the others.
 */
std::vector<SweepPoint> sweep_k(const ScenarioConfig& config, const std::vector<double>& k_values,
                                const ExecOptions& options = {});

/// Runs whatever the config's sweep section asks for (K sweep, BE-rate list,
/// normalized loads) or a single point when it is empty.
std::vector<SweepPoint> run_config(const ScenarioConfig& config, const ExecOptions& options = {});

} // namespace dsqos
