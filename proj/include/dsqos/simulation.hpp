#pragma once

#include "dsqos/config.hpp"
#include "dsqos/metrics.hpp"
#include "dsqos/network.hpp"
#include "dsqos/scheduler.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dsqos {

struct SimulationOptions {
    bool trace = false;
    /// Keep (completion time, bytes) for every packet leaving each domain's edge router.
    bool record_departures = false;
};

struct Departure {
    SimTime at;
    std::uint32_t bytes;
};

struct RunStats {
    MetricsLedger ledger;
    BufferPlan plan;
    /// Weights in force at the end of the run (fixed weights for static mode).
    std::vector<WeightVector> final_weights;
    std::uint64_t events_processed = 0;
    std::uint64_t conservation_checks = 0;
    std::uint64_t conservation_violations = 0;
    std::uint64_t work_conservation_violations = 0;
    /// Largest per-class queue length seen at each domain's edge router.
    std::vector<PerClass<std::size_t>> max_queue_length;
    /// Shared multi-domain link: packets waiting, waiting plus in service, and waiting bytes.
    std::size_t shared_max_waiting = 0;
    std::size_t shared_max_in_system = 0;
    std::uint64_t shared_max_backlog_bytes = 0;
    std::uint32_t max_packet_bytes = 0;
    std::vector<std::vector<Departure>> departures;
    std::string trace;
};

/// Runs one replication of the scenario with the given seed. The config must be valid;
/// an infeasible buffer plan raises InfeasiblePlanError before any event runs.
RunStats simulate(const ScenarioConfig& config, std::uint64_t seed, const SimulationOptions& options = {});

} // namespace dsqos
