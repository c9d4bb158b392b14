#pragma once

#include "dsqos/config.hpp"
#include "dsqos/packet.hpp"

#include <string>
#include <vector>

namespace dsqos {

struct LinkConfig {
    double rate_bps = 0;
    SimTime prop_delay{};
    bool shaped = false;
    friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

/// Completion time of a packet put on an idle link at `now`: serialization plus propagation.
SimTime transmit(const Packet& packet, const LinkConfig& link, SimTime now);

/// A point-to-point hop with an unbounded FIFO in front of it. Used for the
/// uncongested access and receiver-side hops, where arrivals are visited in time order.
class Pipe {
public:
    explicit Pipe(LinkConfig link) : link_(link) {}
    /// Time the packet emerges at the far end when it reaches the near end at `now`.
    SimTime pass(const Packet& packet, SimTime now);
    const LinkConfig& link() const { return link_; }

private:
    LinkConfig link_;
    SimTime busy_until_{};
};

/// One edge stack: sources -> edge switch -> edge router -> bottleneck -> receiver edge -> sinks.
struct DomainTopology {
    int index = 0;
    std::vector<std::string> video_sources;
    std::vector<std::string> voice_sources;
    std::vector<std::string> data_sources;
    LinkConfig access;       // source -> edge switch, one per source
    LinkConfig uplink;       // edge switch -> edge router
    LinkConfig bottleneck;   // edge router egress
    LinkConfig rx_uplink;    // receiver edge router -> receiver switch
    LinkConfig rx_access;    // receiver switch -> sink, one per sink
};

struct Topology {
    TopologyKind kind = TopologyKind::Single;
    std::vector<DomainTopology> domains;
    /// Present only for the multi-domain topology.
    std::optional<LinkConfig> shared;
    std::uint32_t shared_buffer_slots = 0;
    std::vector<std::string> nodes;
};

/// Ten-hop chain r1..r10 for one domain. Throws ConfigError for invalid rates.
Topology build_single_domain(const ScenarioConfig& cfg);

/// `domains` copies of the single-domain stack whose egresses feed one shared FIFO
/// link of domains x bottleneck rate. domains == 1 gives the single-domain topology.
Topology build_multi_domain(const ScenarioConfig& cfg, int domains);

/// Dispatches on cfg.topology.kind.
Topology build_topology(const ScenarioConfig& cfg);

} // namespace dsqos
