#include "dsqos/network.hpp"

#include "dsqos/errors.hpp"

#include <algorithm>

namespace dsqos {

SimTime transmit(const Packet& packet, const LinkConfig& link, SimTime now)
{
    return now + serialization_time(packet.size, link.rate_bps) + link.prop_delay;
}

SimTime Pipe::pass(const Packet& packet, SimTime now)
{
    const SimTime start = std::max(now, busy_until_);
    busy_until_ = start + serialization_time(packet.size, link_.rate_bps);
    return busy_until_ + link_.prop_delay;
}

namespace {

DomainTopology make_domain(const ScenarioConfig& cfg, int d, bool egress_shaped)
{
    DomainTopology dom;
    dom.index = d;
    const std::string prefix = "d" + std::to_string(d) + "/";
    for (int s = 0; s < cfg.af.sessions; ++s)
        dom.video_sources.push_back(prefix + "r1/video" + std::to_string(s));
    for (int s = 0; s < cfg.ef.sessions; ++s)
        dom.voice_sources.push_back(prefix + "r2/voice" + std::to_string(s));
    if (cfg.be.rate_bps > 0)
        dom.data_sources.push_back(prefix + "r3/data");
    dom.access = LinkConfig{cfg.link.access_bps, SimTime{}, false};
    dom.uplink = LinkConfig{cfg.link.switch_bps, SimTime{}, false};
    // An unshaped domain egress runs at the uplink line rate.
    dom.bottleneck = egress_shaped ? LinkConfig{cfg.link.bottleneck_bps, cfg.link.prop_delay, true}
                                   : LinkConfig{cfg.link.switch_bps, SimTime{}, false};
    dom.rx_uplink = LinkConfig{cfg.link.switch_bps, SimTime{}, false};
    dom.rx_access = LinkConfig{cfg.link.access_bps, SimTime{}, false};
    return dom;
}

void add_nodes(Topology& topo, const DomainTopology& dom)
{
    const std::string p = "d" + std::to_string(dom.index) + "/";
    for (const auto* group : {&dom.video_sources, &dom.voice_sources, &dom.data_sources})
        topo.nodes.insert(topo.nodes.end(), group->begin(), group->end());
    for (const char* n : {"r4/edge-switch", "r5/edge-router", "r6/rx-edge-router", "r7/rx-edge-switch",
                          "r8/video-sink", "r9/voice-sink", "r10/data-sink"})
        topo.nodes.push_back(p + n);
}

void check_rates(const ScenarioConfig& cfg)
{
    if (!(cfg.link.access_bps > 0) || !(cfg.link.switch_bps > 0))
        throw ConfigError("link.access_bps and link.switch_bps must be positive");
    constexpr double kSubRateFloor = 358e3;
    constexpr double kSubRateCeiling = 34e6;
    if (!(cfg.link.bottleneck_bps >= kSubRateFloor && cfg.link.bottleneck_bps <= kSubRateCeiling))
        throw ConfigError("link.bottleneck_bps must lie in the sub-rate range 358000..34000000");
    if (cfg.link.prop_delay.us() < 0)
        throw ConfigError("link.prop_delay_us must be >= 0");
}

} // namespace

Topology build_single_domain(const ScenarioConfig& cfg)
{
    check_rates(cfg);
    Topology topo;
    topo.kind = TopologyKind::Single;
    topo.domains.push_back(make_domain(cfg, 0, true));
    add_nodes(topo, topo.domains.front());
    return topo;
}

Topology build_multi_domain(const ScenarioConfig& cfg, int domains)
{
    if (domains < 1)
        throw ConfigError("topology.domains must be >= 1");
    if (domains == 1)
        return build_single_domain(cfg);
    check_rates(cfg);
    Topology topo;
    topo.kind = TopologyKind::Multi;
    for (int d = 0; d < domains; ++d) {
        topo.domains.push_back(make_domain(cfg, d, cfg.topology.shaped));
        add_nodes(topo, topo.domains.back());
    }
    topo.shared = LinkConfig{cfg.link.bottleneck_bps * domains, cfg.link.prop_delay, false};
    // The domain egress already carries the propagation offset when it is shaped.
    if (cfg.topology.shaped)
        topo.shared->prop_delay = SimTime{};
    topo.shared_buffer_slots = cfg.link.shared_buffer_slots > 0 ? cfg.link.shared_buffer_slots : cfg.total_slots();
    topo.nodes.push_back("shared/aggregator");
    return topo;
}

Topology build_topology(const ScenarioConfig& cfg)
{
    return cfg.topology.kind == TopologyKind::Multi ? build_multi_domain(cfg, cfg.topology.domains)
                                                    : build_single_domain(cfg);
}

} // namespace dsqos
