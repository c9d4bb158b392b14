#pragma once

#include "dsqos/config.hpp"

namespace dsqos::test {

/// Default scenario shortened so unit tests stay quick.
inline ScenarioConfig short_config(double duration_s = 20, double warmup_s = 2)
{
    ScenarioConfig c;
    c.run.duration_s = duration_s;
    c.run.warmup_s = warmup_s;
    c.run.replications = 1;
    return c;
}

inline Packet packet_of(std::uint32_t bytes, TrafficClass cls = TrafficClass::BE, std::uint64_t id = 0)
{
    Packet p;
    p.id = id;
    p.size = bytes;
    p.cls = cls;
    return p;
}

} // namespace dsqos::test
