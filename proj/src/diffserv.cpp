#include "dsqos/diffserv.hpp"

#include "dsqos/errors.hpp"

#include <cmath>
#include <string>

namespace dsqos {

MarkingPolicy MarkingPolicy::standard()
{
    MarkingPolicy p;
    p.rules[SourceKind::Video] = dscp::AF12;
    p.rules[SourceKind::Voice] = dscp::EF;
    return p;
}

Packet mark(Packet packet, const MarkingPolicy& policy)
{
    if (auto it = policy.rules.find(packet.source); it != policy.rules.end())
        packet.mark = it->second;
    return packet;
}

bool is_assured_forwarding(Dscp cp)
{
    // AFxy = 8x + 2y for class x in 1..4 and drop precedence y in 1..3.
    const unsigned v = cp.value();
    const unsigned x = v >> 3;
    const unsigned y = (v & 7u) >> 1;
    return x >= 1 && x <= 4 && y >= 1 && y <= 3 && (v & 1u) == 0;
}

TrafficClass classify(Dscp cp)
{
    if (cp == dscp::EF)
        return TrafficClass::EF;
    if (cp == dscp::NC)
        return TrafficClass::NC;
    if (is_assured_forwarding(cp))
        return TrafficClass::AF;
    return TrafficClass::BE;
}

std::uint32_t BufferPlan::capacity(TrafficClass c) const
{
    switch (c) {
    case TrafficClass::AF: return ql_af;
    case TrafficClass::EF: return ql_ef;
    case TrafficClass::BE: return ql_be;
    case TrafficClass::NC: return ql_nc;
    }
    return 0;
}

std::uint32_t delay_budget_slots(const ClassTrafficSpec& spec)
{
    if (spec.sessions == 0)
        return 0;
    const double bits = spec.idr_bps * spec.dly_s * spec.sessions;
    const double slots = bits / (static_cast<double>(spec.pktsz_bytes) * 8.0);
    // Absorb floating-point noise so exact multiples do not round up a slot.
    return static_cast<std::uint32_t>(std::ceil(slots - 1e-12 * std::max(1.0, slots)));
}

BufferPlan plan_buffers(const ClassTrafficSpec& af, const ClassTrafficSpec& ef, std::uint32_t total_slots,
                        std::uint32_t nc_reserve)
{
    if (total_slots <= nc_reserve)
        throw ConfigError("buffer.total_slots (" + std::to_string(total_slots) +
                          ") must exceed buffer.nc_reserve (" + std::to_string(nc_reserve) + ")");
    validate(af, "af");
    validate(ef, "ef");

    BufferPlan plan;
    plan.total_slots = total_slots;
    plan.ql_nc = nc_reserve;
    plan.ql_af = delay_budget_slots(af);
    plan.ql_ef = delay_budget_slots(ef);
    const std::uint32_t available = total_slots - nc_reserve;
    if (static_cast<std::uint64_t>(plan.ql_af) + plan.ql_ef > available)
        throw InfeasiblePlanError("buffer plan infeasible: AF needs " + std::to_string(plan.ql_af) +
                                  " and EF needs " + std::to_string(plan.ql_ef) + " slots but only " +
                                  std::to_string(available) + " are available");
    plan.ql_be = available - plan.ql_af - plan.ql_ef;
    return plan;
}

std::uint32_t slots_for_delay_buffer(double link_bps, double delay_s, double mean_pkt_bytes)
{
    return static_cast<std::uint32_t>(std::llround(link_bps * delay_s / (mean_pkt_bytes * 8.0)));
}

EnqueueResult ClassQueue::enqueue(Packet packet, SimTime now)
{
    if (packets_.size() >= capacity_)
        return EnqueueResult::Dropped;
    packet.enqueued_at = now;
    bytes_ += packet.size;
    packets_.push_back(std::move(packet));
    max_seen_ = std::max(max_seen_, packets_.size());
    return EnqueueResult::Accepted;
}

Packet ClassQueue::dequeue()
{
    Packet p = std::move(packets_.front());
    packets_.pop_front();
    bytes_ -= p.size;
    return p;
}

} // namespace dsqos
