#pragma once

#include "dsqos/packet.hpp"
#include "dsqos/traffic.hpp"

#include <deque>
#include <map>
#include <string_view>

namespace dsqos {

/// Source kind -> code point. Kinds without an entry keep whatever mark they carry.
struct MarkingPolicy {
    std::map<SourceKind, Dscp> rules;

    /// video -> AF12 (12), voice -> EF (46); data is left at its default of 0.
    static MarkingPolicy standard();
    friend bool operator==(const MarkingPolicy&, const MarkingPolicy&) = default;
};

Packet mark(Packet packet, const MarkingPolicy& policy);

/// True for the twelve AFxy code points.
bool is_assured_forwarding(Dscp cp);

/// 46 -> EF, AFxy -> AF, 48 -> NC, anything else -> BE.
TrafficClass classify(Dscp cp);

struct BufferPlan {
    std::uint32_t total_slots = 0;
    std::uint32_t ql_af = 0;
    std::uint32_t ql_ef = 0;
    std::uint32_t ql_be = 0;
    std::uint32_t ql_nc = 0;

    std::uint32_t capacity(TrafficClass c) const;
    friend bool operator==(const BufferPlan&, const BufferPlan&) = default;
};

/// Slots needed to hold `dly_s` worth of a class at its input rate:
/// ceil(idr * dly * N / (pktsz * 8)), zero for zero sessions.
std::uint32_t delay_budget_slots(const ClassTrafficSpec& spec);

/**
 * Splits the router buffer between the real-time classes by delay budget and
 * gives the rest (after the network-control reserve) to best effort.
 *
 * Throws ConfigError if total_slots <= nc_reserve and InfeasiblePlanError if the
 * AF and EF allocations do not fit in the remaining slots.
 */
BufferPlan plan_buffers(const ClassTrafficSpec& af, const ClassTrafficSpec& ef, std::uint32_t total_slots,
                        std::uint32_t nc_reserve);

/// Router buffer in slots that holds `delay_s` of traffic at `link_bps` with `mean_pkt_bytes` packets.
std::uint32_t slots_for_delay_buffer(double link_bps, double delay_s, double mean_pkt_bytes);

enum class EnqueueResult : std::uint8_t { Accepted, Dropped };

/// Bounded FIFO with tail drop.
class ClassQueue {
public:
    ClassQueue(TrafficClass cls, std::uint32_t capacity) : cls_(cls), capacity_(capacity) {}

    EnqueueResult enqueue(Packet packet, SimTime now);
    Packet dequeue();

    TrafficClass cls() const { return cls_; }
    std::uint32_t capacity() const { return capacity_; }
    std::size_t size() const { return packets_.size(); }
    bool empty() const { return packets_.empty(); }
    const Packet& head() const { return packets_.front(); }
    const std::deque<Packet>& contents() const { return packets_; }
    std::uint64_t bytes() const { return bytes_; }
    std::size_t max_size_seen() const { return max_seen_; }

private:
    TrafficClass cls_;
    std::uint32_t capacity_;
    std::deque<Packet> packets_;
    std::uint64_t bytes_ = 0;
    std::size_t max_seen_ = 0;
};

} // namespace dsqos
