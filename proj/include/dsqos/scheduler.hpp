#pragma once

#include "dsqos/diffserv.hpp"

#include <optional>
#include <string_view>

namespace dsqos {

/// WRR service weights in percent; normalized vectors sum to 100.
struct WeightVector {
    PerClass<double> w{};
    SimTime computed_at{};

    double operator[](TrafficClass c) const { return w[index(c)]; }
    double& operator[](TrafficClass c) { return w[index(c)]; }
    double sum() const { return w[0] + w[1] + w[2] + w[3]; }
    WeightVector normalized() const;
};

using Priorities = PerClass<int>;
/// P_AF = 2, P_EF = 3, P_BE = 1, P_NC = 1.
Priorities default_priorities();

enum class SchedulerMode : std::uint8_t { Adaptive, Static, Fifo };

/// Queue length fed to the adaptive rule at each recompute: the instantaneous
/// length at the epoch boundary, or the time average over the epoch just ended.
enum class LengthSignal : std::uint8_t { Snapshot, Average };
std::string_view to_string(LengthSignal s);
std::optional<LengthSignal> parse_length_signal(std::string_view text);
std::string_view to_string(SchedulerMode m);
std::optional<SchedulerMode> parse_scheduler_mode(std::string_view text);

struct SchedulerConfig {
    SchedulerMode mode = SchedulerMode::Adaptive;
    Priorities priorities = default_priorities();
    double k_factor = 1.0;
    SimTime recompute_epoch = SimTime::from_ms(100);
    std::uint32_t quantum_bytes = 1500;
    /// Use the allocated queue lengths (not the current ones) in the adaptive numerator.
    bool allocated_numerator = false;
    LengthSignal length_signal = LengthSignal::Average;
    /// Minimum BE percentage kept when static AF+EF weights over-subscribe the link.
    double be_floor_pct = 5.0;

    void validate() const;
    friend bool operator==(const SchedulerConfig&, const SchedulerConfig&) = default;
};

/**
 * Length-adaptive weights: w_c proportional to ql_c(t) * P_c over the nonempty
 * queues, normalized to 100. With every AF/EF/BE queue empty the weights fall
 * back to the AF:EF:BE priority ratio.
 */
WeightVector adaptive_weights(const PerClass<std::size_t>& lengths, const Priorities& priorities);
/// Same rule over time-averaged lengths.
WeightVector adaptive_weights(const PerClass<double>& lengths, const Priorities& priorities);

/// The alternative reading with allocated lengths in the numerator. The common
/// denominator cancels, so the shares are fixed at ql_c * P_c.
WeightVector allocated_length_weights(const BufferPlan& plan, const Priorities& priorities);

/**
 * Fixed weights from input rates: raw_c = (idr_c / TB) * 100 * N_c * P_c for AF
 * and EF, AF scaled by K, BE takes the remainder. When AF+EF exceed
 * 100 - be_floor they are scaled down together to fit.
 */
WeightVector static_weights(const ClassTrafficSpec& af, const ClassTrafficSpec& ef, double be_rate_bps,
                            double tb_bps, double k, double be_floor_pct = 5.0);

/// Per-queue byte credit for deficit round robin.
struct DeficitState {
    PerClass<double> credit{};
};

using QueueSet = PerClass<ClassQueue>;

/**
 * Byte-weighted deficit round robin over the four class queues.
 *
 * Each round grants quantum * share_c bytes to every nonempty queue; a queue is
 * eligible once its head packet fits in its credit, and eligible queues are
 * picked EF, AF, BE, NC. Shares are taken relative to the weight sum so any
 * positive scaling of the weights gives identical decisions. Returns nullopt
 * only when every queue is empty. The chosen queue's credit is charged but
 * its packet is left for the caller to dequeue.
 */
std::optional<TrafficClass> select_next(const QueueSet& queues, const WeightVector& weights,
                                        DeficitState& deficit, std::uint32_t quantum_bytes);

/// Serve order for simultaneously eligible queues.
inline constexpr std::array<TrafficClass, kClassCount> kServeOrder{
    TrafficClass::EF, TrafficClass::AF, TrafficClass::BE, TrafficClass::NC};

/// Single class-blind FIFO used for the no-QoS baseline and the shared multi-domain link.
class FifoQueue {
public:
    explicit FifoQueue(std::uint32_t capacity) : queue_(TrafficClass::BE, capacity) {}
    EnqueueResult enqueue(Packet p, SimTime now) { return queue_.enqueue(std::move(p), now); }
    std::optional<Packet> fifo_select()
    {
        if (queue_.empty())
            return std::nullopt;
        return queue_.dequeue();
    }
    std::size_t size() const { return queue_.size(); }
    std::uint64_t bytes() const { return queue_.bytes(); }
    bool empty() const { return queue_.empty(); }
    std::uint32_t capacity() const { return queue_.capacity(); }
    const std::deque<Packet>& contents() const { return queue_.contents(); }

private:
    ClassQueue queue_;
};

} // namespace dsqos
