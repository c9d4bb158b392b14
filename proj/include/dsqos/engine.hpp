#pragma once

#include "dsqos/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

namespace dsqos {

enum class EventKind : std::uint8_t {
    PacketArrival,
    TransmissionComplete,
    WeightRecompute,
    MeasurementSample,
    SourceTick,
};

const char* to_string(EventKind kind);

struct EventHandle {
    std::uint64_t id = 0;
    friend bool operator==(EventHandle, EventHandle) = default;
};

/// One processed event, as recorded in the replay trace.
struct TraceRecord {
    std::uint64_t seq;
    SimTime fire_at;
    EventKind kind;
    std::uint32_t tag;
    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/**
 * Single-threaded discrete-event engine.
 *
 * Events fire in (fire_at, insertion order). Cancellation is lazy: a
 * cancelled event stays in the heap and is skipped when it reaches the top.
 * An engine instance must not be shared between threads while running.
 */
class Engine {
public:
    using Action = std::function<void()>;

    /// Queue `action` at absolute time `at`. Throws ContractViolation if `at` is in the past.
    /// `tag` is free-form payload recorded in the trace (source id, queue id, ...).
    EventHandle schedule(SimTime at, EventKind kind, Action action, std::uint32_t tag = 0);
    EventHandle schedule_in(SimTime delay, EventKind kind, Action action, std::uint32_t tag = 0)
    {
        return schedule(now_ + delay, kind, std::move(action), tag);
    }

    /// Returns false if the event already fired or was already cancelled.
    bool cancel(EventHandle handle);

    /// Process every event with fire_at <= end; afterwards the clock reads `end`
    /// (or stays put if it is already past it). Returns the number of events processed.
    std::uint64_t run_until(SimTime end);

    SimTime now() const { return now_; }

    std::uint64_t scheduled_count() const { return state_.size(); }
    std::uint64_t cancelled_count() const { return cancelled_; }
    std::uint64_t processed_count() const { return processed_; }
    std::uint64_t pending_count() const { return scheduled_count() - cancelled_ - processed_; }

    void set_tracing(bool on) { tracing_ = on; }
    const std::vector<TraceRecord>& trace() const { return trace_; }
    /// Line-per-event text form of the trace, for diffing replays.
    std::string serialized_trace() const;

private:
    enum class State : std::uint8_t { Pending, Processed, Cancelled };

    struct Entry {
        SimTime at;
        std::uint64_t seq;
        EventKind kind;
        std::uint32_t tag;
        Action action;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const
        {
            if (a.at != b.at)
                return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    std::vector<State> state_;
    SimTime now_{};
    std::uint64_t processed_ = 0;
    std::uint64_t cancelled_ = 0;
    bool tracing_ = false;
    std::vector<TraceRecord> trace_;
};

} // namespace dsqos
