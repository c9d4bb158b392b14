#include "dsqos/engine.hpp"

#include "dsqos/errors.hpp"

#include <sstream>

namespace dsqos {

const char* to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::PacketArrival: return "packet-arrival";
    case EventKind::TransmissionComplete: return "transmission-complete";
    case EventKind::WeightRecompute: return "weight-recompute";
    case EventKind::MeasurementSample: return "measurement-sample";
    case EventKind::SourceTick: return "source-tick";
    }
    return "unknown";
}

EventHandle Engine::schedule(SimTime at, EventKind kind, Action action, std::uint32_t tag)
{
    if (at < now_) {
        std::ostringstream msg;
        msg << "cannot schedule " << to_string(kind) << " at t=" << at.us()
            << "us, clock is already at t=" << now_.us() << "us";
        throw ContractViolation(msg.str());
    }
    const std::uint64_t seq = state_.size();
    state_.push_back(State::Pending);
    heap_.push(Entry{at, seq, kind, tag, std::move(action)});
    return EventHandle{seq};
}

bool Engine::cancel(EventHandle handle)
{
    if (handle.id >= state_.size() || state_[handle.id] != State::Pending)
        return false;
    state_[handle.id] = State::Cancelled;
    ++cancelled_;
    return true;
}

std::uint64_t Engine::run_until(SimTime end)
{
    std::uint64_t count = 0;
    while (!heap_.empty() && heap_.top().at <= end) {
        // priority_queue::top is const; the entry is popped right after.
        Entry entry = std::move(const_cast<Entry&>(heap_.top()));
        heap_.pop();
        if (state_[entry.seq] == State::Cancelled)
            continue;
        state_[entry.seq] = State::Processed;
        now_ = entry.at;
        ++processed_;
        ++count;
        if (tracing_)
            trace_.push_back(TraceRecord{entry.seq, entry.at, entry.kind, entry.tag});
        entry.action();
    }
    if (now_ < end)
        now_ = end;
    return count;
}

std::string Engine::serialized_trace() const
{
    std::ostringstream out;
    for (const auto& r : trace_)
        out << r.seq << ' ' << r.fire_at.us() << ' ' << to_string(r.kind) << ' ' << r.tag << '\n';
    return out.str();
}

} // namespace dsqos
