#include "dsqos/scheduler.hpp"

#include "dsqos/errors.hpp"

#include <cmath>
#include <limits>

namespace dsqos {

WeightVector WeightVector::normalized() const
{
    WeightVector out = *this;
    const double total = sum();
    if (total > 0)
        for (auto& x : out.w)
            x = x * 100.0 / total;
    return out;
}

Priorities default_priorities()
{
    Priorities p{};
    for (auto c : kAllClasses)
        p[index(c)] = default_priority(c);
    return p;
}

std::string_view to_string(SchedulerMode m)
{
    switch (m) {
    case SchedulerMode::Adaptive: return "adaptive";
    case SchedulerMode::Static: return "static";
    case SchedulerMode::Fifo: return "fifo";
    }
    return "?";
}

std::optional<SchedulerMode> parse_scheduler_mode(std::string_view text)
{
    for (auto m : {SchedulerMode::Adaptive, SchedulerMode::Static, SchedulerMode::Fifo})
        if (to_string(m) == text)
            return m;
    return std::nullopt;
}

std::string_view to_string(LengthSignal s)
{
    return s == LengthSignal::Snapshot ? "snapshot" : "average";
}

std::optional<LengthSignal> parse_length_signal(std::string_view text)
{
    for (auto s : {LengthSignal::Snapshot, LengthSignal::Average})
        if (to_string(s) == text)
            return s;
    return std::nullopt;
}

void SchedulerConfig::validate() const
{
    if (!(k_factor > 0))
        throw ConfigError("scheduler.k_factor must be positive");
    if (recompute_epoch.us() <= 0)
        throw ConfigError("scheduler.recompute_epoch_ms must be positive");
    if (quantum_bytes == 0)
        throw ConfigError("scheduler.quantum_bytes must be positive");
    if (!(be_floor_pct >= 0 && be_floor_pct < 100))
        throw ConfigError("scheduler.be_floor_pct must lie in [0, 100)");
    for (auto c : kAllClasses)
        if (priorities[index(c)] <= 0)
            throw ConfigError(std::string("priority for ") + std::string(to_string(c)) + " must be positive");
}

WeightVector adaptive_weights(const PerClass<std::size_t>& lengths, const Priorities& priorities)
{
    PerClass<double> as_real{};
    for (auto c : kAllClasses)
        as_real[index(c)] = static_cast<double>(lengths[index(c)]);
    return adaptive_weights(as_real, priorities);
}

WeightVector adaptive_weights(const PerClass<double>& lengths, const Priorities& priorities)
{
    WeightVector raw;
    for (auto c : kAllClasses)
        raw[c] = lengths[index(c)] * priorities[index(c)];
    if (raw.sum() == 0) {
        for (auto c : kDataClasses)
            raw[c] = priorities[index(c)];
    }
    return raw.normalized();
}

WeightVector allocated_length_weights(const BufferPlan& plan, const Priorities& priorities)
{
    WeightVector raw;
    for (auto c : kAllClasses)
        raw[c] = static_cast<double>(plan.capacity(c)) * priorities[index(c)];
    // NC carries no scenario traffic; a weight only matters if it ever backs up.
    if (raw.sum() == 0)
        for (auto c : kDataClasses)
            raw[c] = priorities[index(c)];
    return raw.normalized();
}

WeightVector static_weights(const ClassTrafficSpec& af, const ClassTrafficSpec& ef, double be_rate_bps,
                            double tb_bps, double k, double be_floor_pct)
{
    (void)be_rate_bps; // BE gets the remainder; its rate does not enter the split.
    if (!(tb_bps > 0))
        throw ConfigError("link.bottleneck_bps must be positive for static weights");
    if (!(k > 0))
        throw ConfigError("scheduler.k_factor must be positive");

    const double raw_af = (af.idr_bps / tb_bps) * 100.0 * af.sessions * af.priority;
    const double raw_ef = (ef.idr_bps / tb_bps) * 100.0 * ef.sessions * ef.priority;
    double assigned_af = k * raw_af;
    double assigned_ef = raw_ef;
    const double cap = 100.0 - be_floor_pct;
    if (assigned_af + assigned_ef > cap) {
        const double scale = cap / (assigned_af + assigned_ef);
        assigned_af *= scale;
        assigned_ef *= scale;
    }
    WeightVector w;
    w[TrafficClass::AF] = assigned_af;
    w[TrafficClass::EF] = assigned_ef;
    w[TrafficClass::BE] = 100.0 - assigned_af - assigned_ef;
    return w;
}

std::optional<TrafficClass> select_next(const QueueSet& queues, const WeightVector& weights,
                                        DeficitState& deficit, std::uint32_t quantum_bytes)
{
    const double total = weights.sum();
    PerClass<double> share{};
    for (auto c : kAllClasses) {
        const double s = total > 0 ? weights[c] / total : 0.0;
        // Snap to a fixed grid so that a common rescaling of the weights cannot
        // shift an eligibility comparison by one ulp.
        share[index(c)] = std::round(s * 1e12) / 1e12;
    }

    for (;;) {
        bool any = false;
        for (auto c : kServeOrder) {
            const auto& q = queues[index(c)];
            if (q.empty())
                continue;
            any = true;
            auto& credit = deficit.credit[index(c)];
            if (static_cast<double>(q.head().size) <= credit) {
                credit -= q.head().size;
                return c;
            }
        }
        if (!any) {
            deficit.credit.fill(0.0);
            return std::nullopt;
        }

        // Start new rounds. Empty queues forfeit their credit; nonempty queues
        // with no weight share equally if nobody else has weight.
        PerClass<double> grant{};
        int nonempty = 0;
        double granted = 0;
        for (auto c : kAllClasses) {
            if (queues[index(c)].empty()) {
                deficit.credit[index(c)] = 0;
                continue;
            }
            ++nonempty;
            grant[index(c)] = quantum_bytes * share[index(c)];
            granted += grant[index(c)];
        }
        if (granted == 0)
            for (auto c : kAllClasses)
                if (!queues[index(c)].empty())
                    grant[index(c)] = static_cast<double>(quantum_bytes) / nonempty;

        // Jump straight to the first round in which some queue becomes eligible.
        double rounds = std::numeric_limits<double>::infinity();
        for (auto c : kAllClasses) {
            const auto& q = queues[index(c)];
            if (q.empty() || grant[index(c)] <= 0)
                continue;
            const double need = static_cast<double>(q.head().size) - deficit.credit[index(c)];
            rounds = std::min(rounds, std::max(1.0, std::ceil(need / grant[index(c)])));
        }
        for (auto c : kAllClasses)
            if (!queues[index(c)].empty())
                deficit.credit[index(c)] += rounds * grant[index(c)];
    }
}

} // namespace dsqos
