#include "dsqos/simulation.hpp"

#include "dsqos/diffserv.hpp"
#include "dsqos/engine.hpp"
#include "dsqos/errors.hpp"
#include "dsqos/traffic.hpp"

#include <memory>

namespace dsqos {

namespace {

QueueSet make_queues(const BufferPlan& plan)
{
    return QueueSet{ClassQueue{TrafficClass::AF, plan.ql_af}, ClassQueue{TrafficClass::EF, plan.ql_ef},
                    ClassQueue{TrafficClass::BE, plan.ql_be}, ClassQueue{TrafficClass::NC, plan.ql_nc}};
}

std::size_t kind_index(SourceKind k)
{
    return static_cast<std::size_t>(k);
}

class Model {
public:
    Model(const ScenarioConfig& cfg, std::uint64_t seed, const SimulationOptions& opt);
    RunStats run();

private:
    struct Router {
        int domain = 0;
        LinkConfig egress;
        bool fifo_mode = false;
        QueueSet queues;
        FifoQueue fifo;
        WeightVector weights;
        DeficitState deficit;
        bool busy = false;
        // Integral of each queue's length since the last weight recompute, in packet-microseconds.
        PerClass<double> length_area{};
        SimTime area_since{};
        SimTime area_touched{};
        Pipe uplink;
        Pipe rx_uplink;
        std::array<Pipe, 3> rx_access;
    };
    struct Shared {
        FifoQueue fifo;
        LinkConfig link;
        bool busy = false;
    };
    struct VideoSrc {
        int domain;
        std::uint32_t flow;
        Pipe access;
        VideoSourceState state;
        RandomStream rng;
    };
    struct VoiceSrc {
        int domain;
        std::uint32_t flow;
        Pipe access;
        VoiceSource source;
    };
    struct DataSrc {
        int domain;
        std::uint32_t flow;
        Pipe access;
        RandomStream rng;
    };

    void start_sources();
    void video_tick(std::size_t i, SimTime tick);
    void voice_tick(std::size_t i, Packet packet);
    void data_tick(std::size_t i, SimTime at, Packet packet);

    void emit(Packet p, int domain, std::uint32_t flow, Pipe& access);
    void at_switch(Packet p);
    void at_router(Packet p);
    void start_next(Router& r);
    void at_shared(Packet p);
    void start_shared();
    void to_receiver(Packet p, SimTime at_rx_edge);
    void at_sink(Packet p);

    void recompute_weights();
    void touch(Router& r);
    void sample();
    /// Measured packets currently sitting in router or shared queues, by (domain, class).
    std::vector<PerClass<std::int64_t>> queued_measured() const;
    bool conserved() const;
    void track_shared();

    std::int64_t& in_flight(const Packet& p) { return in_flight_[p.domain][index(p.cls)]; }

    const ScenarioConfig& cfg_;
    SimulationOptions opt_;
    Engine engine_;
    Topology topo_;
    BufferPlan plan_;
    SimTime end_;
    SimTime warmup_;
    MarkingPolicy marking_;
    std::vector<Router> routers_;
    std::unique_ptr<Shared> shared_;
    std::vector<VideoSrc> video_;
    std::vector<VoiceSrc> voice_;
    std::vector<DataSrc> data_;
    std::vector<PerClass<std::int64_t>> in_flight_;
    std::uint64_t next_id_ = 0;
    RunStats stats_;
};

Model::Model(const ScenarioConfig& cfg, std::uint64_t seed, const SimulationOptions& opt)
    : cfg_(cfg),
      opt_(opt),
      topo_(build_topology(cfg)),
      end_(SimTime::from_seconds(cfg.run.duration_s)),
      warmup_(SimTime::from_seconds(cfg.run.warmup_s)),
      marking_(cfg.marking)
{
    const int domains = static_cast<int>(topo_.domains.size());
    stats_.ledger = MetricsLedger(domains);
    stats_.ledger.meta.seed = seed;
    stats_.ledger.meta.duration_s = cfg.run.duration_s;
    in_flight_.assign(static_cast<std::size_t>(domains), PerClass<std::int64_t>{});
    engine_.set_tracing(opt.trace);

    const bool fifo_mode = cfg.scheduler.mode == SchedulerMode::Fifo;
    const std::uint32_t buff = cfg.total_slots();
    if (fifo_mode)
        plan_ = BufferPlan{buff, 0, 0, buff, 0};
    else
        plan_ = plan_buffers(cfg.af_spec(), cfg.ef_spec(), buff, cfg.buffer.nc_reserve);
    stats_.plan = plan_;

    WeightVector fixed;
    if (cfg.scheduler.mode == SchedulerMode::Static)
        fixed = static_weights(cfg.af_spec(), cfg.ef_spec(), cfg.be.rate_bps, cfg.tb_bps(), cfg.scheduler.k_factor,
                               cfg.scheduler.be_floor_pct);
    else if (cfg.scheduler.allocated_numerator)
        fixed = allocated_length_weights(plan_, cfg.scheduler.priorities);
    else
        fixed = adaptive_weights(PerClass<std::size_t>{}, cfg.scheduler.priorities);

    for (const auto& dom : topo_.domains) {
        routers_.push_back(Router{dom.index,
                                  dom.bottleneck,
                                  fifo_mode,
                                  make_queues(plan_),
                                  FifoQueue{buff},
                                  fixed,
                                  DeficitState{},
                                  false,
                                  {},
                                  {},
                                  {},
                                  Pipe{dom.uplink},
                                  Pipe{dom.rx_uplink},
                                  {Pipe{dom.rx_access}, Pipe{dom.rx_access}, Pipe{dom.rx_access}}});
    }
    if (topo_.shared)
        shared_ = std::make_unique<Shared>(Shared{FifoQueue{topo_.shared_buffer_slots}, *topo_.shared, false});
    stats_.max_queue_length.assign(routers_.size(), PerClass<std::size_t>{});
    if (opt.record_departures)
        stats_.departures.assign(routers_.size(), {});

    std::uint32_t flow = 0;
    for (const auto& dom : topo_.domains) {
        const std::string p = "d" + std::to_string(dom.index) + "/";
        for (int s = 0; s < cfg.af.sessions; ++s)
            video_.push_back(VideoSrc{dom.index, flow++, Pipe{dom.access},
                                      make_video_state(cfg.af.rate_bps, cfg.af.frame_interval, cfg.af.ratio,
                                                       cfg.af.pktsz_bytes),
                                      RandomStream{seed, p + "video" + std::to_string(s)}});
        for (int s = 0; s < cfg.ef.sessions; ++s) {
            RandomStream phase{seed, p + "voice" + std::to_string(s)};
            const auto interval = voice_interval_s(cfg.ef_spec());
            const auto start = SimTime::from_seconds(phase.uniform01() * interval);
            voice_.push_back(VoiceSrc{dom.index, flow++, Pipe{dom.access}, VoiceSource{cfg.ef_spec(), start}});
        }
        if (cfg.be.rate_bps > 0)
            data_.push_back(DataSrc{dom.index, flow++, Pipe{dom.access}, RandomStream{seed, p + "data"}});
    }
}

void Model::start_sources()
{
    for (std::size_t i = 0; i < video_.size(); ++i) {
        auto& v = video_[i];
        const auto gop_us = v.state.frame_interval.us() * static_cast<std::int64_t>(v.state.gop_pattern.size());
        // Random GOP phase per session so that I frames of different sessions do not coincide.
        const SimTime first{static_cast<std::int64_t>(v.rng.uniform01() * static_cast<double>(gop_us))};
        if (first <= end_)
            engine_.schedule(first, EventKind::SourceTick, [this, i, first] { video_tick(i, first); }, v.flow);
    }
    for (std::size_t i = 0; i < voice_.size(); ++i) {
        auto& v = voice_[i];
        const Emission e = v.source.next();
        if (e.at <= end_)
            engine_.schedule(e.at, EventKind::SourceTick, [this, i, pkt = e.packet] { voice_tick(i, pkt); }, v.flow);
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        auto& d = data_[i];
        if (auto e = next_be_arrival(cfg_.be.rate_bps, cfg_.be.pkt_size, d.rng); e && e->at <= end_) {
            engine_.schedule(e->at, EventKind::SourceTick,
                             [this, i, at = e->at, pkt = e->packet] { data_tick(i, at, pkt); }, d.flow);
        }
    }
}

void Model::video_tick(std::size_t i, SimTime tick)
{
    auto& v = video_[i];
    auto packets = next_video_frame(v.state, v.rng);
    const auto n = static_cast<std::int64_t>(packets.size());
    const auto interval = v.state.frame_interval.us();
    for (std::int64_t k = 0; k < n; ++k) {
        const SimTime at = tick + SimTime{cfg_.af.pace_fragments ? k * interval / n : 0};
        if (at == engine_.now()) {
            emit(packets[static_cast<std::size_t>(k)], v.domain, v.flow, v.access);
        } else if (at <= end_) {
            engine_.schedule(at, EventKind::SourceTick,
                             [this, i, pkt = packets[static_cast<std::size_t>(k)]] {
                                 auto& src = video_[i];
                                 emit(pkt, src.domain, src.flow, src.access);
                             },
                             v.flow);
        }
    }
    const SimTime next = tick + v.state.frame_interval;
    if (next <= end_)
        engine_.schedule(next, EventKind::SourceTick, [this, i, next] { video_tick(i, next); }, v.flow);
}

void Model::voice_tick(std::size_t i, Packet packet)
{
    auto& v = voice_[i];
    emit(std::move(packet), v.domain, v.flow, v.access);
    const Emission e = v.source.next();
    if (e.at <= end_)
        engine_.schedule(e.at, EventKind::SourceTick, [this, i, pkt = e.packet] { voice_tick(i, pkt); }, v.flow);
}

void Model::data_tick(std::size_t i, SimTime at, Packet packet)
{
    auto& d = data_[i];
    emit(packet, d.domain, d.flow, d.access);
    if (auto e = next_be_arrival(cfg_.be.rate_bps, cfg_.be.pkt_size, d.rng)) {
        const SimTime next = at + e->at;
        if (next <= end_)
            engine_.schedule(next, EventKind::SourceTick,
                             [this, i, next, pkt = e->packet] { data_tick(i, next, pkt); }, d.flow);
    }
}

void Model::emit(Packet p, int domain, std::uint32_t flow, Pipe& access)
{
    p.id = next_id_++;
    p.created_at = engine_.now();
    p.domain = static_cast<std::uint16_t>(domain);
    p.flow = flow;
    p.measured = p.created_at >= warmup_;
    // Account under the class the edge marking will steer the packet into.
    p.cls = classify(mark(p, marking_).mark);
    stats_.max_packet_bytes = std::max(stats_.max_packet_bytes, p.size);
    if (p.measured) {
        stats_.ledger.record_offered(p);
        ++in_flight(p);
    }
    const SimTime at = access.pass(p, engine_.now());
    engine_.schedule(at, EventKind::PacketArrival, [this, p] { at_switch(p); }, flow);
}

void Model::at_switch(Packet p)
{
    p = mark(std::move(p), marking_);
    auto& r = routers_[p.domain];
    const SimTime at = r.uplink.pass(p, engine_.now());
    engine_.schedule(at, EventKind::PacketArrival, [this, p] { at_router(p); }, p.flow);
}

void Model::at_router(Packet p)
{
    auto& r = routers_[p.domain];
    p.cls = classify(p.mark);
    const bool measured = p.measured;
    const Packet copy_for_drop = p;
    touch(r);
    const EnqueueResult result =
        r.fifo_mode ? r.fifo.enqueue(std::move(p), engine_.now()) : r.queues[index(copy_for_drop.cls)].enqueue(std::move(p), engine_.now());
    if (measured) {
        --in_flight(copy_for_drop);
        if (result == EnqueueResult::Dropped)
            stats_.ledger.record_drop(copy_for_drop);
    }
    if (!r.fifo_mode) {
        auto& m = stats_.max_queue_length[static_cast<std::size_t>(r.domain)][index(copy_for_drop.cls)];
        m = std::max(m, r.queues[index(copy_for_drop.cls)].size());
    }
    if (!r.busy)
        start_next(r);
}

void Model::start_next(Router& r)
{
    std::optional<Packet> next;
    touch(r);
    if (r.fifo_mode) {
        next = r.fifo.fifo_select();
    } else if (auto c = select_next(r.queues, r.weights, r.deficit, cfg_.scheduler.quantum_bytes)) {
        next = r.queues[index(*c)].dequeue();
    }
    if (!next)
        return;
    r.busy = true;
    if (next->measured)
        ++in_flight(*next);
    const SimTime done = engine_.now() + serialization_time(next->size, r.egress.rate_bps);
    if (opt_.record_departures)
        stats_.departures[static_cast<std::size_t>(r.domain)].push_back(Departure{done, next->size});
    const int d = r.domain;
    engine_.schedule(done, EventKind::TransmissionComplete,
                     [this, d, p = std::move(*next)]() mutable {
                         auto& router = routers_[static_cast<std::size_t>(d)];
                         router.busy = false;
                         const SimTime arrival = engine_.now() + router.egress.prop_delay;
                         if (shared_) {
                             engine_.schedule(arrival, EventKind::PacketArrival,
                                              [this, p] { at_shared(p); }, p.flow);
                         } else {
                             to_receiver(std::move(p), arrival);
                         }
                         start_next(router);
                     },
                     static_cast<std::uint32_t>(d));
}

void Model::at_shared(Packet p)
{
    const Packet copy = p;
    const EnqueueResult result = shared_->fifo.enqueue(std::move(p), engine_.now());
    if (copy.measured) {
        --in_flight(copy);
        if (result == EnqueueResult::Dropped)
            stats_.ledger.record_drop(copy);
    }
    if (!shared_->busy)
        start_shared();
    track_shared();
}

void Model::track_shared()
{
    const std::size_t waiting = shared_->fifo.size();
    stats_.shared_max_waiting = std::max(stats_.shared_max_waiting, waiting);
    stats_.shared_max_in_system = std::max(stats_.shared_max_in_system, waiting + (shared_->busy ? 1 : 0));
    stats_.shared_max_backlog_bytes = std::max(stats_.shared_max_backlog_bytes, shared_->fifo.bytes());
}

void Model::start_shared()
{
    auto next = shared_->fifo.fifo_select();
    if (!next)
        return;
    shared_->busy = true;
    if (next->measured)
        ++in_flight(*next);
    const SimTime done = engine_.now() + serialization_time(next->size, shared_->link.rate_bps);
    engine_.schedule(done, EventKind::TransmissionComplete,
                     [this, p = std::move(*next)]() mutable {
                         shared_->busy = false;
                         to_receiver(std::move(p), engine_.now() + shared_->link.prop_delay);
                         start_shared();
                     },
                     static_cast<std::uint32_t>(routers_.size()));
}

void Model::to_receiver(Packet p, SimTime at_rx_edge)
{
    auto& r = routers_[p.domain];
    const SimTime at_switch = r.rx_uplink.pass(p, at_rx_edge);
    const SimTime at_sink = r.rx_access[kind_index(p.source)].pass(p, at_switch);
    engine_.schedule(at_sink, EventKind::PacketArrival, [this, p] { this->at_sink(p); }, p.flow);
}

void Model::at_sink(Packet p)
{
    p.delivered_at = engine_.now();
    if (p.measured) {
        --in_flight(p);
        stats_.ledger.record_delivery(p);
    }
}

void Model::touch(Router& r)
{
    const auto dt = static_cast<double>((engine_.now() - r.area_touched).us());
    for (auto c : kAllClasses)
        r.length_area[index(c)] += dt * static_cast<double>(r.queues[index(c)].size());
    r.area_touched = engine_.now();
}

void Model::recompute_weights()
{
    for (auto& r : routers_) {
        touch(r);
        const auto span = static_cast<double>((engine_.now() - r.area_since).us());
        PerClass<double> lengths{};
        for (auto c : kAllClasses) {
            if (cfg_.scheduler.length_signal == LengthSignal::Average && span > 0)
                lengths[index(c)] = r.length_area[index(c)] / span;
            else
                lengths[index(c)] = static_cast<double>(r.queues[index(c)].size());
        }
        r.length_area = {};
        r.area_since = engine_.now();
        r.weights = adaptive_weights(lengths, cfg_.scheduler.priorities);
        r.weights.computed_at = engine_.now();
    }
    const SimTime next = engine_.now() + cfg_.scheduler.recompute_epoch;
    if (next <= end_)
        engine_.schedule(next, EventKind::WeightRecompute, [this] { recompute_weights(); });
}

std::vector<PerClass<std::int64_t>> Model::queued_measured() const
{
    std::vector<PerClass<std::int64_t>> q(routers_.size(), PerClass<std::int64_t>{});
    auto count = [&q](const std::deque<Packet>& packets) {
        for (const auto& p : packets)
            if (p.measured)
                ++q[p.domain][index(p.cls)];
    };
    for (const auto& r : routers_) {
        count(r.fifo.contents());
        for (const auto& cq : r.queues)
            count(cq.contents());
    }
    if (shared_)
        count(shared_->fifo.contents());
    return q;
}

bool Model::conserved() const
{
    const auto queued = queued_measured();
    for (std::size_t d = 0; d < routers_.size(); ++d) {
        for (auto c : kAllClasses) {
            const auto& s = stats_.ledger.at(c, static_cast<int>(d));
            const std::int64_t accounted = static_cast<std::int64_t>(s.delivered_packets + s.dropped_packets) +
                                           in_flight_[d][index(c)] + queued[d][index(c)];
            if (accounted != static_cast<std::int64_t>(s.offered_packets) || in_flight_[d][index(c)] < 0)
                return false;
        }
    }
    return true;
}

void Model::sample()
{
    ++stats_.conservation_checks;
    if (!conserved())
        ++stats_.conservation_violations;
    for (const auto& r : routers_) {
        bool backlog = !r.fifo.empty();
        for (const auto& q : r.queues)
            backlog = backlog || !q.empty();
        if (backlog && !r.busy)
            ++stats_.work_conservation_violations;
    }
    if (shared_ && !shared_->fifo.empty() && !shared_->busy)
        ++stats_.work_conservation_violations;
    const SimTime next = engine_.now() + cfg_.run.sample_interval;
    if (next <= end_)
        engine_.schedule(next, EventKind::MeasurementSample, [this] { sample(); });
}

RunStats Model::run()
{
    if (end_.us() > 0) {
        start_sources();
        if (cfg_.scheduler.mode == SchedulerMode::Adaptive && !cfg_.scheduler.allocated_numerator)
            engine_.schedule(SimTime{}, EventKind::WeightRecompute, [this] { recompute_weights(); });
        engine_.schedule(cfg_.run.sample_interval, EventKind::MeasurementSample, [this] { sample(); });
    }
    stats_.events_processed = engine_.run_until(end_);

    ++stats_.conservation_checks;
    if (!conserved())
        ++stats_.conservation_violations;
    const auto queued = queued_measured();
    for (std::size_t d = 0; d < routers_.size(); ++d)
        for (auto c : kAllClasses)
            stats_.ledger.at(c, static_cast<int>(d)).residual_packets =
                static_cast<std::uint64_t>(in_flight_[d][index(c)] + queued[d][index(c)]);

    for (const auto& r : routers_)
        stats_.final_weights.push_back(r.weights);
    if (opt_.trace)
        stats_.trace = engine_.serialized_trace();
    return std::move(stats_);
}

} // namespace

RunStats simulate(const ScenarioConfig& config, std::uint64_t seed, const SimulationOptions& options)
{
    config.validate();
    Model model(config, seed, options);
    return model.run();
}

} // namespace dsqos
