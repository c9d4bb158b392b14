#include "dsqos/scenario.hpp"

#include "dsqos/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace dsqos {

namespace {

void set(ScenarioConfig& c, std::initializer_list<std::pair<std::string_view, std::string_view>> settings)
{
    for (const auto& [k, v] : settings)
        apply_setting(c, k, v);
}

// Smoother video than the library default: equal I/P/B means at 100 frames/s.
// With the default 5:3:1 at 25 frames/s, single exponential I frames routinely
// exceed the 14-slot AF allocation whatever the scheduler does.
void calibrated_video(ScenarioConfig& c)
{
    set(c, {{"af.gop_ratio", "1:1:1"}, {"af.frame_interval_us", "10000"}});
}

std::vector<Preset> build_presets()
{
    std::vector<Preset> out;

    ScenarioConfig single;
    single.id = "fig4_4";
    calibrated_video(single);
    set(single, {{"scheduler.mode", "adaptive"},
                 {"scheduler.allocated_numerator", "true"},
                 {"sweep.be_rates", "0,156000,406000,656000,756000,906000,1056000,1256000,1456000,1656000"}});
    out.push_back({"fig4_4",
                   "single domain, 3 video + 3 voice sessions, BE swept to 3.0 Mbit/s total on a 2.1 Mbit/s link",
                   single});

    ScenarioConfig multi = single;
    multi.id = "fig4_7";
    set(multi, {{"topology.kind", "multi"},
                {"topology.domains", "4"},
                {"topology.shaped", "true"},
                {"sweep.be_rates", "0,100000,250000,400000,550000,656000,756000"}});
    out.push_back({"fig4_7", "4 domains at 2.1 Mbit/s each sharing an 8.4 Mbit/s FIFO link, aggregate load up to 8.4 Mbit/s",
                   multi});

    ScenarioConfig ksweep;
    ksweep.id = "fig4_9";
    calibrated_video(ksweep);
    set(ksweep, {{"af.profile", "H263"},
                 {"ef.profile", "MPEG-audio"},
                 {"af.sessions", "1"},
                 {"ef.sessions", "1"},
                 {"scheduler.mode", "static"},
                 {"sweep.k_values", "0.4,0.6,0.8,1.0,1.2"},
                 {"sweep.normalized_loads", "0.25,0.5,0.75,1.0,1.25,1.5"}});
    out.push_back({"fig4_9", "static weights, one H263 + one MPEG-audio session, K swept over normalized loads 0.25..1.5",
                   ksweep});

    ScenarioConfig wan = ksweep;
    wan.id = "table5_3";
    wan.sweep = {};
    set(wan, {{"be.rate_bps", "2208000"}, {"link.prop_delay_us", "10000"}, {"scheduler.k_factor", "1"}});
    out.push_back({"table5_3", "H263 + MPEG-audio over a 2.1 Mbit/s link with 10 ms propagation, 2.6 Mbit/s offered",
                   wan});
    return out;
}

PointOutcome pool(const ScenarioConfig& config, const PointSpec& spec, std::vector<RunStats>& runs)
{
    PointOutcome o;
    o.spec = spec;
    o.total_offered_bps = config.total_offered_bps();
    o.normalized_load = normalized_load(o.total_offered_bps, config.capacity_bps());
    o.pooled = MetricsLedger(runs.empty() ? 1 : runs.front().ledger.domains());
    o.pooled.meta.seed = config.run.seed;
    o.pooled.meta.duration_s = config.run.duration_s;
    for (auto& r : runs) {
        o.pooled.merge(r.ledger);
        o.events_processed += r.events_processed;
        o.conservation_checks += r.conservation_checks;
        o.conservation_violations += r.conservation_violations;
        o.work_conservation_violations += r.work_conservation_violations;
        o.shared_max_waiting = std::max(o.shared_max_waiting, r.shared_max_waiting);
        o.shared_max_in_system = std::max(o.shared_max_in_system, r.shared_max_in_system);
        o.shared_max_backlog_bytes = std::max(o.shared_max_backlog_bytes, r.shared_max_backlog_bytes);
        o.max_packet_bytes = std::max(o.max_packet_bytes, r.max_packet_bytes);
        o.plan = r.plan;
        o.final_weights = r.final_weights;
    }
    return o;
}

ScenarioConfig at_point(const ScenarioConfig& base, const PointSpec& spec)
{
    ScenarioConfig c = base;
    c.be.rate_bps = spec.be_rate_bps;
    c.scheduler.k_factor = spec.k_factor;
    return c;
}

std::vector<PointSpec> be_points(const std::vector<double>& rates, double k)
{
    std::vector<PointSpec> pts;
    for (double r : rates)
        pts.push_back({r, k});
    return pts;
}

} // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = build_presets();
    return all;
}

const Preset& find_preset(std::string_view name)
{
    std::string known;
    for (const auto& p : presets()) {
        if (p.name == name)
            return p;
        known += (known.empty() ? "" : ", ") + p.name;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

std::uint64_t replication_seed(std::uint64_t base, int replication)
{
    return mix64(base + static_cast<std::uint64_t>(replication));
}

double be_rate_for_load(const ScenarioConfig& config, double load)
{
    if (!(load >= 0))
        throw ConfigError("sweep.normalized_loads must be non-negative");
    const int domains = config.topology.kind == TopologyKind::Multi ? config.topology.domains : 1;
    const double per_domain = load * config.capacity_bps() / domains;
    const double be = per_domain - config.realtime_rate_bps();
    // Tolerate rounding right at the real-time floor.
    if (be < -1e-6 * std::max(1.0, per_domain))
        throw ConfigError("normalized load " + std::to_string(load) +
                          " is below the load of the AF and EF sources alone");
    return std::max(0.0, be);
}

std::vector<PointOutcome> execute(const ScenarioConfig& config, const std::vector<PointSpec>& points,
                                  const ExecOptions& options)
{
    config.validate();
    std::vector<ScenarioConfig> configs;
    for (const auto& p : points) {
        configs.push_back(at_point(config, p));
        configs.back().validate();
    }
    const int reps = std::max(1, config.run.replications);
    const std::size_t tasks = points.size() * static_cast<std::size_t>(reps);
    std::vector<RunStats> results(tasks);
    std::vector<std::exception_ptr> errors(tasks);

    auto work = [&](std::size_t t) {
        const std::size_t point = t / static_cast<std::size_t>(reps);
        const int rep = static_cast<int>(t % static_cast<std::size_t>(reps));
        try {
            results[t] = simulate(configs[point], replication_seed(config.run.seed, rep));
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks)));
    if (jobs <= 1) {
        for (std::size_t t = 0; t < tasks; ++t)
            work(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks; t = next++)
                    work(t);
            });
        for (auto& th : pool)
            th.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<PointOutcome> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<RunStats> runs;
        for (int r = 0; r < reps; ++r)
            runs.push_back(std::move(results[i * static_cast<std::size_t>(reps) + static_cast<std::size_t>(r)]));
        out.push_back(pool(configs[i], points[i], runs));
    }
    return out;
}

std::vector<SweepPoint> to_rows(const ScenarioConfig& config, const std::vector<PointOutcome>& outcomes)
{
    std::vector<SweepPoint> rows;
    if (config.run.duration_s <= 0)
        return rows;
    for (const auto& o : outcomes) {
        for (int d = 0; d < o.pooled.domains(); ++d) {
            for (auto c : kDataClasses) {
                const ClassStats& s = o.pooled.at(c, d);
                SweepPoint row;
                row.scenario_id = config.id;
                row.seed = config.run.seed;
                row.domains = o.pooled.domains();
                row.tb_bps = config.tb_bps();
                row.k_factor = o.spec.k_factor;
                row.total_offered_bps = o.total_offered_bps;
                row.normalized_load = o.normalized_load;
                row.cls = c;
                row.domain = d;
                row.offered_pkts = s.offered_packets;
                row.dropped_pkts = s.dropped_packets;
                row.delivered_pkts = s.delivered_packets;
                row.loss_pct = loss_percent(s);
                row.mean_delay_ms = mean_delay_ms(s);
                row.max_delay_ms = max_delay_ms(s);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<SweepPoint> run_scenario(const ScenarioConfig& config, const ExecOptions& options)
{
    return to_rows(config, execute(config, {{config.be.rate_bps, config.scheduler.k_factor}}, options));
}

std::vector<SweepPoint> sweep_load(const ScenarioConfig& config, const std::vector<double>& be_rates,
                                   const ExecOptions& options)
{
    if (be_rates.empty())
        throw ConfigError("sweep.be_rates must not be empty");
    return to_rows(config, execute(config, be_points(be_rates, config.scheduler.k_factor), options));
}

std::vector<SweepPoint> sweep_normalized(const ScenarioConfig& config, const std::vector<double>& loads,
                                         const ExecOptions& options)
{
    if (loads.empty())
        throw ConfigError("sweep.normalized_loads must not be empty");
    std::vector<double> rates;
    for (double l : loads)
        rates.push_back(be_rate_for_load(config, l));
    return to_rows(config, execute(config, be_points(rates, config.scheduler.k_factor), options));
}

std::vector<SweepPoint> sweep_k(const ScenarioConfig& config, const std::vector<double>& k_values,
                                const ExecOptions& options)
{
    if (config.scheduler.mode != SchedulerMode::Static)
        throw ConfigError("scheduler.mode must be static for a K sweep (K only scales static weights)");
    if (k_values.empty())
        throw ConfigError("sweep.k_values must not be empty");
    for (double k : k_values)
        if (!(k > 0))
            throw ConfigError("sweep.k_values must be positive");

    std::vector<double> rates;
    if (!config.sweep.normalized_loads.empty()) {
        for (double l : config.sweep.normalized_loads)
            rates.push_back(be_rate_for_load(config, l));
    } else if (!config.sweep.be_rates.empty()) {
        rates = config.sweep.be_rates;
    } else {
        rates.push_back(config.be.rate_bps);
    }
    std::vector<PointSpec> pts;
    for (double k : k_values)
        for (double r : rates)
            pts.push_back({r, k});
    return to_rows(config, execute(config, pts, options));
}

std::vector<SweepPoint> run_config(const ScenarioConfig& config, const ExecOptions& options)
{
    if (!config.sweep.k_values.empty())
        return sweep_k(config, config.sweep.k_values, options);
    if (!config.sweep.be_rates.empty())
        return sweep_load(config, config.sweep.be_rates, options);
    if (!config.sweep.normalized_loads.empty())
        return sweep_normalized(config, config.sweep.normalized_loads, options);
    return run_scenario(config, options);
}

} // namespace dsqos
