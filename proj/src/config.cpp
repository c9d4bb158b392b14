#include "dsqos/config.hpp"

#include "dsqos/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace dsqos {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw ConfigError(std::string(key) + ": expected " + std::string(expected) + ", got '" + std::string(value) +
                      "'");
}

double to_double(std::string_view key, std::string_view v)
{
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        bad_value(key, v, "a number");
    return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v)
{
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        bad_value(key, v, "an integer");
    return out;
}

bool to_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    bad_value(key, v, "true or false");
}

std::string fmt(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? "," : "") + fmt(xs[i]);
    return out;
}

FrameSizeRatio to_ratio(std::string_view key, std::string_view v)
{
    const auto a = v.find(':');
    const auto b = a == std::string_view::npos ? a : v.find(':', a + 1);
    if (b == std::string_view::npos)
        bad_value(key, v, "I:P:B, e.g. 5:3:1");
    return FrameSizeRatio{to_double(key, v.substr(0, a)), to_double(key, v.substr(a + 1, b - a - 1)),
                          to_double(key, v.substr(b + 1))};
}

void apply_video_profile(VideoSection& af, std::string_view name)
{
    const auto& p = profile(name);
    if (p.kind != CodecKind::Video)
        throw ConfigError("af.profile: '" + p.name + "' is a voice codec");
    af.profile = p.name;
    // Provisioning uses the peak rate; the generator runs at the average rate.
    af.idr_bps = p.peak_rate_bps;
    af.rate_bps = p.avg_rate_bps;
    af.pktsz_bytes = p.pkt_size_bytes;
}

void apply_voice_profile(VoiceSection& ef, std::string_view name)
{
    const auto& p = profile(name);
    if (p.kind != CodecKind::Voice)
        throw ConfigError("ef.profile: '" + p.name + "' is a video codec");
    ef.profile = p.name;
    ef.idr_bps = p.avg_rate_bps;
    ef.pktsz_bytes = p.pkt_size_bytes;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        t["scenario.id"] = [](auto& c, auto, auto v) { c.id = std::string(v); };

        t["topology.kind"] = [](auto& c, auto k, auto v) {
            if (v == "single")
                c.topology.kind = TopologyKind::Single;
            else if (v == "multi")
                c.topology.kind = TopologyKind::Multi;
            else
                bad_value(k, v, "single or multi");
        };
        t["topology.domains"] = [](auto& c, auto k, auto v) { c.topology.domains = to_int<int>(k, v); };
        t["topology.shaped"] = [](auto& c, auto k, auto v) { c.topology.shaped = to_bool(k, v); };

        t["link.bottleneck_bps"] = [](auto& c, auto k, auto v) { c.link.bottleneck_bps = to_double(k, v); };
        t["link.prop_delay_us"] = [](auto& c, auto k, auto v) {
            c.link.prop_delay = SimTime{to_int<std::int64_t>(k, v)};
        };
        t["link.access_bps"] = [](auto& c, auto k, auto v) { c.link.access_bps = to_double(k, v); };
        t["link.switch_bps"] = [](auto& c, auto k, auto v) { c.link.switch_bps = to_double(k, v); };
        t["link.shared_buffer_slots"] = [](auto& c, auto k, auto v) {
            c.link.shared_buffer_slots = to_int<std::uint32_t>(k, v);
        };

        t["af.profile"] = [](auto& c, auto, auto v) { apply_video_profile(c.af, v); };
        t["af.idr_bps"] = [](auto& c, auto k, auto v) { c.af.idr_bps = to_double(k, v); };
        t["af.rate_bps"] = [](auto& c, auto k, auto v) { c.af.rate_bps = to_double(k, v); };
        t["af.pktsz_bytes"] = [](auto& c, auto k, auto v) { c.af.pktsz_bytes = to_int<std::uint32_t>(k, v); };
        t["af.dly_ms"] = [](auto& c, auto k, auto v) { c.af.dly_s = to_double(k, v) / 1e3; };
        t["af.sessions"] = [](auto& c, auto k, auto v) { c.af.sessions = to_int<int>(k, v); };
        t["af.priority"] = [](auto& c, auto k, auto v) { c.af.priority = to_int<int>(k, v); };
        t["af.frame_interval_us"] = [](auto& c, auto k, auto v) {
            c.af.frame_interval = SimTime{to_int<std::int64_t>(k, v)};
        };
        t["af.gop_ratio"] = [](auto& c, auto k, auto v) { c.af.ratio = to_ratio(k, v); };
        t["af.pace_fragments"] = [](auto& c, auto k, auto v) { c.af.pace_fragments = to_bool(k, v); };

        t["ef.profile"] = [](auto& c, auto, auto v) { apply_voice_profile(c.ef, v); };
        t["ef.idr_bps"] = [](auto& c, auto k, auto v) { c.ef.idr_bps = to_double(k, v); };
        t["ef.pktsz_bytes"] = [](auto& c, auto k, auto v) { c.ef.pktsz_bytes = to_int<std::uint32_t>(k, v); };
        t["ef.dly_ms"] = [](auto& c, auto k, auto v) { c.ef.dly_s = to_double(k, v) / 1e3; };
        t["ef.sessions"] = [](auto& c, auto k, auto v) { c.ef.sessions = to_int<int>(k, v); };
        t["ef.priority"] = [](auto& c, auto k, auto v) { c.ef.priority = to_int<int>(k, v); };

        t["be.rate_bps"] = [](auto& c, auto k, auto v) { c.be.rate_bps = to_double(k, v); };
        t["be.pkt_size"] = [](auto& c, auto k, auto v) { c.be.pkt_size = parse_distribution(v, k); };
        t["be.priority"] = [](auto& c, auto k, auto v) { c.be.priority = to_int<int>(k, v); };

        for (auto kind : {SourceKind::Video, SourceKind::Voice, SourceKind::Data}) {
            t["marking." + std::string(to_string(kind))] = [kind](auto& c, auto k, auto v) {
                const auto cp = to_int<unsigned>(k, v);
                if (cp > 63)
                    bad_value(k, v, "a 6-bit code point (0..63)");
                c.marking.rules[kind] = Dscp{static_cast<std::uint8_t>(cp)};
            };
        }

        t["scheduler.mode"] = [](auto& c, auto k, auto v) {
            auto m = parse_scheduler_mode(v);
            if (!m)
                bad_value(k, v, "adaptive, static or fifo");
            c.scheduler.mode = *m;
        };
        t["scheduler.k_factor"] = [](auto& c, auto k, auto v) { c.scheduler.k_factor = to_double(k, v); };
        t["scheduler.recompute_epoch_ms"] = [](auto& c, auto k, auto v) {
            c.scheduler.recompute_epoch = SimTime::from_seconds(to_double(k, v) / 1e3);
        };
        t["scheduler.quantum_bytes"] = [](auto& c, auto k, auto v) {
            c.scheduler.quantum_bytes = to_int<std::uint32_t>(k, v);
        };
        t["scheduler.allocated_numerator"] = [](auto& c, auto k, auto v) { c.scheduler.allocated_numerator = to_bool(k, v); };
        t["scheduler.length_signal"] = [](auto& c, auto k, auto v) {
            auto s = parse_length_signal(v);
            if (!s)
                bad_value(k, v, "snapshot or average");
            c.scheduler.length_signal = *s;
        };
        t["scheduler.be_floor_pct"] = [](auto& c, auto k, auto v) { c.scheduler.be_floor_pct = to_double(k, v); };

        t["buffer.total_slots"] = [](auto& c, auto k, auto v) { c.buffer.total_slots = to_int<std::uint32_t>(k, v); };
        t["buffer.nc_reserve"] = [](auto& c, auto k, auto v) { c.buffer.nc_reserve = to_int<std::uint32_t>(k, v); };
        t["buffer.delay_buffer_ms"] = [](auto& c, auto k, auto v) { c.buffer.delay_buffer_s = to_double(k, v) / 1e3; };
        t["buffer.mean_pkt_bytes"] = [](auto& c, auto k, auto v) { c.buffer.mean_pkt_bytes = to_double(k, v); };

        t["run.duration_s"] = [](auto& c, auto k, auto v) { c.run.duration_s = to_double(k, v); };
        t["run.seed"] = [](auto& c, auto k, auto v) { c.run.seed = to_int<std::uint64_t>(k, v); };
        t["run.warmup_s"] = [](auto& c, auto k, auto v) { c.run.warmup_s = to_double(k, v); };
        t["run.replications"] = [](auto& c, auto k, auto v) { c.run.replications = to_int<int>(k, v); };
        t["run.sample_interval_ms"] = [](auto& c, auto k, auto v) {
            c.run.sample_interval = SimTime{to_int<std::int64_t>(k, v) * 1000};
        };

        t["sweep.be_rates"] = [](auto& c, auto k, auto v) { c.sweep.be_rates = parse_number_list(v, k); };
        t["sweep.k_values"] = [](auto& c, auto k, auto v) { c.sweep.k_values = parse_number_list(v, k); };
        t["sweep.normalized_loads"] = [](auto& c, auto k, auto v) {
            c.sweep.normalized_loads = parse_number_list(v, k);
        };
        return t;
    }();
    return table;
}

bool is_profile_key(std::string_view key)
{
    return key == "af.profile" || key == "ef.profile";
}

} // namespace

std::vector<double> parse_number_list(std::string_view text, std::string_view key)
{
    std::vector<double> out;
    text = trim(text);
    if (text.empty())
        return out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(to_double(key, trim(text.substr(start, comma - start))));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value)
{
    const auto& table = setters();
    auto it = table.find(key);
    if (it == table.end())
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    it->second(config, key, trim(value));
}

ScenarioConfig parse_config(std::string_view text)
{
    std::vector<std::pair<std::string, std::string>> assignments;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        assignments.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }

    ScenarioConfig config;
    // Profiles first so explicit per-field keys override them regardless of order.
    for (const auto& [k, v] : assignments)
        if (is_profile_key(k))
            apply_setting(config, k, v);
    for (const auto& [k, v] : assignments)
        if (!is_profile_key(k))
            apply_setting(config, k, v);
    return config;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c)
{
    std::ostringstream o;
    auto line = [&o](std::string_view k, const std::string& v) { o << k << " = " << v << '\n'; };
    auto b = [](bool x) { return std::string(x ? "true" : "false"); };

    line("scenario.id", c.id);
    line("topology.kind", c.topology.kind == TopologyKind::Single ? "single" : "multi");
    line("topology.domains", std::to_string(c.topology.domains));
    line("topology.shaped", b(c.topology.shaped));
    line("link.bottleneck_bps", fmt(c.link.bottleneck_bps));
    line("link.prop_delay_us", std::to_string(c.link.prop_delay.us()));
    line("link.access_bps", fmt(c.link.access_bps));
    line("link.switch_bps", fmt(c.link.switch_bps));
    line("link.shared_buffer_slots", std::to_string(c.link.shared_buffer_slots));

    if (c.af.profile)
        line("af.profile", *c.af.profile);
    line("af.idr_bps", fmt(c.af.idr_bps));
    line("af.rate_bps", fmt(c.af.rate_bps));
    line("af.pktsz_bytes", std::to_string(c.af.pktsz_bytes));
    line("af.dly_ms", fmt(c.af.dly_s * 1e3));
    line("af.sessions", std::to_string(c.af.sessions));
    line("af.priority", std::to_string(c.af.priority));
    line("af.frame_interval_us", std::to_string(c.af.frame_interval.us()));
    line("af.gop_ratio", fmt(c.af.ratio.i) + ":" + fmt(c.af.ratio.p) + ":" + fmt(c.af.ratio.b));
    line("af.pace_fragments", b(c.af.pace_fragments));

    if (c.ef.profile)
        line("ef.profile", *c.ef.profile);
    line("ef.idr_bps", fmt(c.ef.idr_bps));
    line("ef.pktsz_bytes", std::to_string(c.ef.pktsz_bytes));
    line("ef.dly_ms", fmt(c.ef.dly_s * 1e3));
    line("ef.sessions", std::to_string(c.ef.sessions));
    line("ef.priority", std::to_string(c.ef.priority));

    line("be.rate_bps", fmt(c.be.rate_bps));
    line("be.pkt_size", format_distribution(c.be.pkt_size));
    line("be.priority", std::to_string(c.be.priority));

    for (const auto& [kind, cp] : c.marking.rules)
        line("marking." + std::string(to_string(kind)), std::to_string(cp.value()));

    line("scheduler.mode", std::string(to_string(c.scheduler.mode)));
    line("scheduler.k_factor", fmt(c.scheduler.k_factor));
    line("scheduler.recompute_epoch_ms", fmt(static_cast<double>(c.scheduler.recompute_epoch.us()) / 1e3));
    line("scheduler.quantum_bytes", std::to_string(c.scheduler.quantum_bytes));
    line("scheduler.allocated_numerator", b(c.scheduler.allocated_numerator));
    line("scheduler.length_signal", std::string(to_string(c.scheduler.length_signal)));
    line("scheduler.be_floor_pct", fmt(c.scheduler.be_floor_pct));

    line("buffer.total_slots", std::to_string(c.buffer.total_slots));
    line("buffer.nc_reserve", std::to_string(c.buffer.nc_reserve));
    line("buffer.delay_buffer_ms", fmt(c.buffer.delay_buffer_s * 1e3));
    line("buffer.mean_pkt_bytes", fmt(c.buffer.mean_pkt_bytes));

    line("run.duration_s", fmt(c.run.duration_s));
    line("run.seed", std::to_string(c.run.seed));
    line("run.warmup_s", fmt(c.run.warmup_s));
    line("run.replications", std::to_string(c.run.replications));
    line("run.sample_interval_ms", std::to_string(c.run.sample_interval.us() / 1000));

    line("sweep.be_rates", fmt_list(c.sweep.be_rates));
    line("sweep.k_values", fmt_list(c.sweep.k_values));
    line("sweep.normalized_loads", fmt_list(c.sweep.normalized_loads));
    return o.str();
}

ClassTrafficSpec ScenarioConfig::af_spec() const
{
    return ClassTrafficSpec{TrafficClass::AF, af.idr_bps, af.pktsz_bytes, af.dly_s, af.sessions, af.priority};
}

ClassTrafficSpec ScenarioConfig::ef_spec() const
{
    return ClassTrafficSpec{TrafficClass::EF, ef.idr_bps, ef.pktsz_bytes, ef.dly_s, ef.sessions, ef.priority};
}

std::uint32_t ScenarioConfig::total_slots() const
{
    if (buffer.total_slots > 0)
        return buffer.total_slots;
    return slots_for_delay_buffer(link.bottleneck_bps, buffer.delay_buffer_s, buffer.mean_pkt_bytes);
}

double ScenarioConfig::tb_bps() const
{
    return link.bottleneck_bps;
}

double ScenarioConfig::capacity_bps() const
{
    return topology.kind == TopologyKind::Multi ? link.bottleneck_bps * topology.domains : link.bottleneck_bps;
}

double ScenarioConfig::realtime_rate_bps() const
{
    return af.rate_bps * af.sessions + ef.idr_bps * ef.sessions;
}

double ScenarioConfig::total_offered_bps() const
{
    const int d = topology.kind == TopologyKind::Multi ? topology.domains : 1;
    const std::array<ClassTrafficSpec, 2> sources{
        ClassTrafficSpec{TrafficClass::AF, af.rate_bps, af.pktsz_bytes, af.dly_s, af.sessions, af.priority},
        ef_spec()};
    return d * offered_load(sources, be.rate_bps);
}

void ScenarioConfig::validate() const
{
    constexpr double kSubRateFloor = 358e3;
    constexpr double kSubRateCeiling = 34e6;
    if (!(link.bottleneck_bps >= kSubRateFloor && link.bottleneck_bps <= kSubRateCeiling))
        throw ConfigError("link.bottleneck_bps must lie in the sub-rate range 358000..34000000, got " +
                          fmt(link.bottleneck_bps));
    if (link.prop_delay.us() < 0)
        throw ConfigError("link.prop_delay_us must be >= 0");
    if (!(link.access_bps > 0))
        throw ConfigError("link.access_bps must be positive");
    if (!(link.switch_bps > 0))
        throw ConfigError("link.switch_bps must be positive");
    if (topology.domains < 1)
        throw ConfigError("topology.domains must be >= 1");
    if (topology.kind == TopologyKind::Multi && topology.domains < 2)
        throw ConfigError("topology.domains must be >= 2 for topology.kind = multi");

    dsqos::validate(af_spec(), "af");
    dsqos::validate(ef_spec(), "ef");
    if (af.sessions > 0) {
        if (!(af.rate_bps > 0))
            throw ConfigError("af.rate_bps must be positive");
        if (af.frame_interval.us() <= 0)
            throw ConfigError("af.frame_interval_us must be positive");
        if (!(af.ratio.i > 0 && af.ratio.p > 0 && af.ratio.b > 0))
            throw ConfigError("af.gop_ratio entries must be positive");
    }
    if (!(be.rate_bps >= 0))
        throw ConfigError("be.rate_bps must be >= 0");
    dsqos::validate(be.pkt_size, "be.pkt_size");
    if (!(mean_of(be.pkt_size) >= 1))
        throw ConfigError("be.pkt_size mean must be at least 1 byte");
    if (be.priority <= 0)
        throw ConfigError("be.priority must be positive");

    scheduler.validate();

    if (buffer.total_slots == 0 && !(buffer.delay_buffer_s > 0 && buffer.mean_pkt_bytes > 0))
        throw ConfigError("buffer.delay_buffer_ms and buffer.mean_pkt_bytes must be positive");
    if (total_slots() <= buffer.nc_reserve)
        throw ConfigError("buffer.total_slots must exceed buffer.nc_reserve");

    if (!(run.duration_s >= 0))
        throw ConfigError("run.duration_s must be >= 0");
    if (!(run.warmup_s >= 0))
        throw ConfigError("run.warmup_s must be >= 0");
    if (run.replications < 1)
        throw ConfigError("run.replications must be >= 1");
    if (run.sample_interval.us() <= 0)
        throw ConfigError("run.sample_interval_ms must be positive");
    for (double r : sweep.be_rates)
        if (!(r >= 0))
            throw ConfigError("sweep.be_rates entries must be >= 0");
    for (double k : sweep.k_values)
        if (!(k > 0))
            throw ConfigError("sweep.k_values entries must be positive");
    for (double l : sweep.normalized_loads)
        if (!(l >= 0))
            throw ConfigError("sweep.normalized_loads entries must be >= 0");
}

} // namespace dsqos
