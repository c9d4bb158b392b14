#include "dsqos/traffic.hpp"

#include "dsqos/errors.hpp"

#include <cmath>
#include <numeric>

namespace dsqos {

namespace {

const std::array<CodecProfile, 7> kProfiles{{
    {"H263", 328e3, 840e3, 1038, CodecKind::Video},
    {"JPEG-RTP", 1.05e6, 1.4e6, 1022, CodecKind::Video},
    {"MPEG-audio", 64e3, 64e3, 1402, CodecKind::Voice},
    {"G723", 14e3, 14e3, 102, CodecKind::Voice},
    {"GSM", 20e3, 20e3, 153, CodecKind::Voice},
    {"ulaw", 71e3, 71e3, 534, CodecKind::Voice},
    {"DVI-RTP", 40e3, 40e3, 298, CodecKind::Voice},
}};

} // namespace

std::span<const CodecProfile> known_profiles()
{
    return kProfiles;
}

const CodecProfile& profile(std::string_view name)
{
    for (const auto& p : kProfiles)
        if (p.name == name)
            return p;
    std::string known;
    for (const auto& p : kProfiles)
        known += (known.empty() ? "" : ", ") + p.name;
    throw ConfigError("unknown codec profile '" + std::string(name) + "' (known: " + known + ")");
}

int default_priority(TrafficClass c)
{
    switch (c) {
    case TrafficClass::AF: return 2;
    case TrafficClass::EF: return 3;
    case TrafficClass::BE: return 1;
    case TrafficClass::NC: return 1;
    }
    return 1;
}

void validate(const ClassTrafficSpec& spec, std::string_view key)
{
    const std::string k(key);
    if (spec.sessions < 0)
        throw ConfigError(k + ".sessions must be >= 0");
    if (!(spec.idr_bps >= 0))
        throw ConfigError(k + ".idr_bps must be >= 0");
    if (spec.priority <= 0)
        throw ConfigError(k + ".priority must be positive");
    const bool realtime = spec.cls == TrafficClass::AF || spec.cls == TrafficClass::EF;
    if (realtime && spec.sessions > 0) {
        if (spec.pktsz_bytes == 0)
            throw ConfigError(k + ".pktsz_bytes must be positive");
        if (!(spec.dly_s > 0))
            throw ConfigError(k + ".dly_ms must be positive");
        if (!(spec.idr_bps > 0))
            throw ConfigError(k + ".idr_bps must be positive");
    }
}

double offered_load(std::span<const ClassTrafficSpec> specs, double be_rate_bps)
{
    double total = be_rate_bps;
    for (const auto& s : specs)
        if (s.cls == TrafficClass::AF || s.cls == TrafficClass::EF)
            total += s.idr_bps * s.sessions;
    return total;
}

char to_char(FrameType t)
{
    switch (t) {
    case FrameType::I: return 'I';
    case FrameType::P: return 'P';
    case FrameType::B: return 'B';
    }
    return '?';
}

std::vector<FrameType> default_gop()
{
    using enum FrameType;
    return {I, B, B, B, P, B, B, B};
}

VideoSourceState make_video_state(double avg_rate_bps, SimTime frame_interval, FrameSizeRatio ratio,
                                  std::uint32_t frag_limit)
{
    if (!(avg_rate_bps > 0))
        throw ConfigError("video average rate must be positive");
    if (frame_interval.us() <= 0)
        throw ConfigError("video frame interval must be positive");
    if (!(ratio.i > 0 && ratio.p > 0 && ratio.b > 0))
        throw ConfigError("video frame size ratio entries must be positive");
    if (frag_limit == 0)
        throw ConfigError("video fragment limit must be positive");

    VideoSourceState state;
    state.gop_pattern = default_gop();
    state.frame_interval = frame_interval;
    state.frag_limit = frag_limit;

    const std::array<double, 3> weight{ratio.i, ratio.p, ratio.b};
    double units = 0;
    for (auto t : state.gop_pattern)
        units += weight[static_cast<std::size_t>(t)];
    const double gop_bytes =
        avg_rate_bps / 8.0 * frame_interval.seconds() * static_cast<double>(state.gop_pattern.size());
    for (std::size_t t = 0; t < 3; ++t)
        state.mean_frame_size[t] = gop_bytes * weight[t] / units;
    return state;
}

std::vector<std::uint32_t> fragment(std::uint64_t frame_bytes, std::uint32_t frag_limit)
{
    std::vector<std::uint32_t> out;
    out.reserve(frame_bytes / frag_limit + 1);
    while (frame_bytes > frag_limit) {
        out.push_back(frag_limit);
        frame_bytes -= frag_limit;
    }
    if (frame_bytes > 0)
        out.push_back(static_cast<std::uint32_t>(frame_bytes));
    return out;
}

std::vector<Packet> next_video_frame(VideoSourceState& state, RandomStream& rng)
{
    const auto type = state.next_type();
    state.position = (state.position + 1) % state.gop_pattern.size();
    const double size = rng.draw(Exponential{state.mean_frame_size[static_cast<std::size_t>(type)]});
    std::vector<Packet> packets;
    for (auto bytes : fragment(static_cast<std::uint64_t>(std::llround(size)), state.frag_limit)) {
        Packet p;
        p.source = SourceKind::Video;
        p.size = bytes;
        packets.push_back(p);
    }
    return packets;
}

double voice_interval_s(const ClassTrafficSpec& spec)
{
    return static_cast<double>(spec.pktsz_bytes) * 8.0 / spec.idr_bps;
}

VoiceSource::VoiceSource(const ClassTrafficSpec& spec, SimTime start)
    : pktsz_(spec.pktsz_bytes), interval_us_(voice_interval_s(spec) * 1e6), start_(start)
{
    if (spec.cls != TrafficClass::EF)
        throw ConfigError("voice source requires an EF class spec");
    if (!(spec.idr_bps > 0) || spec.pktsz_bytes == 0)
        throw ConfigError("voice source requires positive idr and packet size");
}

Emission VoiceSource::next()
{
    Packet p;
    p.source = SourceKind::Voice;
    p.size = pktsz_;
    const SimTime at = start_ + SimTime{std::llround(static_cast<double>(count_) * interval_us_)};
    ++count_;
    return Emission{p, at};
}

Emission next_voice_packet(const ClassTrafficSpec& spec, SimTime now)
{
    VoiceSource src(spec, now);
    Emission first = src.next();
    first.packet.created_at = first.at;
    // Report the time the following packet is due.
    first.at = src.next().at;
    return first;
}

std::optional<Emission> next_be_arrival(double mean_rate_bps, const Distribution& pkt_size, RandomStream& rng)
{
    if (!(mean_rate_bps > 0))
        return std::nullopt;
    const double mean_gap_us = mean_of(pkt_size) * 8.0 * 1e6 / mean_rate_bps;
    const double gap_us = rng.draw(Exponential{mean_gap_us});
    Packet p;
    p.source = SourceKind::Data;
    p.size = static_cast<std::uint32_t>(std::max<long long>(1, std::llround(rng.draw(pkt_size))));
    return Emission{p, SimTime{std::llround(gap_us)}};
}

} // namespace dsqos
