#pragma once

#include "dsqos/packet.hpp"
#include "dsqos/random.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsqos {

enum class CodecKind : std::uint8_t { Video, Voice };

/// Measured codec characteristics. For voice codecs the average and peak rate coincide.
struct CodecProfile {
    std::string name;
    double avg_rate_bps;
    double peak_rate_bps;
    /// Maximum packet size for video codecs, average packet size for voice codecs.
    std::uint32_t pkt_size_bytes;
    CodecKind kind;
};

/// Lab-measured codec table: H263, JPEG-RTP, MPEG-audio, G723, GSM, ulaw, DVI-RTP.
std::span<const CodecProfile> known_profiles();
/// Throws ConfigError listing the known names when `name` is not one of them.
const CodecProfile& profile(std::string_view name);

int default_priority(TrafficClass c);

/// Per-class provisioning input for the buffer planner and static weights.
struct ClassTrafficSpec {
    TrafficClass cls = TrafficClass::BE;
    double idr_bps = 0;
    std::uint32_t pktsz_bytes = 0;
    double dly_s = 0;
    int sessions = 0;
    int priority = 1;

    static ClassTrafficSpec make(TrafficClass c, double idr_bps, std::uint32_t pktsz, double dly_s, int sessions)
    {
        return ClassTrafficSpec{c, idr_bps, pktsz, dly_s, sessions, default_priority(c)};
    }
};

/// Throws ConfigError naming `key` when the spec violates its invariants.
void validate(const ClassTrafficSpec& spec, std::string_view key);

/// Sum of idr * sessions over the AF and EF specs plus the BE rate, in bits/s.
double offered_load(std::span<const ClassTrafficSpec> specs, double be_rate_bps);

// ---------------------------------------------------------------------------
// Video (VBR-rt)

enum class FrameType : std::uint8_t { I = 0, P = 1, B = 2 };

char to_char(FrameType t);

/// Relative mean frame sizes I:P:B.
struct FrameSizeRatio {
    double i = 5;
    double p = 3;
    double b = 1;
    friend bool operator==(const FrameSizeRatio&, const FrameSizeRatio&) = default;
};

struct VideoSourceState {
    std::vector<FrameType> gop_pattern;
    SimTime frame_interval{};
    std::array<double, 3> mean_frame_size{}; // bytes, indexed by FrameType
    std::uint32_t frag_limit = 0;
    std::size_t position = 0; // next frame within the GOP

    FrameType next_type() const { return gop_pattern[position]; }
};

/// The IBBBPBBB group of pictures.
std::vector<FrameType> default_gop();

/// Scales the I:P:B ratio so that the long-run payload rate equals `avg_rate_bps`.
VideoSourceState make_video_state(double avg_rate_bps, SimTime frame_interval, FrameSizeRatio ratio,
                                  std::uint32_t frag_limit);

/// Splits a frame into frag_limit-sized packets plus a remainder (2500/1038 -> 1038,1038,424).
std::vector<std::uint32_t> fragment(std::uint64_t frame_bytes, std::uint32_t frag_limit);

/// Draws the next frame of the GOP and returns its fragments as unstamped video packets.
/// A draw that rounds to zero bytes yields an empty frame.
std::vector<Packet> next_video_frame(VideoSourceState& state, RandomStream& rng);

// ---------------------------------------------------------------------------
// Voice (CBR-rt)

struct Emission {
    Packet packet;
    SimTime at;
};

/// Exact CBR inter-departure in seconds: pktsz * 8 / idr.
double voice_interval_s(const ClassTrafficSpec& spec);

/// Emits packet k at start + round(k * interval). Computing each time from k keeps the
/// schedule free of accumulated rounding.
class VoiceSource {
public:
    VoiceSource(const ClassTrafficSpec& spec, SimTime start);
    Emission next();
    std::uint64_t emitted() const { return count_; }

private:
    std::uint32_t pktsz_;
    double interval_us_;
    SimTime start_;
    std::uint64_t count_ = 0;
};

/// First packet of a voice stream starting now; `at` is the next emission time.
/// Throws ConfigError unless spec.cls == EF.
Emission next_voice_packet(const ClassTrafficSpec& spec, SimTime now);

// ---------------------------------------------------------------------------
// Best effort (Poisson)

/// Draws one BE packet and its exponential inter-arrival gap (packet.at is the gap).
/// Returns nullopt when the source is disabled (mean_rate <= 0).
std::optional<Emission> next_be_arrival(double mean_rate_bps, const Distribution& pkt_size, RandomStream& rng);

} // namespace dsqos
