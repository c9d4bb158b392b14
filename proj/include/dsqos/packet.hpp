#pragma once

#include "dsqos/sim_time.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace dsqos {

/// The four logical router queues. Order is the array index used throughout.
enum class TrafficClass : std::uint8_t { AF = 0, EF = 1, BE = 2, NC = 3 };

inline constexpr std::size_t kClassCount = 4;
inline constexpr std::array<TrafficClass, kClassCount> kAllClasses{
    TrafficClass::AF, TrafficClass::EF, TrafficClass::BE, TrafficClass::NC};
/// The classes that carry traffic in scenarios.
inline constexpr std::array<TrafficClass, 3> kDataClasses{TrafficClass::AF, TrafficClass::EF, TrafficClass::BE};

constexpr std::size_t index(TrafficClass c) { return static_cast<std::size_t>(c); }
std::string_view to_string(TrafficClass c);
std::optional<TrafficClass> parse_traffic_class(std::string_view text);

template <typename T>
using PerClass = std::array<T, kClassCount>;

/// What generated a packet; the marking policy keys on this.
enum class SourceKind : std::uint8_t { Video, Voice, Data };

std::string_view to_string(SourceKind k);
std::optional<SourceKind> parse_source_kind(std::string_view text);

/// 6-bit DiffServ code point.
class Dscp {
public:
    constexpr Dscp() = default;
    constexpr explicit Dscp(std::uint8_t cp) : cp_(static_cast<std::uint8_t>(cp & 0x3f)) {}
    constexpr std::uint8_t value() const { return cp_; }
    constexpr auto operator<=>(const Dscp&) const = default;

private:
    std::uint8_t cp_ = 0;
};

namespace dscp {
inline constexpr Dscp BE{0};
inline constexpr Dscp AF11{10};
inline constexpr Dscp AF12{12};
inline constexpr Dscp AF13{14};
inline constexpr Dscp EF{46};
inline constexpr Dscp NC{48};
} // namespace dscp

struct Packet {
    std::uint64_t id = 0;
    Dscp mark{};
    SourceKind source = SourceKind::Data;
    std::uint32_t size = 0; // bytes
    SimTime created_at{};
    SimTime enqueued_at{};
    std::optional<SimTime> delivered_at;
    std::uint16_t domain = 0;
    std::uint32_t flow = 0;
    /// Queue the packet was classified into at the edge router.
    TrafficClass cls = TrafficClass::BE;
    /// Measured packets are those created after the warm-up period.
    bool measured = true;
};

} // namespace dsqos
