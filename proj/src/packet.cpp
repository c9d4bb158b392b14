#include "dsqos/packet.hpp"

namespace dsqos {

std::string_view to_string(TrafficClass c)
{
    switch (c) {
    case TrafficClass::AF: return "AF";
    case TrafficClass::EF: return "EF";
    case TrafficClass::BE: return "BE";
    case TrafficClass::NC: return "NC";
    }
    return "?";
}

std::optional<TrafficClass> parse_traffic_class(std::string_view text)
{
    for (auto c : kAllClasses)
        if (to_string(c) == text)
            return c;
    return std::nullopt;
}

std::string_view to_string(SourceKind k)
{
    switch (k) {
    case SourceKind::Video: return "video";
    case SourceKind::Voice: return "voice";
    case SourceKind::Data: return "data";
    }
    return "?";
}

std::optional<SourceKind> parse_source_kind(std::string_view text)
{
    for (auto k : {SourceKind::Video, SourceKind::Voice, SourceKind::Data})
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

} // namespace dsqos
