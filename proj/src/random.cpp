#include "dsqos/random.hpp"

#include "dsqos/errors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace dsqos {

namespace {

std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double parse_number(std::string_view text, std::string_view key)
{
    // std::from_chars for double is available in libstdc++ 11.
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

} // namespace

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate(const Distribution& dist, std::string_view key)
{
    if (const auto* e = std::get_if<Exponential>(&dist); e && !(e->mean > 0))
        throw ConfigError(std::string(key) + ": exponential mean must be positive");
    if (const auto* u = std::get_if<Uniform>(&dist); u && !(u->low <= u->high))
        throw ConfigError(std::string(key) + ": uniform range must satisfy low <= high");
}

Distribution parse_distribution(std::string_view text, std::string_view key)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ConfigError(std::string(key) + ": expected fixed:<v>, exp:<mean> or uniform:<a>,<b>");
    const auto kind = text.substr(0, colon);
    const auto args = text.substr(colon + 1);
    Distribution dist;
    if (kind == "fixed" || kind == "constant") {
        dist = Constant{parse_number(args, key)};
    } else if (kind == "exp" || kind == "exponential") {
        dist = Exponential{parse_number(args, key)};
    } else if (kind == "uniform") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos)
            throw ConfigError(std::string(key) + ": uniform needs two bounds");
        dist = Uniform{parse_number(args.substr(0, comma), key), parse_number(args.substr(comma + 1), key)};
    } else {
        throw ConfigError(std::string(key) + ": unknown distribution '" + std::string(kind) + "'");
    }
    validate(dist, key);
    return dist;
}

std::string format_distribution(const Distribution& dist)
{
    std::ostringstream out;
    out.precision(17);
    if (const auto* c = std::get_if<Constant>(&dist))
        out << "fixed:" << c->value;
    else if (const auto* e = std::get_if<Exponential>(&dist))
        out << "exp:" << e->mean;
    else if (const auto* u = std::get_if<Uniform>(&dist))
        out << "uniform:" << u->low << ',' << u->high;
    return out.str();
}

double mean_of(const Distribution& dist)
{
    if (const auto* c = std::get_if<Constant>(&dist))
        return c->value;
    if (const auto* e = std::get_if<Exponential>(&dist))
        return e->mean;
    const auto& u = std::get<Uniform>(dist);
    return 0.5 * (u.low + u.high);
}

RandomStream::RandomStream(std::uint64_t seed, std::string stream_id)
    : seed_(seed),
      stream_id_(std::move(stream_id)),
      engine_(mix64(seed ^ mix64(fnv1a64(stream_id_))))
{
}

double RandomStream::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::draw(const Distribution& dist)
{
    if (const auto* c = std::get_if<Constant>(&dist))
        return c->value;
    if (const auto* u = std::get_if<Uniform>(&dist))
        return u->low + (u->high - u->low) * uniform01();
    const auto& e = std::get<Exponential>(dist);
    if (!(e.mean > 0))
        throw ConfigError("exponential mean must be positive");
    // 1 - u lies in (0, 1], so the log is finite.
    return -e.mean * std::log(1.0 - uniform01());
}

} // namespace dsqos
