#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace dsqos {

/// Virtual time in integer microseconds since simulation start.
class SimTime {
public:
    constexpr SimTime() = default;
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}

    static constexpr SimTime from_us(std::int64_t us) { return SimTime{us}; }
    static constexpr SimTime from_ms(std::int64_t ms) { return SimTime{ms * 1000}; }
    static SimTime from_seconds(double s) { return SimTime{std::llround(s * 1e6)}; }

    constexpr std::int64_t us() const { return us_; }
    constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }
    constexpr double ms() const { return static_cast<double>(us_) / 1e3; }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime& operator+=(SimTime d) { us_ += d.us_; return *this; }
    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us_ + b.us_}; }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us_ - b.us_}; }

private:
    std::int64_t us_ = 0;
};

/// Serialization time of `bytes` on a link of `bps`, rounded to the nearest microsecond.
inline SimTime serialization_time(std::uint32_t bytes, double bps)
{
    return SimTime{std::llround(static_cast<double>(bytes) * 8.0 * 1e6 / bps)};
}

} // namespace dsqos
