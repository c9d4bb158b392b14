#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>

namespace dsqos {

struct Constant {
    double value;
};
struct Uniform {
    double low;
    double high;
};
struct Exponential {
    double mean;
};

using Distribution = std::variant<Constant, Uniform, Exponential>;

/// Throws ConfigError for a nonpositive exponential mean or an inverted uniform range.
void validate(const Distribution& dist, std::string_view key = "distribution");

/// "fixed:1000", "exp:1000" or "uniform:100,1500".
Distribution parse_distribution(std::string_view text, std::string_view key);
std::string format_distribution(const Distribution& dist);
double mean_of(const Distribution& dist);

/// SplitMix64 finalizer; also used to derive replication seeds.
std::uint64_t mix64(std::uint64_t x);

/**
 * Independent pseudo-random stream identified by (seed, stream_id).
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard; the real-valued transforms are done here rather than through
 * <random> distributions, whose algorithms differ between standard libraries.
 */
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string stream_id);

    std::uint64_t seed() const { return seed_; }
    const std::string& stream_id() const { return stream_id_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double draw(const Distribution& dist);

private:
    std::uint64_t seed_;
    std::string stream_id_;
    std::mt19937_64 engine_;
};

} // namespace dsqos
