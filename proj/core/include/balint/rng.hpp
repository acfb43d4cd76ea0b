#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace balint {

/// Immutable descriptor of a random stream. Two descriptors with equal fields
/// always produce the same sequence; distinct stream indices under one seed
/// produce statistically independent sequences.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    /// Child stream keyed by (this stream, tag). Pure function of its inputs.
    RngStream substream(std::uint64_t tag) const noexcept;

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a, used to key streams by scenario id.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Generator positioned at the start of a stream. The 256-bit xoshiro256++
/// state is two Philox4x32-10 blocks keyed by the master seed at counters
/// (0, stream_index) and (1, stream_index), so state derivation is
/// counter-based and draws within a stream are cheap.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(const RngStream& stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1); safe to pass to log().
    double uniform_open() noexcept;
    /// Standard normal via the Marsaglia polar method; the second variate of
    /// each pair is cached.
    double normal() noexcept;
    /// Gamma(shape, rate) via Marsaglia-Tsang.
    double gamma(double shape, double rate) noexcept;

private:
    std::array<std::uint64_t, 4> state_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace balint
