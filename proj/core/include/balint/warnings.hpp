#pragma once

#include <cstdint>
#include <string>

namespace balint {

enum class Warning : std::uint32_t {
    NaiveApproximation = 1u << 0, // linear-predictor-scale intercept under a nonlinear link
    McFallback = 1u << 1,         // an expectation was estimated by Monte Carlo
    HeavyTail = 1u << 2,          // MC estimate of a moment that does not exist
    McPrecision = 1u << 3,        // MC standard error exceeds tol/4
    Divergent = 1u << 4,          // exponential moment is infinite
    Clamped = 1u << 5,            // outcome means were clamped into [0,1]
};

class WarningSet {
public:
    WarningSet() = default;

    void set(Warning w) noexcept { bits_ |= static_cast<std::uint32_t>(w); }
    bool has(Warning w) const noexcept { return (bits_ & static_cast<std::uint32_t>(w)) != 0; }
    bool empty() const noexcept { return bits_ == 0; }
    void merge(WarningSet other) noexcept { bits_ |= other.bits_; }

    /// Pipe-separated flag names in declaration order, e.g. "mc_fallback|heavy_tail".
    std::string to_string() const;

    friend bool operator==(WarningSet, WarningSet) = default;

private:
    std::uint32_t bits_ = 0;
};

} // namespace balint
