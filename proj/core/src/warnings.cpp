#include "balint/warnings.hpp"

#include <array>
#include <utility>

namespace balint {

std::string WarningSet::to_string() const {
    static constexpr std::array<std::pair<Warning, const char*>, 6> kNames{{
        {Warning::NaiveApproximation, "naive_approximation"},
        {Warning::McFallback, "mc_fallback"},
        {Warning::HeavyTail, "heavy_tail"},
        {Warning::McPrecision, "mc_precision"},
        {Warning::Divergent, "divergent"},
        {Warning::Clamped, "clamped"},
    }};
    std::string out;
    for (const auto& [flag, name] : kNames) {
        if (has(flag)) {
            if (!out.empty()) out += '|';
            out += name;
        }
    }
    return out;
}

} // namespace balint
