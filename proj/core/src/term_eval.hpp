#pragma once

#include "balint/error.hpp"
#include "balint/intercept.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace balint::detail {

inline constexpr std::uint64_t kJointStreamTag = 0x4A4F494E54ull;    // "JOINT"
inline constexpr std::uint64_t kOutcomeStreamTag = 0x4F5554434F4D45ull; // "OUTCOME"

/// Maps a raw draw of one term to its linear-predictor contribution.
class TermContribution {
public:
    explicit TermContribution(const Term& term) {
        if (const auto* cat = std::get_if<Categorical>(&term.spec)) {
            by_level_ = level_contributions(cat->probs, term.betas, cat->coding);
        } else {
            slope_ = term.betas.at(0);
        }
    }

    double operator()(double x) const noexcept {
        return by_level_.empty() ? slope_ * x : by_level_[static_cast<std::size_t>(x)];
    }

private:
    double slope_ = 0.0;
    std::vector<double> by_level_;
};

/// Runs `fn`, prefixing any library error with the offending term's name.
template <class F>
decltype(auto) in_term(const std::string& name, F&& fn) {
    try {
        return std::forward<F>(fn)();
    } catch (const Error& e) {
        throw Error(e.kind(), "term '" + name + "': " + e.what());
    }
}

} // namespace balint::detail
