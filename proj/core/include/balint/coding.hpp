#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace balint {

/// Row encodings of a p-level nominal variable into p-1 design columns.
/// Level 0 is always the reference level.
enum class CodingScheme { ReferenceCell, Effect, WeightedEffect };

std::string_view to_string(CodingScheme scheme) noexcept;
/// Parses "reference_cell" | "effect" | "weighted_effect".
CodingScheme parse_coding_scheme(std::string_view name);

/// A nominal variable: level probabilities plus the coding used to enter the
/// linear predictor.
struct Categorical {
    std::vector<double> probs;
    CodingScheme coding = CodingScheme::ReferenceCell;

    std::size_t levels() const noexcept { return probs.size(); }
    friend bool operator==(const Categorical&, const Categorical&) = default;
};

/// Throws Error(Parameter) unless every entry is in [0,1] and the vector sums
/// to 1 within 1e-12.
void validate_probabilities(std::span<const double> probs);

/// Design row for `level`; length p-1. `probs` is only read by WeightedEffect.
std::vector<double> encode(CodingScheme scheme, std::size_t level, std::size_t p,
                           std::span<const double> probs = {});

/// beta^T encode(i) for every level i.
std::vector<double> level_contributions(std::span<const double> probs,
                                        std::span<const double> betas, CodingScheme scheme);

/// E[f(beta^T X)] = sum_i pi_i f(beta^T X_i), computed exactly over the p levels.
double categorical_expectation(std::span<const double> probs, std::span<const double> betas,
                               CodingScheme scheme, const std::function<double(double)>& f);

/// Interaction of two independent nominal variables as one variable with p*q
/// levels, ordered row-major (level of `a` outer). Keeps `a`'s coding.
Categorical cross_levels(const Categorical& a, const Categorical& b);

} // namespace balint
