#include "balint/coding.hpp"

#include "balint/error.hpp"

#include <cmath>
#include <string>

namespace balint {

std::string_view to_string(CodingScheme scheme) noexcept {
    switch (scheme) {
    case CodingScheme::ReferenceCell: return "reference_cell";
    case CodingScheme::Effect: return "effect";
    case CodingScheme::WeightedEffect: return "weighted_effect";
    }
    return "reference_cell";
}

CodingScheme parse_coding_scheme(std::string_view name) {
    if (name == "reference_cell") return CodingScheme::ReferenceCell;
    if (name == "effect") return CodingScheme::Effect;
    if (name == "weighted_effect") return CodingScheme::WeightedEffect;
    fail(ErrorKind::Config, "unknown coding scheme '" + std::string(name) +
                                "' (expected reference_cell|effect|weighted_effect)");
}

void validate_probabilities(std::span<const double> probs) {
    if (probs.empty()) {
        fail(ErrorKind::Parameter, "categorical probabilities must be non-empty");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail(ErrorKind::Parameter, "categorical probability " + std::to_string(p) +
                                           " outside [0,1]");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        fail(ErrorKind::Parameter,
             "categorical probabilities sum to " + std::to_string(total) + ", not 1");
    }
}

std::vector<double> encode(CodingScheme scheme, std::size_t level, std::size_t p,
                           std::span<const double> probs) {
    if (p == 0 || level >= p) {
        fail(ErrorKind::Index, "level " + std::to_string(level) + " out of range for " +
                                   std::to_string(p) + "-level variable");
    }
    std::vector<double> row(p - 1, 0.0);
    if (level > 0) {
        row[level - 1] = 1.0;
        return row;
    }
    switch (scheme) {
    case CodingScheme::ReferenceCell:
        break;
    case CodingScheme::Effect:
        row.assign(p - 1, -1.0);
        break;
    case CodingScheme::WeightedEffect:
        if (probs.size() != p) {
            fail(ErrorKind::Parameter, "weighted effect coding needs " + std::to_string(p) +
                                           " level probabilities, got " +
                                           std::to_string(probs.size()));
        }
        if (probs[0] <= 0.0) {
            fail(ErrorKind::Parameter,
                 "weighted effect coding requires a reference level with positive probability");
        }
        for (std::size_t j = 1; j < p; ++j) {
            row[j - 1] = -probs[j] / probs[0];
        }
        break;
    }
    return row;
}

std::vector<double> level_contributions(std::span<const double> probs,
                                        std::span<const double> betas, CodingScheme scheme) {
    const std::size_t p = probs.size();
    if (p == 0 || betas.size() != p - 1) {
        fail(ErrorKind::Parameter, "categorical with " + std::to_string(p) + " levels needs " +
                                       std::to_string(p == 0 ? 0 : p - 1) +
                                       " coefficients, got " + std::to_string(betas.size()));
    }
    std::vector<double> out(p);
    for (std::size_t i = 0; i < p; ++i) {
        const auto row = encode(scheme, i, p, probs);
        double eta = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            eta += row[j] * betas[j];
        }
        out[i] = eta;
    }
    return out;
}

double categorical_expectation(std::span<const double> probs, std::span<const double> betas,
                               CodingScheme scheme, const std::function<double(double)>& f) {
    const auto etas = level_contributions(probs, betas, scheme);
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        sum += probs[i] * f(etas[i]);
    }
    return sum;
}

Categorical cross_levels(const Categorical& a, const Categorical& b) {
    Categorical out;
    out.coding = a.coding;
    out.probs.reserve(a.probs.size() * b.probs.size());
    for (double pa : a.probs) {
        for (double pb : b.probs) {
            out.probs.push_back(pa * pb);
        }
    }
    return out;
}

} // namespace balint
