#pragma once

#include <cmath>
#include <string>
#include <string_view>

namespace balint {

/// Link function g mapping the outcome mean to the linear-predictor scale.
enum class Link { Identity, Log, Logit };

std::string_view to_string(Link link) noexcept;
/// Parses "identity" | "log" | "logit"; throws Error(Config) otherwise.
Link parse_link(std::string_view name);

/// Whether mu lies in the domain of g.
bool in_domain(Link link, double mu) noexcept;

/// eta = g(mu). Throws Error(Domain) outside the link's domain.
double apply(Link link, double mu);

/// Numerically stable logistic function.
inline double expit(double eta) noexcept {
    if (eta >= 0.0) {
        return 1.0 / (1.0 + std::exp(-eta));
    }
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

/// mu = g^{-1}(eta); total on the real line.
inline double invert(Link link, double eta) noexcept {
    switch (link) {
    case Link::Identity: return eta;
    case Link::Log: return std::exp(eta);
    case Link::Logit: return expit(eta);
    }
    return eta;
}

} // namespace balint
