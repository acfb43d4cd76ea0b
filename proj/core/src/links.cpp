#include "balint/links.hpp"

#include "balint/error.hpp"

#include <string>

namespace balint {

std::string_view to_string(Link link) noexcept {
    switch (link) {
    case Link::Identity: return "identity";
    case Link::Log: return "log";
    case Link::Logit: return "logit";
    }
    return "identity";
}

Link parse_link(std::string_view name) {
    if (name == "identity") return Link::Identity;
    if (name == "log") return Link::Log;
    if (name == "logit") return Link::Logit;
    fail(ErrorKind::Config, "unknown link '" + std::string(name) + "' (expected identity|log|logit)");
}

bool in_domain(Link link, double mu) noexcept {
    switch (link) {
    case Link::Identity: return std::isfinite(mu);
    case Link::Log: return mu > 0.0 && std::isfinite(mu);
    case Link::Logit: return mu > 0.0 && mu < 1.0;
    }
    return false;
}

double apply(Link link, double mu) {
    if (!in_domain(link, mu)) {
        fail(ErrorKind::Domain, "mean " + std::to_string(mu) + " outside the domain of the " +
                                    std::string(to_string(link)) + " link");
    }
    switch (link) {
    case Link::Identity: return mu;
    case Link::Log: return std::log(mu);
    case Link::Logit: return std::log(mu / (1.0 - mu));
    }
    return mu;
}

} // namespace balint
