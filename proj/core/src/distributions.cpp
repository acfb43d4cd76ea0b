#include "balint/distributions.hpp"

#include "balint/error.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

namespace balint {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
    if (!ok) {
        fail(ErrorKind::Parameter, message);
    }
}

std::size_t draw_level(std::span<const double> probs, double u) noexcept {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) last_positive = i;
        cumulative += probs[i];
        if (u < cumulative) return i;
    }
    // u landed in the rounding slack above the cumulative sum.
    return last_positive;
}

} // namespace

void validate(const CovariateSpec& spec) {
    std::visit(overloaded{
                   [](const Bernoulli& d) {
                       require(d.p >= 0.0 && d.p <= 1.0,
                               "bernoulli p=" + std::to_string(d.p) + " outside [0,1]");
                   },
                   [](const UniformContinuous& d) {
                       require(std::isfinite(d.a) && std::isfinite(d.b) && d.a < d.b,
                               "uniform requires a < b");
                   },
                   [](const Normal& d) {
                       require(std::isfinite(d.mu), "normal mu must be finite");
                       require(d.sigma > 0.0 && std::isfinite(d.sigma), "normal sigma must be > 0");
                   },
                   [](const Gamma& d) {
                       require(d.shape > 0.0 && std::isfinite(d.shape), "gamma shape must be > 0");
                       require(d.rate > 0.0 && std::isfinite(d.rate), "gamma rate must be > 0");
                   },
                   [](const Cauchy& d) {
                       require(std::isfinite(d.location), "cauchy location must be finite");
                       require(d.scale > 0.0 && std::isfinite(d.scale), "cauchy scale must be > 0");
                   },
                   [](const Categorical& d) {
                       validate_probabilities(d.probs);
                       if (d.coding == CodingScheme::WeightedEffect) {
                           require(d.probs[0] > 0.0,
                                   "weighted effect coding needs a reference level with positive "
                                   "probability");
                       }
                   },
               },
               spec);
}

std::string_view family_name(const CovariateSpec& spec) noexcept {
    return std::visit(overloaded{
                          [](const Bernoulli&) { return std::string_view{"bernoulli"}; },
                          [](const UniformContinuous&) { return std::string_view{"uniform"}; },
                          [](const Normal&) { return std::string_view{"normal"}; },
                          [](const Gamma&) { return std::string_view{"gamma"}; },
                          [](const Cauchy&) { return std::string_view{"cauchy"}; },
                          [](const Categorical&) { return std::string_view{"categorical"}; },
                      },
                      spec);
}

std::size_t arity(const CovariateSpec& spec) noexcept {
    if (const auto* cat = std::get_if<Categorical>(&spec)) {
        return cat->probs.empty() ? 0 : cat->probs.size() - 1;
    }
    return 1;
}

bool is_discrete(const CovariateSpec& spec) noexcept {
    return std::holds_alternative<Bernoulli>(spec) || std::holds_alternative<Categorical>(spec);
}

bool has_mgf(const CovariateSpec& spec) noexcept {
    return !std::holds_alternative<Cauchy>(spec) && !std::holds_alternative<Categorical>(spec);
}

double draw(const CovariateSpec& spec, Rng& rng) {
    return std::visit(
        overloaded{
            [&](const Bernoulli& d) { return rng.uniform() < d.p ? 1.0 : 0.0; },
            [&](const UniformContinuous& d) { return d.a + (d.b - d.a) * rng.uniform(); },
            [&](const Normal& d) { return d.mu + d.sigma * rng.normal(); },
            [&](const Gamma& d) { return rng.gamma(d.shape, d.rate); },
            [&](const Cauchy& d) {
                return d.location + d.scale * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
            },
            [&](const Categorical& d) {
                return static_cast<double>(draw_level(d.probs, rng.uniform()));
            },
        },
        spec);
}

void draw_into(const CovariateSpec& spec, Rng& rng, std::span<double> out) {
    std::visit(
        overloaded{
            [&](const Bernoulli& d) {
                for (auto& x : out) x = rng.uniform() < d.p ? 1.0 : 0.0;
            },
            [&](const UniformContinuous& d) {
                const double width = d.b - d.a;
                for (auto& x : out) x = d.a + width * rng.uniform();
            },
            [&](const Normal& d) {
                for (auto& x : out) x = d.mu + d.sigma * rng.normal();
            },
            [&](const Gamma& d) {
                for (auto& x : out) x = rng.gamma(d.shape, d.rate);
            },
            [&](const Categorical& d) {
                for (auto& x : out) x = static_cast<double>(draw_level(d.probs, rng.uniform()));
            },
            [&](const auto&) {
                for (auto& x : out) x = draw(spec, rng);
            },
        },
        spec);
}

std::vector<double> sample(const CovariateSpec& spec, std::size_t n, const RngStream& stream) {
    validate(spec);
    if (n == 0) {
        fail(ErrorKind::Parameter, "sample size must be >= 1");
    }
    Rng rng(stream);
    std::vector<double> out(n);
    draw_into(spec, rng, out);
    return out;
}

double mean(const CovariateSpec& spec) {
    validate(spec);
    return std::visit(overloaded{
                          [](const Bernoulli& d) { return d.p; },
                          [](const UniformContinuous& d) { return 0.5 * (d.a + d.b); },
                          [](const Normal& d) { return d.mu; },
                          [](const Gamma& d) { return d.shape / d.rate; },
                          [](const Cauchy&) -> double {
                              fail(ErrorKind::UndefinedMoment, "cauchy distribution has no mean");
                          },
                          [](const Categorical&) -> double {
                              fail(ErrorKind::Unsupported,
                                   "categorical mean is a vector; use encoded_mean");
                          },
                      },
                      spec);
}

std::vector<double> encoded_mean(const CovariateSpec& spec) {
    if (const auto* cat = std::get_if<Categorical>(&spec)) {
        validate(spec);
        const std::size_t p = cat->probs.size();
        std::vector<double> out(p - 1, 0.0);
        for (std::size_t i = 0; i < p; ++i) {
            const auto row = encode(cat->coding, i, p, cat->probs);
            for (std::size_t j = 0; j + 1 < p; ++j) {
                out[j] += cat->probs[i] * row[j];
            }
        }
        return out;
    }
    return {mean(spec)};
}

double mgf(const CovariateSpec& spec, double t) {
    validate(spec);
    return std::visit(
        overloaded{
            [t](const Bernoulli& d) { return 1.0 - d.p + d.p * std::exp(t); },
            [t](const UniformContinuous& d) {
                if (t == 0.0) return 1.0;
                const double width = t * (d.b - d.a);
                return std::exp(t * d.a) * std::expm1(width) / width;
            },
            [t](const Normal& d) { return std::exp(d.mu * t + 0.5 * d.sigma * d.sigma * t * t); },
            [t](const Gamma& d) {
                if (t >= d.rate) {
                    fail(ErrorKind::Domain, "gamma MGF diverges at t=" + std::to_string(t) +
                                                " >= rate=" + std::to_string(d.rate));
                }
                return std::pow(1.0 - t / d.rate, -d.shape);
            },
            [t](const Cauchy&) {
                if (t == 0.0) return 1.0;
                fail(ErrorKind::NoMgf, "cauchy distribution has no moment generating function");
            },
            [](const Categorical&) -> double {
                fail(ErrorKind::Unsupported,
                     "categorical exponential moments come from categorical_expectation");
            },
        },
        spec);
}

JointSampler independent_sampler(std::span<const CovariateSpec> specs) {
    std::vector<CovariateSpec> owned(specs.begin(), specs.end());
    std::size_t dimension = 0;
    bool heavy = false;
    for (const auto& spec : owned) {
        validate(spec);
        dimension += arity(spec);
        heavy = heavy || std::holds_alternative<Cauchy>(spec);
    }
    JointSampler sampler;
    sampler.dimension = dimension;
    sampler.heavy_tailed = heavy;
    sampler.draw = [owned = std::move(owned)](Rng& rng, std::span<double> row) {
        std::size_t col = 0;
        for (const auto& spec : owned) {
            const double x = draw(spec, rng);
            if (const auto* cat = std::get_if<Categorical>(&spec)) {
                const auto enc = encode(cat->coding, static_cast<std::size_t>(x),
                                        cat->probs.size(), cat->probs);
                for (double v : enc) row[col++] = v;
            } else {
                row[col++] = x;
            }
        }
    };
    return sampler;
}

MomentEstimate mc_exp_moment(const JointSampler& sampler, std::span<const double> betas,
                             std::size_t n_mc, const RngStream& stream) {
    if (n_mc < 2) {
        fail(ErrorKind::Parameter, "n_mc must be >= 2");
    }
    if (betas.size() != sampler.dimension) {
        fail(ErrorKind::Parameter, "coefficient vector has length " + std::to_string(betas.size()) +
                                       ", sampler dimension is " +
                                       std::to_string(sampler.dimension));
    }
    Rng rng(stream);
    std::vector<double> row(sampler.dimension);
    // Welford accumulation.
    double running_mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
        sampler.draw(rng, row);
        double eta = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            eta += betas[j] * row[j];
        }
        const double value = std::exp(eta);
        const double delta = value - running_mean;
        running_mean += delta / static_cast<double>(i + 1);
        m2 += delta * (value - running_mean);
    }
    MomentEstimate out;
    out.estimate = running_mean;
    out.se = std::sqrt(m2 / static_cast<double>(n_mc - 1)) / std::sqrt(static_cast<double>(n_mc));
    out.warnings.set(Warning::McFallback);
    if (sampler.heavy_tailed) {
        out.warnings.set(Warning::HeavyTail);
    }
    return out;
}

} // namespace balint
