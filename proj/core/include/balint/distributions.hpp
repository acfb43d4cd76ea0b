#pragma once

#include "balint/coding.hpp"
#include "balint/rng.hpp"
#include "balint/warnings.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace balint {

struct Bernoulli {
    double p = 0.5;
    friend bool operator==(const Bernoulli&, const Bernoulli&) = default;
};

struct UniformContinuous {
    double a = 0.0;
    double b = 1.0;
    friend bool operator==(const UniformContinuous&, const UniformContinuous&) = default;
};

struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
    friend bool operator==(const Normal&, const Normal&) = default;
};

/// Gamma with shape/rate parameterisation (mean shape/rate).
struct Gamma {
    double shape = 1.0;
    double rate = 1.0;
    friend bool operator==(const Gamma&, const Gamma&) = default;
};

/// Heavy-tailed: no mean, no MGF.
struct Cauchy {
    double location = 0.0;
    double scale = 1.0;
    friend bool operator==(const Cauchy&, const Cauchy&) = default;
};

using CovariateSpec =
    std::variant<Bernoulli, UniformContinuous, Normal, Gamma, Cauchy, Categorical>;

/// Throws Error(Parameter) on invalid parameters.
void validate(const CovariateSpec& spec);

/// "bernoulli" | "uniform" | "normal" | "gamma" | "cauchy" | "categorical".
std::string_view family_name(const CovariateSpec& spec) noexcept;

/// Number of linear-predictor columns the covariate contributes (p-1 for categoricals).
std::size_t arity(const CovariateSpec& spec) noexcept;

/// Finite support (Bernoulli, Categorical).
bool is_discrete(const CovariateSpec& spec) noexcept;

bool has_mgf(const CovariateSpec& spec) noexcept;

/// One draw. Categorical draws are level indices.
double draw(const CovariateSpec& spec, Rng& rng);

/// Fills `out` with i.i.d. draws; same sequence as repeated draw() calls.
void draw_into(const CovariateSpec& spec, Rng& rng, std::span<double> out);

/// n i.i.d. draws from a fresh generator on `stream`.
std::vector<double> sample(const CovariateSpec& spec, std::size_t n, const RngStream& stream);

/// Exact mean of a scalar covariate. Categoricals throw Error(Unsupported)
/// (use encoded_mean); Cauchy throws Error(UndefinedMoment).
double mean(const CovariateSpec& spec);

/// Mean of the covariate's design columns: {mean(spec)} for scalars and
/// sum_i pi_i encode(i) for categoricals.
std::vector<double> encoded_mean(const CovariateSpec& spec);

/// E[exp(tX)].
double mgf(const CovariateSpec& spec, double t);

/// Draws one joint covariate row of `dimension` design columns. Dependent
/// covariates enter the library only through a user-supplied sampler.
struct JointSampler {
    std::size_t dimension = 0;
    std::function<void(Rng&, std::span<double>)> draw;
    /// Set when some component has no finite moments; propagates a HeavyTail warning.
    bool heavy_tailed = false;
};

/// Joint sampler over independent covariates, each expanded into its design
/// columns (categoricals via their coding).
JointSampler independent_sampler(std::span<const CovariateSpec> specs);

struct MomentEstimate {
    double estimate = 0.0;
    double se = 0.0;
    WarningSet warnings;
};

/// Monte Carlo estimate of E[exp(beta^T X)] from n_mc joint draws.
MomentEstimate mc_exp_moment(const JointSampler& sampler, std::span<const double> betas,
                             std::size_t n_mc, const RngStream& stream);

} // namespace balint
