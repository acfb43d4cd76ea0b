#pragma once

#include "balint/distributions.hpp"
#include "balint/links.hpp"
#include "balint/rng.hpp"
#include "balint/warnings.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace balint {

/// What to do with a Bernoulli mean that falls outside [0,1].
enum class ClampPolicy { ClampToUnit, RejectOutOfRange };

std::string_view to_string(ClampPolicy policy) noexcept;
/// "clamp_to_unit" | "reject_out_of_range".
ClampPolicy parse_clamp_policy(std::string_view name);

struct NormalOutcome {
    double sd = 1.0;
    friend bool operator==(const NormalOutcome&, const NormalOutcome&) = default;
};

struct BernoulliOutcome {
    ClampPolicy clamp = ClampPolicy::ClampToUnit;
    friend bool operator==(const BernoulliOutcome&, const BernoulliOutcome&) = default;
};

using OutcomeFamily = std::variant<NormalOutcome, BernoulliOutcome>;

/// "normal" | "bernoulli".
std::string_view family_name(const OutcomeFamily& outcome) noexcept;

/// One independently sampled covariate and its coefficient block
/// (length 1 for scalars, p-1 for categoricals).
struct Term {
    std::string name;
    CovariateSpec spec;
    std::vector<double> betas;
};

/// Jointly sampled (possibly dependent) covariates. Only the Monte Carlo
/// engine can integrate over these.
struct JointTerm {
    std::string name;
    JointSampler sampler;
    std::vector<double> betas;
};

/// A regression-based data-generating mechanism with an unknown intercept.
struct DgpSpec {
    std::vector<Term> terms;
    std::optional<JointTerm> joint;
    Link link = Link::Identity;
    OutcomeFamily outcome = NormalOutcome{};
    double target_mean = 0.0;

    /// Throws Error(Domain) for a target outside the link domain and
    /// Error(Parameter) for arity mismatches or invalid covariates.
    void validate() const;

    bool all_coefficients_zero() const noexcept;
};

enum class SolverMethod { LinearScale, LogClosedForm, Numeric };

std::string_view to_string(SolverMethod method) noexcept;
/// "linear_scale" | "log_closed_form" | "numeric".
SolverMethod parse_solver_method(std::string_view name);

struct InterceptSolution {
    double beta0 = 0.0;
    SolverMethod method = SolverMethod::LinearScale;
    /// |E[g^{-1}(beta0 + eta)] - target|; NaN when it cannot be evaluated
    /// exactly (naive intercept under a nonlinear link with continuous covariates).
    double residual = 0.0;
    std::size_t iterations = 0;
    double mc_se = 0.0;
    WarningSet warnings;
};

struct ExactEnumeration {};
struct MonteCarlo {
    std::size_t n_mc = 100'000;
};
using ExpectationEngine = std::variant<ExactEnumeration, MonteCarlo>;

inline constexpr std::size_t kMaxEnumerationSupport = 1'000'000;
inline constexpr double kDefaultExactTol = 1e-10;
inline constexpr double kDefaultMcTol = 1e-4;

/// True when every covariate has finite support and the joint support has at
/// most kMaxEnumerationSupport points.
bool supports_exact(const DgpSpec& dgp) noexcept;

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// Distribution of the covariate part of the linear predictor, beta^T X,
/// either as an exact weighted support or as a fixed set of Monte Carlo draws.
/// Built once and reused so that repeated evaluations within a solve share
/// the same random numbers.
class PredictorDistribution {
public:
    static PredictorDistribution build(const DgpSpec& dgp, const ExpectationEngine& engine,
                                       const RngStream& stream);

    /// E[g^{-1}(beta0 + beta^T X)] and its standard error (0 when exact).
    Estimate expectation(Link link, double beta0) const;

    bool exact() const noexcept { return !weights_.empty(); }
    std::size_t size() const noexcept { return offsets_.size(); }
    std::span<const double> offsets() const noexcept { return offsets_; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> offsets_;
    std::vector<double> weights_; // empty for Monte Carlo draws
};

/// beta0 = g(target) - sum_j beta_j E[X_j]. Exact only for the identity link;
/// otherwise the result is flagged NaiveApproximation.
InterceptSolution solve_linear_scale(const DgpSpec& dgp);

struct LogSolveOptions {
    /// Estimate exponential moments of MGF-less covariates (Cauchy) by Monte
    /// Carlo instead of failing.
    bool mc_fallback = false;
    std::size_t n_mc = 100'000;
    RngStream stream{};
};

/// beta0 = log(target) - sum_j log E[exp(beta_j X_j)] for independent
/// covariates under the log link.
InterceptSolution solve_log_closed_form(const DgpSpec& dgp, const LogSolveOptions& options = {});

/// E_X[g^{-1}(beta0 + beta^T X)].
Estimate expectation_of_mean(double beta0, const DgpSpec& dgp, const ExpectationEngine& engine,
                             const RngStream& stream);

/// Bracketed bisection on beta0 until |E[g^{-1}(beta0 + eta)] - target| <= tol.
InterceptSolution solve_numeric(const DgpSpec& dgp, const ExpectationEngine& engine, double tol,
                                const RngStream& stream);

} // namespace balint
