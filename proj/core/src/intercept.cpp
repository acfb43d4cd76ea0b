#include "balint/intercept.hpp"

#include "balint/error.hpp"
#include "term_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace balint {

namespace {

bool all_zero(std::span<const double> betas) noexcept {
    return std::all_of(betas.begin(), betas.end(), [](double b) { return b == 0.0; });
}

double scalar_beta(const Term& term) { return term.betas.at(0); }

/// E[exp(beta X)] for one independent term, exactly. Throws for MGF-less or
/// divergent terms.
double exact_exp_moment(const Term& term) {
    return detail::in_term(term.name, [&] {
        if (const auto* cat = std::get_if<Categorical>(&term.spec)) {
            return categorical_expectation(cat->probs, term.betas, cat->coding,
                                           [](double eta) { return std::exp(eta); });
        }
        return mgf(term.spec, scalar_beta(term));
    });
}

/// Whether every term admits an exact exponential moment.
bool all_exp_moments_exact(const DgpSpec& dgp) noexcept {
    if (dgp.joint) return false;
    for (const auto& term : dgp.terms) {
        if (all_zero(term.betas)) continue;
        if (std::holds_alternative<Categorical>(term.spec)) continue;
        if (!has_mgf(term.spec)) return false;
        if (const auto* g = std::get_if<Gamma>(&term.spec); g && scalar_beta(term) >= g->rate) {
            return false;
        }
    }
    return true;
}

InterceptSolution zero_coefficient_solution(const DgpSpec& dgp, SolverMethod method) {
    InterceptSolution out;
    out.beta0 = apply(dgp.link, dgp.target_mean);
    out.method = method;
    out.residual = std::abs(invert(dgp.link, out.beta0) - dgp.target_mean);
    return out;
}

} // namespace

std::string_view to_string(ClampPolicy policy) noexcept {
    return policy == ClampPolicy::ClampToUnit ? "clamp_to_unit" : "reject_out_of_range";
}

ClampPolicy parse_clamp_policy(std::string_view name) {
    if (name == "clamp_to_unit") return ClampPolicy::ClampToUnit;
    if (name == "reject_out_of_range") return ClampPolicy::RejectOutOfRange;
    fail(ErrorKind::Config, "unknown clamp policy '" + std::string(name) +
                                "' (expected clamp_to_unit|reject_out_of_range)");
}

std::string_view family_name(const OutcomeFamily& outcome) noexcept {
    return std::holds_alternative<NormalOutcome>(outcome) ? "normal" : "bernoulli";
}

std::string_view to_string(SolverMethod method) noexcept {
    switch (method) {
    case SolverMethod::LinearScale: return "linear_scale";
    case SolverMethod::LogClosedForm: return "log_closed_form";
    case SolverMethod::Numeric: return "numeric";
    }
    return "numeric";
}

SolverMethod parse_solver_method(std::string_view name) {
    if (name == "linear_scale") return SolverMethod::LinearScale;
    if (name == "log_closed_form") return SolverMethod::LogClosedForm;
    if (name == "numeric") return SolverMethod::Numeric;
    fail(ErrorKind::Config, "unknown solver '" + std::string(name) +
                                "' (expected linear_scale|log_closed_form|numeric)");
}

void DgpSpec::validate() const {
    if (!in_domain(link, target_mean)) {
        fail(ErrorKind::Domain, "target mean " + std::to_string(target_mean) +
                                    " outside the domain of the " + std::string(to_string(link)) +
                                    " link");
    }
    if (const auto* normal = std::get_if<NormalOutcome>(&outcome)) {
        if (!(normal->sd > 0.0) || !std::isfinite(normal->sd)) {
            fail(ErrorKind::Parameter, "normal outcome sd must be > 0");
        }
    } else if (!(target_mean > 0.0 && target_mean < 1.0)) {
        fail(ErrorKind::Domain, "bernoulli outcome needs a target mean in (0,1), got " +
                                    std::to_string(target_mean));
    }
    for (const auto& term : terms) {
        detail::in_term(term.name, [&] {
            balint::validate(term.spec);
            if (term.betas.size() != arity(term.spec)) {
                fail(ErrorKind::Parameter, "expected " + std::to_string(arity(term.spec)) +
                                               " coefficient(s), got " +
                                               std::to_string(term.betas.size()));
            }
        });
    }
    if (joint) {
        if (!joint->sampler.draw || joint->betas.size() != joint->sampler.dimension) {
            fail(ErrorKind::Parameter, "joint term '" + joint->name +
                                           "' needs a sampler and one coefficient per column");
        }
    }
}

bool DgpSpec::all_coefficients_zero() const noexcept {
    for (const auto& term : terms) {
        if (!all_zero(term.betas)) return false;
    }
    return !joint || all_zero(joint->betas);
}

bool supports_exact(const DgpSpec& dgp) noexcept {
    if (dgp.joint) return false;
    std::size_t support = 1;
    for (const auto& term : dgp.terms) {
        if (!is_discrete(term.spec)) return false;
        const std::size_t levels =
            std::holds_alternative<Bernoulli>(term.spec) ? 2 : std::get<Categorical>(term.spec).levels();
        if (levels != 0 && support > kMaxEnumerationSupport / levels) return false;
        support *= levels;
    }
    return support <= kMaxEnumerationSupport;
}

PredictorDistribution PredictorDistribution::build(const DgpSpec& dgp,
                                                   const ExpectationEngine& engine,
                                                   const RngStream& stream) {
    PredictorDistribution out;
    if (std::holds_alternative<ExactEnumeration>(engine)) {
        if (!supports_exact(dgp)) {
            fail(ErrorKind::EngineMismatch,
                 "exact enumeration needs discrete covariates with at most " +
                     std::to_string(kMaxEnumerationSupport) + " joint support points");
        }
        out.offsets_ = {0.0};
        out.weights_ = {1.0};
        for (const auto& term : dgp.terms) {
            std::vector<double> probs;
            std::vector<double> etas;
            if (const auto* b = std::get_if<Bernoulli>(&term.spec)) {
                probs = {1.0 - b->p, b->p};
                etas = {0.0, scalar_beta(term)};
            } else {
                const auto& cat = std::get<Categorical>(term.spec);
                probs = cat.probs;
                etas = level_contributions(cat.probs, term.betas, cat.coding);
            }
            std::vector<double> offsets;
            std::vector<double> weights;
            offsets.reserve(out.offsets_.size() * probs.size());
            weights.reserve(out.offsets_.size() * probs.size());
            for (std::size_t i = 0; i < out.offsets_.size(); ++i) {
                for (std::size_t l = 0; l < probs.size(); ++l) {
                    offsets.push_back(out.offsets_[i] + etas[l]);
                    weights.push_back(out.weights_[i] * probs[l]);
                }
            }
            out.offsets_ = std::move(offsets);
            out.weights_ = std::move(weights);
        }
        return out;
    }

    const std::size_t n_mc = std::get<MonteCarlo>(engine).n_mc;
    if (n_mc < 2) {
        fail(ErrorKind::Parameter, "n_mc must be >= 2");
    }
    out.offsets_.assign(n_mc, 0.0);
    for (std::size_t j = 0; j < dgp.terms.size(); ++j) {
        const auto& term = dgp.terms[j];
        if (all_zero(term.betas)) continue;
        const detail::TermContribution contribution(term);
        Rng rng(stream.substream(j));
        std::vector<double> draws(n_mc);
        draw_into(term.spec, rng, draws);
        for (std::size_t i = 0; i < n_mc; ++i) {
            out.offsets_[i] += contribution(draws[i]);
        }
    }
    if (dgp.joint && !all_zero(dgp.joint->betas)) {
        Rng rng(stream.substream(detail::kJointStreamTag));
        std::vector<double> row(dgp.joint->sampler.dimension);
        for (auto& offset : out.offsets_) {
            dgp.joint->sampler.draw(rng, row);
            for (std::size_t c = 0; c < row.size(); ++c) {
                offset += dgp.joint->betas[c] * row[c];
            }
        }
    }
    return out;
}

Estimate PredictorDistribution::expectation(Link link, double beta0) const {
    if (exact()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < offsets_.size(); ++i) {
            sum += weights_[i] * invert(link, beta0 + offsets_[i]);
        }
        return {sum, 0.0};
    }
    double running_mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        const double value = invert(link, beta0 + offsets_[i]);
        const double delta = value - running_mean;
        running_mean += delta / static_cast<double>(i + 1);
        m2 += delta * (value - running_mean);
    }
    const double n = static_cast<double>(offsets_.size());
    return {running_mean, std::sqrt(m2 / (n - 1.0) / n)};
}

InterceptSolution solve_linear_scale(const DgpSpec& dgp) {
    dgp.validate();
    if (dgp.joint) {
        fail(ErrorKind::Unsupported,
             "joint term '" + dgp.joint->name + "' requires the numeric solver");
    }
    if (dgp.all_coefficients_zero()) {
        return zero_coefficient_solution(dgp, SolverMethod::LinearScale);
    }

    double linear_part = 0.0;
    for (const auto& term : dgp.terms) {
        if (all_zero(term.betas)) continue;
        const auto means = detail::in_term(term.name, [&] { return encoded_mean(term.spec); });
        for (std::size_t c = 0; c < means.size(); ++c) {
            linear_part += term.betas[c] * means[c];
        }
    }

    InterceptSolution out;
    out.method = SolverMethod::LinearScale;
    out.beta0 = apply(dgp.link, dgp.target_mean) - linear_part;
    if (dgp.link == Link::Identity) {
        out.residual = std::abs(out.beta0 + linear_part - dgp.target_mean);
        return out;
    }

    out.warnings.set(Warning::NaiveApproximation);
    if (supports_exact(dgp)) {
        const auto support = PredictorDistribution::build(dgp, ExactEnumeration{}, {});
        out.residual = std::abs(support.expectation(dgp.link, out.beta0).value - dgp.target_mean);
    } else if (dgp.link == Link::Log && all_exp_moments_exact(dgp)) {
        double log_moment = 0.0;
        for (const auto& term : dgp.terms) {
            if (!all_zero(term.betas)) log_moment += std::log(exact_exp_moment(term));
        }
        out.residual = std::abs(std::exp(out.beta0 + log_moment) - dgp.target_mean);
    } else {
        out.residual = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

InterceptSolution solve_log_closed_form(const DgpSpec& dgp, const LogSolveOptions& options) {
    if (dgp.link != Link::Log) {
        fail(ErrorKind::WrongLink, "closed-form solver requires the log link, got " +
                                       std::string(to_string(dgp.link)));
    }
    dgp.validate();
    if (dgp.joint) {
        fail(ErrorKind::Unsupported,
             "joint term '" + dgp.joint->name + "' requires the numeric solver");
    }
    if (dgp.all_coefficients_zero()) {
        return zero_coefficient_solution(dgp, SolverMethod::LogClosedForm);
    }

    InterceptSolution out;
    out.method = SolverMethod::LogClosedForm;
    double log_moment = 0.0;
    double relative_var = 0.0;
    for (std::size_t j = 0; j < dgp.terms.size(); ++j) {
        const auto& term = dgp.terms[j];
        if (all_zero(term.betas)) continue;
        const bool needs_mc =
            !std::holds_alternative<Categorical>(term.spec) && !has_mgf(term.spec);
        if (needs_mc && options.mc_fallback) {
            const CovariateSpec single[] = {term.spec};
            const auto estimate = mc_exp_moment(independent_sampler(single), term.betas,
                                                options.n_mc, options.stream.substream(j));
            out.warnings.merge(estimate.warnings);
            log_moment += std::log(estimate.estimate);
            relative_var += (estimate.se / estimate.estimate) * (estimate.se / estimate.estimate);
        } else {
            log_moment += std::log(exact_exp_moment(term));
        }
    }
    out.beta0 = std::log(dgp.target_mean) - log_moment;
    out.mc_se = std::sqrt(relative_var);
    out.residual = std::abs(std::exp(out.beta0 + log_moment) - dgp.target_mean);
    return out;
}

Estimate expectation_of_mean(double beta0, const DgpSpec& dgp, const ExpectationEngine& engine,
                             const RngStream& stream) {
    dgp.validate();
    return PredictorDistribution::build(dgp, engine, stream).expectation(dgp.link, beta0);
}

InterceptSolution solve_numeric(const DgpSpec& dgp, const ExpectationEngine& engine, double tol,
                                const RngStream& stream) {
    if (!(tol > 0.0)) {
        fail(ErrorKind::Parameter, "tolerance must be > 0");
    }
    dgp.validate();
    const bool monte_carlo = std::holds_alternative<MonteCarlo>(engine);
    if (dgp.all_coefficients_zero()) {
        return zero_coefficient_solution(dgp, SolverMethod::Numeric);
    }

    const auto support = PredictorDistribution::build(dgp, engine, stream);
    const double target = dgp.target_mean;
    const auto residual_at = [&](double beta0) {
        return support.expectation(dgp.link, beta0).value - target;
    };

    InterceptSolution out;
    out.method = SolverMethod::Numeric;
    const auto finish = [&](double beta0, double residual) {
        out.beta0 = beta0;
        out.residual = std::abs(residual);
        if (monte_carlo) {
            out.mc_se = support.expectation(dgp.link, beta0).se;
            out.warnings.set(Warning::McFallback);
            if (out.mc_se > tol / 4.0) out.warnings.set(Warning::McPrecision);
        }
        return out;
    };

    // Bracket expansion around g(target).
    const double center = apply(dgp.link, target);
    double half_width = 1.0;
    double lo = center - half_width;
    double hi = center + half_width;
    double f_lo = residual_at(lo);
    double f_hi = residual_at(hi);
    constexpr std::size_t kMaxExpansions = 60;
    std::size_t expansions = 0;
    while (!(f_lo <= 0.0 && f_hi >= 0.0)) {
        if (expansions == kMaxExpansions || !std::isfinite(half_width)) {
            fail(ErrorKind::NoRoot, "could not bracket the intercept after " +
                                        std::to_string(kMaxExpansions) + " expansions");
        }
        half_width *= 2.0;
        lo = center - half_width;
        hi = center + half_width;
        f_lo = residual_at(lo);
        f_hi = residual_at(hi);
        ++expansions;
    }
    out.iterations = expansions;
    if (std::abs(f_lo) <= tol) return finish(lo, f_lo);
    if (std::abs(f_hi) <= tol) return finish(hi, f_hi);

    constexpr std::size_t kMaxBisections = 200;
    for (std::size_t it = 0; it < kMaxBisections; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = residual_at(mid);
        ++out.iterations;
        if (std::abs(f_mid) <= tol) return finish(mid, f_mid);
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    const bool low_is_best = std::abs(f_lo) <= std::abs(f_hi);
    const double best = low_is_best ? lo : hi;
    const double best_residual = low_is_best ? f_lo : f_hi;
    if (std::abs(best_residual) <= tol) return finish(best, best_residual);
    fail(ErrorKind::NoRoot, "bisection stalled with residual " + std::to_string(best_residual) +
                                " above tolerance " + std::to_string(tol));
}

} // namespace balint
