#include "balint/harness.hpp"

#include "balint/csv.hpp"
#include "balint/datagen.hpp"
#include "balint/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <ostream>
#include <set>
#include <thread>

namespace balint {

namespace {

constexpr std::uint64_t kSolveStreamTag = ~std::uint64_t{0};

unsigned resolve_workers(unsigned workers) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    return workers;
}

/// Calls fn(i) for i in [0, count) on up to `workers` threads. fn must not throw.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
}

struct ReplicateOutcome {
    double mean = 0.0;
    std::size_t clamps = 0;
    std::optional<Error> error;
};

ReplicateOutcome run_replicate(const Scenario& s, double beta0, std::size_t k) {
    ReplicateOutcome out;
    try {
        const auto data = generate(s.dgp, beta0, s.n, scenario_stream(s).substream(k));
        out.mean = data.outcome_mean();
        out.clamps = data.clamp_count;
    } catch (const Error& e) {
        out.error = Error(e.kind(), "replicate " + std::to_string(k) + ": " + e.what());
    }
    return out;
}

ScenarioResult describe(const Scenario& s) {
    ScenarioResult r;
    r.scenario_id = s.id;
    r.link = s.dgp.link;
    r.outcome_family = std::string(family_name(s.dgp.outcome));
    r.solver = s.solver;
    r.z_dist = s.z_dist;
    r.beta2 = s.beta2;
    r.target_mean = s.dgp.target_mean;
    r.n = s.n;
    r.replicates = s.replicates;
    r.master_seed = s.master_seed;
    return r;
}

/// Fills the aggregate fields from per-replicate outcomes taken in index order.
void aggregate(ScenarioResult& r, std::span<const ReplicateOutcome> reps) {
    for (std::size_t k = 0; k < reps.size(); ++k) {
        if (reps[k].error) {
            r.status = ScenarioStatus::Error;
            r.message = reps[k].error->what();
            return;
        }
    }
    const double count = static_cast<double>(reps.size());
    double sum = 0.0;
    std::size_t clamps = 0;
    r.replicate_means.clear();
    r.replicate_means.reserve(reps.size());
    for (const auto& rep : reps) {
        sum += rep.mean;
        clamps += rep.clamps;
        r.replicate_means.push_back(rep.mean);
    }
    r.achieved_mean = sum / count;
    double ss = 0.0;
    for (const auto& rep : reps) {
        ss += (rep.mean - r.achieved_mean) * (rep.mean - r.achieved_mean);
    }
    r.bias = r.achieved_mean - r.target_mean;
    r.bias_se = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    r.clamp_rate = static_cast<double>(clamps) / (count * static_cast<double>(r.n));
    if (clamps > 0) r.warnings.set(Warning::Clamped);
}

void check_scenario(const Scenario& s) {
    if (s.replicates < 2) {
        fail(ErrorKind::Parameter, "replicates must be >= 2");
    }
    if (s.n == 0) {
        fail(ErrorKind::Parameter, "n must be >= 1");
    }
}

std::string format_axis(double value) { return format_real(value, 9); }

} // namespace

std::string_view to_string(EngineChoice engine) noexcept {
    switch (engine) {
    case EngineChoice::Auto: return "auto";
    case EngineChoice::Exact: return "exact";
    case EngineChoice::Mc: return "mc";
    }
    return "auto";
}

EngineChoice parse_engine_choice(std::string_view name) {
    if (name == "auto") return EngineChoice::Auto;
    if (name == "exact") return EngineChoice::Exact;
    if (name == "mc") return EngineChoice::Mc;
    fail(ErrorKind::Config, "unknown engine '" + std::string(name) + "' (expected auto|exact|mc)");
}

std::string_view to_string(ScenarioStatus status) noexcept {
    switch (status) {
    case ScenarioStatus::Ok: return "ok";
    case ScenarioStatus::Skipped: return "skipped";
    case ScenarioStatus::Error: return "error";
    }
    return "error";
}

InterceptSolution solve(const DgpSpec& dgp, SolverMethod method, const ExpectationEngine& engine,
                        double tol, bool mc_fallback, const RngStream& stream) {
    switch (method) {
    case SolverMethod::LinearScale:
        return solve_linear_scale(dgp);
    case SolverMethod::LogClosedForm: {
        LogSolveOptions options;
        options.mc_fallback = mc_fallback;
        options.stream = stream;
        if (const auto* mc = std::get_if<MonteCarlo>(&engine)) options.n_mc = mc->n_mc;
        return solve_log_closed_form(dgp, options);
    }
    case SolverMethod::Numeric:
        return solve_numeric(dgp, engine, tol, stream);
    }
    fail(ErrorKind::Parameter, "unknown solver");
}

bool log_link_diverges(const DgpSpec& dgp) {
    if (dgp.link != Link::Log) return false;
    for (const auto& term : dgp.terms) {
        if (const auto* g = std::get_if<Gamma>(&term.spec)) {
            if (!term.betas.empty() && term.betas[0] >= g->rate) return true;
        }
    }
    return false;
}

RngStream scenario_stream(const Scenario& s) noexcept {
    return RngStream{s.master_seed, fnv1a64(s.id)};
}

RngStream solve_stream(const Scenario& s) noexcept {
    return scenario_stream(s).substream(kSolveStreamTag);
}

ScenarioResult run_scenario(const Scenario& s, unsigned workers) {
    ScenarioResult result = describe(s);
    try {
        check_scenario(s);
        const auto solution = solve(s.dgp, s.solver, s.engine, s.tol, s.mc_fallback,
                                    solve_stream(s));
        result.beta0 = solution.beta0;
        result.warnings = solution.warnings;

        std::vector<ReplicateOutcome> reps(s.replicates);
        parallel_for(s.replicates, workers,
                     [&](std::size_t k) { reps[k] = run_replicate(s, solution.beta0, k); });
        aggregate(result, reps);
        if (result.status == ScenarioStatus::Error) {
            throw Error(ErrorKind::OutOfRange, result.message);
        }
    } catch (const Error& e) {
        throw Error(e.kind(), "scenario " + s.id + ": " + e.what());
    }
    return result;
}

std::vector<Scenario> expand_grid(const GridConfig& config) {
    if (config.targets.empty()) {
        fail(ErrorKind::Config, "targets: grid needs at least one target mean");
    }
    if (!config.z_axis.empty() && config.beta2.empty()) {
        fail(ErrorKind::Config, "beta2: a z axis needs at least one beta2 value");
    }
    if (config.z_axis.empty() && !config.beta2.empty()) {
        fail(ErrorKind::Config, "beta2: given without a z axis");
    }
    if (config.replicates < 2) {
        fail(ErrorKind::Config, "replicates: must be >= 2");
    }
    if (config.n == 0) {
        fail(ErrorKind::Config, "n: must be >= 1");
    }
    if (config.n_mc < 2) {
        fail(ErrorKind::Config, "n_mc: must be >= 2");
    }

    struct AxisPoint {
        std::optional<AxisCovariate> z;
        double beta2 = 0.0;
    };
    std::vector<AxisPoint> points;
    if (config.z_axis.empty()) {
        points.push_back({});
    } else {
        for (const auto& z : config.z_axis) {
            for (double b : config.beta2) points.push_back({z, b});
        }
    }

    std::vector<Scenario> out;
    std::set<std::string> ids;
    for (const auto& point : points) {
        for (double target : config.targets) {
            Scenario s;
            s.dgp.link = config.link;
            s.dgp.outcome = config.outcome;
            s.dgp.target_mean = target;
            if (config.exposure) {
                s.dgp.terms.push_back(
                    {"x", config.exposure->variable, config.exposure->betas});
            }
            if (point.z) {
                s.dgp.terms.push_back({"z", point.z->spec, {point.beta2}});
                s.z_dist = point.z->label;
                s.beta2 = point.beta2;
            }
            s.id = config.name + "/" + s.z_dist + "/" + format_axis(s.beta2) + "/" +
                   format_axis(target);
            if (!ids.insert(s.id).second) {
                fail(ErrorKind::Config, "z_axis: duplicate scenario id '" + s.id +
                                            "' (give axis entries distinct labels)");
            }

            if (config.solver) {
                s.solver = *config.solver;
            } else {
                s.solver = config.link == Link::Identity ? SolverMethod::LinearScale
                           : config.link == Link::Log    ? SolverMethod::LogClosedForm
                                                         : SolverMethod::Numeric;
            }
            const bool exact = config.engine == EngineChoice::Exact ||
                               (config.engine == EngineChoice::Auto && supports_exact(s.dgp));
            if (exact) {
                s.engine = ExactEnumeration{};
            } else {
                s.engine = MonteCarlo{config.n_mc};
            }
            s.tol = config.tol.value_or(exact ? kDefaultExactTol : kDefaultMcTol);
            s.mc_fallback = config.mc_fallback;
            s.n = config.n;
            s.replicates = config.replicates;
            s.master_seed = config.master_seed;
            out.push_back(std::move(s));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
    return out;
}

std::vector<ScenarioResult> run_grid(const GridConfig& config) {
    const auto scenarios = expand_grid(config);
    std::vector<ScenarioResult> results;
    results.reserve(scenarios.size());
    for (const auto& s : scenarios) results.push_back(describe(s));

    parallel_for(scenarios.size(), config.workers, [&](std::size_t i) {
        const auto& s = scenarios[i];
        auto& r = results[i];
        if (log_link_diverges(s.dgp)) {
            r.status = ScenarioStatus::Skipped;
            r.warnings.set(Warning::Divergent);
            r.message = "E[exp(beta2 Z)] is infinite (beta2 >= gamma rate)";
            return;
        }
        try {
            const auto solution = solve(s.dgp, s.solver, s.engine, s.tol, s.mc_fallback,
                                        solve_stream(s));
            r.beta0 = solution.beta0;
            r.warnings = solution.warnings;
        } catch (const Error& e) {
            r.status = ScenarioStatus::Error;
            r.message = "scenario " + s.id + ": " + e.what();
        }
    });

    struct Job {
        std::size_t scenario;
        std::size_t replicate;
    };
    std::vector<Job> jobs;
    std::vector<std::size_t> first_job(scenarios.size(), 0);
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        first_job[i] = jobs.size();
        if (results[i].status != ScenarioStatus::Ok) continue;
        for (std::size_t k = 0; k < scenarios[i].replicates; ++k) jobs.push_back({i, k});
    }
    std::vector<ReplicateOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(), config.workers, [&](std::size_t j) {
        const auto& job = jobs[j];
        outcomes[j] = run_replicate(scenarios[job.scenario], results[job.scenario].beta0,
                                    job.replicate);
    });

    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (results[i].status != ScenarioStatus::Ok) continue;
        aggregate(results[i],
                  std::span<const ReplicateOutcome>(outcomes).subspan(first_job[i],
                                                                      scenarios[i].replicates));
    }
    return results;
}

void write_results_csv(std::ostream& out, const std::vector<ScenarioResult>& results) {
    out << "scenario_id,link,outcome_family,solver,z_dist,beta2,target_mean,beta0,achieved_mean,"
           "bias,bias_se,clamp_rate,n,replicates,master_seed,status,warnings\n";
    for (const auto& r : results) {
        const bool ok = r.status == ScenarioStatus::Ok;
        const auto real = [&](double v) { return ok ? format_real(v, 9) : std::string{}; };
        out << csv_field(r.scenario_id) << ',' << to_string(r.link) << ',' << r.outcome_family
            << ',' << to_string(r.solver) << ',' << csv_field(r.z_dist) << ','
            << format_real(r.beta2, 9) << ',' << format_real(r.target_mean, 9) << ','
            << real(r.beta0) << ',' << real(r.achieved_mean) << ',' << real(r.bias) << ','
            << real(r.bias_se) << ',' << real(r.clamp_rate) << ',' << r.n << ',' << r.replicates
            << ',' << r.master_seed << ',' << to_string(r.status) << ','
            << csv_field(r.warnings.to_string()) << '\n';
    }
}

} // namespace balint
