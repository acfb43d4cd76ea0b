#pragma once

#include "balint/distributions.hpp"
#include "balint/intercept.hpp"
#include "balint/warnings.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace balint {

/// A covariate distribution on the grid's Z axis.
struct AxisCovariate {
    std::string label; // used in scenario ids and the z_dist column
    CovariateSpec spec;
    friend bool operator==(const AxisCovariate&, const AxisCovariate&) = default;
};

/// The nominal exposure X with fixed coefficients.
struct ExposureConfig {
    Categorical variable;
    std::vector<double> betas;
    friend bool operator==(const ExposureConfig&, const ExposureConfig&) = default;
};

enum class EngineChoice { Auto, Exact, Mc };

std::string_view to_string(EngineChoice engine) noexcept;
/// "auto" | "exact" | "mc".
EngineChoice parse_engine_choice(std::string_view name);

/// Declarative scenario grid: the Cartesian product Z axis x beta2 axis x targets.
struct GridConfig {
    std::string name = "grid";
    Link link = Link::Log;
    OutcomeFamily outcome = NormalOutcome{0.1};
    std::optional<ExposureConfig> exposure;
    std::vector<AxisCovariate> z_axis; // empty: exposure-only model
    std::vector<double> beta2;
    std::vector<double> targets;
    std::size_t n = 10'000;
    std::size_t replicates = 500;
    std::uint64_t master_seed = 20240101;
    std::optional<SolverMethod> solver; // nullopt: pick by link
    EngineChoice engine = EngineChoice::Auto;
    std::size_t n_mc = 100'000;
    std::optional<double> tol; // nullopt: 1e-10 exact, 1e-4 Monte Carlo
    bool mc_fallback = false;
    unsigned workers = 0; // 0: hardware concurrency

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct Scenario {
    std::string id;
    DgpSpec dgp;
    SolverMethod solver = SolverMethod::LogClosedForm;
    ExpectationEngine engine = ExactEnumeration{};
    double tol = kDefaultExactTol;
    bool mc_fallback = false;
    std::size_t n = 10'000;
    std::size_t replicates = 500;
    std::uint64_t master_seed = 0;
    std::string z_dist = "none";
    double beta2 = 0.0;
};

enum class ScenarioStatus { Ok, Skipped, Error };
std::string_view to_string(ScenarioStatus status) noexcept;

struct ScenarioResult {
    std::string scenario_id;
    Link link = Link::Identity;
    std::string outcome_family;
    SolverMethod solver = SolverMethod::LinearScale;
    std::string z_dist;
    double beta2 = 0.0;
    double target_mean = 0.0;
    double beta0 = 0.0;
    double achieved_mean = 0.0;
    double bias = 0.0;
    double bias_se = 0.0;
    double clamp_rate = 0.0;
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::uint64_t master_seed = 0;
    ScenarioStatus status = ScenarioStatus::Ok;
    WarningSet warnings;
    std::string message; // error text for status Error, divergence note for Skipped
    std::vector<double> replicate_means;
};

/// Solver dispatch used by the harness and CLI.
InterceptSolution solve(const DgpSpec& dgp, SolverMethod method, const ExpectationEngine& engine,
                        double tol, bool mc_fallback, const RngStream& stream);

/// Whether E[exp(beta X)] is infinite for some term under a log link.
bool log_link_diverges(const DgpSpec& dgp);

/// Stream keyed by (master_seed, scenario id); replicate k uses substream k.
RngStream scenario_stream(const Scenario& s) noexcept;

/// Substream reserved for Monte Carlo draws inside the intercept solve.
RngStream solve_stream(const Scenario& s) noexcept;

/// Solves the intercept once and aggregates `replicates` simulated datasets.
/// Errors propagate prefixed with the scenario id.
ScenarioResult run_scenario(const Scenario& s, unsigned workers = 1);

/// Scenarios in id order. Throws Error(Config) on an empty or inconsistent grid.
std::vector<Scenario> expand_grid(const GridConfig& config);

/// Runs every cell; divergent log-link cells become Skipped rows and per-cell
/// failures become Error rows. Output is independent of `workers`.
std::vector<ScenarioResult> run_grid(const GridConfig& config);

/// Result table with 9 significant digits; header included.
void write_results_csv(std::ostream& out, const std::vector<ScenarioResult>& results);

} // namespace balint
