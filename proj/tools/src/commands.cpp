#include "balint/cli/commands.hpp"

#include "balint/cli/config.hpp"
#include "balint/csv.hpp"
#include "balint/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace balint::cli {

namespace {

constexpr std::uint64_t kVerifyStreamTag = 0x564552494659ull; // "VERIFY"

Scenario single_scenario(const GridConfig& config) {
    auto scenarios = expand_grid(config);
    if (scenarios.size() != 1) {
        fail(ErrorKind::Config, "config describes " + std::to_string(scenarios.size()) +
                                    " scenarios; solve/verify need exactly one (single target, "
                                    "at most one z distribution and beta2)");
    }
    return std::move(scenarios.front());
}

InterceptSolution solve_scenario(const Scenario& s) {
    return solve(s.dgp, s.solver, s.engine, s.tol, s.mc_fallback, solve_stream(s));
}

int report_error(const Error& e, std::ostream& err) {
    err << "balint: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return is_infeasibility(e.kind()) ? kExitInfeasible : kExitUsage;
}

} // namespace

int cmd_solve(const GridConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto s = single_scenario(config);
        const auto solution = solve_scenario(s);
        out << "beta0,method,residual,mc_se,warnings\n"
            << format_real(solution.beta0, 17) << ',' << to_string(solution.method) << ','
            << format_real(solution.residual, 9) << ',' << format_real(solution.mc_se, 9) << ','
            << csv_field(solution.warnings.to_string()) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int cmd_verify(const GridConfig& config, std::optional<double> beta0, std::ostream& out,
               std::ostream& err) {
    try {
        const auto s = single_scenario(config);
        const double intercept = beta0 ? *beta0 : solve_scenario(s).beta0;
        const auto estimate = expectation_of_mean(intercept, s.dgp, s.engine,
                                                  scenario_stream(s).substream(kVerifyStreamTag));
        const double gap = std::abs(estimate.value - s.dgp.target_mean);
        const double allowed = std::max(s.tol, 4.0 * estimate.se);
        const bool pass = gap <= allowed;
        out << "target,beta0,achieved,se,gap,status\n"
            << format_real(s.dgp.target_mean, 9) << ',' << format_real(intercept, 17) << ','
            << format_real(estimate.value, 17) << ',' << format_real(estimate.se, 9) << ','
            << format_real(gap, 9) << ',' << (pass ? "pass" : "fail") << '\n';
        if (!pass) {
            err << "balint: gap " << format_real(gap, 9) << " exceeds max(tol, 4*se) = "
                << format_real(allowed, 9) << '\n';
            return kExitVerifyFailed;
        }
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int cmd_simulate(const GridConfig& config, const std::filesystem::path& out_path,
                 std::ostream& err) {
    try {
        const auto results = run_grid(config);
        std::ostringstream csv;
        write_results_csv(csv, results);
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        if (!file || !(file << csv.str()) || !file.flush()) {
            fail(ErrorKind::Io, "cannot write '" + out_path.string() + "'");
        }

        std::size_t ok = 0, skipped = 0, errors = 0;
        double worst_ratio = 0.0;
        for (const auto& r : results) {
            switch (r.status) {
            case ScenarioStatus::Ok:
                ++ok;
                if (r.bias_se > 0.0) worst_ratio = std::max(worst_ratio, std::abs(r.bias) / r.bias_se);
                break;
            case ScenarioStatus::Skipped: ++skipped; break;
            case ScenarioStatus::Error:
                ++errors;
                err << "balint: " << r.message << '\n';
                break;
            }
        }
        err << "cells: " << results.size() << " total, " << ok << " run, " << skipped
            << " skipped, " << errors << " failed; max |bias|/se = " << format_real(worst_ratio, 4)
            << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Balancing intercepts for regression-based data-generating models"};
    app.require_subcommand(1);

    struct Options {
        std::string config;
        std::string out;
        std::optional<double> beta0;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> replicates;
        std::optional<unsigned> workers;
        std::optional<std::string> engine;
        std::optional<std::size_t> n_mc;
        std::optional<double> tol;
    } opts;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "Config document (JSON)")->required();
        sub->add_option("--seed", opts.seed, "Override master_seed");
        sub->add_option("--replicates", opts.replicates, "Override replicates");
        sub->add_option("--workers", opts.workers, "Worker threads (0 = auto)");
        sub->add_option("--engine", opts.engine, "Expectation engine")
            ->check(CLI::IsMember({"exact", "mc", "auto"}));
        sub->add_option("--n-mc", opts.n_mc, "Monte Carlo draws for expectations");
        sub->add_option("--tol", opts.tol, "Solver tolerance");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Solve the balancing intercept of one DGP");
    add_common(solve_cmd);
    auto* verify_cmd = app.add_subcommand("verify", "Check the marginal mean achieved by beta0");
    add_common(verify_cmd);
    verify_cmd->add_option("--beta0", opts.beta0, "Intercept to check (default: solve first)");
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario grid and write result CSV");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--out", opts.out, "Result CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    GridConfig config;
    try {
        config = load_config(opts.config);
        Overrides overrides;
        overrides.seed = opts.seed;
        overrides.replicates = opts.replicates;
        overrides.workers = opts.workers;
        if (opts.engine) overrides.engine = parse_engine_choice(*opts.engine);
        overrides.n_mc = opts.n_mc;
        overrides.tol = opts.tol;
        apply_overrides(config, overrides);
    } catch (const Error& e) {
        return report_error(e, err);
    }

    if (*solve_cmd) return cmd_solve(config, out, err);
    if (*verify_cmd) return cmd_verify(config, opts.beta0, out, err);
    return cmd_simulate(config, opts.out, err);
}

} // namespace balint::cli
