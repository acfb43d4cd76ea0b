#include "balint/distributions.hpp"
#include "balint/error.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

using namespace balint;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

MomentEstimate mc_single(const CovariateSpec& spec, double beta, std::size_t n_mc,
                         std::uint64_t stream) {
    const CovariateSpec specs[] = {spec};
    const double betas[] = {beta};
    return mc_exp_moment(independent_sampler(specs), betas, n_mc, {2024, stream});
}

} // namespace

TEST_CASE("sample examples") {
    CHECK(sample(Bernoulli{1.0}, 5, {1, 0}) == std::vector<double>(5, 1.0));

    const auto levels = sample(Categorical{{0.5, 0.35, 0.15}}, 1'000'000, {1, 1});
    std::array<double, 3> counts{};
    for (double l : levels) counts.at(static_cast<std::size_t>(l)) += 1.0;
    CHECK(std::abs(counts[0] / 1e6 - 0.5) < 0.005);
    CHECK(std::abs(counts[1] / 1e6 - 0.35) < 0.005);
    CHECK(std::abs(counts[2] / 1e6 - 0.15) < 0.005);

    const auto z = sample(Normal{0.0, 1.0}, 1'000'000, {1, 2});
    CHECK(std::abs(std::accumulate(z.begin(), z.end(), 0.0) / 1e6) < 0.01);
}

TEST_CASE("sample is bitwise reproducible per (spec, n, seed, stream)") {
    const CovariateSpec specs[] = {Bernoulli{0.3}, UniformContinuous{-1, 3}, Normal{1, 2},
                                   Gamma{0.7, 1.5}, Cauchy{0, 1}, Categorical{{0.2, 0.8}}};
    for (const auto& spec : specs) {
        CHECK(sample(spec, 1000, {5, 6}) == sample(spec, 1000, {5, 6}));
        CHECK(sample(spec, 1000, {5, 6}) != sample(spec, 1000, {5, 7}));
    }
}

TEST_CASE("sample rejects invalid parameters") {
    CHECK(kind_of([] { sample(Bernoulli{1.2}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(UniformContinuous{2, 2}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(Normal{0, 0}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(Gamma{0, 1}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(Gamma{1, -1}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(Cauchy{0, 0}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(Categorical{{0.5, 0.4}}, 3, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { sample(Normal{}, 0, {}); }) == ErrorKind::Parameter);
}

TEST_CASE("mean examples") {
    CHECK(mean(Bernoulli{0.8}) == 0.8);
    CHECK(mean(UniformContinuous{-1.0, 3.0}) == 1.0);
    CHECK(mean(Gamma{1.0, 1.5}) == Catch::Approx(2.0 / 3.0));
    CHECK(kind_of([] { mean(Cauchy{0.0, 1.0}); }) == ErrorKind::UndefinedMoment);
    CHECK(kind_of([] { mean(Categorical{{0.5, 0.5}}); }) == ErrorKind::Unsupported);
}

TEST_CASE("encoded_mean of a categorical applies its coding") {
    const auto m = encoded_mean(Categorical{{0.5, 0.35, 0.15}, CodingScheme::ReferenceCell});
    CHECK(m[0] == Catch::Approx(0.35));
    CHECK(m[1] == Catch::Approx(0.15));
    const auto w = encoded_mean(Categorical{{0.5, 0.35, 0.15}, CodingScheme::WeightedEffect});
    CHECK(std::abs(w[0]) < 1e-15);
    CHECK(std::abs(w[1]) < 1e-15);
    CHECK(encoded_mean(Normal{2.5, 1.0}) == std::vector<double>{2.5});
}

TEST_CASE("mgf examples and errors") {
    const CovariateSpec with_mgf[] = {Bernoulli{0.8}, UniformContinuous{-1, 3}, Normal{0.3, 2},
                                      Gamma{1, 1.5}};
    for (const auto& spec : with_mgf) {
        CHECK(mgf(spec, 0.0) == 1.0);
    }
    CHECK(mgf(Cauchy{0, 1}, 0.0) == 1.0);
    CHECK(mgf(Normal{0, 1}, 1.0) == Catch::Approx(1.6487212707001282).epsilon(1e-15));
    CHECK(kind_of([] { mgf(Gamma{1.0, 1.5}, 2.0); }) == ErrorKind::Domain);
    CHECK(kind_of([] { mgf(Gamma{1.0, 1.5}, 1.5); }) == ErrorKind::Domain);
    CHECK(kind_of([] { mgf(Cauchy{0.0, 1.0}, 1.0); }) == ErrorKind::NoMgf);
    CHECK(kind_of([] { mgf(Categorical{{0.5, 0.5}}, 1.0); }) == ErrorKind::Unsupported);
}

TEST_CASE("closed-form MGFs agree with quadrature", "[oracle]") {
    const auto density_mgf = [](auto density, double lo, double hi, double t) {
        return oracle::simpson([&](double x) { return std::exp(t * x) * density(x); }, lo, hi);
    };
    for (double t : {-2.0, -0.5, 1e-9, 0.7, 1.9}) {
        const double uniform = density_mgf([](double) { return 0.25; }, -1.0, 3.0, t);
        CHECK(mgf(UniformContinuous{-1, 3}, t) == Catch::Approx(uniform).epsilon(1e-10));

        const double normal = density_mgf(
            [](double x) { return std::exp(-0.5 * (x - 0.3) * (x - 0.3) / 0.64) / std::sqrt(2 * M_PI * 0.64); },
            0.3 - 14.0, 0.3 + 14.0, t);
        CHECK(mgf(Normal{0.3, 0.8}, t) == Catch::Approx(normal).epsilon(1e-9));
    }
    for (double t : {-3.0, -1.0, 0.4, 1.0, 1.4}) {
        // Gamma(2, 1.5) density times exp(tx), truncated where it is below e^-60.
        const double decay = 1.5 - t;
        const double gamma = oracle::simpson(
            [&](double x) { return 2.25 * x * std::exp(-decay * x); }, 0.0, 60.0 / decay, 200000);
        const double spec_value = mgf(Gamma{2.0, 1.5}, t);
        CHECK(spec_value == Catch::Approx(gamma).epsilon(1e-9));
    }
    // Bernoulli: two-point enumeration.
    for (double t : {-1.0, 0.5, 2.0}) {
        CHECK(mgf(Bernoulli{0.8}, t) == Catch::Approx(0.2 + 0.8 * std::exp(t)).epsilon(1e-15));
    }
}

TEST_CASE("mgf near t = 0 uses the analytic limit for the uniform") {
    for (double t : {1e-300, -1e-200, 1e-12}) {
        CHECK(mgf(UniformContinuous{-1, 3}, t) == Catch::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("mc_exp_moment examples") {
    const CovariateSpec specs[] = {Normal{0, 1}, Bernoulli{0.3}};
    const double zeros[] = {0.0, 0.0};
    const auto flat = mc_exp_moment(independent_sampler(specs), zeros, 1000, {1, 1});
    CHECK(flat.estimate == 1.0);
    CHECK(flat.se == 0.0);

    const auto normal = mc_single(Normal{0, 1}, 1.0, 1'000'000, 1);
    CHECK(std::abs(normal.estimate - 1.6487212707001282) <= 4.0 * normal.se);

    const auto bernoulli = mc_single(Bernoulli{0.8}, 2.0, 1'000'000, 2);
    const double two_point = 0.2 + 0.8 * std::exp(2.0);
    CHECK(two_point == Catch::Approx(6.111244879144521).epsilon(1e-15));
    CHECK(std::abs(bernoulli.estimate - two_point) <= 4.0 * bernoulli.se);
    CHECK(bernoulli.warnings.has(Warning::McFallback));
}

TEST_CASE("mc_exp_moment flags heavy-tailed inputs") {
    const auto cauchy = mc_single(Cauchy{0, 1}, 0.1, 1000, 3);
    CHECK(cauchy.warnings.has(Warning::HeavyTail));
    CHECK_FALSE(mc_single(Normal{0, 1}, 0.1, 1000, 3).warnings.has(Warning::HeavyTail));
}

TEST_CASE("mc_exp_moment validates its inputs") {
    const CovariateSpec specs[] = {Normal{0, 1}};
    const double one[] = {1.0};
    const double two[] = {1.0, 2.0};
    CHECK(kind_of([&] { mc_exp_moment(independent_sampler(specs), one, 1, {}); }) ==
          ErrorKind::Parameter);
    CHECK(kind_of([&] { mc_exp_moment(independent_sampler(specs), two, 100, {}); }) ==
          ErrorKind::Parameter);
}

TEST_CASE("mc_exp_moment handles a dependent joint sampler") {
    // X ~ N(0,1), Y = X: E[exp(a X + b Y)] = exp((a+b)^2 / 2).
    JointSampler joint;
    joint.dimension = 2;
    joint.draw = [](Rng& rng, std::span<double> row) {
        row[0] = rng.normal();
        row[1] = row[0];
    };
    const double betas[] = {0.3, 0.4};
    const auto est = mc_exp_moment(joint, betas, 200'000, {8, 8});
    CHECK(std::abs(est.estimate - std::exp(0.49 / 2.0)) <= 4.0 * est.se);
}

TEST_CASE("MC exponential moments match closed-form MGFs over a t grid", "[property]") {
    struct Case {
        CovariateSpec spec;
        std::vector<double> ts;
    };
    const std::vector<Case> cases{
        {Bernoulli{0.8}, {-2.0, -1.0, 0.5, 1.0, 2.0}},
        {UniformContinuous{-1, 3}, {-1.0, -0.3, 0.25, 0.5, 1.0}},
        {Normal{0, 1}, {-1.0, -0.5, 0.5, 1.0, 1.5}},
        {Gamma{1, 1.5}, {-2.0, -1.0, 0.2, 0.5, 0.7}},
    };
    std::uint64_t stream = 100;
    for (const auto& c : cases) {
        for (double t : c.ts) {
            const auto est = mc_single(c.spec, t, 100'000, stream++);
            INFO(family_name(c.spec) << " t=" << t);
            CHECK(std::abs(est.estimate - mgf(c.spec, t)) <= 4.0 * est.se);
        }
    }
}

TEST_CASE("Jensen: mgf(t) > exp(t mean) for non-degenerate covariates", "[property]") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        CovariateSpec spec;
        switch (trial % 4) {
        case 0: spec = Bernoulli{0.01 + 0.98 * unit(gen)}; break;
        case 1: spec = UniformContinuous{-2 * unit(gen), 0.1 + 2 * unit(gen)}; break;
        case 2: spec = Normal{unit(gen) - 0.5, 0.1 + unit(gen)}; break;
        default: spec = Gamma{0.2 + 3 * unit(gen), 0.5 + 3 * unit(gen)}; break;
        }
        double t = 4.0 * unit(gen) - 2.0;
        if (const auto* g = std::get_if<Gamma>(&spec)) t = std::min(t, 0.9 * g->rate);
        if (std::abs(t) < 1e-3) t = 0.5;
        INFO(family_name(spec) << " t=" << t);
        CHECK(mgf(spec, t) > std::exp(t * mean(spec)));
    }
    CHECK(mgf(Bernoulli{1.0}, 1.3) == Catch::Approx(std::exp(1.3)));
    CHECK(mgf(Bernoulli{0.0}, 1.3) == 1.0);
}

TEST_CASE("independent sampler expands categoricals into coded columns") {
    const CovariateSpec specs[] = {Categorical{{0.5, 0.35, 0.15}, CodingScheme::Effect},
                                   Normal{0, 1}};
    const auto sampler = independent_sampler(specs);
    CHECK(sampler.dimension == 3);
    Rng rng({1, 1});
    std::vector<double> row(3);
    for (int i = 0; i < 100; ++i) {
        sampler.draw(rng, row);
        const bool reference = row[0] == -1.0 && row[1] == -1.0;
        const bool level1 = row[0] == 1.0 && row[1] == 0.0;
        const bool level2 = row[0] == 0.0 && row[1] == 1.0;
        CHECK((reference || level1 || level2));
    }
}
