#include "balint/cli/config.hpp"
#include "balint/error.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace balint;
using namespace balint::cli;
using nlohmann::json;

namespace {

const std::filesystem::path kConfigs{BALINT_CONFIG_DIR};

std::string config_error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

json minimal() {
    return json::parse(R"({
        "link": "log",
        "outcome": {"family": "normal", "sd": 0.1},
        "exposure": {"probs": [0.5, 0.35, 0.15], "betas": [0.2, -0.2]},
        "z_axis": [{"dist": "normal", "mu": 0, "sigma": 1}],
        "beta2": [1],
        "targets": [0.5]
    })");
}

} // namespace

TEST_CASE("bundled fig1 config") {
    const auto c = load_config(kConfigs / "fig1.json");
    CHECK(c.name == "fig1");
    CHECK(c.link == Link::Log);
    CHECK(c.outcome == OutcomeFamily{NormalOutcome{0.1}});
    REQUIRE(c.exposure);
    CHECK(c.exposure->variable.probs == std::vector<double>{0.5, 0.35, 0.15});
    CHECK(c.exposure->variable.coding == CodingScheme::ReferenceCell);
    CHECK(c.exposure->betas == std::vector<double>{0.2, -0.2});
    REQUIRE(c.z_axis.size() == 4);
    CHECK(c.z_axis[0].spec == CovariateSpec{Bernoulli{0.8}});
    CHECK(c.z_axis[1].spec == CovariateSpec{Gamma{1, 1.5}});
    CHECK(c.z_axis[2].spec == CovariateSpec{Normal{0, 1}});
    CHECK(c.z_axis[3].spec == CovariateSpec{UniformContinuous{-1, 3}});
    CHECK(c.beta2 == std::vector<double>{1, 1.5, 2, 2.5, 3});
    CHECK(c.targets.size() == 9);
    CHECK(c.n == 10'000);
    CHECK(c.replicates == 500);
    CHECK(c.solver == SolverMethod::LogClosedForm);
}

TEST_CASE("bundled suppfig1 and full-scale configs") {
    const auto fig1 = load_config(kConfigs / "fig1.json");
    auto supp = load_config(kConfigs / "suppfig1.json");
    CHECK(supp.outcome == OutcomeFamily{BernoulliOutcome{ClampPolicy::ClampToUnit}});
    CHECK(supp.z_axis == fig1.z_axis);
    CHECK(supp.beta2 == fig1.beta2);
    CHECK(supp.targets == fig1.targets);

    auto full = load_config(kConfigs / "fig1_full.json");
    CHECK(full.replicates == 10'000);
    full.replicates = fig1.replicates;
    full.name = fig1.name;
    CHECK(full == fig1);

    const auto exposure_only = load_config(kConfigs / "fig1_exposure_only.json");
    CHECK(exposure_only.z_axis.empty());
    CHECK(exposure_only.targets == std::vector<double>{0.5});
}

TEST_CASE("round trip through JSON") {
    for (const char* name : {"fig1.json", "suppfig1.json", "fig1_exposure_only.json"}) {
        const auto c = load_config(kConfigs / name);
        CHECK(parse_config(to_json(c)) == c);
    }
    GridConfig c;
    c.link = Link::Logit;
    c.outcome = BernoulliOutcome{ClampPolicy::RejectOutOfRange};
    c.z_axis = {{"heavy", Cauchy{0.5, 2}}, {"cat", Categorical{{0.3, 0.7}, CodingScheme::Effect}}};
    c.beta2 = {0.25};
    c.targets = {0.2};
    c.engine = EngineChoice::Mc;
    c.tol = 1e-5;
    c.mc_fallback = true;
    c.workers = 3;
    c.master_seed = 18'446'744'073'709'551'615ull;
    CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("defaults apply to omitted keys") {
    const auto c = parse_config(minimal());
    CHECK(c.n == 10'000);
    CHECK(c.replicates == 500);
    CHECK_FALSE(c.solver);
    CHECK(c.engine == EngineChoice::Auto);
    CHECK(c.workers == 0);
    CHECK(c.z_axis[0].label == "normal");
}

TEST_CASE("unknown keys are named") {
    auto doc = minimal();
    doc["replicate"] = 10;
    CHECK(config_error_of(doc).find("'replicate'") != std::string::npos);

    doc = minimal();
    doc["z_axis"][0]["sd"] = 1;
    CHECK(config_error_of(doc).find("'z_axis[0].sd'") != std::string::npos);

    doc = minimal();
    doc["outcome"]["clamp"] = "clamp_to_unit";
    CHECK(config_error_of(doc).find("'outcome.clamp'") != std::string::npos);
}

TEST_CASE("invalid values name their key") {
    auto doc = minimal();
    doc["z_axis"][0]["sigma"] = -1;
    CHECK(config_error_of(doc).find("'z_axis[0]'") != std::string::npos);

    doc = minimal();
    doc["z_axis"][0].erase("sigma");
    CHECK(config_error_of(doc).find("'z_axis[0].sigma'") != std::string::npos);

    doc = minimal();
    doc["link"] = "probit";
    CHECK(config_error_of(doc).find("'link'") != std::string::npos);

    doc = minimal();
    doc["targets"] = {0.5, -1.0};
    CHECK(config_error_of(doc).find("'targets[1]'") != std::string::npos);

    doc = minimal();
    doc["exposure"]["betas"] = {0.2};
    CHECK(config_error_of(doc).find("'exposure.betas'") != std::string::npos);

    doc = minimal();
    doc["exposure"]["probs"] = {0.5, 0.35, 0.1};
    CHECK(config_error_of(doc).find("'exposure.probs'") != std::string::npos);

    doc = minimal();
    doc["n"] = -5;
    CHECK(config_error_of(doc).find("'n'") != std::string::npos);

    doc = minimal();
    doc["solver"] = "newton";
    CHECK(config_error_of(doc).find("'solver'") != std::string::npos);

    doc = minimal();
    doc["outcome"] = {{"family", "bernoulli"}};
    doc["targets"] = {1.5};
    CHECK(config_error_of(doc).find("'targets[0]'") != std::string::npos);

    CHECK_FALSE(config_error_of(json::array()).empty());
}

TEST_CASE("loading reports missing files and malformed JSON") {
    try {
        load_config(kConfigs / "does_not_exist.json");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
    const auto path = std::filesystem::temp_directory_path() / "balint_config_test_bad.json";
    {
        std::ofstream(path) << "{\"link\": ";
    }
    try {
        load_config(path);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
    std::filesystem::remove(path);
}

TEST_CASE("command-line overrides win over the file") {
    auto c = parse_config(minimal());
    Overrides none;
    auto unchanged = c;
    apply_overrides(unchanged, none);
    CHECK(unchanged == c);

    Overrides o;
    o.seed = 99;
    o.replicates = 7;
    o.workers = 2;
    o.engine = EngineChoice::Mc;
    o.n_mc = 1234;
    o.tol = 1e-3;
    apply_overrides(c, o);
    CHECK(c.master_seed == 99);
    CHECK(c.replicates == 7);
    CHECK(c.workers == 2);
    CHECK(c.engine == EngineChoice::Mc);
    CHECK(c.n_mc == 1234);
    CHECK(c.tol == 1e-3);
}
