#include "balint/cli/config.hpp"

#include "balint/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace balint::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    fail(ErrorKind::Config, "config key '" + path + "': " + what);
}

/// Reads the members of one JSON object and rejects any it did not consume.
class ObjectReader {
public:
    ObjectReader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) config_error(display(), "expected an object");
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    std::string key_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& raw(const std::string& key) {
        if (!doc_.contains(key)) config_error(key_path(key), "missing required key");
        seen_.insert(key);
        return doc_.at(key);
    }

    double real(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number()) config_error(key_path(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) config_error(key_path(key), "must be finite");
        return x;
    }

    std::uint64_t count(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number_unsigned()) {
            if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
            config_error(key_path(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_string()) config_error(key_path(key), "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_boolean()) config_error(key_path(key), "expected true or false");
        return v.get<bool>();
    }

    std::vector<double> reals(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_array()) config_error(key_path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                config_error(key_path(key) + "[" + std::to_string(i) + "]", "expected a number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    /// Call once all known keys have been read.
    void finish() const {
        for (const auto& [key, value] : doc_.items()) {
            if (!seen_.contains(key)) config_error(key_path(key), "unknown key");
        }
    }

private:
    std::string display() const { return path_.empty() ? "<root>" : path_; }

    const json& doc_;
    std::string path_;
    std::set<std::string> seen_;
};

/// Converts library parse/validation errors into config errors at `path`.
template <class F>
decltype(auto) at_key(const std::string& path, F&& fn) {
    try {
        return std::forward<F>(fn)();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config &&
            std::string_view(e.what()).starts_with("config key")) {
            throw;
        }
        config_error(path, e.what());
    }
}

CovariateSpec parse_covariate(ObjectReader& r) {
    const auto dist = r.text("dist");
    CovariateSpec spec;
    if (dist == "bernoulli") {
        spec = Bernoulli{r.real("p")};
    } else if (dist == "uniform") {
        spec = UniformContinuous{r.real("a"), r.real("b")};
    } else if (dist == "normal") {
        spec = Normal{r.real("mu"), r.real("sigma")};
    } else if (dist == "gamma") {
        spec = Gamma{r.real("shape"), r.real("rate")};
    } else if (dist == "cauchy") {
        spec = Cauchy{r.real("location"), r.real("scale")};
    } else if (dist == "categorical") {
        Categorical cat;
        cat.probs = r.reals("probs");
        cat.coding = r.has("coding")
                         ? at_key(r.key_path("coding"),
                                  [&] { return parse_coding_scheme(r.text("coding")); })
                         : CodingScheme::ReferenceCell;
        spec = std::move(cat);
    } else {
        config_error(r.key_path("dist"), "unknown distribution '" + dist +
                                             "' (expected bernoulli|uniform|normal|gamma|cauchy|"
                                             "categorical)");
    }
    return spec;
}

json covariate_to_json(const CovariateSpec& spec) {
    json j;
    j["dist"] = std::string(family_name(spec));
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                j["p"] = d.p;
            } else if constexpr (std::is_same_v<T, UniformContinuous>) {
                j["a"] = d.a;
                j["b"] = d.b;
            } else if constexpr (std::is_same_v<T, Normal>) {
                j["mu"] = d.mu;
                j["sigma"] = d.sigma;
            } else if constexpr (std::is_same_v<T, Gamma>) {
                j["shape"] = d.shape;
                j["rate"] = d.rate;
            } else if constexpr (std::is_same_v<T, Cauchy>) {
                j["location"] = d.location;
                j["scale"] = d.scale;
            } else {
                j["probs"] = d.probs;
                j["coding"] = std::string(to_string(d.coding));
            }
        },
        spec);
    return j;
}

} // namespace

GridConfig parse_config(const json& doc) {
    ObjectReader root(doc, "");
    GridConfig config;

    if (root.has("name")) config.name = root.text("name");
    if (config.name.empty()) config_error("name", "must be non-empty");
    config.link = at_key("link", [&] { return parse_link(root.text("link")); });

    {
        ObjectReader outcome(root.raw("outcome"), "outcome");
        const auto family = outcome.text("family");
        if (family == "normal") {
            const double sd = outcome.real("sd");
            if (!(sd > 0.0)) config_error("outcome.sd", "must be > 0");
            config.outcome = NormalOutcome{sd};
        } else if (family == "bernoulli") {
            BernoulliOutcome b;
            if (outcome.has("clamp")) {
                b.clamp = at_key("outcome.clamp",
                                 [&] { return parse_clamp_policy(outcome.text("clamp")); });
            }
            config.outcome = b;
        } else {
            config_error("outcome.family", "unknown family '" + family +
                                               "' (expected normal|bernoulli)");
        }
        outcome.finish();
    }

    if (root.has("exposure")) {
        ObjectReader exposure(root.raw("exposure"), "exposure");
        ExposureConfig x;
        x.variable.probs = exposure.reals("probs");
        x.variable.coding =
            exposure.has("coding")
                ? at_key("exposure.coding",
                         [&] { return parse_coding_scheme(exposure.text("coding")); })
                : CodingScheme::ReferenceCell;
        x.betas = exposure.reals("betas");
        exposure.finish();
        at_key("exposure.probs", [&] { validate(CovariateSpec{x.variable}); });
        if (x.betas.size() + 1 != x.variable.probs.size()) {
            config_error("exposure.betas", "expected " +
                                               std::to_string(x.variable.probs.size() - 1) +
                                               " coefficients for " +
                                               std::to_string(x.variable.probs.size()) + " levels");
        }
        config.exposure = std::move(x);
    }

    if (root.has("z_axis")) {
        const auto& axis = root.raw("z_axis");
        if (!axis.is_array()) config_error("z_axis", "expected an array of distributions");
        for (std::size_t i = 0; i < axis.size(); ++i) {
            const std::string path = "z_axis[" + std::to_string(i) + "]";
            ObjectReader entry(axis[i], path);
            AxisCovariate z;
            z.spec = parse_covariate(entry);
            z.label = entry.has("label") ? entry.text("label") : std::string(family_name(z.spec));
            if (z.label.empty()) config_error(path + ".label", "must be non-empty");
            entry.finish();
            at_key(path, [&] { validate(z.spec); });
            if (arity(z.spec) != 1) {
                config_error(path, "axis covariates take a single beta2 coefficient");
            }
            config.z_axis.push_back(std::move(z));
        }
    }
    if (root.has("beta2")) config.beta2 = root.reals("beta2");

    config.targets = root.reals("targets");
    for (std::size_t i = 0; i < config.targets.size(); ++i) {
        const double t = config.targets[i];
        const std::string path = "targets[" + std::to_string(i) + "]";
        if (!in_domain(config.link, t)) {
            config_error(path, "target " + std::to_string(t) + " outside the domain of the " +
                                   std::string(to_string(config.link)) + " link");
        }
        if (std::holds_alternative<BernoulliOutcome>(config.outcome) && !(t > 0.0 && t < 1.0)) {
            config_error(path, "bernoulli outcome needs a target in (0,1)");
        }
    }

    if (root.has("n")) config.n = root.count("n");
    if (root.has("replicates")) config.replicates = root.count("replicates");
    if (root.has("master_seed")) config.master_seed = root.count("master_seed");
    if (root.has("solver")) {
        const auto solver = root.text("solver");
        if (solver != "auto") {
            config.solver = at_key("solver", [&] { return parse_solver_method(solver); });
        }
    }
    if (root.has("engine")) {
        config.engine = at_key("engine", [&] { return parse_engine_choice(root.text("engine")); });
    }
    if (root.has("n_mc")) config.n_mc = root.count("n_mc");
    if (root.has("tol")) {
        const double tol = root.real("tol");
        if (!(tol > 0.0)) config_error("tol", "must be > 0");
        config.tol = tol;
    }
    if (root.has("mc_fallback")) config.mc_fallback = root.boolean("mc_fallback");
    if (root.has("workers")) config.workers = static_cast<unsigned>(root.count("workers"));
    root.finish();

    if (config.n == 0) config_error("n", "must be >= 1");
    if (config.replicates < 2) config_error("replicates", "must be >= 2");
    if (config.n_mc < 2) config_error("n_mc", "must be >= 2");
    if (!config.z_axis.empty() && config.beta2.empty()) {
        config_error("beta2", "a z axis needs at least one beta2 value");
    }
    if (config.z_axis.empty() && !config.beta2.empty()) {
        config_error("beta2", "given without a z axis");
    }
    if (config.targets.empty()) config_error("targets", "needs at least one target mean");
    return config;
}

json to_json(const GridConfig& config) {
    json doc;
    doc["name"] = config.name;
    doc["link"] = std::string(to_string(config.link));
    if (const auto* normal = std::get_if<NormalOutcome>(&config.outcome)) {
        doc["outcome"] = {{"family", "normal"}, {"sd", normal->sd}};
    } else {
        const auto& b = std::get<BernoulliOutcome>(config.outcome);
        doc["outcome"] = {{"family", "bernoulli"}, {"clamp", std::string(to_string(b.clamp))}};
    }
    if (config.exposure) {
        doc["exposure"] = {{"probs", config.exposure->variable.probs},
                           {"betas", config.exposure->betas},
                           {"coding", std::string(to_string(config.exposure->variable.coding))}};
    }
    if (!config.z_axis.empty()) {
        json axis = json::array();
        for (const auto& z : config.z_axis) {
            auto entry = covariate_to_json(z.spec);
            entry["label"] = z.label;
            axis.push_back(std::move(entry));
        }
        doc["z_axis"] = std::move(axis);
        doc["beta2"] = config.beta2;
    }
    doc["targets"] = config.targets;
    doc["n"] = config.n;
    doc["replicates"] = config.replicates;
    doc["master_seed"] = config.master_seed;
    doc["solver"] = config.solver ? std::string(to_string(*config.solver)) : std::string("auto");
    doc["engine"] = std::string(to_string(config.engine));
    doc["n_mc"] = config.n_mc;
    if (config.tol) doc["tol"] = *config.tol;
    doc["mc_fallback"] = config.mc_fallback;
    doc["workers"] = config.workers;
    return doc;
}

GridConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open config file '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Config, "config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

void apply_overrides(GridConfig& config, const Overrides& overrides) {
    if (overrides.seed) config.master_seed = *overrides.seed;
    if (overrides.replicates) {
        if (*overrides.replicates < 2) fail(ErrorKind::Config, "--replicates: must be >= 2");
        config.replicates = *overrides.replicates;
    }
    if (overrides.workers) config.workers = *overrides.workers;
    if (overrides.engine) config.engine = *overrides.engine;
    if (overrides.n_mc) {
        if (*overrides.n_mc < 2) fail(ErrorKind::Config, "--n-mc: must be >= 2");
        config.n_mc = *overrides.n_mc;
    }
    if (overrides.tol) {
        if (!(*overrides.tol > 0.0)) fail(ErrorKind::Config, "--tol: must be > 0");
        config.tol = *overrides.tol;
    }
}

} // namespace balint::cli
