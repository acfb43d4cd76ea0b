#include "balint/datagen.hpp"

#include "balint/csv.hpp"
#include "balint/error.hpp"
#include "term_eval.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace balint {

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_real(double value, int significant) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", significant, value);
    return buffer;
}

double Dataset::outcome_mean() const noexcept {
    if (outcome.empty()) return 0.0;
    return std::accumulate(outcome.begin(), outcome.end(), 0.0) /
           static_cast<double>(outcome.size());
}

Dataset generate(const DgpSpec& dgp, double beta0, std::size_t n, const RngStream& stream) {
    if (n == 0) {
        fail(ErrorKind::Parameter, "dataset size must be >= 1");
    }
    dgp.validate();

    Dataset data;
    data.n = n;
    std::vector<double> eta(n, beta0);

    for (std::size_t j = 0; j < dgp.terms.size(); ++j) {
        const auto& term = dgp.terms[j];
        const detail::TermContribution contribution(term);
        Rng rng(stream.substream(j));
        DatasetColumn column;
        column.name = term.name;
        column.values.resize(n);
        draw_into(term.spec, rng, column.values);
        for (std::size_t i = 0; i < n; ++i) {
            eta[i] += contribution(column.values[i]);
        }
        if (const auto* cat = std::get_if<Categorical>(&term.spec)) {
            const std::size_t p = cat->probs.size();
            std::vector<std::vector<double>> rows(p);
            for (std::size_t l = 0; l < p; ++l) rows[l] = encode(cat->coding, l, p, cat->probs);
            column.encoded.assign(p - 1, std::vector<double>(n));
            for (std::size_t i = 0; i < n; ++i) {
                const auto& row = rows[static_cast<std::size_t>(column.values[i])];
                for (std::size_t c = 0; c + 1 < p; ++c) column.encoded[c][i] = row[c];
            }
        }
        data.covariates.push_back(std::move(column));
    }

    if (dgp.joint) {
        const auto& joint = *dgp.joint;
        Rng rng(stream.substream(detail::kJointStreamTag));
        std::vector<DatasetColumn> columns(joint.sampler.dimension);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            columns[c].name = joint.name + "_" + std::to_string(c + 1);
            columns[c].values.resize(n);
        }
        std::vector<double> row(joint.sampler.dimension);
        for (std::size_t i = 0; i < n; ++i) {
            joint.sampler.draw(rng, row);
            for (std::size_t c = 0; c < row.size(); ++c) {
                columns[c].values[i] = row[c];
                eta[i] += joint.betas[c] * row[c];
            }
        }
        for (auto& column : columns) data.covariates.push_back(std::move(column));
    }

    Rng rng(stream.substream(detail::kOutcomeStreamTag));
    data.outcome.resize(n);
    if (const auto* normal = std::get_if<NormalOutcome>(&dgp.outcome)) {
        for (std::size_t i = 0; i < n; ++i) {
            data.outcome[i] = invert(dgp.link, eta[i]) + normal->sd * rng.normal();
        }
        return data;
    }

    const auto policy = std::get<BernoulliOutcome>(dgp.outcome).clamp;
    for (std::size_t i = 0; i < n; ++i) {
        double mu = invert(dgp.link, eta[i]);
        if (mu < 0.0 || mu > 1.0) {
            if (policy == ClampPolicy::RejectOutOfRange) {
                fail(ErrorKind::OutOfRange, "row " + std::to_string(i) + ": eta=" +
                                                format_real(eta[i], 9) + " gives mean " +
                                                format_real(mu, 9) + " outside [0,1]");
            }
            mu = mu < 0.0 ? 0.0 : 1.0;
            ++data.clamp_count;
        }
        data.outcome[i] = rng.uniform() < mu ? 1.0 : 0.0;
    }
    return data;
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (const auto& column : data.covariates) {
        out << csv_field(column.name) << ',';
    }
    out << "y\n";
    for (std::size_t i = 0; i < data.n; ++i) {
        for (const auto& column : data.covariates) {
            out << format_real(column.values[i], 17) << ',';
        }
        out << format_real(data.outcome[i], 17) << '\n';
    }
}

} // namespace balint
