#pragma once

#include "balint/intercept.hpp"
#include "balint/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace balint {

struct DatasetColumn {
    std::string name;
    /// Raw draws; level indices for categoricals.
    std::vector<double> values;
    /// Design columns of a categorical (p-1 vectors of length n); empty for scalars.
    std::vector<std::vector<double>> encoded;
};

struct Dataset {
    std::vector<DatasetColumn> covariates;
    std::vector<double> outcome;
    std::size_t clamp_count = 0;
    std::size_t n = 0;

    double outcome_mean() const noexcept;
};

/// Simulates n rows: covariates drawn independently in declaration order
/// (term j on substream j), then Y given mu = g^{-1}(beta0 + beta^T x).
Dataset generate(const DgpSpec& dgp, double beta0, std::size_t n, const RngStream& stream);

/// Header row of covariate names then "y"; categoricals as integer levels; LF endings.
void write_csv(std::ostream& out, const Dataset& data);

} // namespace balint
