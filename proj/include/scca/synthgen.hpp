#pragma once

#include "scca/dataset.hpp"
#include "scca/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scca {

enum class Setup { Uncorrelated = 1, Grouped = 2 };

struct SyntheticTruth {
    Setup setup = Setup::Uncorrelated;
    Vector c_weights;
    Vector d_weights;
    double sigma = 0.0;
    /// Variance of the latent z = c'x, used to set the noise level.
    double latent_variance = 0.0;
    std::optional<std::vector<Index>> group_sizes;
    std::optional<IndexList> informative_groups;
    double within_corr = 1.0;
    std::uint64_t seed = 0;
    /// Group sizes drawn as 0 and redrawn.
    int zero_draws = 0;

    /// Indices of the nonzero entries of c_weights / d_weights.
    IndexList x_support() const;
    IndexList y_support() const;
    /// Group label of every x variable (setup 2), otherwise empty.
    std::vector<Index> x_groups() const;
};

struct PopulationCov {
    Matrix sigma_xx;
    Matrix sigma_yy;
    Matrix sigma_xy;
};

struct Setup1Params {
    Index n = 1000;
    Index p = 2000;
    Index q = 100;
    /// Default supports are p/10 and 3q/10.
    std::optional<Index> support_x;
    std::optional<Index> support_y;
    /// Overrides the unit signal-to-noise noise level (0 gives noiseless y).
    std::optional<double> sigma;
    std::uint64_t seed = 0;
};

struct Setup2Params {
    Index n = 1000;
    Index groups = 20;
    double mean_group_size = 100.0;
    Index q = 100;
    Index n_informative = 5;
    double within_corr = 1.0;
    std::optional<Index> support_y;
    std::optional<double> sigma;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    RawDataset data;
    SyntheticTruth truth;
};

/// x ~ N(0, I_p), z = c'x, y = d z + sigma n with sparse +-1 weights c and d
/// on seeded supports and sigma^2 = ||d||^2 Var(z) / q.
SyntheticData gen_setup1(const Setup1Params& params);

/// G groups with Poisson(mean) sizes (zeros redrawn). Inside group g,
/// x_j = rho f_g + sqrt(1 - rho^2) e_j. The first n_informative groups of a
/// seeded permutation carry weight +1, -1, +1, ... in index order.
SyntheticData gen_setup2(const Setup2Params& params);

/// Exact population covariances implied by a truth record.
PopulationCov population_cov(const SyntheticTruth& truth);

/// JSON sidecar describing the truth (supports, weights, sigma, groups, seed).
std::string truth_to_json(const SyntheticTruth& truth);
SyntheticTruth truth_from_json(const std::string& text);

}  // namespace scca
