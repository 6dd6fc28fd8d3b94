#include "scca/synthgen.hpp"

#include "scca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

namespace scca {

namespace {

using Rng = std::mt19937_64;

IndexList nonzeros(const Vector& w) {
    IndexList out;
    for (Index i = 0; i < w.size(); ++i)
        if (w[i] != 0.0) out.push_back(i);
    return out;
}

// `k` distinct indices out of {0..n-1}, sorted.
IndexList sample_support(Index n, Index k, Rng& rng) {
    IndexList all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(k));
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<std::string> names(const char* prefix, Index k) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

Matrix gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    // Row-major draw order so that the first rows do not depend on n.
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

Matrix x_covariance(const SyntheticTruth& t) {
    const Index p = t.c_weights.size();
    if (t.setup == Setup::Uncorrelated || !t.group_sizes) return Matrix::Identity(p, p);
    const double off = t.within_corr * t.within_corr;
    Matrix s = Matrix::Zero(p, p);
    Index start = 0;
    for (Index g : *t.group_sizes) {
        s.block(start, start, g, g).setConstant(off);
        start += g;
    }
    s.diagonal().setOnes();
    return s;
}

// Shared tail of both generators: y = d z + sigma n.
void attach_y(SyntheticData& out, Index q, Index support_y, std::optional<double> sigma_override, Rng& rng) {
    SyntheticTruth& t = out.truth;
    t.d_weights = Vector::Zero(q);
    for (Index j : sample_support(q, support_y, rng)) t.d_weights[j] = 1.0;

    const Matrix sxx = x_covariance(t);
    t.latent_variance = t.c_weights.dot(sxx * t.c_weights);
    t.sigma = sigma_override ? *sigma_override
                             : std::sqrt(t.d_weights.squaredNorm() * t.latent_variance / static_cast<double>(q));

    const Vector z = out.data.x * t.c_weights;
    Matrix noise = gaussian(out.data.n(), q, rng);
    out.data.y = z * t.d_weights.transpose() + t.sigma * noise;
    out.data.y_names = names("y", q);
}

}  // namespace

IndexList SyntheticTruth::x_support() const { return nonzeros(c_weights); }
IndexList SyntheticTruth::y_support() const { return nonzeros(d_weights); }

std::vector<Index> SyntheticTruth::x_groups() const {
    std::vector<Index> out;
    if (!group_sizes) return out;
    for (std::size_t g = 0; g < group_sizes->size(); ++g)
        out.insert(out.end(), static_cast<std::size_t>((*group_sizes)[g]), static_cast<Index>(g));
    return out;
}

SyntheticData gen_setup1(const Setup1Params& prm) {
    if (prm.n < 2 || prm.p < 1 || prm.q < 1) throw DomainError("gen_setup1: need n >= 2, p >= 1, q >= 1");
    const Index sx = prm.support_x.value_or(std::max<Index>(1, prm.p / 10));
    const Index sy = prm.support_y.value_or(std::max<Index>(1, 3 * prm.q / 10));
    if (sx < 1 || sx > prm.p || sy < 1 || sy > prm.q) throw DomainError("gen_setup1: support sizes must lie in [1, dim]");
    if (prm.sigma && *prm.sigma < 0.0) throw DomainError("gen_setup1: sigma must be non-negative");

    Rng rng(prm.seed);
    SyntheticData out;
    out.truth.setup = Setup::Uncorrelated;
    out.truth.seed = prm.seed;
    out.truth.c_weights = Vector::Zero(prm.p);
    for (Index j : sample_support(prm.p, sx, rng)) out.truth.c_weights[j] = 1.0;

    out.data.x = gaussian(prm.n, prm.p, rng);
    out.data.x_names = names("x", prm.p);
    attach_y(out, prm.q, sy, prm.sigma, rng);
    return out;
}

SyntheticData gen_setup2(const Setup2Params& prm) {
    if (prm.groups < 1 || prm.n_informative < 1 || prm.n_informative > prm.groups)
        throw DomainError("gen_setup2: need groups >= n_informative >= 1");
    if (prm.n < 2 || prm.q < 1 || !(prm.mean_group_size > 0.0)) throw DomainError("gen_setup2: invalid sizes");
    if (!(prm.within_corr >= 0.0 && prm.within_corr <= 1.0)) throw DomainError("gen_setup2: within_corr must lie in [0, 1]");
    const Index sy = prm.support_y.value_or(std::max<Index>(1, 3 * prm.q / 10));
    if (sy < 1 || sy > prm.q) throw DomainError("gen_setup2: support_y must lie in [1, q]");
    if (prm.sigma && *prm.sigma < 0.0) throw DomainError("gen_setup2: sigma must be non-negative");

    Rng rng(prm.seed);
    SyntheticData out;
    SyntheticTruth& t = out.truth;
    t.setup = Setup::Grouped;
    t.seed = prm.seed;
    t.within_corr = prm.within_corr;

    std::poisson_distribution<long> pois(prm.mean_group_size);
    std::vector<Index> sizes;
    for (Index g = 0; g < prm.groups; ++g) {
        long s = pois(rng);
        while (s == 0) {
            ++t.zero_draws;
            s = pois(rng);
        }
        sizes.push_back(static_cast<Index>(s));
    }
    const Index p = std::accumulate(sizes.begin(), sizes.end(), Index{0});
    t.group_sizes = sizes;

    IndexList informative = sample_support(prm.groups, prm.n_informative, rng);
    t.informative_groups = informative;
    std::vector<Index> starts(sizes.size(), 0);
    for (std::size_t g = 1; g < sizes.size(); ++g) starts[g] = starts[g - 1] + sizes[g - 1];
    t.c_weights = Vector::Zero(p);
    double sign = 1.0;
    for (Index g : informative) {
        t.c_weights.segment(starts[static_cast<std::size_t>(g)], sizes[static_cast<std::size_t>(g)]).setConstant(sign);
        sign = -sign;
    }

    const Matrix factors = gaussian(prm.n, prm.groups, rng);
    Matrix& x = out.data.x;
    x.resize(prm.n, p);
    const double rho = prm.within_corr;
    if (rho == 1.0) {
        for (std::size_t g = 0; g < sizes.size(); ++g)
            for (Index j = 0; j < sizes[g]; ++j) x.col(starts[g] + j) = factors.col(static_cast<Index>(g));
    } else {
        const Matrix e = gaussian(prm.n, p, rng);
        const double w = std::sqrt(1.0 - rho * rho);
        for (std::size_t g = 0; g < sizes.size(); ++g)
            for (Index j = 0; j < sizes[g]; ++j)
                x.col(starts[g] + j) = rho * factors.col(static_cast<Index>(g)) + w * e.col(starts[g] + j);
    }
    out.data.x_names = names("x", p);
    attach_y(out, prm.q, sy, prm.sigma, rng);
    return out;
}

PopulationCov population_cov(const SyntheticTruth& t) {
    PopulationCov pc;
    pc.sigma_xx = x_covariance(t);
    const Vector sc = pc.sigma_xx * t.c_weights;
    pc.sigma_xy = sc * t.d_weights.transpose();
    const Index q = t.d_weights.size();
    pc.sigma_yy = t.latent_variance * t.d_weights * t.d_weights.transpose() + t.sigma * t.sigma * Matrix::Identity(q, q);
    return pc;
}

std::string truth_to_json(const SyntheticTruth& t) {
    using nlohmann::json;
    auto to_vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    json j;
    j["setup"] = static_cast<int>(t.setup);
    j["seed"] = t.seed;
    j["sigma"] = t.sigma;
    j["latent_variance"] = t.latent_variance;
    j["snr_definition"] = "||d||^2 Var(c'x) / (sigma^2 q)";
    j["c_weights"] = to_vec(t.c_weights);
    j["d_weights"] = to_vec(t.d_weights);
    j["x_support"] = t.x_support();
    j["y_support"] = t.y_support();
    j["within_corr"] = t.within_corr;
    if (t.group_sizes) j["group_sizes"] = *t.group_sizes;
    if (t.informative_groups) j["informative_groups"] = *t.informative_groups;
    j["zero_group_draws"] = t.zero_draws;
    return j.dump(2);
}

SyntheticTruth truth_from_json(const std::string& text) {
    using nlohmann::json;
    SyntheticTruth t;
    try {
        const json j = json::parse(text);
        auto to_eigen = [](const std::vector<double>& v) { return Vector(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()))); };
        t.setup = static_cast<Setup>(j.at("setup").get<int>());
        t.seed = j.at("seed").get<std::uint64_t>();
        t.sigma = j.at("sigma").get<double>();
        t.latent_variance = j.value("latent_variance", 0.0);
        t.c_weights = to_eigen(j.at("c_weights").get<std::vector<double>>());
        t.d_weights = to_eigen(j.at("d_weights").get<std::vector<double>>());
        t.within_corr = j.value("within_corr", 1.0);
        if (j.contains("group_sizes")) t.group_sizes = j.at("group_sizes").get<std::vector<Index>>();
        if (j.contains("informative_groups")) t.informative_groups = j.at("informative_groups").get<IndexList>();
        t.zero_draws = j.value("zero_group_draws", 0);
    } catch (const json::exception& e) {
        throw ParseError(std::string("truth sidecar: ") + e.what());
    }
    return t;
}

}  // namespace scca
