#include "scca/errors.hpp"
#include "scca/model_selection.hpp"
#include "scca/report_io.hpp"
#include "scca/synthgen.hpp"
#include "support.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <map>

using namespace scca;
using doctest::Approx;

TEST_CASE("build_grid examples") {
    CHECK(build_grid(1, 5) == std::vector<double>{1, 2, 4, 8});
    CHECK(build_grid(0.7, 0.7) == std::vector<double>{0.5, 1});
    CHECK(build_grid(2, 2) == std::vector<double>{2});
    CHECK_THROWS_AS(build_grid(3, 2), DomainError);
    CHECK_THROWS_AS(build_grid(0, 2), DomainError);
    const auto g = build_grid(0.33, 19.9);
    CHECK(g.front() <= 0.33);
    CHECK(g.back() >= 19.9);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] == 2 * g[i - 1]);
}

TEST_CASE("c_range_standard lower end on the 2x2 identity") {
    StandardizedDataset d;
    d.x = Matrix::Identity(2, 2);
    d.y = Matrix::Identity(2, 2);
    const CRange r = c_range_standard(d);
    CHECK(r.c1_min == Approx(1.0));
    CHECK(r.c1_min <= r.c1_max);
    d.x.setZero();
    CHECK_THROWS_AS(c_range_standard(d), DegenerateError);
}

TEST_CASE("c_range_standard upper end equals the L1 norm of unpenalized CCA weights") {
    std::mt19937_64 rng(1);
    const Matrix x = testing::gaussian(60, 4, rng);
    const Matrix y = testing::gaussian(60, 3, rng) + 0.5 * x.leftCols(3);
    const auto d = standardize(x, y, ScalingMode::CenterUnitNorm);
    auto isqrt = [](const Matrix& s) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(s);
        return Matrix(es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose());
    };
    const Matrix wx = isqrt(d.x.transpose() * d.x), wy = isqrt(d.y.transpose() * d.y);
    Eigen::JacobiSVD<Matrix> svd(wx * d.x.transpose() * d.y * wy, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector u = wx * svd.matrixU().col(0);
    Vector v = wy * svd.matrixV().col(0);
    u /= (d.x * u).norm();
    v /= (d.y * v).norm();
    const CRange r = c_range_standard(d);
    CHECK(r.c1_max == Approx(u.lpNorm<1>()).epsilon(1e-6));
    CHECK(r.c2_max == Approx(v.lpNorm<1>()).epsilon(1e-6));
    CHECK(r.c1_min <= r.c1_max);
}

TEST_CASE("c_range_simplified on rank-1 cross-products") {
    // X'Y = e1 w' when X is orthonormal and Y = x_1 w'.
    StandardizedDataset d;
    d.x = Matrix::Identity(4, 4);
    Vector w(2);
    w << 0.6, 0.8;
    d.y = Vector::Unit(4, 0) * w.transpose();
    CHECK(c_range_simplified(d).c1_max == Approx(1.0));
    CHECK(c_range_simplified(d).c2_max == Approx(1.4));

    d.y = Vector::Constant(4, 0.5) * w.transpose();
    CHECK(c_range_simplified(d).c1_max == Approx(2.0));

    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto e = standardize(testing::gaussian(20, 7, rng), testing::gaussian(20, 3, rng), ScalingMode::CenterUnitNorm);
        const CRange r = c_range_simplified(e);
        CHECK(r.c1_min == 1.0);
        CHECK(r.c1_max >= 1.0);
        CHECK(r.c1_max <= std::sqrt(7.0) + 1e-12);
    }
    d.y.setZero();
    CHECK_THROWS_AS(c_range_simplified(d), DegenerateError);
}

TEST_CASE("select_cell breaks ties toward the smaller pair") {
    Matrix s(2, 3);
    s << 0.1, 0.5, 0.2, 0.5, 0.3, 0.5;
    CHECK(select_cell(s) == std::pair<Index, Index>{0, 1});
    s(0, 1) = -std::numeric_limits<double>::infinity();
    CHECK(select_cell(s) == std::pair<Index, Index>{1, 0});
}

namespace {

RawDataset small_setup2(std::uint64_t seed, Index n = 120) {
    Setup2Params p;
    p.n = n;
    p.groups = 5;
    p.mean_group_size = 8;
    p.q = 12;
    p.n_informative = 2;
    p.seed = seed;
    return gen_setup2(p).data;
}

}  // namespace

TEST_CASE("single-cell grid override is selected trivially") {
    const RawDataset raw = small_setup2(3);
    TuneOptions o;
    o.jobs = 1;
    GridSpec g;
    g.c1_values = {2.0};
    g.c2_values = {1.5};
    o.grid = g;
    for (Model m : {Model::Simplified, Model::Standard}) {
        const TuneReport r = tune_holdout(raw, m, split_holdout(raw.n(), 3), o);
        CHECK(r.scores.rows() == 1);
        CHECK(r.scores.cols() == 1);
        CHECK(r.c1_opt == 2.0);
        CHECK(r.c2_opt == 1.5);
        CHECK(r.boundary_selected);
        CHECK(std::isfinite(r.test_corr));
    }
}

TEST_CASE("tuning is reproducible and independent of the worker count") {
    const RawDataset raw = small_setup2(4);
    TuneOptions o1;
    o1.jobs = 1;
    TuneOptions o4;
    o4.jobs = 4;
    for (Model m : {Model::Simplified, Model::Standard}) {
        const auto split = split_holdout(raw.n(), 4);
        const TuneReport a = tune_holdout(raw, m, split, o1);
        const TuneReport b = tune_holdout(raw, m, split, o4);
        const TuneReport c = tune_holdout(raw, m, split, o1);
        CHECK(io::to_json(a).dump() == io::to_json(b).dump());
        CHECK(io::to_json(a).dump() == io::to_json(c).dump());
        CHECK(a.metric == (m == Model::Standard ? Metric::Correlation : Metric::Covariance));
        CHECK(a.scores.rows() == static_cast<Index>(a.grid.c1_values.size()));
        CHECK(a.best_score == a.scores(a.i_opt, a.j_opt));
    }
}

TEST_CASE("nested CV on 20 samples partitions the rows") {
    Setup1Params p;
    p.n = 20;
    p.p = 8;
    p.q = 4;
    p.support_x = 2;
    p.support_y = 2;
    p.seed = 5;
    const RawDataset raw = gen_setup1(p).data;
    TuneOptions o;
    o.jobs = 1;
    const NestedCvReport r = nested_cv(raw, Model::Simplified, 5, 2, 5, o);
    REQUIRE(r.folds.size() == 5);
    for (const auto& f : r.folds) {
        CHECK(f.inner_scores.size() == 2);
        CHECK(std::isfinite(f.best_mean_score));
    }
    CHECK(r.full_refit.u.size() == 8);
}

TEST_CASE("nested CV with strata requires enough members per stratum") {
    RawDataset raw = small_setup2(6, 60);
    std::vector<std::string> labels;
    for (Index i = 0; i < raw.n(); ++i) labels.push_back(i % 3 == 0 ? "a" : "b");
    raw.strata = labels;
    TuneOptions o;
    o.jobs = 1;
    const NestedCvReport r = nested_cv(raw, Model::Simplified, 5, 3, 6, o);
    CHECK(r.folds.size() == 5);

    labels.assign(static_cast<std::size_t>(raw.n()), "a");
    labels[0] = labels[1] = "rare";
    raw.strata = labels;
    CHECK_THROWS_AS(nested_cv(raw, Model::Simplified, 5, 3, 6, o), StratumError);
}

TEST_CASE("nested CV on grouped data picks a stable pair") {
    const RawDataset raw = small_setup2(7, 300);
    TuneOptions o;
    o.jobs = 1;
    const NestedCvReport r = nested_cv(raw, Model::Simplified, 5, 5, 7, o);
    std::map<std::pair<double, double>, int> counts;
    for (const auto& f : r.folds) ++counts[{f.c1_opt, f.c2_opt}];
    int top = 0;
    for (const auto& [k, c] : counts) top = std::max(top, c);
    CHECK(top >= 3);
    CHECK(counts[{r.c1_modal, r.c2_modal}] == top);
}
