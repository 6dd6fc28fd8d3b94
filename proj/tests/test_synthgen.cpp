#include "scca/errors.hpp"
#include "scca/synthgen.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <set>

using namespace scca;
using doctest::Approx;

TEST_CASE("setup 1 shapes and supports") {
    Setup1Params p;
    p.seed = 1;
    const SyntheticData s = gen_setup1(p);
    CHECK(s.data.n() == 1000);
    CHECK(s.data.p() == 2000);
    CHECK(s.data.q() == 100);
    CHECK(s.truth.x_support().size() == 200);
    CHECK(s.truth.y_support().size() == 30);
    CHECK((s.truth.c_weights.cwiseAbs().array() <= 1.0).all());
    // sigma^2 = ||d||^2 Var(z) / q
    CHECK(s.truth.sigma * s.truth.sigma == Approx(30.0 * 200.0 / 100.0));
}

TEST_CASE("setup 1 X covariance concentrates on the identity") {
    Setup1Params p;
    p.n = 100000;
    p.p = 4;
    p.q = 2;
    p.support_x = 1;
    p.support_y = 1;
    p.seed = 2;
    const SyntheticData s = gen_setup1(p);
    const Matrix cov = s.data.x.transpose() * s.data.x / static_cast<double>(p.n);
    CHECK((cov - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("setup 1 noiseless corner") {
    Setup1Params p;
    p.n = 50;
    p.p = 10;
    p.q = 5;
    p.support_x = 3;
    p.support_y = 2;
    p.sigma = 0.0;
    p.seed = 3;
    const SyntheticData s = gen_setup1(p);
    const Vector z = s.data.x * s.truth.c_weights;
    for (Index j : s.truth.y_support()) {
        const Vector yj = s.data.y.col(j);
        CHECK(std::abs(yj.dot(z)) / (yj.norm() * z.norm()) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("setup 1 rejects impossible supports") {
    Setup1Params p;
    p.p = 10;
    p.support_x = 11;
    CHECK_THROWS_AS(gen_setup1(p), DomainError);
}

TEST_CASE("setup 2 defaults") {
    Setup2Params p;
    p.seed = 4;
    const SyntheticData s = gen_setup2(p);
    REQUIRE(s.truth.group_sizes.has_value());
    REQUIRE(s.truth.informative_groups.has_value());
    CHECK(s.truth.group_sizes->size() == 20);
    CHECK(s.truth.informative_groups->size() == 5);
    Index total = 0;
    for (Index g : *s.truth.group_sizes) total += g;
    CHECK(total == s.data.p());
    CHECK(s.data.p() > 1700);
    CHECK(s.data.p() < 2300);

    // informative labels align with nonzeros of c, signs alternate in index order
    const auto groups = s.truth.x_groups();
    std::set<Index> inf(s.truth.informative_groups->begin(), s.truth.informative_groups->end());
    for (Index i = 0; i < s.data.p(); ++i)
        CHECK((s.truth.c_weights[i] != 0.0) == (inf.count(groups[static_cast<std::size_t>(i)]) == 1));
    double sign = 1.0;
    for (Index g : *s.truth.informative_groups) {
        for (Index i = 0; i < s.data.p(); ++i)
            if (groups[static_cast<std::size_t>(i)] == g) CHECK(s.truth.c_weights[i] == sign);
        sign = -sign;
    }

    // identical copies inside a group at rho = 1
    for (Index i = 1; i < s.data.p(); ++i)
        if (groups[static_cast<std::size_t>(i)] == groups[static_cast<std::size_t>(i - 1)])
            CHECK(s.data.x.col(i) == s.data.x.col(i - 1));

    const SyntheticData again = gen_setup2(p);
    CHECK(*again.truth.group_sizes == *s.truth.group_sizes);
    CHECK(again.data.x == s.data.x);
}

TEST_CASE("population covariances") {
    SyntheticTruth t;
    t.setup = Setup::Uncorrelated;
    t.c_weights = Vector::Unit(2, 0);
    t.d_weights = Vector::Unit(2, 0);
    t.sigma = 1.0;
    t.latent_variance = 1.0;
    const PopulationCov pc = population_cov(t);
    CHECK(pc.sigma_xy == Vector::Unit(2, 0) * Vector::Unit(2, 0).transpose());
    Matrix expect_yy = Matrix::Zero(2, 2);
    expect_yy.diagonal() << 2, 1;
    CHECK((pc.sigma_yy - expect_yy).norm() < 1e-15);

    SyntheticTruth g;
    g.setup = Setup::Grouped;
    g.c_weights = Vector::Ones(3);
    g.d_weights = Vector::Unit(2, 0);
    g.group_sizes = std::vector<Index>{3};
    g.informative_groups = IndexList{0};
    g.within_corr = 1.0;
    g.sigma = 1.0;
    g.latent_variance = 9.0;
    CHECK((population_cov(g).sigma_xx - Matrix::Ones(3, 3)).norm() < 1e-15);
}

TEST_CASE("setup 2 sample covariances approach the population ones") {
    Setup2Params p;
    p.n = 200000;
    p.groups = 3;
    p.mean_group_size = 2;
    p.q = 3;
    p.n_informative = 2;
    p.within_corr = 0.6;
    p.seed = 5;
    const SyntheticData s = gen_setup2(p);
    const PopulationCov pc = population_cov(s.truth);
    const double n = static_cast<double>(p.n);
    const Matrix sxx = s.data.x.transpose() * s.data.x / n;
    const Matrix sxy = s.data.x.transpose() * s.data.y / n;
    const Matrix syy = s.data.y.transpose() * s.data.y / n;
    CHECK((sxx - pc.sigma_xx).cwiseAbs().maxCoeff() < 0.02);
    CHECK((sxy - pc.sigma_xy).cwiseAbs().maxCoeff() < 0.05 * std::max(1.0, pc.sigma_xy.cwiseAbs().maxCoeff()));
    CHECK((syy - pc.sigma_yy).cwiseAbs().maxCoeff() < 0.05 * std::max(1.0, pc.sigma_yy.cwiseAbs().maxCoeff()));
    for (const Matrix* m : {&pc.sigma_xx, &pc.sigma_yy}) {
        CHECK((*m - m->transpose()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(*m);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("truth JSON round trip") {
    Setup2Params p;
    p.n = 20;
    p.groups = 4;
    p.mean_group_size = 3;
    p.q = 5;
    p.n_informative = 2;
    p.seed = 6;
    const SyntheticData s = gen_setup2(p);
    const SyntheticTruth t = truth_from_json(truth_to_json(s.truth));
    CHECK(t.c_weights == s.truth.c_weights);
    CHECK(t.d_weights == s.truth.d_weights);
    CHECK(t.sigma == s.truth.sigma);
    CHECK(*t.group_sizes == *s.truth.group_sizes);
    CHECK(*t.informative_groups == *s.truth.informative_groups);
    CHECK(t.seed == 6);
    CHECK_THROWS_AS(truth_from_json("{not json"), ParseError);
    CHECK_THROWS_AS(truth_from_json("{}"), ParseError);
}
