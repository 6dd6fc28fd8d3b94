#include "scca/errors.hpp"
#include "scca/qclp.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace scca;
using doctest::Approx;

static Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

TEST_CASE("soft_threshold examples") {
    CHECK(soft_threshold(vec({3}), 1)[0] == 2.0);
    CHECK(soft_threshold(vec({-0.5}), 1)[0] == 0.0);
    const Vector s = soft_threshold(vec({2, -3, 0.2}), 0.5);
    CHECK(s[0] == 1.5);
    CHECK(s[1] == -2.5);
    CHECK(s[2] == 0.0);
    CHECK_THROWS_AS(soft_threshold(vec({1}), -0.1), DomainError);
}

TEST_CASE("soft_threshold l1 norm is non-increasing in delta") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const Vector a = testing::gaussian_vec(8, rng);
        double prev = a.lpNorm<1>();
        for (double d = 0.0; d < 3.0; d += 0.01) {
            const double cur = soft_threshold(a, d).lpNorm<1>();
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("solve_qclp: spread on a tied argmax set") {
    const QclpResult r = solve_qclp(vec({1, 1}), 0.8);
    CHECK(r.which == QclpCase::Case1SpreadOnArgmax);
    CHECK(r.argmax_set_size == 2);
    CHECK(r.u[0] == Approx(0.4).epsilon(1e-14));
    CHECK(r.u[1] == Approx(0.4).epsilon(1e-14));
}

TEST_CASE("solve_qclp: L1 budget not binding") {
    const QclpResult r = solve_qclp(vec({2, 1}), 2);
    CHECK(r.which == QclpCase::Case2Unthresholded);
    CHECK(r.delta == 0.0);
    CHECK(r.u[0] == Approx(2 / std::sqrt(5.0)));
    CHECK(r.u[1] == Approx(1 / std::sqrt(5.0)));
}

TEST_CASE("solve_qclp: thresholded case meets both norms") {
    const Vector a = vec({3, 1});
    const QclpResult r = solve_qclp(a, 1.2);
    CHECK(r.which == QclpCase::Case2Thresholded);
    // (4 - 2d)^2 = 1.44 ((3-d)^2 + (1-d)^2) on the segment d < 1
    const double qa = 4 - 2 * 1.44, qb = -16 + 1.44 * 8, qc = 16 - 1.44 * 10;
    const double d = (-qb - std::sqrt(qb * qb - 4 * qa * qc)) / (2 * qa);
    CHECK(r.delta == Approx(d).epsilon(1e-8));
    CHECK(r.delta == Approx(0.39643).epsilon(1e-4));
    CHECK(r.u.lpNorm<1>() == Approx(1.2).epsilon(1e-9));
    CHECK(r.u.norm() == Approx(1.0).epsilon(1e-12));
    CHECK(r.u[0] == Approx(0.9742).epsilon(1e-4));
    CHECK(r.u[1] == Approx(0.2258).epsilon(1e-3));
    CHECK(a.dot(r.u) == Approx(testing::qclp_oracle(a, 1.2)).epsilon(1e-9));
}

TEST_CASE("solve_qclp errors") {
    CHECK_THROWS_AS(solve_qclp(Vector::Zero(3), 1.0), ZeroGradientError);
    CHECK_THROWS_AS(solve_qclp(vec({1, 2}), 0.0), DomainError);
    CHECK_THROWS_AS(solve_qclp(vec({1, 2}), -1.0), DomainError);
}

TEST_CASE("solve_qclp always returns a feasible point") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uc(0.05, 4.0);
    for (int t = 0; t < 300; ++t) {
        const Vector a = testing::gaussian_vec(1 + t % 12, rng);
        const double c = uc(rng);
        const QclpResult r = solve_qclp(a, c);
        CHECK(r.u.norm() <= 1 + 1e-12);
        CHECK(r.u.lpNorm<1>() <= c * (1 + 1e-9));
    }
}

TEST_CASE("project_l1_ball examples") {
    Vector p = project_l1_ball(vec({1, 0}), 2);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    p = project_l1_ball(vec({1.5, 0.5}), 1);
    CHECK(p[0] == Approx(1.0).epsilon(1e-15));
    CHECK(p[1] == 0.0);
    p = project_l1_ball(vec({2, 2}), 2);
    CHECK(p[0] == Approx(1.0));
    CHECK(p[1] == Approx(1.0));
    CHECK_THROWS_AS(project_l1_ball(vec({1}), 0), DomainError);
}

TEST_CASE("project_l1_ball is the nearest point of the ball") {
    // Compare against random feasible points and the KKT structure.
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
        const Vector a = 3 * testing::gaussian_vec(6, rng);
        const double c = 1.0 + (t % 5);
        const Vector p = project_l1_ball(a, c);
        CHECK(p.lpNorm<1>() <= c * (1 + 1e-12));
        const double dist = (a - p).norm();
        for (int k = 0; k < 50; ++k) {
            Vector w = testing::gaussian_vec(6, rng);
            w *= c / std::max(c, w.lpNorm<1>()) * 0.999;
            CHECK(dist <= (a - w).norm() + 1e-12);
        }
    }
}

TEST_CASE("l1_dual_threshold matches the case structure") {
    CHECK(l1_dual_threshold(vec({2, 1}), 2) == 0.0);
    CHECK(l1_dual_threshold(vec({1, 1}), 0.8) == 1.0);
    const double d = l1_dual_threshold(vec({3, 1}), 1.2);
    CHECK(l1_l2_ratio(vec({3, 1}), d) == Approx(1.2).epsilon(1e-9));
}
