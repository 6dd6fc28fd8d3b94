#include "scca/errors.hpp"
#include "scca/kernels.hpp"
#include "scca/linalg.hpp"
#include "support.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace scca;
using doctest::Approx;

TEST_CASE("top_singular on diag(3,1)") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 3;
    a(1, 1) = 1;
    const auto r = linalg::top_singular(a);
    CHECK(r.value == Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(r.left[0]) == Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.right[0]) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("top_singular on a rank-1 outer product") {
    std::mt19937_64 rng(1);
    const Vector a = testing::gaussian_vec(5, rng);
    const Vector b = testing::gaussian_vec(3, rng);
    const auto r = linalg::top_singular(a * b.transpose());
    CHECK(r.value == Approx(a.norm() * b.norm()).epsilon(1e-12));
}

TEST_CASE("top_singular matches a dense SVD") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const Matrix a = testing::gaussian(6, 4, rng);
        Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto r = linalg::top_singular(a);
        CHECK(r.value == Approx(svd.singularValues()[0]).epsilon(1e-8));
        CHECK(std::abs(r.right.dot(svd.matrixV().col(0))) == Approx(1.0).epsilon(1e-6));
        CHECK(r.residual <= 1e-8 * r.value);
    }
}

TEST_CASE("top_singular restarts when the all-ones start is orthogonal") {
    // Top right singular vector (1,-1)/sqrt2 is orthogonal to the ones vector.
    Matrix a(2, 2);
    a << 2, -2, 0.1, 0.1;
    const auto r = linalg::top_singular(a);
    Eigen::JacobiSVD<Matrix> svd(a);
    CHECK(r.value == Approx(svd.singularValues()[0]).epsilon(1e-8));
    CHECK(r.restarted);
}

TEST_CASE("top_singular rejects a zero matrix") { CHECK_THROWS_AS(linalg::top_singular(Matrix::Zero(3, 2)), DegenerateError); }

TEST_CASE("top_eigenvalue") {
    CHECK(linalg::top_eigenvalue(Matrix::Identity(3, 3)) == Approx(1.0));
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 5, 2, 0;
    CHECK(linalg::top_eigenvalue(d) == Approx(5.0));
    std::mt19937_64 rng(3);
    const Matrix x = testing::gaussian(12, 5, rng);
    const double s = linalg::top_singular(x).value;
    CHECK(linalg::top_eigenvalue(x.transpose() * x) == Approx(s * s).epsilon(1e-6));
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(linalg::top_eigenvalue(asym), DomainError);
}

TEST_CASE("inv_sqrt_psd") {
    const Matrix i3 = Matrix::Identity(3, 3);
    CHECK((linalg::inv_sqrt_psd(i3, 0.0) - i3).norm() < 1e-12);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 4, 1;
    const Matrix w = linalg::inv_sqrt_psd(d, 0.0);
    CHECK(w(0, 0) == Approx(0.5));
    CHECK(w(1, 1) == Approx(1.0));
    CHECK(std::abs(w(0, 1)) < 1e-14);

    std::mt19937_64 rng(4);
    const Matrix x = testing::gaussian(10, 4, rng);
    const Matrix s = x.transpose() * x;
    const Matrix r = linalg::inv_sqrt_psd(s, 0.0);
    CHECK((r * s * r - Matrix::Identity(4, 4)).norm() < 1e-10);

    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1e-3;
    CHECK_THROWS_AS(linalg::inv_sqrt_psd(neg, 0.0), DomainError);
}

TEST_CASE("whitened_rows and ridge_solve agree with the direct Gram route") {
    std::mt19937_64 rng(5);
    for (auto [n, p] : {std::pair<Index, Index>{8, 3}, {3, 8}}) {
        const Matrix d = testing::gaussian(n, p, rng);
        const double ridge = 0.3;
        const Matrix g = d.transpose() * d + ridge * Matrix::Identity(p, p);
        Eigen::SelfAdjointEigenSolver<Matrix> es(g);
        const Matrix g_inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                  es.eigenvectors().transpose();
        CHECK((linalg::whitened_rows(d, ridge) - d * g_inv_sqrt).norm() < 1e-10);
        const Vector w = testing::gaussian_vec(n, rng);
        CHECK((linalg::ridge_solve(d, w, ridge) - g.ldlt().solve(d.transpose() * w)).norm() < 1e-10);
    }
}

TEST_CASE("row_max_norm and default_ridge") {
    Matrix d(2, 3);
    d << 1, -3, 2, 0.5, 0, 0;
    CHECK(linalg::row_max_norm(d) == Approx(std::sqrt(9 + 0.25)));
    Matrix s = Matrix::Zero(2, 2);
    s.diagonal() << 2, 4;
    CHECK(linalg::default_ridge(s) == Approx(1e-8 * 3));
}

TEST_CASE("parallel kernels match the serial reference and do not depend on the thread count") {
    std::mt19937_64 rng(6);
    const Matrix a = testing::gaussian(300, 700, rng);
    const Matrix b = testing::gaussian(300, 40, rng);
    const Vector x = testing::gaussian_vec(700, rng);
    const Vector z = testing::gaussian_vec(300, rng);
    Vector ys, yts;
    kernels::serial::gemv(a, x, ys);
    kernels::serial::gemv_t(a, z, yts);
    const Matrix cs = kernels::serial::crossprod(a, b);
    CHECK((ys - a * x).norm() < 1e-12 * ys.norm());
    CHECK((cs - a.transpose() * b).norm() < 1e-12 * cs.norm());

    kernels::set_threads(1);
    Vector y1, yt1;
    kernels::gemv(a, x, y1);
    kernels::gemv_t(a, z, yt1);
    const Matrix c1 = kernels::crossprod(a, b);
    CHECK((y1 - ys).norm() < 1e-12 * ys.norm());
    CHECK((yt1 - yts).norm() < 1e-12 * yts.norm());
    CHECK((c1 - cs).norm() < 1e-12 * cs.norm());
    for (int t : {2, 3, 4, 8}) {
        kernels::set_threads(t);
        Vector y, yt;
        kernels::gemv(a, x, y);
        kernels::gemv_t(a, z, yt);
        CHECK(y == y1);
        CHECK(yt == yt1);
        CHECK(kernels::crossprod(a, b) == c1);
    }
    kernels::set_threads(0);
}
