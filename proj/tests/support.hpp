#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the solvers it is used to check.

#include "scca/dataset.hpp"
#include "scca/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace scca::testing {

inline Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

inline Vector gaussian_vec(Index n, std::mt19937_64& rng) { return gaussian(n, 1, rng).col(0); }

inline Vector soft(const Vector& a, double d) {
    Vector s(a.size());
    for (Index i = 0; i < a.size(); ++i) {
        const double m = std::abs(a[i]) - d;
        s[i] = m > 0 ? std::copysign(m, a[i]) : 0.0;
    }
    return s;
}

// max a'u over ||u||_2 <= 1, ||u||_1 <= c.
//
// Every S(a, delta) scaled onto the boundary of the feasible set is a
// candidate: a dense sweep of delta, the exact roots of ||S||_1 = c ||S||_2 on
// every segment between sorted magnitudes (a quadratic in delta there), and
// the spread-on-argmax point. Returns the best feasible objective.
inline double qclp_oracle(const Vector& a, double c, int sweep = 4000) {
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](Vector u) {
        const double l1 = u.lpNorm<1>();
        const double l2 = u.norm();
        if (l2 == 0.0) return;
        u /= std::max(l2, l1 / c);
        best = std::max(best, a.dot(u));
    };
    const double amax = a.cwiseAbs().maxCoeff();
    for (int k = 0; k <= sweep; ++k) consider(soft(a, amax * k / (sweep + 1.0)));

    std::vector<double> m(static_cast<std::size_t>(a.size()));
    for (Index i = 0; i < a.size(); ++i) m[static_cast<std::size_t>(i)] = std::abs(a[i]);
    std::sort(m.begin(), m.end(), std::greater<>());
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 1; k <= m.size(); ++k) {
        s1 += m[k - 1];
        s2 += m[k - 1] * m[k - 1];
        const double hi = m[k - 1];
        const double lo = k < m.size() ? m[k] : 0.0;
        const double kk = static_cast<double>(k);
        // (s1 - k d)^2 = c^2 (s2 - 2 d s1 + k d^2)
        const double qa = kk * kk - c * c * kk;
        const double qb = -2.0 * kk * s1 + 2.0 * c * c * s1;
        const double qc = s1 * s1 - c * c * s2;
        std::vector<double> roots;
        if (std::abs(qa) < 1e-14) {
            if (std::abs(qb) > 0) roots.push_back(-qc / qb);
        } else {
            const double disc = qb * qb - 4 * qa * qc;
            if (disc >= 0) {
                roots.push_back((-qb + std::sqrt(disc)) / (2 * qa));
                roots.push_back((-qb - std::sqrt(disc)) / (2 * qa));
            }
        }
        for (double d : roots)
            if (d >= lo - 1e-15 && d <= hi) consider(soft(a, std::max(d, 0.0)));
    }

    Vector u = Vector::Zero(a.size());
    for (Index i = 0; i < a.size(); ++i)
        if (std::abs(a[i]) >= amax * (1 - 1e-12)) u[i] = std::copysign(1.0, a[i]);
    consider(u);
    return best;
}

namespace detail {

inline Vector direction(const std::vector<double>& ang, Index p) {
    Vector d(p);
    if (p == 1) {
        d[0] = std::cos(ang[0]) >= 0 ? 1.0 : -1.0;
    } else if (p == 2) {
        d << std::cos(ang[0]), std::sin(ang[0]);
    } else {
        d << std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]), std::cos(ang[0]);
    }
    return d;
}

// Objective at the largest feasible multiple of d.
inline double ray_value(const Matrix& m, const Vector& a, double c, const Vector& d) {
    const double ad = a.dot(d);
    if (ad <= 0) return 0.0;
    const double md = (m * d).norm();
    double t = c / d.lpNorm<1>();
    if (md > 0) t = std::min(t, 1.0 / md);
    return t * ad;
}

}  // namespace detail

// max a'u over ||Mu||_2 <= 1, ||u||_1 <= c for p <= 3, by scanning about
// `candidates` directions on the unit circle / sphere (each pushed to the
// boundary of the feasible set), then polishing the best one on shrinking
// local grids.
inline double admm_grid_oracle(const Matrix& m, const Vector& a, double c, long candidates = 1'000'000) {
    const Index p = a.size();
    std::vector<double> best_ang(2, 0.0);
    double best = 0.0;
    auto eval = [&](const std::vector<double>& ang) { return detail::ray_value(m, a, c, detail::direction(ang, p)); };
    double h0 = 0.0;
    if (p == 1) {
        best = std::max(eval({0.0, 0.0}), eval({std::numbers::pi, 0.0}));
        return best;
    }
    if (p == 2) {
        h0 = 2 * std::numbers::pi / static_cast<double>(candidates);
        for (long k = 0; k < candidates; ++k) {
            std::vector<double> ang{h0 * static_cast<double>(k), 0.0};
            const double v = eval(ang);
            if (v > best) best = v, best_ang = ang;
        }
    } else {
        const long side = static_cast<long>(std::sqrt(static_cast<double>(candidates)));
        h0 = std::numbers::pi / static_cast<double>(side);
        for (long i = 0; i <= side; ++i)
            for (long j = 0; j < side; ++j) {
                std::vector<double> ang{h0 * static_cast<double>(i), 2 * h0 * static_cast<double>(j)};
                const double v = eval(ang);
                if (v > best) best = v, best_ang = ang;
            }
        // L1 vertices are the likeliest kinks; include them exactly.
        for (Index i = 0; i < p; ++i)
            for (double s : {-1.0, 1.0}) {
                Vector d = Vector::Zero(p);
                d[i] = s;
                best = std::max(best, detail::ray_value(m, a, c, d));
            }
    }
    // Local grids around the incumbent, shrinking 5x per level. A full
    // neighbourhood grid follows ridges where the two constraint surfaces
    // meet; compass moves stall there.
    const int half = 20;
    for (double h = h0; h > 1e-13; h /= 5.0) {
        for (int rep = 0; rep < 3; ++rep) {
            const std::vector<double> centre = best_ang;
            for (int i = -half; i <= half; ++i)
                for (int j = -half; j <= half; ++j) {
                    if (p == 2 && j != 0) continue;
                    std::vector<double> ang{centre[0] + i * h / 10.0, centre[1] + j * h / 10.0};
                    const double v = eval(ang);
                    if (v > best) best = v, best_ang = ang;
                }
        }
    }
    return best;
}

// Dataset whose x-columns are all copies of one centered unit vector, with a
// random Y that correlates with it.
inline StandardizedDataset identical_columns(Index p, Index n, Index q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vector x = gaussian_vec(n, rng);
    Matrix xm(n, p);
    for (Index j = 0; j < p; ++j) xm.col(j) = x;
    Matrix y = gaussian(n, q, rng);
    for (Index j = 0; j < q; ++j) y.col(j) += 2.0 * x;
    return standardize(xm, y, ScalingMode::CenterUnitNorm);
}

}  // namespace scca::testing
