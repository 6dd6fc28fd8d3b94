#include "scca/qclp.hpp"

#include "scca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace scca {

const char* to_string(QclpCase c) {
    switch (c) {
        case QclpCase::Case1SpreadOnArgmax: return "Case1SpreadOnArgmax";
        case QclpCase::Case2Unthresholded: return "Case2Unthresholded";
        case QclpCase::Case2Thresholded: return "Case2Thresholded";
    }
    return "?";
}

Vector soft_threshold(const Vector& a, double delta) {
    if (!(delta >= 0.0)) throw DomainError("soft_threshold: delta must be non-negative");
    Vector out(a.size());
    for (Index i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        out[i] = ai > delta ? ai - delta : (ai < -delta ? ai + delta : 0.0);
    }
    return out;
}

double l1_l2_ratio(const Vector& a, double delta) {
    double l1 = 0.0;
    double l2 = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double m = std::abs(a[i]) - delta;
        if (m > 0.0) {
            l1 += m;
            l2 += m * m;
        }
    }
    return l2 > 0.0 ? l1 / std::sqrt(l2) : 0.0;
}

namespace detail {

// Smallest delta in (0, max|a|) with l1_l2_ratio(a, delta) = c, assuming the
// ratio at delta = 0 exceeds c. The ratio is non-increasing in delta.
double ratio_root(const Vector& a, double c, double tol) {
    double lo = 0.0;
    double hi = a.cwiseAbs().maxCoeff();
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double r = l1_l2_ratio(a, mid);
        if (r > c) lo = mid;
        else hi = mid;
        const double f_hi = l1_l2_ratio(a, hi);
        if (f_hi > 0.0 && c - f_hi <= tol) break;
    }
    const double f_hi = l1_l2_ratio(a, hi);
    if (f_hi > 0.0 && c - f_hi <= tol) return hi;
    // The interval collapsed onto the argmax level (c equals sqrt|S| for an
    // exact tie); lo is the closest point that still has a support.
    return lo;
}

}  // namespace detail

QclpResult solve_qclp(const Vector& a, double c, double tol) {
    if (!(c > 0.0)) throw DomainError("solve_qclp: c must be positive");
    if (!(tol > 0.0)) throw DomainError("solve_qclp: tol must be positive");
    const double amax = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    if (!(amax > 0.0)) throw ZeroGradientError("solve_qclp: linear objective is identically zero");

    QclpResult res;
    const double cut = amax * (1.0 - kArgmaxTieTol);
    Index s_size = 0;
    for (Index i = 0; i < a.size(); ++i)
        if (std::abs(a[i]) >= cut) ++s_size;
    res.argmax_set_size = s_size;

    if (c < std::sqrt(static_cast<double>(s_size))) {
        res.which = QclpCase::Case1SpreadOnArgmax;
        res.delta = amax;
        res.u = Vector::Zero(a.size());
        const double w = c / static_cast<double>(s_size);
        for (Index i = 0; i < a.size(); ++i)
            if (std::abs(a[i]) >= cut) res.u[i] = a[i] > 0.0 ? w : -w;
        return res;
    }

    const double n2 = a.norm();
    if (a.cwiseAbs().sum() / n2 <= c) {
        res.which = QclpCase::Case2Unthresholded;
        res.delta = 0.0;
        res.u = a / n2;
        return res;
    }

    res.which = QclpCase::Case2Thresholded;
    res.delta = detail::ratio_root(a, c, tol);
    Vector s = soft_threshold(a, res.delta);
    res.u = s / s.norm();
    return res;
}

double l1_dual_threshold(const Vector& a, double c, double tol) {
    const double amax = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    if (!(amax > 0.0)) return 0.0;
    Index s_size = 0;
    for (Index i = 0; i < a.size(); ++i)
        if (std::abs(a[i]) >= amax * (1.0 - kArgmaxTieTol)) ++s_size;
    if (c < std::sqrt(static_cast<double>(s_size))) return amax;
    if (a.cwiseAbs().sum() / a.norm() <= c) return 0.0;
    return detail::ratio_root(a, c, tol);
}

double l1_ball_threshold(const Vector& a, double c) {
    if (!(c > 0.0)) throw DomainError("project_l1_ball: c must be positive");
    if (a.cwiseAbs().sum() <= c) return 0.0;
    std::vector<double> mags(static_cast<std::size_t>(a.size()));
    for (Index i = 0; i < a.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(a[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < mags.size(); ++j) {
        cum += mags[j];
        const double t = (cum - c) / static_cast<double>(j + 1);
        if (mags[j] - t > 0.0) theta = t;
        else break;
    }
    return std::max(theta, 0.0);
}

Vector project_l1_ball(const Vector& a, double c, double tol) {
    if (!(c > 0.0)) throw DomainError("project_l1_ball: c must be positive");
    if (a.cwiseAbs().sum() <= c * (1.0 + tol)) return a;
    return soft_threshold(a, l1_ball_threshold(a, c));
}

}  // namespace scca
