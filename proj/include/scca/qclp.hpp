#pragma once

#include "scca/types.hpp"

namespace scca {

/// Which branch of the closed-form solution produced a QclpResult.
enum class QclpCase {
    /// c < sqrt(|S|): weight c/|S| spread over the argmax set S.
    Case1SpreadOnArgmax,
    /// a/||a|| already satisfies the L1 budget.
    Case2Unthresholded,
    /// Soft-thresholded direction with the L1 budget met exactly.
    Case2Thresholded,
};

const char* to_string(QclpCase c);

struct QclpResult {
    Vector u;
    double delta = 0.0;
    QclpCase which = QclpCase::Case2Unthresholded;
    Index argmax_set_size = 0;
};

/// Relative tolerance used to decide that two |a_i| tie for the maximum.
inline constexpr double kArgmaxTieTol = 1e-12;

/// Coordinate-wise soft-thresholding S(a, delta). Throws DomainError when
/// delta < 0.
Vector soft_threshold(const Vector& a, double delta);

/// maximize a'u  subject to ||u||_2 <= 1, ||u||_1 <= c.
///
/// With S the set of indices attaining max|a_i|: if c < sqrt(|S|) the
/// minimum-norm optimum puts c/|S| * sign(a_i) on S. Otherwise the optimum is
/// S(a, delta)/||S(a, delta)||_2, with delta = 0 when that already fits the L1
/// budget and otherwise the delta found by bisection on the ratio
/// ||S(a, delta)||_1 / ||S(a, delta)||_2 = c to within `tol`.
///
/// Throws ZeroGradientError for a == 0 and DomainError for c <= 0.
QclpResult solve_qclp(const Vector& a, double c, double tol = 1e-10);

/// Euclidean projection onto {x : ||x||_1 <= c}, computed exactly from the
/// sorted magnitudes. Throws DomainError for c <= 0.
Vector project_l1_ball(const Vector& a, double c, double tol = 1e-12);

/// The threshold delta used by project_l1_ball (0 when a is inside the ball).
double l1_ball_threshold(const Vector& a, double c);

/// ||S(a, delta)||_1 / ||S(a, delta)||_2, or 0 when everything is thresholded.
double l1_l2_ratio(const Vector& a, double delta);

/// Multiplier of the L1 constraint at the QCLP optimum: 0 when a/||a|| fits
/// the budget, otherwise the smallest delta with l1_l2_ratio(a, delta) = c.
/// When c < sqrt(|S|) no such delta exists and max|a_i| is returned.
double l1_dual_threshold(const Vector& a, double c, double tol = 1e-10);

}  // namespace scca
