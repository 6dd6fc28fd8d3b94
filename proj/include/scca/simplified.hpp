#pragma once

#include "scca/dataset.hpp"
#include "scca/qclp.hpp"
#include "scca/types.hpp"

#include <vector>

namespace scca {

enum class InitStrategy { TopSingular, Uniform };

struct InitResult {
    Vector v;
    /// TopSingular was requested but the cross-product is zero.
    bool fell_back = false;
};

/// Starting v for the alternating solvers, from the cross-product X'Y (or a
/// deflated cross-covariance).
InitResult initialize_v(const Matrix& cross, InitStrategy strategy);
InitResult initialize_v(const StandardizedDataset& data, InitStrategy strategy);

struct SimplifiedOptions {
    /// Stop when the objective changes by less than tol * max(1, |objective|).
    double tol = 1e-8;
    int max_iter = 500;
    InitStrategy init = InitStrategy::TopSingular;
    double qclp_tol = 1e-10;
};

struct SimplifiedFit {
    CanonicalPair pair;
    /// u'Cv after every half-step.
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
    /// The alternation hit a zero gradient and stopped early.
    bool degenerate = false;
    bool init_fell_back = false;
    /// c1 or c2 below 1, where the L1 budget is tighter than any unit vector allows.
    bool small_c_warning = false;

    bool l2_active_u = false;
    bool l2_active_v = false;
    double dual_alpha1 = 0.0;
    double dual_lambda1 = 0.0;
    double dual_alpha2 = 0.0;
    double dual_lambda2 = 0.0;
    QclpCase u_case = QclpCase::Case2Unthresholded;
    QclpCase v_case = QclpCase::Case2Unthresholded;
};

/// Alternating closed-form updates for
///   maximize u'X'Yv  s.t. ||u||_2 <= 1, ||u||_1 <= c1, ||v||_2 <= 1, ||v||_1 <= c2.
/// Throws DegenerateInitError when X'Y v vanishes at the start; never throws
/// for non-convergence.
SimplifiedFit fit_simplified(const StandardizedDataset& data, double c1, double c2, const SimplifiedOptions& opts = {});

/// Same solver on an explicit p x q cross-product (X'Y, or a deflated
/// cross-covariance matrix).
SimplifiedFit fit_simplified_cross(const Matrix& cross, double c1, double c2, const SimplifiedOptions& opts = {});

/// Flips (u, v) together so that the entry of u with the largest magnitude is
/// positive.
void apply_sign_convention(Vector& u, Vector& v);

}  // namespace scca
