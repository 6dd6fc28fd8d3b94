#include "scca/simplified.hpp"

#include "scca/errors.hpp"
#include "scca/kernels.hpp"
#include "scca/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace scca {

namespace {

// Multipliers of the KKT system 2*alpha*u + lambda*s = a at the QCLP optimum.
void kkt_duals(const Vector& a, double c, double tol, double& alpha, double& lambda) {
    lambda = l1_dual_threshold(a, c, tol);
    alpha = 0.5 * soft_threshold(a, lambda).norm();
}

bool strongly_active(const Vector& w, double alpha) { return w.norm() >= 1.0 - 1e-6 && alpha > 1e-10; }

}  // namespace

InitResult initialize_v(const Matrix& cross, InitStrategy strategy) {
    const Index q = cross.cols();
    InitResult out;
    if (strategy == InitStrategy::TopSingular) {
        if (cross.size() > 0 && cross.cwiseAbs().maxCoeff() > 0.0) {
            out.v = linalg::top_singular(cross).right;
            return out;
        }
        out.fell_back = true;
    }
    out.v = Vector::Constant(q, 1.0 / std::sqrt(static_cast<double>(q)));
    return out;
}

InitResult initialize_v(const StandardizedDataset& data, InitStrategy strategy) {
    return initialize_v(kernels::crossprod(data.x, data.y), strategy);
}

void apply_sign_convention(Vector& u, Vector& v) {
    if (u.size() == 0) return;
    Index imax = 0;
    for (Index i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
    if (u[imax] < 0.0) {
        u = -u;
        v = -v;
    }
}

SimplifiedFit fit_simplified(const StandardizedDataset& data, double c1, double c2, const SimplifiedOptions& opts) {
    return fit_simplified_cross(kernels::crossprod(data.x, data.y), c1, c2, opts);
}

SimplifiedFit fit_simplified_cross(const Matrix& cross, double c1, double c2, const SimplifiedOptions& opts) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("fit_simplified: c1 and c2 must be positive");
    SimplifiedFit fit;
    fit.small_c_warning = c1 < 1.0 || c2 < 1.0;

    InitResult init = initialize_v(cross, opts.init);
    fit.init_fell_back = init.fell_back;
    Vector v = std::move(init.v);
    // Shrink into the L1 ball so the trace starts from a feasible pair; the
    // u-step only sees the direction.
    v /= std::max(1.0, v.lpNorm<1>() / c2);
    Vector a;
    kernels::gemv(cross, v, a);
    if (!(a.cwiseAbs().maxCoeff() > 0.0)) throw DegenerateInitError("fit_simplified: X'Yv is zero at the start");

    Vector u;
    Vector b;
    double prev = 0.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        fit.iterations = it;
        kernels::gemv(cross, v, a);
        QclpResult ru;
        try {
            ru = solve_qclp(a, c1, opts.qclp_tol);
        } catch (const ZeroGradientError&) {
            fit.degenerate = true;
            break;
        }
        u = std::move(ru.u);
        fit.u_case = ru.which;
        fit.objective_trace.push_back(u.dot(a));

        kernels::gemv_t(cross, u, b);
        QclpResult rv;
        try {
            rv = solve_qclp(b, c2, opts.qclp_tol);
        } catch (const ZeroGradientError&) {
            fit.degenerate = true;
            break;
        }
        v = std::move(rv.u);
        fit.v_case = rv.which;
        const double obj = v.dot(b);
        fit.objective_trace.push_back(obj);
        if (it > 1 && std::abs(obj - prev) < opts.tol * std::max(1.0, std::abs(obj))) {
            fit.converged = true;
            break;
        }
        prev = obj;
    }

    if (u.size() == 0) {
        fit.pair.u = Vector::Zero(cross.rows());
        fit.pair.v = v;
        return fit;
    }

    if (!fit.degenerate) {
        // Re-solve u against the final v so that (u, v) satisfies the u-side
        // optimality conditions exactly.
        kernels::gemv(cross, v, a);
        QclpResult ru = solve_qclp(a, c1, opts.qclp_tol);
        u = std::move(ru.u);
        fit.u_case = ru.which;
        fit.objective_trace.push_back(u.dot(a));
        kkt_duals(a, c1, opts.qclp_tol, fit.dual_alpha1, fit.dual_lambda1);
        kernels::gemv_t(cross, u, b);
        kkt_duals(b, c2, opts.qclp_tol, fit.dual_alpha2, fit.dual_lambda2);
        fit.l2_active_u = strongly_active(u, fit.dual_alpha1);
        fit.l2_active_v = strongly_active(v, fit.dual_alpha2);
    }

    apply_sign_convention(u, v);
    Vector cv;
    kernels::gemv(cross, v, cv);
    fit.pair.objective = u.dot(cv);
    fit.pair.u = std::move(u);
    fit.pair.v = std::move(v);
    return fit;
}

}  // namespace scca
