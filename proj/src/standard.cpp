#include "scca/standard.hpp"

#include "scca/errors.hpp"
#include "scca/kernels.hpp"
#include "scca/linalg.hpp"
#include "scca/qclp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace scca {

namespace {

double lambda_max(const Matrix& m) {
    const double s = linalg::top_singular(m).value;
    return s * s;
}

double l1_floor(const Matrix& m) {
    const double smax = linalg::top_singular(m).value;
    return std::max(1.0 / smax, 1.0 / linalg::row_max_norm(m));
}

Vector or_zeros(const Vector& v, Index n) { return v.size() == n ? v : Vector::Zero(n); }

}  // namespace

AdmmState admm_solve_subproblem(const Matrix& m, const Vector& a, double c, const AdmmOptions& opts,
                                std::optional<double> lipschitz, const AdmmStart& start) {
    if (!(c > 0.0)) throw DomainError("admm_solve_subproblem: c must be positive");
    if (a.size() != m.cols()) throw DimensionError("admm_solve_subproblem: target length differs from column count");
    if (!(a.size() > 0 && a.cwiseAbs().maxCoeff() > 0.0))
        throw ZeroGradientError("admm_solve_subproblem: target vector is zero");

    AdmmState st;
    st.rho = opts.rho;
    st.lipschitz = lipschitz ? *lipschitz : lambda_max(m);
    if (!(st.lipschitz > 0.0)) throw DomainError("admm_solve_subproblem: design matrix is zero");
    st.u = or_zeros(start.u, m.cols());
    st.z = or_zeros(start.z, m.rows());
    st.xi = or_zeros(start.xi, m.rows());

    const double step = 1.0 / st.lipschitz;
    const Vector scaled_target = a / st.rho;
    Vector mu;
    kernels::gemv(m, st.u, mu);
    Vector r(m.rows());
    Vector grad(m.cols());
    Vector mu_next(m.rows());
    Vector w(m.cols());

    for (int it = 0; it < opts.admm_max_iter; ++it) {
        // u: proximal-gradient step on the linearized augmented Lagrangian.
        r = mu - st.z + st.xi;
        kernels::gemv_t(m, r, grad);
        w = st.u - step * (grad - scaled_target);
        Vector u_next = project_l1_ball(w, c);
        kernels::gemv(m, u_next, mu_next);

        // z: projection onto the unit Euclidean ball.
        r = mu_next + st.xi;
        const double rn = r.norm();
        st.z = rn > 1.0 ? Vector(r / rn) : r;

        st.xi += mu_next - st.z;

        st.primal_residual = (mu_next - st.z).norm();
        const double du = (u_next - st.u).cwiseAbs().maxCoeff();
        st.u = std::move(u_next);
        mu.swap(mu_next);
        st.iterations = it + 1;
        if (std::max(du, st.primal_residual) < opts.admm_tol) {
            st.converged = true;
            break;
        }
    }
    return st;
}

StandardProblem::StandardProblem(Matrix cross, Matrix mx, Matrix my)
    : cross_(std::move(cross)), mx_(std::move(mx)), my_(std::move(my)) {
    if (cross_.rows() != mx_.cols() || cross_.cols() != my_.cols())
        throw DimensionError("StandardProblem: cross-product shape does not match the metric factors");
    lx_ = lambda_max(mx_);
    ly_ = lambda_max(my_);
    c1_floor_ = l1_floor(mx_);
    c2_floor_ = l1_floor(my_);
}

StandardProblem StandardProblem::from_data(const StandardizedDataset& data) {
    return StandardProblem(kernels::crossprod(data.x, data.y), data.x, data.y);
}

StandardProblem StandardProblem::with_cross(Matrix cross) const {
    if (cross.rows() != cross_.rows() || cross.cols() != cross_.cols())
        throw DimensionError("StandardProblem::with_cross: shape mismatch");
    StandardProblem out;
    out.cross_ = std::move(cross);
    out.mx_ = mx_;
    out.my_ = my_;
    out.lx_ = lx_;
    out.ly_ = ly_;
    out.c1_floor_ = c1_floor_;
    out.c2_floor_ = c2_floor_;
    return out;
}

StandardFit fit_standard(const StandardizedDataset& data, double c1, double c2, const StandardOptions& opts) {
    return fit_standard(StandardProblem::from_data(data), c1, c2, opts);
}

StandardFit fit_standard(const StandardProblem& problem, double c1, double c2, const StandardOptions& opts) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("fit_standard: c1 and c2 must be positive");
    const Matrix& cross = problem.cross();
    StandardFit fit;
    fit.lipschitz_x = problem.lipschitz_x();
    fit.lipschitz_y = problem.lipschitz_y();
    fit.c_out_of_range = c1 < problem.c1_floor() || c2 < problem.c2_floor();

    Vector v = initialize_v(cross, opts.init).v;
    Vector yv;
    kernels::gemv(problem.my(), v, yv);
    const double scale = std::max(yv.norm(), v.lpNorm<1>() / c2);
    if (scale > 0.0) v /= scale;

    AdmmStart ustart;
    AdmmStart vstart;
    if (opts.u_init == UInit::SeededRandom) {
        std::mt19937_64 rng(opts.init_seed);
        std::normal_distribution<double> nd;
        ustart.u.resize(cross.rows());
        for (Index i = 0; i < ustart.u.size(); ++i) ustart.u[i] = nd(rng);
    }
    vstart.u = v;

    Vector a;
    Vector b;
    Vector u;
    double prev = 0.0;
    for (int k = 1; k <= opts.max_outer; ++k) {
        fit.iterations = k;
        kernels::gemv(cross, v, a);
        AdmmState su;
        try {
            su = admm_solve_subproblem(problem.mx(), a, c1, opts.admm, problem.lipschitz_x(), ustart);
        } catch (const ZeroGradientError& e) {
            if (k == 1) throw ZeroGradientError(std::string("fit_standard: X'Yv is zero at the start (") + e.what() + ")");
            fit.degenerate = true;
            break;
        }
        fit.inner_iterations_total += su.iterations;
        fit.inner_nonconverged = fit.inner_nonconverged || !su.converged;
        u = su.u;
        fit.objective_trace.push_back(u.dot(a));

        kernels::gemv_t(cross, u, b);
        AdmmState sv;
        try {
            sv = admm_solve_subproblem(problem.my(), b, c2, opts.admm, problem.lipschitz_y(), vstart);
        } catch (const ZeroGradientError&) {
            fit.degenerate = true;
            break;
        }
        fit.inner_iterations_total += sv.iterations;
        fit.inner_nonconverged = fit.inner_nonconverged || !sv.converged;
        v = sv.u;
        const double obj = v.dot(b);
        fit.objective_trace.push_back(obj);

        ustart.u = u;
        vstart.u = v;
        if (opts.warm_start) {
            ustart.z = std::move(su.z);
            ustart.xi = std::move(su.xi);
            vstart.z = std::move(sv.z);
            vstart.xi = std::move(sv.xi);
        }
        if (k > 1 && std::abs(obj - prev) < opts.tol * std::max(1.0, std::abs(obj))) {
            fit.converged = true;
            break;
        }
        prev = obj;
    }
    if (u.size() == 0) u = Vector::Zero(cross.rows());

    apply_sign_convention(u, v);
    Vector cv;
    kernels::gemv(cross, v, cv);
    fit.pair.objective = u.dot(cv);
    fit.pair.u = std::move(u);
    fit.pair.v = std::move(v);
    return fit;
}

}  // namespace scca
