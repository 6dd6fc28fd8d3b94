#include "scca/linalg.hpp"

#include "scca/errors.hpp"
#include "scca/kernels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace scca::linalg {

namespace {

constexpr std::uint64_t kProbeSeed = 0x5cca5eedULL;

Vector seeded_unit(Index dim, std::uint64_t salt) {
    std::mt19937_64 rng(kProbeSeed + salt);
    std::normal_distribution<double> nd;
    Vector r(dim);
    for (Index i = 0; i < dim; ++i) r[i] = nd(rng);
    return r / r.norm();
}

// Applies the Gram operator of `a` (A'A) or a symmetric matrix directly.
struct GramOp {
    const Matrix& a;
    bool symmetric;
    mutable Vector tmp;

    Index dim() const { return a.cols(); }
    void apply(const Vector& x, Vector& y) const {
        if (symmetric) {
            kernels::gemv(a, x, y);
        } else {
            kernels::gemv(a, x, tmp);
            kernels::gemv_t(a, tmp, y);
        }
    }
};

struct PowerOutcome {
    Vector x;
    double lambda = 0.0;
    int iterations = 0;
};

PowerOutcome power_from(const GramOp& op, Vector x, double tol, int max_iter) {
    PowerOutcome out;
    Vector y(op.dim());
    double lambda = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        op.apply(x, y);
        const double next = x.dot(y);
        const double ny = y.norm();
        if (ny == 0.0) {
            lambda = 0.0;
            break;
        }
        x = y / ny;
        const bool done = it > 0 && std::abs(next - lambda) <= tol * std::abs(next);
        lambda = next;
        if (done) {
            ++it;
            break;
        }
    }
    out.x = std::move(x);
    out.lambda = lambda;
    out.iterations = it;
    return out;
}

// Largest eigenpair of a PSD operator with a restart when the deterministic
// start misses the top eigenspace.
PowerOutcome dominant(const GramOp& op, double tol, int max_iter, bool& restarted) {
    const Index dim = op.dim();
    restarted = false;
    PowerOutcome best = power_from(op, Vector::Constant(dim, 1.0 / std::sqrt(double(dim))), tol, max_iter);
    Vector y(dim);
    for (std::uint64_t salt = 0; salt < 3; ++salt) {
        // A few deflated power steps: if the complement of the found direction
        // carries a larger Rayleigh quotient, the start missed the top space.
        Vector probe = seeded_unit(dim, salt);
        double rq = 0.0;
        bool usable = true;
        for (int k = 0; k < 20; ++k) {
            probe -= probe.dot(best.x) * best.x;
            const double pn = probe.norm();
            if (pn < 1e-12) {
                usable = false;
                break;
            }
            probe /= pn;
            op.apply(probe, y);
            rq = probe.dot(y);
            if (rq > best.lambda * (1.0 + 1e-8)) break;
            probe = y;
        }
        if (!usable || rq <= best.lambda * (1.0 + 1e-8)) break;
        PowerOutcome alt = power_from(op, probe, tol, max_iter);
        alt.iterations += best.iterations;
        restarted = true;
        if (alt.lambda > best.lambda) best = std::move(alt);
        else break;
    }
    return best;
}

void require_symmetric(const Matrix& s, const char* who) {
    if (s.rows() != s.cols())
        throw DimensionError(std::string(who) + ": matrix is not square");
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw DomainError(std::string(who) + ": matrix is not symmetric");
}

}  // namespace

namespace {
constexpr double kPairTol = 1e-9;
}  // namespace

SpectralResult top_singular(const Matrix& a, double tol, int max_iter) {
    if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0)
        throw DegenerateError("top_singular: zero matrix");
    GramOp op{a, false, {}};
    SpectralResult res;
    PowerOutcome p = dominant(op, tol, max_iter, res.restarted);
    res.right = p.x;
    res.iterations = p.iterations;
    Vector av;
    Vector atl;
    // The value settles long before the vectors do; keep stepping until the
    // pair itself is accurate (or the budget runs out).
    for (int extra = 0;; ++extra) {
        kernels::gemv(a, res.right, av);
        res.value = av.norm();
        res.left = av / res.value;
        kernels::gemv_t(a, res.left, atl);
        res.residual = (atl - res.value * res.right).norm();
        if (res.residual <= kPairTol * res.value || extra >= max_iter) break;
        res.right = atl / atl.norm();
        ++res.iterations;
    }
    return res;
}

double top_eigenvalue(const Matrix& s, double tol, int max_iter) {
    require_symmetric(s, "top_eigenvalue");
    if (s.size() == 0) throw DimensionError("top_eigenvalue: empty matrix");
    GramOp op{s, true, {}};
    bool restarted = false;
    return dominant(op, tol, max_iter, restarted).lambda;
}

double default_ridge(const Matrix& s) {
    return 1e-8 * s.trace() / static_cast<double>(s.rows());
}

Matrix inv_sqrt_psd(const Matrix& s, std::optional<double> ridge) {
    require_symmetric(s, "inv_sqrt_psd");
    const double eps = ridge.value_or(default_ridge(s));
    if (eps < 0.0) throw DomainError("inv_sqrt_psd: negative ridge");
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success) throw DomainError("inv_sqrt_psd: eigendecomposition failed");
    Vector d = es.eigenvalues();
    if (d.minCoeff() < -1e-10) throw DomainError("inv_sqrt_psd: matrix is not positive semidefinite");
    for (Index i = 0; i < d.size(); ++i) {
        const double shifted = std::max(d[i], 0.0) + eps;
        if (shifted <= 0.0) throw DomainError("inv_sqrt_psd: singular matrix with zero ridge");
        d[i] = 1.0 / std::sqrt(shifted);
    }
    const Matrix& v = es.eigenvectors();
    Matrix m = v * d.asDiagonal() * v.transpose();
    return 0.5 * (m + m.transpose());
}

Matrix whitened_rows(const Matrix& d, double ridge) {
    if (d.cols() <= d.rows()) {
        return d * inv_sqrt_psd(kernels::crossprod(d, d), ridge);
    }
    const Matrix gram = d * d.transpose();
    return inv_sqrt_psd(gram, ridge) * d;
}

Vector ridge_solve(const Matrix& d, const Vector& w, double ridge) {
    if (d.cols() <= d.rows()) {
        Matrix gram = kernels::crossprod(d, d);
        gram.diagonal().array() += ridge;
        Vector rhs;
        kernels::gemv_t(d, w, rhs);
        return gram.ldlt().solve(rhs);
    }
    Matrix gram = d * d.transpose();
    gram.diagonal().array() += ridge;
    const Vector coef = gram.ldlt().solve(w);
    Vector out;
    kernels::gemv_t(d, coef, out);
    return out;
}

double row_max_norm(const Matrix& d) {
    return std::sqrt(d.array().square().rowwise().maxCoeff().sum());
}

}  // namespace scca::linalg
