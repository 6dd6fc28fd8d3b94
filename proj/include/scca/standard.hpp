#pragma once

#include "scca/dataset.hpp"
#include "scca/simplified.hpp"
#include "scca/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace scca {

struct AdmmOptions {
    /// Stop when max(||u_{l+1} - u_l||_inf, ||Mu - z||_2) drops below this.
    double admm_tol = 1e-7;
    int admm_max_iter = 5000;
    double rho = 1.0;
};

/// Iterate of the linearized ADMM for
///   maximize a'u  s.t. ||Mu||_2 <= 1, ||u||_1 <= c
/// with the split Mu = z and scaled dual xi.
struct AdmmState {
    Vector u;
    Vector z;
    Vector xi;
    double rho = 1.0;
    double lipschitz = 0.0;
    double primal_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Optional starting point; empty vectors mean zeros.
struct AdmmStart {
    Vector u;
    Vector z;
    Vector xi;
};

/// Runs the linearized ADMM. `lipschitz` is lambda_max(M'M); computed by
/// power iteration when absent. Throws ZeroGradientError for a == 0 and
/// DomainError for c <= 0. Non-convergence returns the last iterate with
/// converged = false.
AdmmState admm_solve_subproblem(const Matrix& m, const Vector& a, double c, const AdmmOptions& opts = {},
                                std::optional<double> lipschitz = std::nullopt, const AdmmStart& start = {});

enum class UInit { Zero, SeededRandom };

struct StandardOptions {
    /// Outer stop: |objective change| < tol * max(1, |objective|).
    double tol = 1e-6;
    int max_outer = 100;
    AdmmOptions admm;
    /// Carry (z, xi) across outer iterations instead of restarting them at 0.
    bool warm_start = false;
    InitStrategy init = InitStrategy::TopSingular;
    /// Starting u handed to the first ADMM solve. The within-group split of a
    /// block of identical columns is not identified by the objective, so a
    /// symmetric start keeps such blocks evenly weighted.
    UInit u_init = UInit::SeededRandom;
    std::uint64_t init_seed = 0;
};

/// A standard-model problem with its products and Lipschitz constants
/// precomputed:
///   maximize u'Cv  s.t. ||Mx u|| <= 1, ||u||_1 <= c1, ||My v|| <= 1, ||v||_1 <= c2.
/// For plain data C = X'Y, Mx = X, My = Y.
class StandardProblem {
public:
    StandardProblem(Matrix cross, Matrix mx, Matrix my);
    static StandardProblem from_data(const StandardizedDataset& data);

    const Matrix& cross() const { return cross_; }
    const Matrix& mx() const { return mx_; }
    const Matrix& my() const { return my_; }
    double lipschitz_x() const { return lx_; }
    double lipschitz_y() const { return ly_; }
    /// Smallest useful c1 / c2 (L1 lower bounds of the effective range).
    double c1_floor() const { return c1_floor_; }
    double c2_floor() const { return c2_floor_; }

    /// Same metric factors and Lipschitz constants, different cross-product.
    StandardProblem with_cross(Matrix cross) const;

private:
    StandardProblem() = default;
    Matrix cross_, mx_, my_;
    double lx_ = 0.0, ly_ = 0.0;
    double c1_floor_ = 0.0, c2_floor_ = 0.0;
};

struct StandardFit {
    CanonicalPair pair;
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;
    long inner_iterations_total = 0;
    /// Some ADMM solve stopped at admm_max_iter.
    bool inner_nonconverged = false;
    /// c1 or c2 below the lower end of the effective range.
    bool c_out_of_range = false;
    double lipschitz_x = 0.0;
    double lipschitz_y = 0.0;
};

/// Alternating linearized-ADMM solver for the standard model.
StandardFit fit_standard(const StandardizedDataset& data, double c1, double c2, const StandardOptions& opts = {});
StandardFit fit_standard(const StandardProblem& problem, double c1, double c2, const StandardOptions& opts = {});

}  // namespace scca
