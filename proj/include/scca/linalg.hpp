#pragma once

#include "scca/types.hpp"

#include <optional>

namespace scca::linalg {

/// Leading singular triple (or eigenpair, where left == right) of a matrix.
struct SpectralResult {
    double value = 0.0;
    Vector left;
    Vector right;
    int iterations = 0;
    /// ||A' left - value * right||
    double residual = 0.0;
    /// True when a seeded restart replaced the all-ones start.
    bool restarted = false;
};

/// Power iteration on A'A from the normalized all-ones vector. Stops when the
/// relative change of the singular value drops below `tol`, then continues
/// until ||A' left - value * right|| <= 1e-9 value (at most max_iter more
/// steps). A seeded random probe after convergence detects a start orthogonal
/// to the top singular space and triggers a restart. Throws DegenerateError for a zero matrix.
SpectralResult top_singular(const Matrix& a, double tol = 1e-10, int max_iter = 1000);

/// Largest eigenvalue of a symmetric PSD matrix, by power iteration.
/// Throws DomainError when S is asymmetric beyond 1e-10.
double top_eigenvalue(const Matrix& s, double tol = 1e-10, int max_iter = 1000);

/// 1e-8 * trace(S) / dim, the default stabilizer for near-singular Gram matrices.
double default_ridge(const Matrix& s);

/// (S + ridge I)^{-1/2} by symmetric eigendecomposition. `ridge` defaults to
/// default_ridge(S). Throws DomainError for asymmetric input or an eigenvalue
/// below -1e-10.
Matrix inv_sqrt_psd(const Matrix& s, std::optional<double> ridge = std::nullopt);

/// D (D'D + ridge I)^{-1/2}, formed through whichever of D'D or DD' is
/// smaller (the two agree by the push-through identity).
Matrix whitened_rows(const Matrix& d, double ridge);

/// (D'D + ridge I)^{-1} D' w, again through the smaller Gram matrix.
Vector ridge_solve(const Matrix& d, const Vector& w, double ridge);

/// sqrt(sum over rows of the largest squared entry in that row).
double row_max_norm(const Matrix& d);

}  // namespace scca::linalg
