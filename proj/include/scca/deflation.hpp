#pragma once

#include "scca/dataset.hpp"
#include "scca/simplified.hpp"
#include "scca/standard.hpp"
#include "scca/types.hpp"

#include <string>
#include <vector>

namespace scca {

enum class DeflationMode { CrossCov, Data };

const char* to_string(DeflationMode m);

// All products are kept unnormalized (X'Y, X'X, Y'Y rather than the 1/(n-1)
// covariances). For the simplified model this only rescales the objective and
// d; for the standard model it is the same problem with c rescaled by
// sqrt(n-1), and it keeps R = 1 identical to a plain single fit.

struct ComponentSequence {
    std::vector<CanonicalPair> components;
    /// Scale of each removed rank-one term, in the units of the working
    /// cross-product.
    std::vector<double> d_values;
    DeflationMode mode = DeflationMode::CrossCov;
    Model model = Model::Simplified;
    /// Extraction stopped before R components.
    bool truncated = false;
    std::string truncation_reason;
    /// Cross-product each component was fitted on (only with keep_history).
    std::vector<Matrix> cross_history;
};

struct DeflationOptions {
    SimplifiedOptions simplified;
    StandardOptions standard;
    bool keep_history = false;
};

/// Cross-product deflation on an explicit p x q matrix:
///   C <- C - d u v',  d = u'Cv / (||u||^2 ||v||^2).
/// c1s / c2s hold one value (used for every component) or R values.
ComponentSequence extract_components_simplified(const Matrix& cross, int R, const std::vector<double>& c1s,
                                                const std::vector<double>& c2s, const DeflationOptions& opts = {});

/// Simplified model on data, deflating either X'Y or the data matrices
/// X <- X (I - uu'/||u||^2), Y <- Y (I - vv'/||v||^2).
ComponentSequence extract_components_simplified(const StandardizedDataset& data, int R, const std::vector<double>& c1s,
                                                const std::vector<double>& c2s, DeflationMode mode,
                                                const DeflationOptions& opts = {});

/// Standard model. CrossCov: C <- C - Gx d u v' Gy with Gx = X'X, Gy = Y'Y and
/// d = u'Cv / (u'Gx u * v'Gy v). Data: X <- X - X u u' Gx / (u'Gx u) and the
/// same for Y; the constraints keep the original X and Y.
ComponentSequence extract_components_standard(const StandardizedDataset& data, int R, const std::vector<double>& c1s,
                                              const std::vector<double>& c2s, DeflationMode mode,
                                              const DeflationOptions& opts = {});

/// M (I - w w' G / (w' G w)) with G = F'F, the residual of M after removing
/// the variate Mw in the metric of F. Throws DegenerateVariateError when Fw = 0.
Matrix deflate_data(const Matrix& m, const Vector& w, const Matrix& metric_factor);
/// M (I - w w' / ||w||^2).
Matrix deflate_data(const Matrix& m, const Vector& w);

}  // namespace scca
